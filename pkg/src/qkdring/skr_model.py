"""
Decoy-state BB84 secret key rate as a function of channel attenuation.

The rate follows the asymptotic GLLP bound with an infinite-decoy estimate of
the single-photon terms::

    eta  = eta_bob * 10**(-a/10)
    Q_mu = Y0 + 1 - exp(-eta*mu)
    E_mu = (e0*Y0 + e_det*(1 - exp(-eta*mu))) / Q_mu
    Y1   = Y0 + eta - Y0*eta
    Q1   = Y1 * mu * exp(-mu)
    e1   = (e0*Y0 + e_det*eta) / Y1
    R    = q * (-Q_mu*f_ec*H2(E_mu) + Q1*(1 - H2(e1)))

Negative values of R are clamped to zero. ``skr_bps`` multiplies by the
source repetition rate and is the f(a) used by the network comparison.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Mapping

from qkdring.errors import ConfigError, DegenerateChannelError, DomainError, InvalidProfileError

BACKGROUND_ERROR = 0.5

PROFILE_FIELDS = ("name", "mu", "y0", "e_det", "eta_bob", "q", "f_ec", "pulse_rate_hz")


@dataclass(frozen=True)
class DecoyParams:
    """Physical parameters of one decoy-state BB84 link.

    Defaults are generic values from the decoy-state literature; only
    ``eta_bob`` differs between the built-in profiles.
    """

    mu: float = 0.5
    y0: float = 1.7e-6
    e_det: float = 0.033
    eta_bob: float = 0.06
    q: float = 0.5
    f_ec: float = 1.22
    pulse_rate_hz: float = 1e9
    e0: float = field(default=BACKGROUND_ERROR)

    def __post_init__(self) -> None:
        checks = (
            ("mu", self.mu > 0),
            ("y0", self.y0 >= 0),
            ("e_det", 0 <= self.e_det < 0.5),
            ("eta_bob", 0 < self.eta_bob <= 1),
            ("q", 0 < self.q <= 1),
            ("f_ec", self.f_ec >= 1),
            ("pulse_rate_hz", self.pulse_rate_hz > 0),
            ("e0", self.e0 == BACKGROUND_ERROR),
        )
        for name, ok in checks:
            value = getattr(self, name)
            if not ok or not math.isfinite(value):
                raise DomainError(f"DecoyParams.{name} out of range: {value!r}")


@dataclass(frozen=True)
class SkrProfile:
    name: str
    params: DecoyParams

    def rate(self, a: float) -> float:
        return skr_bps(self.params, a)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self.params)
        d.pop("e0")
        return {"name": self.name, **d}

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any], base: DecoyParams | None = None) -> SkrProfile:
        """Build a profile from its JSON form.

        Missing numeric fields are taken from ``base``; without a base every
        field is required. Unknown keys are rejected.
        """
        unknown = set(doc) - set(PROFILE_FIELDS)
        if unknown:
            raise ConfigError(f"unknown profile keys: {sorted(unknown)}")
        name = doc.get("name")
        if not isinstance(name, str) or not name:
            raise ConfigError("profile requires a non-empty string 'name'")
        values = asdict(base) if base is not None else {}
        values.pop("e0", None)
        for key in PROFILE_FIELDS[1:]:
            if key in doc:
                v = doc[key]
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise ConfigError(f"profile {name!r}: field {key!r} must be a number")
                values[key] = float(v)
            elif key not in values:
                raise ConfigError(f"profile {name!r}: missing field {key!r}")
        try:
            params = DecoyParams(**values)
        except DomainError as exc:
            raise ConfigError(f"profile {name!r}: {exc}") from exc
        return cls(name, params)


BUILTIN_PROFILES: dict[str, SkrProfile] = {
    "experimental": SkrProfile("experimental", DecoyParams(eta_bob=0.06)),
    "low": SkrProfile("low", DecoyParams(eta_bob=0.02)),
    "high": SkrProfile("high", DecoyParams(eta_bob=0.25)),
}


def binary_entropy(p: float) -> float:
    """H2(p) in bits, with 0*log2(0) taken as 0."""
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise DomainError(f"probability outside [0, 1]: {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def _check_attenuation(a: float) -> None:
    if not a >= 0:
        raise DomainError(f"attenuation must be >= 0 dB, got {a!r}")


def channel_transmittance(params: DecoyParams, a: float) -> float:
    """Overall transmittance eta_bob * 10**(-a/10) for ``a`` dB of channel loss."""
    _check_attenuation(a)
    return params.eta_bob * 10.0 ** (-a / 10.0)


def signal_gain_and_qber(params: DecoyParams, a: float) -> tuple[float, float]:
    """Return (Q_mu, E_mu) for the signal intensity."""
    eta = channel_transmittance(params, a)
    detected = -math.expm1(-eta * params.mu)
    gain = params.y0 + detected
    if gain == 0.0:
        # y0 = 0 and eta underflowed: only background statistics remain
        return 0.0, params.e0
    qber = (params.e0 * params.y0 + params.e_det * detected) / gain
    return gain, qber


def single_photon_terms(params: DecoyParams, a: float) -> tuple[float, float]:
    """Return (Q_1, e_1), the single-photon gain and error rate."""
    eta = channel_transmittance(params, a)
    y1 = params.y0 + eta - params.y0 * eta
    if y1 <= 0.0:
        raise DegenerateChannelError(f"single-photon yield is zero at {a} dB")
    q1 = y1 * params.mu * math.exp(-params.mu)
    e1 = (params.e0 * params.y0 + params.e_det * eta) / y1
    return q1, min(e1, 0.5)


def skr_per_pulse(params: DecoyParams, a: float) -> float:
    """Secret key bits per emitted pulse, clamped at zero."""
    gain, qber = signal_gain_and_qber(params, a)
    q1, e1 = single_photon_terms(params, a)
    value = params.q * (q1 * (1.0 - binary_entropy(e1)) - gain * params.f_ec * binary_entropy(qber))
    return max(0.0, value)


def skr_bps(params: DecoyParams, a: float) -> float:
    """Secret key rate in bits/s at ``a`` dB of channel attenuation."""
    return skr_per_pulse(params, a) * params.pulse_rate_hz


def cutoff_attenuation(params: DecoyParams, tol: float = 1e-6) -> float:
    """Smallest attenuation (to within ``tol`` dB) beyond which the rate is zero."""
    if skr_bps(params, 0.0) <= 0.0:
        raise InvalidProfileError("key rate is already zero at 0 dB")
    lo, hi = 0.0, 10.0
    while skr_bps(params, hi) > 0.0:
        lo, hi = hi, hi * 2.0
        if hi > 1e4:
            raise InvalidProfileError("no cutoff found below 10000 dB")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if skr_bps(params, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi
