"""Ring geometry and per-link attenuation budgets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping

from qkdring.errors import ConfigError, DomainError

RING_FIELDS = ("n_nodes", "adjacent_len_km", "alpha_db_per_km", "switch_penalty_db", "adjacent_uses_chord")


@dataclass(frozen=True)
class RingSpec:
    """A ring of ``n_nodes`` nodes joined by equal-length fibers.

    Nodes sit evenly on a circle whose circumference is the total ring fiber
    length, so the arc between neighbours is ``adjacent_len_km``. Switched
    links between non-adjacent nodes run along straight chords of that circle.
    """

    n_nodes: int
    adjacent_len_km: float
    alpha_db_per_km: float = 0.21
    switch_penalty_db: float = 5.0
    adjacent_uses_chord: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.n_nodes, bool) or not isinstance(self.n_nodes, int) or self.n_nodes < 3:
            raise DomainError(f"n_nodes must be an integer >= 3, got {self.n_nodes!r}")
        if not self.adjacent_len_km > 0 or not math.isfinite(self.adjacent_len_km):
            raise DomainError(f"adjacent_len_km must be > 0, got {self.adjacent_len_km!r}")
        if not self.alpha_db_per_km > 0 or not math.isfinite(self.alpha_db_per_km):
            raise DomainError(f"alpha_db_per_km must be > 0, got {self.alpha_db_per_km!r}")
        if not self.switch_penalty_db >= 0 or not math.isfinite(self.switch_penalty_db):
            raise DomainError(f"switch_penalty_db must be >= 0, got {self.switch_penalty_db!r}")

    @property
    def circumference_km(self) -> float:
        return self.n_nodes * self.adjacent_len_km

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> RingSpec:
        unknown = set(doc) - set(RING_FIELDS)
        if unknown:
            raise ConfigError(f"unknown ring keys: {sorted(unknown)}")
        try:
            return cls(**doc)
        except (TypeError, DomainError) as exc:
            raise ConfigError(f"ring: {exc}") from exc


@dataclass(frozen=True)
class LinkBudget:
    endpoints: tuple[int, int]
    length_km: float
    attenuation_db: float


def ring_separation(n_nodes: int, i: int, j: int) -> int:
    """Hop count between nodes ``i`` and ``j`` along the shorter arc."""
    d = abs(i - j) % n_nodes
    return min(d, n_nodes - d)


def chord_length(spec: RingSpec, hop_sep: int) -> float:
    """Straight-line fiber length between nodes ``hop_sep`` hops apart."""
    n = spec.n_nodes
    if not 1 <= hop_sep <= n // 2:
        raise DomainError(f"hop separation must lie in [1, {n // 2}], got {hop_sep}")
    if hop_sep == 1 and not spec.adjacent_uses_chord:
        return spec.adjacent_len_km
    return spec.circumference_km / math.pi * math.sin(math.pi * hop_sep / n)


def relayed_link_budget(spec: RingSpec) -> LinkBudget:
    """Budget of one ring fiber between neighbours; no switch in the path."""
    length = spec.adjacent_len_km
    return LinkBudget((0, 1), length, length * spec.alpha_db_per_km)


def switched_link_budget(spec: RingSpec, i: int, j: int) -> LinkBudget:
    n = spec.n_nodes
    if not (0 <= i < n and 0 <= j < n):
        raise DomainError(f"node index outside [0, {n}): ({i}, {j})")
    if i == j:
        raise DomainError(f"switched link needs two distinct nodes, got ({i}, {j})")
    length = chord_length(spec, ring_separation(n, i, j))
    return LinkBudget((i, j), length, length * spec.alpha_db_per_km + spec.switch_penalty_db)
