"""
Fair per-pair key rates for relayed and switched rings.

Relayed: every pair's key is XOR-chained over the fibers of its shortest ring
path, so each fiber's rate f(A_e) is shared by all pairs routed over it.

Switched: node i talks directly to every peer j for a time weight
T_ij = 2 / f(A_ij); the pair rate is G_S = 1 / sum_j T_ij. With
``gs_factor_two`` the rate is 2 / T_i instead.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from qkdring.errors import DomainError, InfeasibleScheduleError, UndefinedComparisonError
from qkdring.skr_model import SkrProfile
from qkdring.topology import RingSpec, relayed_link_budget, switched_link_budget

SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True)
class SwitchSchedule:
    node: int
    shares: dict[int, float]
    total: float
    fair_rate: float

    def fractions(self) -> dict[int, float]:
        """Fraction of the cycle spent on each peer."""
        return {j: t / self.total for j, t in self.shares.items()}


@dataclass(frozen=True)
class ComparisonResult:
    """Both fair rates and their normalized difference.

    ``r`` is NaN when both rates are zero.
    """

    g_relayed: float
    g_switched: float
    r: float


def pairs_per_link(n: int) -> Fraction:
    """Number of node pairs whose shortest path crosses a given ring fiber.

    (N^2 - 1)/8 for odd N. For even N the antipodal pairs split their load
    evenly over both directions, which gives N^2/8.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 3:
        raise DomainError(f"ring needs at least 3 nodes, got {n!r}")
    if n % 2:
        return Fraction(n * n - 1, 8)
    return Fraction(n * n, 8)


def brute_force_pairs_per_link(n: int) -> Fraction:
    """Route every pair over its shortest ring path(s) and count the load per link.

    Link ``k`` joins nodes ``k`` and ``k+1``. A pair with two equally short
    paths puts half a unit on each. Loads are tallied in half-units.
    """
    if not 3 <= n <= 64:
        raise DomainError(f"brute force supports 3 <= n <= 64, got {n}")
    half_units = [0] * n
    for s, t in itertools.combinations(range(n), 2):
        clockwise = [(s + step) % n for step in range(t - s)]
        counter = [(t + step) % n for step in range(n - (t - s))]
        shortest = min(len(clockwise), len(counter))
        routes = [path for path in (clockwise, counter) if len(path) == shortest]
        weight = 2 // len(routes)
        for path in routes:
            for link in path:
                half_units[link] += weight
    loads = set(half_units)
    assert len(loads) == 1, f"ring links carry unequal load: {sorted(loads)}"
    return Fraction(loads.pop(), 2)


def relayed_rate(spec: RingSpec, profile: SkrProfile) -> float:
    budget = relayed_link_budget(spec)
    ppl = pairs_per_link(spec.n_nodes)
    return profile.rate(budget.attenuation_db) * ppl.denominator / ppl.numerator


def switched_schedule(
    spec: RingSpec, profile: SkrProfile, node: int, gs_factor_two: bool = False
) -> SwitchSchedule:
    n = spec.n_nodes
    if not 0 <= node < n:
        raise DomainError(f"node index outside [0, {n}): {node}")
    shares: dict[int, float] = {}
    for j in range(n):
        if j == node:
            continue
        budget = switched_link_budget(spec, node, j)
        f = profile.rate(budget.attenuation_db)
        if f <= 0.0:
            raise InfeasibleScheduleError(node, j, budget.attenuation_db)
        shares[j] = 2.0 / f
    total = math.fsum(shares.values())
    numerator = 2.0 if gs_factor_two else 1.0
    return SwitchSchedule(node, shares, total, numerator / total)


def switched_rate(spec: RingSpec, profile: SkrProfile, gs_factor_two: bool = False) -> float:
    """Fair switched rate, checking that every node's schedule agrees."""
    rates = [switched_schedule(spec, profile, i, gs_factor_two).fair_rate for i in range(spec.n_nodes)]
    g = rates[0]
    for i, other in enumerate(rates[1:], start=1):
        if not math.isclose(other, g, rel_tol=SYMMETRY_RTOL):
            raise AssertionError(f"node {i} fair rate {other!r} differs from node 0 {g!r}")
    return g


def normalized_difference(g_s: float, g_r: float) -> float:
    """(g_s - g_r) / max(g_s, g_r), in [-1, 1]."""
    if g_s < 0 or g_r < 0:
        raise DomainError(f"rates must be non-negative, got ({g_s!r}, {g_r!r})")
    m = max(g_s, g_r)
    if m == 0:
        raise UndefinedComparisonError("both rates are zero")
    return (g_s - g_r) / m


def compare(spec: RingSpec, profile: SkrProfile, gs_factor_two: bool = False) -> ComparisonResult:
    """Evaluate both architectures; an infeasible switched schedule counts as G_S = 0."""
    g_r = relayed_rate(spec, profile)
    try:
        g_s = switched_rate(spec, profile, gs_factor_two)
    except InfeasibleScheduleError:
        g_s = 0.0
    try:
        r = normalized_difference(g_s, g_r)
    except UndefinedComparisonError:
        r = math.nan
    return ComparisonResult(g_r, g_s, r)
