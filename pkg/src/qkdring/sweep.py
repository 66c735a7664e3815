"""(N, adjacent length) grids of the normalized switched-vs-relayed difference."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from qkdring.capacity import compare
from qkdring.errors import ConfigError
from qkdring.skr_model import BUILTIN_PROFILES, SkrProfile
from qkdring.topology import RingSpec

CSV_HEADER = ("n", "length_km", "g_switched_bps", "g_relayed_bps", "r")


@dataclass(frozen=True)
class SweepSpec:
    profile: str = "experimental"
    n_min: int = 5
    n_max: int = 30
    len_min_km: float = 1.0
    len_max_km: float = 20.0
    len_step_km: float = 0.5
    alpha_db_per_km: float = 0.21
    switch_penalty_db: float = 5.0
    adjacent_uses_chord: bool = False
    gs_factor_two: bool = False

    def __post_init__(self) -> None:
        if self.n_min < 3 or self.n_max < self.n_min:
            raise ConfigError(f"bad node range {self.n_min}..{self.n_max}")
        if not self.len_step_km > 0:
            raise ConfigError(f"length step must be > 0, got {self.len_step_km}")
        if not 0 < self.len_min_km <= self.len_max_km:
            raise ConfigError(f"bad length range {self.len_min_km}..{self.len_max_km}")

    def n_values(self) -> list[int]:
        return list(range(self.n_min, self.n_max + 1))

    def lengths(self) -> list[float]:
        count = math.floor((self.len_max_km - self.len_min_km) / self.len_step_km + 1e-9) + 1
        # rounding keeps axis values free of accumulated step error
        return [round(self.len_min_km + k * self.len_step_km, 12) for k in range(count)]


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """Rates and normalized differences, rows indexed by N and columns by length.

    Cells where both rates are zero hold NaN in ``r_values``.
    """

    profile: str
    n_values: tuple[int, ...]
    lengths_km: tuple[float, ...]
    r_values: np.ndarray
    g_s: np.ndarray
    g_r: np.ndarray

    def cells(self):
        for a, n in enumerate(self.n_values):
            for b, length in enumerate(self.lengths_km):
                yield n, length, float(self.g_s[a, b]), float(self.g_r[a, b]), float(self.r_values[a, b])


def run_sweep(spec: SweepSpec, profiles: Mapping[str, SkrProfile] | None = None) -> SweepGrid:
    profiles = BUILTIN_PROFILES if profiles is None else profiles
    try:
        profile = profiles[spec.profile]
    except KeyError:
        raise ConfigError(f"unknown profile {spec.profile!r}; known: {sorted(profiles)}") from None
    ns, lengths = spec.n_values(), spec.lengths()
    shape = (len(ns), len(lengths))
    r, g_s, g_r = np.empty(shape), np.empty(shape), np.empty(shape)
    for a, n in enumerate(ns):
        for b, length in enumerate(lengths):
            ring = RingSpec(n, length, spec.alpha_db_per_km, spec.switch_penalty_db, spec.adjacent_uses_chord)
            res = compare(ring, profile, spec.gs_factor_two)
            r[a, b], g_s[a, b], g_r[a, b] = res.r, res.g_switched, res.g_relayed
    return SweepGrid(spec.profile, tuple(ns), tuple(lengths), r, g_s, g_r)


def crossover_curve(grid: SweepGrid) -> list[tuple[float, int | None]]:
    """For each length column, the largest N where switched wins (R > 0)."""
    out = []
    for b, length in enumerate(grid.lengths_km):
        winners = [n for a, n in enumerate(grid.n_values) if grid.r_values[a, b] > 0]
        out.append((length, max(winners) if winners else None))
    return out


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else f"{x:.9g}"


def _round9(x: float) -> float | None:
    return None if math.isnan(x) else float(f"{x:.9g}")


def to_csv(grid: SweepGrid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for n, length, gs, gr, r in grid.cells():
        w.writerow((n, _fmt(length), _fmt(gs), _fmt(gr), _fmt(r)))
    return buf.getvalue()


def to_json(grid: SweepGrid) -> str:
    cells = list(grid.cells())
    doc = {
        "profile": grid.profile,
        "n_values": list(grid.n_values),
        "lengths_km": [_round9(x) for x in grid.lengths_km],
        "g_switched_bps": [_round9(c[2]) for c in cells],
        "g_relayed_bps": [_round9(c[3]) for c in cells],
        "r": [_round9(c[4]) for c in cells],
    }
    return json.dumps(doc, indent=1) + "\n"


def emit(grid: SweepGrid, fmt: str = "csv", path: str | Path | None = None) -> str:
    """Serialize ``grid`` as CSV or JSON, optionally writing it to ``path``.

    Values carry 9 significant digits in both formats. JSON holds the axes
    plus row-major arrays, with null for undefined ``r``.
    """
    if fmt == "csv":
        text = to_csv(grid)
    elif fmt == "json":
        text = to_json(grid)
    else:
        raise ConfigError(f"unknown format {fmt!r}; expected csv or json")
    if path is not None:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write sweep output to {path}: {exc.strerror or exc}") from exc
    return text


def _from_columns(profile, ns, lengths, gs, gr, r) -> SweepGrid:
    shape = (len(ns), len(lengths))
    return SweepGrid(
        profile,
        tuple(ns),
        tuple(lengths),
        np.array(r, dtype=float).reshape(shape),
        np.array(gs, dtype=float).reshape(shape),
        np.array(gr, dtype=float).reshape(shape),
    )


def parse_csv(text: str, profile: str = "") -> SweepGrid:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"expected header {','.join(CSV_HEADER)}")
    body = [(int(row[0]), float(row[1]), float(row[2]), float(row[3]), float(row[4])) for row in rows[1:]]
    ns = list(dict.fromkeys(c[0] for c in body))
    lengths = list(dict.fromkeys(c[1] for c in body))
    if len(body) != len(ns) * len(lengths):
        raise ValueError("CSV rows do not form a full grid")
    return _from_columns(
        profile, ns, lengths, [c[2] for c in body], [c[3] for c in body], [c[4] for c in body]
    )


def parse_json(text: str) -> SweepGrid:
    doc = json.loads(text)
    nan = math.nan
    return _from_columns(
        doc["profile"],
        doc["n_values"],
        doc["lengths_km"],
        doc["g_switched_bps"],
        doc["g_relayed_bps"],
        [nan if v is None else v for v in doc["r"]],
    )
