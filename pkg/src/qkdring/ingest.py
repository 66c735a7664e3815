"""
Key-generation log parsing and per-link summaries.

Logs are CSV with header ``t_s,skr_bps,qber`` (the qber column is optional)
and ``#`` comment lines. Vendor logs must be converted to this layout first.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from qkdring.errors import DomainError, EmptySeriesError, InsufficientDataError, LogParseError

HEADER_FULL = ("t_s", "skr_bps", "qber")
HEADER_NO_QBER = ("t_s", "skr_bps")


@dataclass(frozen=True)
class KeyLogRecord:
    t: float
    skr_bps: float
    qber: float | None = None


@dataclass(frozen=True)
class LinkSummary:
    label: str
    mean_skr_bps: float
    mean_qber: float | None
    duration_s: float
    total_key_bits: float

    def to_dict(self) -> dict:
        return asdict(self)


def _number(text: str, line: int, column: str, path: str | None) -> float:
    try:
        value = float(text)
    except ValueError:
        raise LogParseError(line, f"{column}: not a number: {text!r}", path) from None
    if not math.isfinite(value):
        raise LogParseError(line, f"{column}: not finite: {text!r}", path)
    return value


def parse_log(document: str, path: str | None = None) -> list[KeyLogRecord]:
    """Parse a key log; errors name the offending line (1-based)."""
    header: tuple[str, ...] | None = None
    records: list[KeyLogRecord] = []
    for lineno, raw in enumerate(document.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([stripped]))]
        if header is None:
            header = tuple(fields)
            if header not in (HEADER_FULL, HEADER_NO_QBER):
                raise LogParseError(lineno, f"unexpected header {stripped!r}", path)
            continue
        if len(fields) != len(header) and not (header == HEADER_FULL and len(fields) == 2):
            raise LogParseError(lineno, f"expected {len(header)} fields, got {len(fields)}", path)
        t = _number(fields[0], lineno, "t_s", path)
        skr = _number(fields[1], lineno, "skr_bps", path)
        if skr < 0:
            raise LogParseError(lineno, f"skr_bps must be >= 0, got {skr}", path)
        qber = None
        if len(fields) == 3 and fields[2] != "":
            qber = _number(fields[2], lineno, "qber", path)
            if not 0.0 <= qber <= 0.5:
                raise LogParseError(lineno, f"qber out of range [0, 0.5]: {qber}", path)
        if records and t <= records[-1].t:
            raise LogParseError(lineno, f"timestamp {t} not after previous {records[-1].t}", path)
        records.append(KeyLogRecord(t, skr, qber))
    if not records:
        raise EmptySeriesError(f"{path or 'log'}: no data rows")
    return records


def emit_log(records: Iterable[KeyLogRecord]) -> str:
    lines = [",".join(HEADER_FULL)]
    for rec in records:
        q = "" if rec.qber is None else repr(rec.qber)
        lines.append(f"{rec.t!r},{rec.skr_bps!r},{q}")
    return "\n".join(lines) + "\n"


def summarize(series: Sequence[KeyLogRecord], label: str) -> LinkSummary:
    """Means over records and the trapezoidal key total over time."""
    if len(series) < 2:
        raise InsufficientDataError(f"{label}: need at least 2 records, got {len(series)}")
    rates = [r.skr_bps for r in series]
    qbers = [r.qber for r in series if r.qber is not None]
    total = math.fsum(
        0.5 * (a.skr_bps + b.skr_bps) * (b.t - a.t) for a, b in zip(series, series[1:])
    )
    return LinkSummary(
        label=label,
        mean_skr_bps=math.fsum(rates) / len(rates),
        mean_qber=math.fsum(qbers) / len(qbers) if qbers else None,
        duration_s=series[-1].t - series[0].t,
        total_key_bits=total,
    )


def db_drop(matched: LinkSummary, unmatched: LinkSummary) -> float:
    """Penalty of the unmatched pair in dB; positive when it is worse."""
    if not (matched.mean_skr_bps > 0 and unmatched.mean_skr_bps > 0):
        raise DomainError(
            f"dB drop needs positive mean rates, got {matched.mean_skr_bps} and {unmatched.mean_skr_bps}"
        )
    return 10.0 * math.log10(matched.mean_skr_bps / unmatched.mean_skr_bps)
