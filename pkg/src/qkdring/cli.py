"""Command-line entry point: ``qkdring {skr,compare,sweep,ingest}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from qkdring.capacity import normalized_difference, relayed_rate, switched_rate, switched_schedule
from qkdring.config import AppConfig, load_config
from qkdring.errors import InfeasibleScheduleError, QkdRingError, UndefinedComparisonError
from qkdring.ingest import LinkSummary, db_drop, parse_log, summarize
from qkdring.skr_model import skr_bps
from qkdring.sweep import SweepSpec, crossover_curve, emit, run_sweep
from qkdring.topology import RingSpec


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", help="JSON config with profiles, ring defaults and flags")
    p.add_argument("--profile", default="experimental", help="SKR profile name (default: experimental)")
    p.add_argument("--alpha", type=float, dest="alpha", help="fiber attenuation in dB/km (overrides config)")
    return p


def _ring_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--penalty-db", type=float, help="switch penalty in dB (overrides config)")
    p.add_argument(
        "--adjacent-uses-chord",
        action="store_true",
        default=None,
        help="use the circle chord for adjacent switched links instead of the ring fiber",
    )
    p.add_argument(
        "--gs-factor-two", action="store_true", default=None, help="use G_S = 2/T_i instead of 1/T_i"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkdring", description="Compare fair key rates of relayed and switched QKD rings."
    )
    sub = parser.add_subparsers(dest="cmd", required=True)
    common = _common()

    s = sub.add_parser("skr", parents=[common], help="tabulate the key rate against attenuation")
    s.add_argument("--a-max-db", type=float, default=40.0)
    s.add_argument("--step-db", type=float, default=0.21)
    s.add_argument("--out", metavar="PATH", help="output CSV (default: stdout)")

    c = sub.add_parser("compare", parents=[common], help="compare both architectures on one ring")
    c.add_argument("--nodes", type=int, help="number of ring nodes N")
    c.add_argument("--length-km", type=float, help="adjacent node distance in km")
    _ring_flags(c)

    w = sub.add_parser("sweep", parents=[common], help="normalized difference over an (N, length) grid")
    w.add_argument("--n-min", type=int, default=5)
    w.add_argument("--n-max", type=int, default=30)
    w.add_argument("--len-min", type=float, default=1.0)
    w.add_argument("--len-max", type=float, default=20.0)
    w.add_argument("--len-step", type=float, default=0.5)
    w.add_argument("--format", choices=("csv", "json"), default="csv")
    w.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    _ring_flags(w)

    g = sub.add_parser("ingest", help="summarize key logs and compute matched/unmatched dB drops")
    g.add_argument("paths", nargs="+", help="log CSV files; the file stem is the link label")
    g.add_argument(
        "--pair",
        action="append",
        default=[],
        metavar="MATCHED:UNMATCHED",
        help="labels of a matched and an unmatched link (repeatable)",
    )
    g.add_argument("--config", metavar="PATH", help=argparse.SUPPRESS)
    return parser


def _ring_param(cfg: AppConfig, args: argparse.Namespace, name: str, attr: str):
    value = getattr(args, attr, None)
    return cfg.ring[name] if value is None else value


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror or exc}") from exc


def cmd_skr(cfg: AppConfig, args: argparse.Namespace) -> int:
    profile = cfg.profile(args.profile)
    if not args.step_db > 0:
        raise QkdRingError(f"--step-db must be > 0, got {args.step_db}")
    alpha = _ring_param(cfg, args, "alpha_db_per_km", "alpha")
    count = math.floor(args.a_max_db / args.step_db + 1e-9) + 1
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("a_db", "distance_km_at_alpha", "skr_bps"))
    for k in range(count):
        a = round(k * args.step_db, 12)
        w.writerow((f"{a:.9g}", f"{a / alpha:.9g}", f"{skr_bps(profile.params, a):.9g}"))
    _write(buf.getvalue(), args.out)
    return 0


def cmd_compare(cfg: AppConfig, args: argparse.Namespace) -> int:
    profile = cfg.profile(args.profile)
    spec = RingSpec(
        n_nodes=_ring_param(cfg, args, "n_nodes", "nodes"),
        adjacent_len_km=float(_ring_param(cfg, args, "adjacent_len_km", "length_km")),
        alpha_db_per_km=float(_ring_param(cfg, args, "alpha_db_per_km", "alpha")),
        switch_penalty_db=float(_ring_param(cfg, args, "switch_penalty_db", "penalty_db")),
        adjacent_uses_chord=cfg.adjacent_uses_chord if args.adjacent_uses_chord is None else True,
    )
    factor_two = cfg.gs_factor_two if args.gs_factor_two is None else True
    g_r = relayed_rate(spec, profile)
    out: dict = {"profile": profile.name, "n_nodes": spec.n_nodes, "length_km": spec.adjacent_len_km}
    status = 0
    try:
        g_s = switched_rate(spec, profile, factor_two)
        sched = switched_schedule(spec, profile, 0, factor_two)
        out["schedule"] = {str(j): share for j, share in sched.fractions().items()}
    except InfeasibleScheduleError as exc:
        g_s = 0.0
        out["schedule"] = None
        out["infeasible"] = {"node": exc.node, "peer": exc.peer, "attenuation_db": exc.attenuation_db}
        print(f"qkdring: infeasible switched schedule: {exc}", file=sys.stderr)
        status = 1
    try:
        r = normalized_difference(g_s, g_r)
    except UndefinedComparisonError:
        r = None
    out.update(g_relayed_bps=g_r, g_switched_bps=g_s, r=r)
    print(json.dumps(out, indent=1))
    return status


def cmd_sweep(cfg: AppConfig, args: argparse.Namespace) -> int:
    spec = SweepSpec(
        profile=args.profile,
        n_min=args.n_min,
        n_max=args.n_max,
        len_min_km=args.len_min,
        len_max_km=args.len_max,
        len_step_km=args.len_step,
        alpha_db_per_km=float(_ring_param(cfg, args, "alpha_db_per_km", "alpha")),
        switch_penalty_db=float(_ring_param(cfg, args, "switch_penalty_db", "penalty_db")),
        adjacent_uses_chord=cfg.adjacent_uses_chord if args.adjacent_uses_chord is None else True,
        gs_factor_two=cfg.gs_factor_two if args.gs_factor_two is None else True,
    )
    grid = run_sweep(spec, cfg.profiles)
    text = emit(grid, args.format)
    _write(text, args.out)
    if args.out is not None:
        for length, n in crossover_curve(grid):
            print(f"L={length:g} km: switched wins up to N={n if n is not None else '-'}", file=sys.stderr)
    return 0


def cmd_ingest(cfg: AppConfig, args: argparse.Namespace) -> int:
    summaries: dict[str, LinkSummary] = {}
    errors: list[str] = []
    for raw in args.paths:
        path = Path(raw)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            errors.append(f"{path}: {exc.strerror or exc}")
            continue
        try:
            summaries[path.stem] = summarize(parse_log(text, str(path)), path.stem)
        except QkdRingError as exc:
            errors.append(f"{path}: {exc}" if str(path) not in str(exc) else str(exc))

    drops = []
    for pair in args.pair:
        matched, sep, unmatched = pair.partition(":")
        if not sep:
            errors.append(f"--pair {pair!r}: expected MATCHED:UNMATCHED")
            continue
        missing = [lab for lab in (matched, unmatched) if lab not in summaries]
        if missing:
            errors.append(f"--pair {pair!r}: no summary for {', '.join(missing)}")
            continue
        try:
            drop = db_drop(summaries[matched], summaries[unmatched])
        except QkdRingError as exc:
            errors.append(f"--pair {pair!r}: {exc}")
            continue
        drops.append({"matched": matched, "unmatched": unmatched, "db_drop": drop})

    doc: dict = {"summaries": [s.to_dict() for s in summaries.values()]}
    if args.pair:
        doc["drops"] = drops
    if errors:
        doc["errors"] = errors
    print(json.dumps(doc, indent=1))
    for err in errors:
        print(f"qkdring: {err}", file=sys.stderr)
    return 1 if errors else 0


COMMANDS = {"skr": cmd_skr, "compare": cmd_compare, "sweep": cmd_sweep, "ingest": cmd_ingest}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.cmd](cfg, args)
    except (QkdRingError, OSError) as exc:
        print(f"qkdring: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
