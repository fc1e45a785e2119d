"""Command line entry point: ``rarewave <subcommand> --config <path> [--out <dir>]``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import experiments as ex
from .config import KINDS, ConfigError, load_config
from .output import format_record, write_series, write_snapshots, write_table
from .riemann import ClassificationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_POSITIVITY = 3
EXIT_VERIFY = 4

log = logging.getLogger("rarewave")


def _error_record(out: Path | None, record: dict) -> None:
    print(json.dumps(record), file=sys.stderr)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "error.json").write_text(json.dumps(record, indent=1) + "\n")


def _print_table(rows: list[dict]) -> None:
    if not rows:
        return
    keys = list(rows[0])
    print("  ".join(f"{k:>22}" for k in keys))
    for r in rows:
        cells = []
        for k in keys:
            v = r[k]
            if isinstance(v, bool):
                v = "PASS" if v else "FAIL"
            elif isinstance(v, float):
                v = f"{v:.6g}"
            cells.append(f"{v!s:>22}")
        print("  ".join(cells))


def cmd_riemann(cfg, out: Path) -> int:
    summary, rows = ex.riemann_summary(cfg)
    _print_table([summary])
    write_table([summary], out / "fan.csv", cfg.hash())
    write_table(rows, out / "riemann_profile.csv", cfg.hash())
    return EXIT_OK


def cmd_approx_wave(cfg, out: Path) -> int:
    rows = ex.approx_wave_profiles(cfg)
    write_table(rows, out / "approx_wave.csv", cfg.hash())
    print(f"wrote {len(rows)} rows to {out / 'approx_wave.csv'}")
    return EXIT_OK


def cmd_simulate(cfg, out: Path) -> int:
    result = ex.simulate(cfg)
    write_snapshots(result.snapshots, result.grid, out / "snapshots.csv", cfg.hash())
    write_series(result.series, out / "series.jsonl")
    if result.failure_time is not None:
        _error_record(out, {"status": "positivity_failure", "time": result.failure_time,
                            "config_hash": cfg.hash(), "partial_snapshots": len(result.snapshots)})
        return EXIT_POSITIVITY
    last = result.series.records[-1]
    print(format_record({k: last[k] for k in ("t", "E", "E1", "E2", "err.sup_v", "err.sup_u", "err.sup_s")}))
    return EXIT_OK


def cmd_verify_decay(cfg, out: Path) -> int:
    verdicts = ex.decay_campaign(cfg)
    rows = [v.row() for v in verdicts]
    _print_table(rows)
    write_table(rows, out / "decay_verdicts.csv", cfg.hash())
    return EXIT_OK if all(v.passed for v in verdicts) else EXIT_VERIFY


def cmd_compare_limit(cfg, out: Path) -> int:
    rows = ex.compare_limit(cfg)
    _print_table(rows)
    write_table(rows, out / "compare_limit.csv", cfg.hash())
    return EXIT_OK


def cmd_convergence(cfg, out: Path) -> int:
    rows, orders, drift = ex.convergence_study(cfg)
    _print_table(rows)
    print(f"max relative conservation drift: {drift:.3e}")
    write_table(rows, out / "convergence.csv", cfg.hash())
    ok = all(o >= 1.8 for o in orders) and drift <= 1e-12
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "riemann": cmd_riemann,
    "approx-wave": cmd_approx_wave,
    "simulate": cmd_simulate,
    "verify-decay": cmd_verify_decay,
    "compare-limit": cmd_compare_limit,
    "convergence": cmd_convergence,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rarewave", description=__doc__)
    parser.add_argument("subcommand", choices=KINDS)
    parser.add_argument("--config", required=True, help="TOML experiment manifest")
    parser.add_argument("--out", help="output directory (overrides output.dir)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    out = Path(args.out) if args.out else None
    try:
        cfg = load_config(args.config)
    except ConfigError as err:
        _error_record(out, {"status": "config_error", "message": str(err)})
        return EXIT_CONFIG
    cfg.kind = args.subcommand
    out = out or Path(cfg.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.toml").write_text(cfg.dumps())
    try:
        return COMMANDS[args.subcommand](cfg, out)
    except (ClassificationError, ValueError) as err:
        _error_record(out, {"status": "config_error", "message": str(err), "config_hash": cfg.hash()})
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
