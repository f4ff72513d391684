"""Command line: ``wpme run <config>``, ``wpme sweep <dir>``, ``wpme report <path>``.

Exit codes: 0 every verdict passed, 1 some verdict failed, 2 runtime or config error.
The default output directory is ``$WPME_OUTPUT_DIR`` (falling back to ``./wpme_out``).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import config as config_mod
from .errors import ConfigError
from .experiments import EXIT_CODES, run, sweep, sweep_status

OUTPUT_ENV = "WPME_OUTPUT_DIR"


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_ENV, "wpme_out"))


def _out_dir(args, cfg=None) -> Path:
    if args.out is not None:
        return Path(args.out)
    if cfg is not None and cfg.output_dir:
        return Path(cfg.output_dir)
    return default_output_dir()


def _print_verdicts(rep: dict, stream=None) -> None:
    stream = stream or sys.stdout
    print(f"[{rep['status'].upper()}] {rep['label']} ({rep['kind']}, {rep['config_hash']})", file=stream)
    for v in rep.get("verdicts", []):
        mark = "pass" if v["passed"] else "FAIL"
        print(f"  {mark}  {v['name']}: value={v['value']} expected={v['expected']} "
              f"tol={v['tolerance']}  [{v['rule']}]", file=stream)
    if rep.get("error"):
        print(f"  error: {rep['error']['type']}: {rep['error']['message']}", file=stream)


def cmd_run(args) -> int:
    try:
        cfg = config_mod.load(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = _out_dir(args, cfg) / cfg.label()
    rep = run(cfg, out)
    _print_verdicts(rep.to_dict())
    print(f"wrote {out}")
    return rep.exit_code


def cmd_sweep(args) -> int:
    d = Path(args.directory)
    if not d.is_dir():
        print(f"not a directory: {d}", file=sys.stderr)
        return 2
    configs = []
    try:
        for p in sorted(d.glob("*.json")):
            configs.append(config_mod.load(p))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = _out_dir(args)
    merged = sweep(configs, out, workers=args.workers)
    for rep in merged["runs"].values():
        _print_verdicts(rep)
    print(f"{len(merged['runs'])} distinct configs, status {merged['status']}; wrote {out / 'sweep.json'}")
    return EXIT_CODES[merged["status"]]


def cmd_report(args) -> int:
    p = Path(args.path)
    if p.is_dir():
        p = p / "sweep.json" if (p / "sweep.json").exists() else p / "report.json"
    try:
        data = json.loads(p.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read report: {exc}", file=sys.stderr)
        return 2
    if "runs" in data:
        reports = list(data["runs"].values())
        status = sweep_status(reports)
    else:
        reports = [data]
        status = data["status"]
    for rep in reports:
        _print_verdicts(rep)
    return EXIT_CODES[status]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wpme", description="weighted porous-medium verification runs")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one JSON config")
    p.add_argument("config")
    p.add_argument("--out", default=None, help=f"output directory (default ${OUTPUT_ENV})")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run every *.json config in a directory concurrently")
    p.add_argument("directory")
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="print the verdicts of a report.json or sweep.json")
    p.add_argument("path")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
