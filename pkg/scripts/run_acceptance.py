"""Run every acceptance config concurrently and print the verdict table.

    python3 scripts/run_acceptance.py [--out DIR] [--workers K]
"""
import argparse
import sys
from pathlib import Path

from wpme.config import load
from wpme.experiments import EXIT_CODES, sweep

CONFIGS = Path(__file__).resolve().parents[1] / "configs" / "acceptance"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="wpme_out/acceptance")
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()

    paths = sorted(CONFIGS.glob("*.json"))
    merged = sweep([load(p) for p in paths], args.out, workers=args.workers)
    for rep in sorted(merged["runs"].values(), key=lambda r: r["label"]):
        print(f"{rep['status'].upper():5s} {rep['label']}")
        for v in rep["verdicts"]:
            mark = "ok " if v["passed"] else "BAD"
            print(f"    {mark} {v['name']:30s} {v['value']!s:>24.24s}  expected {v['expected']}")
    print(f"overall: {merged['status']}  ({args.out}/sweep.json)")
    return EXIT_CODES[merged["status"]]


if __name__ == "__main__":
    sys.exit(main())
