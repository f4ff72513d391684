"""Refinement-trend verdicts across sigma for power weights |x|^alpha, |x|^beta.

The admissible sigma range is printed next to each verdict so the boundary can
be read off directly.
"""
import argparse

from wpme import admissible_sigma, spectral
from wpme.weights import WeightSpec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--beta", type=float, default=1.5)
    ap.add_argument("--sigma", type=float, nargs="+", default=[1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0])
    ap.add_argument("--mode", default="mean_centered")
    args = ap.parse_args()

    spec = WeightSpec("power", alpha=args.alpha, beta=args.beta)
    rng = admissible_sigma(spec)
    print(f"weights {spec}; admissible sigma {rng.as_dict()}")
    levels = spectral.default_levels()
    for s in args.sigma:
        est = spectral.sobolev_scan(spec, s, args.mode, levels)
        trend = " ".join(f"{v:.4g}" for v in est.refinement_trend)
        inside = "in " if s in rng else "out"
        print(f"sigma={s:5.2f} [{inside}] {est.verdict:17s} trend: {trend}")


if __name__ == "__main__":
    main()
