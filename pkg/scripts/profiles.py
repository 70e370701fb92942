"""Write single-index measure profiles and selection listings as CSV.

    python3 scripts/profiles.py --outdir results/
"""
import argparse
import csv
import math
from pathlib import Path

from orderinfo.cli import fmt
from orderinfo.distributions import Cauchy, GaussianMixture, Uniform, bernoulli, salt_pepper_dist
from orderinfo.measures import profile
from orderinfo.order_stats import SampleModel
from orderinfo.selection import joint_select, marginal_select, sequential_select

PROFILES = {
    "r1_saltpepper_light_n16_bits": (SampleModel(16, salt_pepper_dist(150, 0.3, 0.05)), 1, 2.0),
    "r1_saltpepper_heavy_n36_bits": (SampleModel(36, salt_pepper_dist(150, 0.7, 0.3)), 1, 2.0),
    "r3_mixture_n25": (SampleModel(25, GaussianMixture((-2, 2), (0.15, 0.1), (0.5, 0.5))), 3, math.e),
    "r3_cauchy_n25": (SampleModel(25, Cauchy(0, 2e-4)), 3, math.e),
}

LISTINGS = {
    "bernoulli_n19_r1": (SampleModel(19, bernoulli(0.5)), 1),
    "uniform_n5_r3": (SampleModel(5, Uniform(0, 1)), 3),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    ap.add_argument("--k", type=int, default=4)
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    for name, (model, m, base) in PROFILES.items():
        path = args.outdir / f"{name}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["i", "value"])
            for i, v in enumerate(profile(model, m, base), start=1):
                w.writerow([i, fmt(v.value)])
        print(f"wrote {path}")

    for name, (model, m) in LISTINGS.items():
        path = args.outdir / f"select_{name}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["approach", "k", "indices"])
            for label, fn in (("marginal", marginal_select), ("joint", joint_select), ("sequential", sequential_select)):
                for k in range(1, args.k + 1):
                    idx = fn(model, m, k).indices
                    w.writerow([label, k, " ".join(map(str, sorted(idx) if label == "joint" else idx))])
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
