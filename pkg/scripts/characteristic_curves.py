"""Write T, m, N and per-value Nbar curves for a preset on both model domains."""

from __future__ import annotations

import argparse
import csv
import sys

from algebroid.cli import PRESETS
from algebroid.nevan import DomainModel, geometric_grid, sample_grid, value_key

GRIDS = {"euclidean-plane": (1.5, 3000.0), "poincare-disc": (0.3, 10.0)}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("preset", choices=[k for k, p in PRESETS.items() if p.equation is not None])
    ap.add_argument("--count", type=int, default=24)
    ap.add_argument("--n-theta", type=int, default=1024)
    args = ap.parse_args()

    p = PRESETS[args.preset]
    keys = [value_key(a) for a in p.values]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["domain", "r", "T", "m", "N", "N_bran", "T_ricci"] + [f"Nbar_{k}" for k in keys])
    for kind, (lo, hi) in GRIDS.items():
        dom = DomainModel(kind, p.reference_point)
        for s in sample_grid(p.equation, dom, geometric_grid(lo, hi, args.count), p.values, args.n_theta):
            w.writerow([kind, f"{s.r:.17g}", f"{s.T:.17g}", f"{s.m:.17g}", f"{s.N:.17g}", f"{s.N_bran:.17g}", f"{s.T_ricci:.17g}"]
                       + [f"{s.values[k].Nbar:.17g}" for k in keys])


if __name__ == "__main__":
    main()
