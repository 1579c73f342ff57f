"""Second main theorem ledgers for the rational and two-valued presets.

Prints the calibrated error-term coefficients, the exceptional fraction and
the smallest margin outside the calibration prefix.
"""

from __future__ import annotations

import argparse

from algebroid.cli import PRESETS
from algebroid.nevan import DomainModel, geometric_grid
from algebroid.theorems import smt_check

CASES = [("mobius", 3), ("rational-2", 3), ("quartic-2", 5)]
GRIDS = {"euclidean-plane": (1.5, 2980.0), "poincare-disc": (0.3, 10.0)}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=64)
    args = ap.parse_args()

    for name, q in CASES:
        p = PRESETS[name]
        for kind, (lo, hi) in GRIDS.items():
            led = smt_check(p.equation, DomainModel(kind, p.reference_point), list(p.values)[:q], geometric_grid(lo, hi, args.count))
            cal = led.calibration
            tail = led.margins[cal["calibration_rows"]:]
            print(
                f"{name:11s} {kind:16s} q={q} exceptional={led.exceptional_fraction:.3f} "
                f"kappa=({cal['kappa_logT']:.3g}, {cal['kappa_growth']:.3g}, {cal['kappa_const']:.3g}) "
                f"min verdict margin={min(tail):.4g}"
            )


if __name__ == "__main__":
    main()
