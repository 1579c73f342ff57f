"""Monodromy of random equations: local cycle types, the product relation
at infinity and the parity of the total branching."""

from __future__ import annotations

import argparse

import numpy as np

from algebroid.branchlab import all_critical_points, cycles, monodromy
from algebroid.polyalg import AlgebroidEquation, CPoly, Disc


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--max-nu", type=int, default=4)
    ap.add_argument("--degree", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    ok = 0
    for t in range(args.trials):
        nu = int(rng.integers(2, args.max_nu + 1))
        eq = AlgebroidEquation([CPoly(rng.normal(size=args.degree + 1) + 1j * rng.normal(size=args.degree + 1)) for _ in range(nu + 1)])
        reach = max((abs(c.location) for c in all_critical_points(eq)), default=1.0)
        cert = monodromy(eq, Disc(0, 2 * reach + 1), seed=args.seed)
        total = sum(cert.branch_orders) + nu - len(cycles(cert.infinity_permutation))
        good = cert.product_matches_infinity() and total % 2 == 0
        ok += good
        print(f"trial {t:3d} nu={nu} critical={len(cert.critical_points):2d} total branching={total:2d} "
              f"irreducible={cert.irreducible:9s} product relation={'ok' if good else 'BROKEN'}")
    print(f"{ok}/{args.trials} consistent")


if __name__ == "__main__":
    main()
