"""Independent reference implementations used by the test suite.

Nothing here calls into the package's solvers: roots come from
``numpy.roots`` (companion matrix eigenvalues) and rational arithmetic is
done on raw integer pairs.
"""

import math
from itertools import combinations

import numpy as np


def companion_roots(eq, z):
    return np.roots([complex(a(z)) for a in eq.A[::-1]])


def discriminant_product(eq, z):
    """``A_nu^(2nu-2) prod_{i<j} (w_i - w_j)^2`` from companion-matrix roots."""
    w = companion_roots(eq, z)
    prod = complex(eq.A[-1](z)) ** (2 * eq.nu - 2)
    for i, j in combinations(range(len(w)), 2):
        prod *= (w[i] - w[j]) ** 2
    return prod


def dense_oracle_perm(eq, base_roots, path, n=4096):
    """Brute-force continuation: resample the polyline and match greedily."""
    path = np.asarray(path)
    seg = np.abs(np.diff(path))
    s = np.concatenate([[0], np.cumsum(seg)])
    t = np.linspace(0, s[-1], n + 1)
    pts = np.interp(t, s, path.real) + 1j * np.interp(t, s, path.imag)
    current = companion_roots(eq, pts[0])
    order = [int(np.argmin(np.abs(current - b))) for b in base_roots]
    current = current[order]
    for z in pts[1:]:
        new = list(companion_roots(eq, z))
        nxt = []
        for w in current:
            k = int(np.argmin([abs(w - x) for x in new]))
            nxt.append(new.pop(k))
        current = np.array(nxt)
    return tuple(int(np.argmin(np.abs(base_roots - w))) for w in current)


# --- rational arithmetic on (numerator, denominator) pairs -----------------


def bf_ratio(k):
    """k/(k+1); inf -> 1/1."""
    return (1, 1) if k == math.inf else (k, k + 1)


def bf_add(x, y):
    return (x[0] * y[1] + y[0] * x[1], x[1] * y[1])


def bf_mul(x, y):
    return (x[0] * y[0], x[1] * y[1])


def bf_neg(x):
    return (-x[0], x[1])


def bf_equal(x, num, den):
    """Cross-multiplied comparison against a reduced fraction ``num/den``."""
    return x[0] * den == num * x[1]


def bf_gamma(ks, sheets, nu0):
    acc = (0, 1)
    for k in ks:
        acc = bf_add(acc, bf_ratio(k))
    inv_sum = (0, 1)
    for s in sheets:
        inv_sum = bf_add(inv_sum, (1, s))
    prod = 1
    for s in sheets:
        prod *= s
    sub = bf_mul(bf_mul(bf_ratio(max(ks)), (prod, 1)), inv_sum)
    return bf_add(bf_add(acc, bf_neg(sub)), (-2 * nu0, 1))


def bf_uniqueness(ks, mu, nu):
    q = len(ks)
    tail = (0, 1)
    for k in ks:
        tail = bf_add(tail, (0, 1) if k == math.inf else (1, k + 1))
    r0 = bf_ratio(max(ks))
    out = []
    for a, b in ((mu, nu), (nu, mu)):
        x = bf_add((q - 2 * a, 1), bf_mul((-2 * b, 1), r0))
        x = bf_add(x, bf_neg(tail))
        out.append(x[0] > 0)  # denominators stay positive
    return tuple(out)
