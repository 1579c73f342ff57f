"""Complex polynomial arithmetic for algebroid equations.

An algebroid equation is stored through its coefficient polynomials
``A_0, ..., A_nu`` in one complex variable ``z``::

    psi(z, w) = A_nu(z) w**nu + ... + A_1(z) w + A_0(z)

Everything here is floating point (``complex128``). Exact inputs
(``int``, ``Fraction``) are accepted and converted once on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    IdenticallyZero,
    InexactDivision,
    PoleAtPoint,
    RootOnBoundary,
    SolverDiverged,
)

INF = math.inf
EPS = np.finfo(float).eps

ROOT_TOL = 1e-12
MAX_ITER = 200
CLUSTER_TOL = 1e-6
BOUNDARY_TOL = 1e-9


def is_inf(x) -> bool:
    """True for the point at infinity of the Riemann sphere."""
    return x is None or (isinstance(x, (int, float, complex, np.number)) and np.isinf(x))


def _to_complex(c) -> complex:
    if isinstance(c, Fraction):
        return complex(float(c))
    if isinstance(c, (list, tuple)) and len(c) == 2:
        return complex(float(c[0]), float(c[1]))
    return complex(c)


# ---------------------------------------------------------------------------
# CPoly
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CPoly:
    """Polynomial in ``z`` with complex coefficients, lowest power first."""

    coeffs: np.ndarray

    def __init__(self, coeffs: Iterable = (0,)):
        arr = np.array([_to_complex(c) for c in coeffs], dtype=complex)
        if arr.size == 0:
            arr = np.zeros(1, dtype=complex)
        nz = np.nonzero(arr)[0]
        arr = arr[: nz[-1] + 1] if nz.size else arr[:1] * 0
        object.__setattr__(self, "coeffs", arr)

    # construction helpers
    @classmethod
    def const(cls, c) -> "CPoly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "CPoly":
        p = np.array([lead], dtype=complex)
        for r in roots:
            p = np.convolve(p, [-r, 1.0])
        return cls(p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs) <= tol))

    @property
    def lead(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out if out.ndim else complex(out)

    def abs_eval(self, z):
        """Evaluate ``sum |c_k| |z|^k`` (the rounding-error scale of ``self(z)``)."""
        az = np.abs(np.asarray(z, dtype=complex))
        out = np.zeros_like(az)
        for c in np.abs(self.coeffs[::-1]):
            out = out * az + c
        return out if out.ndim else float(out)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __add__(self, other) -> "CPoly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, complex)
        a[: len(self.coeffs)] += self.coeffs
        a[: len(other.coeffs)] += other.coeffs
        return CPoly(a)

    __radd__ = __add__

    def __neg__(self) -> "CPoly":
        return CPoly(-self.coeffs)

    def __sub__(self, other) -> "CPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "CPoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "CPoly":
        other = _as_poly(other)
        return CPoly(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CPoly":
        out = CPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "CPoly":
        if self.degree == 0:
            return CPoly([0])
        k = np.arange(1, len(self.coeffs))
        return CPoly(self.coeffs[1:] * k)

    def shift(self, c: complex) -> "CPoly":
        """Return ``p(z + c)`` (Taylor shift)."""
        out = CPoly([0])
        lin = CPoly([c, 1])
        for a in self.coeffs[::-1]:
            out = out * lin + a
        return out

    def divmod(self, other: "CPoly") -> tuple["CPoly", "CPoly"]:
        """Long division; remainder is returned untrimmed by tolerance."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        num = self.coeffs.astype(complex).copy()
        den = other.coeffs
        dd = len(den) - 1
        if len(num) - 1 < dd:
            return CPoly([0]), CPoly(num)
        q = np.zeros(len(num) - dd, complex)
        for k in range(len(num) - 1 - dd, -1, -1):
            q[k] = num[k + dd] / den[-1]
            num[k : k + dd + 1] -= q[k] * den
        return CPoly(q), CPoly(num[:dd] if dd else [0])

    def exact_div(self, other: "CPoly", rtol: float = 1e-9) -> "CPoly":
        """Quotient of a division known to be exact.

        Solved as a least-squares convolution system; top-down long division
        amplifies rounding whenever the divisor has roots off the unit circle.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        nq = self.degree - other.degree + 1
        if nq <= 0:
            if self.is_zero():
                return CPoly([0])
            raise InexactDivision("dividend degree below divisor degree")
        C = np.zeros((len(self.coeffs), nq), complex)
        for k in range(nq):
            C[k : k + len(other.coeffs), k] = other.coeffs
        q = np.linalg.lstsq(C, self.coeffs, rcond=None)[0]
        resid = np.max(np.abs(C @ q - self.coeffs))
        scale = max(self.norm(), 1e-300)
        if resid > rtol * scale:
            raise InexactDivision(f"remainder {resid:.3e} exceeds {rtol:.1e} x {scale:.3e}")
        return CPoly(q)

    def trimmed(self, rtol: float = 1e-13) -> "CPoly":
        """Drop high-order coefficients that are rounding noise."""
        a = self.coeffs.copy()
        scale = self.norm()
        a[np.abs(a) <= rtol * scale] = 0
        return CPoly(a)

    def roots(self, seed: int = 0) -> np.ndarray:
        if self.degree < 1:
            return np.zeros(0, complex)
        return poly_roots(self.coeffs, seed=seed)

    def __repr__(self) -> str:
        terms = [f"({c.real:+.6g}{c.imag:+.6g}j)z^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return "CPoly(" + (" ".join(terms) or "0") + ")"

    def __eq__(self, other) -> bool:
        other = _as_poly(other)
        return len(self.coeffs) == len(other.coeffs) and bool(np.all(self.coeffs == other.coeffs))

    def allclose(self, other, rtol: float = 1e-9, atol: float = 1e-12) -> bool:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        return bool(np.allclose(a, b, rtol=rtol, atol=atol))


def _as_poly(p) -> CPoly:
    return p if isinstance(p, CPoly) else CPoly([p])


Z = CPoly([0, 1])


# ---------------------------------------------------------------------------
# Aberth-Ehrlich simultaneous iteration
# ---------------------------------------------------------------------------


def _horner_pair(c: np.ndarray, z: np.ndarray):
    """p and p' for rows of ascending coefficients ``c`` (n, d+1) at ``z`` (n, k)."""
    p = np.broadcast_to(c[:, -1:], z.shape).astype(complex)
    dp = np.zeros_like(p)
    for j in range(c.shape[1] - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, j : j + 1]
    return p, dp


def _abs_horner(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    ac = np.abs(c)
    az = np.abs(z)
    out = np.broadcast_to(ac[:, -1:], z.shape).astype(float)
    for j in range(c.shape[1] - 2, -1, -1):
        out = out * az + ac[:, j : j + 1]
    return out


def aberth_batch(
    coeffs: np.ndarray,
    rng: np.random.Generator,
    tol: float = ROOT_TOL,
    max_iter: int = MAX_ITER,
    restarts: int = 3,
) -> np.ndarray:
    """Roots of many polynomials of one degree at once.

    ``coeffs`` has shape ``(n, d+1)``, lowest power first, with nonzero
    leading column. Returns an ``(n, d)`` array. A row is accepted once its
    corrections stall at rounding level and every root has relative
    backward error below ``tol``.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    n, d1 = c.shape
    d = d1 - 1
    if d == 0:
        return np.zeros((n, 0), complex)
    c = c / c[:, -1:]
    if d == 1:
        return -c[:, :1]
    k = np.arange(d)
    expo = 1.0 / (d - np.arange(d))
    radius = np.max(np.abs(c[:, :-1]) ** expo[None, :], axis=1)
    radius = np.where(radius > 0, radius, 1.0)
    phase = 2 * np.pi * k / d + 0.4 + rng.uniform(0, 2 * np.pi / d)
    z = radius[:, None] * np.exp(1j * phase)[None, :]

    for attempt in range(restarts + 1):
        active = np.ones(n, bool)
        for _ in range(max_iter):
            idx = np.nonzero(active)[0]
            if idx.size == 0:
                break
            zi = z[idx]
            p, dp = _horner_pair(c[idx], zi)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = p / dp
                diff = zi[:, :, None] - zi[:, None, :]
                diff[:, k, k] = np.inf
                s = np.sum(1.0 / diff, axis=2)
                corr = ratio / (1.0 - ratio * s)
            corr = np.where(np.isfinite(corr), corr, 0.0)
            zi = zi - corr
            z[idx] = zi
            small = np.abs(corr) <= 4 * EPS * (np.abs(zi) + 1e-300)
            zero_res = p == 0
            done = np.all(small | zero_res, axis=1)
            active[idx[done]] = False
        p, _ = _horner_pair(c, z)
        back = np.abs(p) / np.maximum(_abs_horner(c, z), 1e-300)
        ok = np.all(back <= tol, axis=1) & np.all(np.isfinite(z), axis=1)
        if np.all(ok):
            return z
        bad = ~ok
        scale = radius[bad, None] * 1e-3
        z[bad] = z[bad] + scale * (rng.standard_normal((bad.sum(), d)) + 1j * rng.standard_normal((bad.sum(), d)))
        z[bad & ~np.all(np.isfinite(z), axis=1)] = radius[bad, None] * np.exp(1j * (phase + rng.uniform(0, 1)))
    raise SolverDiverged(f"Aberth iteration failed for {int(bad.sum())} of {n} polynomials")


def poly_roots(coeffs: Sequence[complex], seed: int = 0, tol: float = ROOT_TOL) -> np.ndarray:
    """All roots of one polynomial (ascending coefficients), zero roots deflated exactly."""
    c = np.asarray(coeffs, dtype=complex)
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        raise ValueError("zero polynomial has no well-defined roots")
    c = c[: nz[-1] + 1]
    lo = nz[0]
    zeros = np.zeros(lo, complex)
    rest = c[lo:]
    if len(rest) == 1:
        return zeros
    rng = np.random.default_rng(seed)
    r = aberth_batch(rest[None, :], rng, tol=tol)[0]
    return np.concatenate([r, zeros])


# ---------------------------------------------------------------------------
# clustering
# ---------------------------------------------------------------------------


def _snap_multiple(roots: np.ndarray, coeffs: np.ndarray, coarse: float = 1e-4, rtol: float = 1e-7) -> np.ndarray:
    """Replace near-coincident approximations of a multiple root by their centroid.

    A group of ``k`` roots within ``coarse`` is snapped only if the first
    ``k-1`` derivatives of the polynomial also vanish at the centroid.
    """
    roots = roots.copy()
    groups = _union_find(roots, coarse)
    p = CPoly(coeffs)
    for g in groups:
        if len(g) < 2:
            continue
        c = np.mean(roots[g])
        q = p
        ok = True
        for j in range(len(g)):
            if abs(q(c)) > rtol * q.abs_eval(c):
                ok = False
                break
            q = q.derivative()
        if ok:
            roots[g] = c
    return roots


def _union_find(points: np.ndarray, tol: float) -> list[list[int]]:
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in combinations(range(n), 2):
        a, b = points[i], points[j]
        if abs(a - b) < tol * (1 + max(abs(a), abs(b))):
            parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def cluster_roots(roots: Sequence[complex], tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Group roots closer than ``tol * (1 + |z|)``; returns ``(centroid, size)`` pairs."""
    pts = np.asarray(roots, dtype=complex)
    out = []
    for g in _union_find(pts, tol):
        out.append((complex(np.mean(pts[g])), len(g)))
    return out


def poly_zeros(p: CPoly, seed: int = 0, tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Zeros of ``p`` with multiplicities."""
    if p.is_zero():
        raise IdenticallyZero("zero polynomial")
    if p.degree == 0:
        return []
    r = poly_roots(p.coeffs, seed=seed)
    r = _snap_multiple(r, p.coeffs)
    return cluster_roots(r, tol)


# ---------------------------------------------------------------------------
# equations and root sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Disc:
    center: complex = 0j
    radius: float = 1.0


@dataclass(frozen=True, eq=False)
class AlgebroidEquation:
    """``A_nu w^nu + ... + A_0 = 0`` with polynomial coefficients in ``z``.

    ``irreducible`` is one of ``"certified"``, ``"refuted"``, ``"unknown"``;
    only a monodromy computation moves it away from ``"unknown"``.
    """

    A: tuple[CPoly, ...]
    label: str = ""
    irreducible: str = "unknown"

    def __init__(self, A: Sequence, label: str = "", irreducible: str = "unknown", check_gcd: bool = True):
        polys = tuple(a if isinstance(a, CPoly) else CPoly(a if isinstance(a, (list, tuple, np.ndarray)) else [a]) for a in A)
        if len(polys) < 2:
            raise ValueError("need at least A_0 and A_1")
        if polys[-1].is_zero():
            raise ValueError("leading coefficient A_nu must not vanish identically")
        object.__setattr__(self, "A", polys)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "irreducible", irreducible)
        if check_gcd and common_factor_degree(polys) > 0:
            raise ValueError("coefficients A_j share a common polynomial factor")

    @property
    def nu(self) -> int:
        return len(self.A) - 1

    def coeffs_at(self, z) -> np.ndarray:
        """Coefficient values ``A_j(z)``; shape ``(..., nu+1)``."""
        return np.stack([np.asarray(a(z), dtype=complex) for a in self.A], axis=-1)

    def with_label(self, label: str) -> "AlgebroidEquation":
        return AlgebroidEquation(self.A, label, self.irreducible, check_gcd=False)

    def with_irreducible(self, flag: str) -> "AlgebroidEquation":
        return AlgebroidEquation(self.A, self.label, flag, check_gcd=False)

    def to_lists(self) -> list[list[list[float]]]:
        return [[[c.real, c.imag] for c in a.coeffs] for a in self.A]

    def __repr__(self) -> str:
        return f"AlgebroidEquation(nu={self.nu}, label={self.label!r})"


def common_factor_degree(polys: Sequence[CPoly], rtol: float = 1e-8) -> int:
    """Degree of the common factor of all nonzero ``polys`` (numerical)."""
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        return 0
    base = min(nonzero, key=lambda p: p.degree)
    if base.degree == 0:
        return 0
    count = 0
    for z0, mult in poly_zeros(base):
        m = mult
        for p in nonzero:
            q = p
            k = 0
            while k < m and abs(q(z0)) <= rtol * max(q.abs_eval(z0), 1.0):
                q = q.derivative()
                k += 1
            m = min(m, k)
        count += m
    return count


def equation(*A, label: str = "") -> AlgebroidEquation:
    """Shorthand: ``equation(A_0, A_1, ..., A_nu)`` with polys or scalars."""
    return AlgebroidEquation([_as_poly(a) for a in A], label=label)


@dataclass(frozen=True)
class RootSet:
    """Multiset of the ``nu`` solutions at ``point``; infinite roots are counted."""

    point: complex
    finite: np.ndarray
    n_infinite: int = 0

    @property
    def nu(self) -> int:
        return len(self.finite) + self.n_infinite

    def values(self) -> list:
        return [complex(x) for x in self.finite] + [INF] * self.n_infinite

    def multiplicities(self, tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
        out = cluster_roots(self.finite, tol) if len(self.finite) else []
        if self.n_infinite:
            out.append((INF, self.n_infinite))
        return out

    def has_multiple(self, tol: float = CLUSTER_TOL) -> bool:
        return any(m > 1 for _, m in self.multiplicities(tol))


def _drop_count(eq: AlgebroidEquation, z: complex) -> int:
    drop = 0
    for a in eq.A[::-1]:
        if abs(a(z)) <= 8 * EPS * max(a.abs_eval(z), 0.0) or a.is_zero():
            drop += 1
        else:
            break
    return drop


def eval_psi(eq: AlgebroidEquation, z: complex, w: complex) -> complex:
    """``sum_j A_j(z) w^j`` with compensated summation of the terms."""
    terms = [complex(a(z)) * complex(w) ** j for j, a in enumerate(eq.A)]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def roots_at(eq: AlgebroidEquation, z: complex, seed: int = 0) -> RootSet:
    """Root multiset of ``psi(z, .)``; degree drop becomes infinite roots."""
    z = complex(z)
    drop = _drop_count(eq, z)
    if drop > eq.nu:
        raise ValueError(f"all coefficients vanish at z={z}")
    c = eq.coeffs_at(z)[: eq.nu + 1 - drop]
    if len(c) == 1:
        return RootSet(z, np.zeros(0, complex), drop)
    r = poly_roots(c, seed=seed)
    r = _snap_multiple(r, c)
    return RootSet(z, np.sort_complex(r), drop)


def roots_batch(eq: AlgebroidEquation, zs: np.ndarray, seed: int = 0) -> np.ndarray:
    """Roots at many points, shape ``(n, nu)``; infinite roots are ``inf``."""
    zs = np.asarray(zs, dtype=complex).ravel()
    c = eq.coeffs_at(zs)
    lead = np.abs(c[:, -1])
    lead_scale = eq.A[-1].abs_eval(zs)
    dropped = lead <= 8 * EPS * lead_scale
    out = np.full((len(zs), eq.nu), np.inf, dtype=complex)
    good = ~dropped
    if np.any(good):
        out[good] = aberth_batch(c[good], np.random.default_rng(seed))
    for i in np.nonzero(dropped)[0]:
        rs = roots_at(eq, zs[i], seed=seed)
        out[i, : len(rs.finite)] = rs.finite
    return out


# ---------------------------------------------------------------------------
# resultant and discriminant
# ---------------------------------------------------------------------------


def sylvester_matrix(eq: AlgebroidEquation) -> list[list[CPoly]]:
    """The ``(2nu-1)``-square matrix of ``psi`` and ``psi_w`` (``B_j = j A_j``)."""
    nu = eq.nu
    n = 2 * nu - 1
    zero = CPoly([0])
    A = eq.A
    B = [A[j] * j for j in range(nu + 1)]
    rows = []
    for i in range(nu - 1):
        row = [zero] * n
        for k in range(nu + 1):
            row[i + k] = A[nu - k]
        rows.append(row)
    for i in range(nu):
        row = [zero] * n
        for k in range(nu):
            row[i + k] = B[nu - k]
        rows.append(row)
    return rows


def _det_laplace(M: list[list[CPoly]]) -> CPoly:
    n = len(M)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple[int, ...]) -> CPoly:
        if row == n:
            return CPoly([1])
        acc = CPoly([0])
        for pos, col in enumerate(cols):
            entry = M[row][col]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1 :])
            term = entry * sub
            acc = acc + (term if pos % 2 == 0 else -term)
        return acc

    return minor(0, tuple(range(n)))


def _det_interpolate(M: list[list[CPoly]]) -> CPoly:
    """Determinant by evaluation on roots of unity and inverse FFT."""
    n = len(M)
    bound = sum(max(e.degree for e in row) for row in M)
    npts = bound + 1
    zs = np.exp(2j * np.pi * np.arange(npts) / npts)
    vals = np.empty(npts, complex)
    for k, z in enumerate(zs):
        vals[k] = np.linalg.det(np.array([[e(z) for e in row] for row in M], dtype=complex))
    coeffs = np.fft.fft(vals) / npts
    return CPoly(coeffs).trimmed(1e-12)


def sylvester_resultant(eq: AlgebroidEquation) -> CPoly:
    """``R_psi`` by exact expansion of the Sylvester-type determinant.

    For ``nu == 1`` the matrix is the single entry ``B_1 = A_1``.
    Cofactor expansion (memoised minors) up to ``nu = 4``; above that,
    evaluation on roots of unity plus interpolation, which keeps the
    coefficients stable where polynomial elimination loses digits.
    """
    M = sylvester_matrix(eq)
    if eq.nu <= 4:
        return _det_laplace(M)
    return _det_interpolate(M)


def discriminant(eq: AlgebroidEquation) -> CPoly:
    """``J_psi = (-1)^(nu(nu-1)/2) R_psi / A_nu``."""
    R = sylvester_resultant(eq)
    q = R.exact_div(eq.A[-1])
    sign = -1 if (eq.nu * (eq.nu - 1) // 2) % 2 else 1
    return q * sign


def discriminant_by_roots(eq: AlgebroidEquation, z: complex, seed: int = 0) -> complex:
    """Brute-force ``A_nu^(2nu-2) prod_{i<j} (w_i - w_j)^2`` at one point."""
    rs = roots_at(eq, z, seed=seed)
    if rs.n_infinite:
        raise PoleAtPoint(f"A_nu vanishes at {z}")
    w = rs.finite
    prod = complex(eq.A[-1](z)) ** (2 * eq.nu - 2)
    for i, j in combinations(range(len(w)), 2):
        prod *= (w[i] - w[j]) ** 2
    return prod


def vieta_products(eq: AlgebroidEquation, z: complex) -> list[complex]:
    """Elementary symmetric functions ``e_k = (-1)^k A_{nu-k}(z) / A_nu(z)``."""
    c = eq.coeffs_at(complex(z))
    if _drop_count(eq, complex(z)):
        raise PoleAtPoint(f"A_nu vanishes at {z}")
    nu = eq.nu
    return [complex((-1) ** k * c[nu - k] / c[nu]) for k in range(1, nu + 1)]


# ---------------------------------------------------------------------------
# divisors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Divisor1D:
    entries: tuple[tuple[complex, int], ...] = ()

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def support(self) -> list[complex]:
        return [z for z, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def truncated_support(self, k: float) -> list[complex]:
        """Points with multiplicity ``<= k`` (``k`` may be ``inf``)."""
        return [z for z, m in self.entries if m <= k]


def poly_divisor(p: CPoly, region: Disc, seed: int = 0, tol: float = CLUSTER_TOL) -> Divisor1D:
    """Zeros of ``p`` inside ``region`` with multiplicities."""
    if not np.isfinite(region.radius):
        raise ValueError("region radius must be finite")
    entries = []
    for z0, m in poly_zeros(p, seed=seed, tol=tol):
        dist = abs(z0 - region.center)
        if abs(dist - region.radius) <= BOUNDARY_TOL * (1 + region.radius):
            raise RootOnBoundary(f"zero {z0} lies on |z - {region.center}| = {region.radius}")
        if dist < region.radius:
            entries.append((z0, m))
    entries.sort(key=lambda e: (e[0].real, e[0].imag))
    return Divisor1D(tuple(entries))


def pole_divisor(eq: AlgebroidEquation, region: Disc, seed: int = 0) -> Divisor1D:
    """Pole divisor of ``w``: the zeros of ``A_nu``."""
    return poly_divisor(eq.A[-1], region, seed=seed)


def value_polynomial(eq: AlgebroidEquation, a: complex) -> CPoly:
    """``psi(., a)`` as a polynomial in ``z``.

    Coefficients that cancel down to rounding level relative to the terms
    that produced them are set to zero, so the degree is not inflated.
    """
    a = complex(a)
    n = max(len(A.coeffs) for A in eq.A)
    acc = np.zeros(n, complex)
    bound = np.zeros(n)
    for j, A in enumerate(eq.A):
        term = A.coeffs * a**j
        acc[: len(term)] += term
        bound[: len(term)] += np.abs(term)
    acc[np.abs(acc) <= 8 * EPS * bound] = 0
    return CPoly(acc)


def zero_divisor(eq: AlgebroidEquation, a, region: Disc, seed: int = 0) -> Divisor1D:
    """Divisor of ``a``-points of ``w``: zeros of ``psi(., a)`` (poles for ``a = inf``)."""
    if is_inf(a):
        return pole_divisor(eq, region, seed=seed)
    p = value_polynomial(eq, a)
    scale = max(A.norm() * max(1.0, abs(a)) ** j for j, A in enumerate(eq.A))
    if p.is_zero(1e-13 * scale):
        raise IdenticallyZero(f"psi(z, {a}) vanishes identically")
    return poly_divisor(p, region, seed=seed)


def shifted_equation(eq: AlgebroidEquation, a: complex) -> AlgebroidEquation:
    """Equation for ``u = w - a``: ``B_k = sum_j C(nu-j, k) a^(nu-k-j) A_{nu-j}``."""
    nu = eq.nu
    B = []
    for k in range(nu + 1):
        acc = CPoly([0])
        for j in range(nu - k + 1):
            acc = acc + eq.A[nu - j] * (math.comb(nu - j, k) * complex(a) ** (nu - k - j))
        B.append(acc)
    return AlgebroidEquation(B, label=f"{eq.label}-shift({a})", check_gcd=False)


def reciprocal_equation(eq: AlgebroidEquation) -> AlgebroidEquation:
    """Equation for ``1/w`` (coefficient order reversed)."""
    if eq.A[0].is_zero():
        raise IdenticallyZero("A_0 vanishes identically, 1/w undefined")
    return AlgebroidEquation(eq.A[::-1], label=f"1/({eq.label})", check_gcd=False)


def inverse_shift_equation(eq: AlgebroidEquation, a) -> AlgebroidEquation:
    """Equation satisfied by ``1/(w - a)`` (``a = inf`` gives ``w`` itself)."""
    if is_inf(a):
        return eq
    return reciprocal_equation(shifted_equation(eq, a))


# ---------------------------------------------------------------------------
# symmetric-product reduction
# ---------------------------------------------------------------------------


def reduce(points: Sequence) -> np.ndarray:
    """Homogeneous coefficients ``[A_0 : ... : A_nu]`` of ``prod (e1 - w_j e0)``.

    Infinite points contribute a bare ``e0`` factor. The result is scaled so
    its largest-magnitude coefficient equals 1 (ties go to the highest power).
    """
    c = np.array([1.0], dtype=complex)
    for w in points:
        factor = np.array([1.0, 0.0], complex) if is_inf(w) else np.array([-complex(w), 1.0], complex)
        c = np.convolve(c, factor)
    mag = np.abs(c)
    top = np.nonzero(mag >= mag.max() * (1 - 1e-12))[0][-1]
    return c / c[top]


def decompose(coeffs: Sequence[complex], seed: int = 0, tol: float = 1e-12) -> list:
    """Inverse of :func:`reduce` up to scale: vanishing leading terms give infinite points."""
    c = np.asarray(coeffs, dtype=complex)
    if not np.any(c):
        raise ValueError("all coefficients vanish")
    scale = np.max(np.abs(c))
    k = 0
    while abs(c[len(c) - 1 - k]) <= tol * scale:
        k += 1
    finite = poly_roots(c[: len(c) - k], seed=seed) if len(c) - k > 1 else np.zeros(0, complex)
    return [complex(x) for x in finite] + [INF] * k


def chordal(a, b) -> float:
    """Chordal distance on the Riemann sphere."""
    if is_inf(a) and is_inf(b):
        return 0.0
    if is_inf(a):
        return 2.0 / math.sqrt(1 + abs(b) ** 2)
    if is_inf(b):
        return 2.0 / math.sqrt(1 + abs(a) ** 2)
    return 2 * abs(a - b) / math.sqrt((1 + abs(a) ** 2) * (1 + abs(b) ** 2))


def multiset_distance(s: Sequence, t: Sequence) -> float:
    """Bottleneck chordal distance under the optimal assignment."""
    if len(s) != len(t):
        return math.inf
    if not len(s):
        return 0.0
    cost = np.array([[chordal(a, b) for b in t] for a in s])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())
