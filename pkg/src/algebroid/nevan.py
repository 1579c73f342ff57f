"""Nevanlinna functionals of algebroid functions on the plane and the Poincare disc.

All functionals carry the ``1/nu`` sheet average. On the plane the counting
kernel is ``log(r/|z - o|)``. On the disc, ``Delta(r)`` is the hyperbolic ball
of radius ``r`` about ``o`` and the kernel is
``log(tanh(r/2) / |phi_o^{-1}(z)|)`` with ``phi_o(x) = (x + o)/(1 + conj(o) x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate

from .branchlab import MonodromyCertificate, all_critical_points, monodromy
from .errors import (
    BoundaryHitsCritical,
    IdenticallyZero,
    ParabolicProfile,
    RootOnBoundary,
    ValueAtReference,
)
from .polyalg import (
    INF,
    AlgebroidEquation,
    Disc,
    is_inf,
    poly_zeros,
    roots_batch,
    value_polynomial,
)

N_THETA = 1024
REFERENCE_TOL = 1e-9
NODE_TOL = 1e-9
EUCLIDEAN = "euclidean-plane"
POINCARE = "poincare-disc"


def _log_plus(x):
    return np.log(np.maximum(x, 1.0))


# ---------------------------------------------------------------------------
# domains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DomainModel:
    kind: str = EUCLIDEAN
    o: complex = 0j

    def __post_init__(self):
        if self.kind not in (EUCLIDEAN, POINCARE):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind == POINCARE and abs(self.o) >= 1:
            raise ValueError("reference point must lie in the unit disc")
        object.__setattr__(self, "o", complex(self.o))

    @property
    def hyperbolic(self) -> bool:
        return self.kind == POINCARE

    def _to_origin(self, z):
        """Chart sending ``o`` to 0: translation or the disc automorphism."""
        z = np.asarray(z, dtype=complex)
        if not self.hyperbolic:
            return z - self.o
        return (z - self.o) / (1 - np.conj(self.o) * z)

    def _from_origin(self, x):
        x = np.asarray(x, dtype=complex)
        if not self.hyperbolic:
            return x + self.o
        return (x + self.o) / (1 + np.conj(self.o) * x)

    def chart_radius(self, r: float) -> float:
        return math.tanh(r / 2) if self.hyperbolic else r

    def boundary(self, r: float, n: int, phase: float = 0.0) -> np.ndarray:
        """Quadrature nodes on the boundary of ``Delta(r)``; harmonic measure is uniform."""
        theta = 2 * math.pi * (np.arange(n) + phase) / n
        return self._from_origin(self.chart_radius(r) * np.exp(1j * theta))

    def green(self, z, r: float):
        """``pi * g_r(o, z)``; nonpositive outside ``Delta(r)``."""
        d = np.abs(self._to_origin(z))
        with np.errstate(divide="ignore"):
            return np.log(self.chart_radius(r) / d)

    def contains(self, z) -> bool:
        z = complex(z)
        if self.hyperbolic and abs(z) >= 1:
            return False
        return True

    def enclosing_disc(self, r: float) -> Disc:
        """Euclidean disc equal to ``Delta(r)``."""
        t = self.chart_radius(r)
        if not self.hyperbolic:
            return Disc(self.o, t)
        o = self.o
        den = 1 - t * t * abs(o) ** 2
        return Disc(o * (1 - t * t) / den, t * (1 - abs(o) ** 2) / den)

    def ricci(self, r: float) -> float:
        return ricci_characteristic(self, r)


PLANE = DomainModel(EUCLIDEAN)
DISC = DomainModel(POINCARE)


# ---------------------------------------------------------------------------
# samples
# ---------------------------------------------------------------------------


@dataclass
class ValueEntry:
    m: float
    N: float
    Nbar: float


@dataclass
class NevanlinnaSample:
    r: float
    T: float
    m: float
    N: float
    N_bran: float
    T_ricci: float
    values: dict = field(default_factory=dict)  # sphere point -> ValueEntry


@dataclass
class DefectEstimate:
    value: complex | float
    simple_defect: float
    tail_window: tuple[float, float]


def value_key(a) -> str:
    """Stable text label of a sphere point (used for CSV/JSON column names)."""
    if is_inf(a):
        return "inf"
    a = complex(a)
    return f"{a.real:g}{a.imag:+g}j" if a.imag else f"{a.real:g}"


@lru_cache(maxsize=None)
def _gauss_legendre(q: int):
    return np.polynomial.legendre.leggauss(q)


# ---------------------------------------------------------------------------
# evaluator
# ---------------------------------------------------------------------------


class Functionals:
    """Functionals of one equation on one domain with cached divisors.

    The root multiset on each boundary is solved once per radius and shared
    by every target value.
    """

    def __init__(
        self,
        eq: AlgebroidEquation,
        dom: DomainModel = PLANE,
        n_theta: int = N_THETA,
        seed: int = 0,
        certificate: MonodromyCertificate | None = None,
    ):
        if n_theta < 16:
            raise ValueError("n_theta must be >= 16")
        self.eq, self.dom, self.n_theta, self.seed = eq, dom, n_theta, seed
        self._certificate = certificate
        self._divisors: dict = {}
        self._boundary: dict = {}
        self._critical = None

    # -- divisors ----------------------------------------------------------

    @property
    def critical(self) -> list[complex]:
        if self._critical is None:
            self._critical = [c.location for c in all_critical_points(self.eq, self.seed)]
        return self._critical

    def divisor(self, a) -> list[tuple[complex, int]]:
        """All ``a``-points in the plane (``A_nu`` zeros for ``a = inf``)."""
        key = value_key(a)
        if key not in self._divisors:
            p = self.eq.A[-1] if is_inf(a) else value_polynomial(self.eq, a)
            scale = max(A.norm() * max(1.0, 0.0 if is_inf(a) else abs(a)) ** j for j, A in enumerate(self.eq.A))
            if p.is_zero(1e-13 * scale):
                raise IdenticallyZero(f"psi(z, {a}) vanishes identically")
            pts = poly_zeros(p, seed=self.seed) if p.degree > 0 else []
            pts = [(z, m) for z, m in pts if self.dom.contains(z)]
            for z, _ in pts:
                if abs(z - self.dom.o) <= REFERENCE_TOL:
                    raise ValueAtReference(f"value {value_key(a)} is taken at the reference point {self.dom.o}")
            self._divisors[key] = pts
        return self._divisors[key]

    @property
    def certificate(self) -> MonodromyCertificate:
        if self._certificate is None:
            reach = max((abs(c) for c in self.critical), default=1.0)
            self._certificate = monodromy(self.eq, Disc(0j, 2 * reach + 1), seed=self.seed)
        return self._certificate

    def branch_divisor(self) -> list[tuple[complex, int]]:
        out = [(z, k) for z, k in self.certificate.branch_divisor() if self.dom.contains(z)]
        for z, _ in out:
            if abs(z - self.dom.o) <= REFERENCE_TOL:
                raise ValueAtReference(f"branch point at the reference point {self.dom.o}")
        return out

    def _kernel_sum(self, pts: Sequence[tuple[complex, int]], r: float, simple: bool) -> float:
        if not pts:
            return 0.0
        z = np.array([p for p, _ in pts])
        mult = np.ones(len(pts)) if simple else np.array([m for _, m in pts], float)
        g = self.dom.green(z, r)
        edge = np.abs(g) <= NODE_TOL * max(1.0, r)
        if np.any(edge):
            raise RootOnBoundary(f"divisor point {z[edge][0]} on the boundary of Delta({r})")
        inside = g > 0
        return float(math.fsum(mult[inside] * g[inside]) / self.eq.nu)

    # -- boundary roots ----------------------------------------------------

    def boundary_roots(self, r: float) -> tuple[float, np.ndarray]:
        """Roots at the uniform nodes of radius ``r`` and the node phase used."""
        if r in self._boundary:
            return self._boundary[r]
        out = None
        for phase in (0.0, 0.5):
            nodes = self.dom.boundary(r, self.n_theta, phase)
            if self._too_close(nodes):
                continue
            w = roots_batch(self.eq, nodes, seed=self.seed)
            if np.all(np.isfinite(w)):
                out = (phase, w)
                break
        if out is None:
            raise BoundaryHitsCritical(f"quadrature nodes of radius {r} hit a critical point")
        self._boundary[r] = out
        return out

    def _too_close(self, nodes: np.ndarray) -> bool:
        for c in self.critical:
            if np.min(np.abs(nodes - c)) <= NODE_TOL * (1 + abs(c)):
                return True
        return False

    # -- functionals -------------------------------------------------------

    @staticmethod
    def _inverse_distance(w: np.ndarray, a) -> np.ndarray:
        """``|w - a|^-1`` (``|w|`` for ``a = inf``); the integrand is its ``log+``."""
        if is_inf(a):
            return np.abs(w)
        with np.errstate(divide="ignore"):
            return 1 / np.abs(w - complex(a))

    def _roots_at_angles(self, r: float, theta: np.ndarray) -> np.ndarray:
        z = self.dom._from_origin(self.dom.chart_radius(r) * np.exp(1j * np.asarray(theta)))
        if self._too_close(np.atleast_1d(z)):
            raise BoundaryHitsCritical(f"refinement node on radius {r} hits a critical point")
        w = roots_batch(self.eq, np.atleast_1d(z), seed=self.seed)
        if not np.all(np.isfinite(w)):
            raise BoundaryHitsCritical(f"refinement node on radius {r} hits a pole")
        return w

    def _locate_kink(self, r: float, a, t0: float, t1: float, c0: int) -> float:
        """Bisection for the angle where the count of ``|w_j - a| < 1`` changes."""
        for _ in range(60):
            tm = 0.5 * (t0 + t1)
            cm = int(np.sum(self._inverse_distance(self._roots_at_angles(r, [tm])[0], a) > 1))
            if cm == c0:
                t0 = tm
            else:
                t1 = tm
            if t1 - t0 <= 1e-15 * (1 + abs(t0)):
                break
        return 0.5 * (t0 + t1)

    def proximity(self, a, r: float) -> float:
        """Boundary mean of ``(1/nu) sum_j log+ 1/|w_j - a|``.

        The integrand is analytic between angles where some ``|w_j - a|``
        crosses 1. Without crossings the periodic trapezoid rule is used;
        otherwise the crossings are bisected and each arc between them gets
        Gauss-Legendre quadrature.
        """
        phase, w = self.boundary_roots(r)
        inv = self._inverse_distance(w, a)
        if not np.all(np.isfinite(inv)):
            raise BoundaryHitsCritical(f"value {value_key(a)} attained at a quadrature node of radius {r}")
        n, nu = self.n_theta, self.eq.nu
        vals = _log_plus(inv).sum(axis=1)
        counts = np.sum(inv > 1, axis=1)
        change = np.nonzero(counts != np.roll(counts, -1))[0]
        if len(change) == 0:
            return float(math.fsum(vals) / (n * nu))
        h = 2 * math.pi / n
        theta = h * (np.arange(n) + phase)
        kinks = sorted(self._locate_kink(r, a, theta[k], theta[k] + h, int(counts[k])) for k in change)
        total = 0.0
        for i, t0 in enumerate(kinks):
            t1 = kinks[i + 1] if i + 1 < len(kinks) else kinks[0] + 2 * math.pi
            q = int(min(max(16, math.ceil(n * (t1 - t0) / (2 * math.pi))), 512))
            x, wts = _gauss_legendre(q)
            tt = 0.5 * (t1 - t0) * x + 0.5 * (t1 + t0)
            f = _log_plus(self._inverse_distance(self._roots_at_angles(r, tt), a)).sum(axis=1)
            total += 0.5 * (t1 - t0) * math.fsum(wts * f)
        return float(total / (2 * math.pi * nu))

    def counting(self, a, r: float, simple: bool = False) -> float:
        return self._kernel_sum(self.divisor(a), r, simple)

    def branch_counting(self, r: float) -> float:
        return self._kernel_sum(self.branch_divisor(), r, simple=False)

    def sample(self, r: float, values: Sequence = (), with_branching: bool = True) -> NevanlinnaSample:
        m = self.proximity(INF, r)
        N = self.counting(INF, r)
        entries = {}
        for a in values:
            entries[value_key(a)] = ValueEntry(self.proximity(a, r), self.counting(a, r), self.counting(a, r, simple=True))
        return NevanlinnaSample(
            r=r,
            T=m + N,
            m=m,
            N=N,
            N_bran=self._branch_or_nan(r) if with_branching else float("nan"),
            T_ricci=ricci_characteristic(self.dom, r),
            values=entries,
        )

    def _branch_or_nan(self, r: float) -> float:
        # N_bran is undefined when a branch point sits at o; the sample keeps
        # the other functionals and marks it NaN (branch_counting itself raises)
        try:
            return self.branch_counting(r)
        except ValueAtReference:
            return float("nan")

    def characteristic(self, r: float) -> float:
        return self.proximity(INF, r) + self.counting(INF, r)


# ---------------------------------------------------------------------------
# functional wrappers
# ---------------------------------------------------------------------------


def proximity(eq: AlgebroidEquation, dom: DomainModel, a, r: float, n_theta: int = N_THETA, seed: int = 0) -> float:
    """``m(r, a)``: boundary mean of ``(1/nu) sum log+ 1/|w_j - a|`` (``log+ |w_j|`` for ``a = inf``)."""
    return Functionals(eq, dom, n_theta, seed).proximity(a, r)


def counting(eq: AlgebroidEquation, dom: DomainModel, a, r: float, simple: bool = False, seed: int = 0) -> float:
    """``N(r, a)`` or, with ``simple``, the multiplicity-free ``Nbar(r, a)``."""
    return Functionals(eq, dom, N_THETA, seed).counting(a, r, simple)


def characteristic(
    eq: AlgebroidEquation,
    dom: DomainModel,
    r: float,
    n_theta: int = N_THETA,
    values: Sequence = (),
    certificate: MonodromyCertificate | None = None,
    seed: int = 0,
) -> NevanlinnaSample:
    return Functionals(eq, dom, n_theta, seed, certificate).sample(r, values)


def branch_counting(
    eq: AlgebroidEquation, dom: DomainModel, r: float, certificate: MonodromyCertificate | None = None, seed: int = 0
) -> float:
    """``N_bran(r) = (1/nu) sum ord_x * pi g_r(o, x)`` over branch points."""
    return Functionals(eq, dom, N_THETA, seed, certificate).branch_counting(r)


def sample_grid(
    eq: AlgebroidEquation,
    dom: DomainModel,
    r_grid: Sequence[float],
    values: Sequence = (),
    n_theta: int = N_THETA,
    seed: int = 0,
    certificate: MonodromyCertificate | None = None,
    with_branching: bool = True,
) -> list[NevanlinnaSample]:
    f = Functionals(eq, dom, n_theta, seed, certificate)
    return [f.sample(float(r), values, with_branching) for r in r_grid]


# ---------------------------------------------------------------------------
# Ricci characteristic
# ---------------------------------------------------------------------------

# scalar curvature of the Poincare metric with Gaussian curvature -1
POINCARE_SCALAR_CURVATURE = -2.0


def _log_tanh(x: float) -> float:
    # both terms are small for large x, so the difference keeps its digits
    e = math.exp(-2 * x)
    if e > 0.5:
        return math.log(math.tanh(x))
    return math.log1p(-e) - math.log1p(e)


def ricci_characteristic(dom: DomainModel, r: float) -> float:
    """``T(r, Ric)``: zero on the plane; a radial integral on the disc.

    On the disc the Ricci density is the constant ``s_c = -2`` against the
    hyperbolic area element ``sinh t dt dtheta``; with ``pi g_r`` this gives
    ``s_c * int_0^r log(tanh(r/2)/tanh(t/2)) sinh t dt``.
    """
    if not dom.hyperbolic or r <= 0:
        return 0.0
    lr = _log_tanh(r / 2)

    def f(t):
        return (lr - _log_tanh(t / 2)) * math.sinh(t) if t > 0 else 0.0

    val, _ = integrate.quad(f, 0.0, r, limit=200, epsabs=1e-13, epsrel=1e-12)
    return POINCARE_SCALAR_CURVATURE * val


def ricci_closed_form(r: float) -> float:
    """``-4 log cosh(r/2)``, the exact value of the disc integral above."""
    return -4.0 * math.log(math.cosh(r / 2))


# ---------------------------------------------------------------------------
# gauges
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VolumeProfile:
    """``V(t) = t**mu * log(t)**kappa`` or a tabulated ``(t, V)`` profile.

    Tabulated profiles interpolate linearly in ``log V`` against ``log t`` and
    continue past the last node with the power law of the final segment.
    """

    mu: float = 0.0
    kappa: float = 0.0
    table_t: tuple[float, ...] | None = None
    table_v: tuple[float, ...] | None = None

    @classmethod
    def tabulated(cls, t: Sequence[float], v: Sequence[float]) -> "VolumeProfile":
        t, v = tuple(float(x) for x in t), tuple(float(x) for x in v)
        if len(t) < 2 or any(b <= a for a, b in zip(t, t[1:])) or min(v) <= 0:
            raise ValueError("table needs >= 2 increasing radii with positive volumes")
        return cls(table_t=t, table_v=v)

    def __call__(self, t: float) -> float:
        if self.table_t is None:
            if self.kappa and t <= 1:
                raise ValueError("log-power profiles need t > 1")
            return t**self.mu * (math.log(t) ** self.kappa if self.kappa else 1.0)
        lt, lv = np.log(self.table_t), np.log(self.table_v)
        x = math.log(t)
        if x >= lt[-1]:
            s = (lv[-1] - lv[-2]) / (lt[-1] - lt[-2])
            return float(math.exp(lv[-1] + s * (x - lt[-1])))
        if x <= lt[0]:
            s = (lv[1] - lv[0]) / (lt[1] - lt[0])
            return float(math.exp(lv[0] + s * (x - lt[0])))
        return float(math.exp(np.interp(x, lt, lv)))

    def tail(self, r: float) -> float:
        """``int_r^inf t / V(t) dt``; raises when it diverges."""
        if self.table_t is None:
            if self.mu < 2 or (self.mu == 2 and self.kappa <= 1):
                raise ParabolicProfile(f"tail integral diverges for mu={self.mu}, kappa={self.kappa}")
            if self.kappa == 0:
                return r ** (2 - self.mu) / (self.mu - 2)
            val, _ = integrate.quad(lambda t: t / self(t), r, np.inf, limit=200, epsabs=0, epsrel=1e-12)
            return val
        return self._table_tail(r)

    def _table_tail(self, r: float) -> float:
        lt, lv = np.log(self.table_t), np.log(self.table_v)
        s_end = (lv[-1] - lv[-2]) / (lt[-1] - lt[-2])
        if s_end <= 2:
            raise ParabolicProfile(f"tabulated tail grows like t^{s_end:.3g}, integral diverges")
        # piecewise power laws V = V_k (t / t_k)^s: int t^(1-s) has closed form
        knots = [math.log(r)] + [x for x in lt if x > math.log(r)]
        total = 0.0
        for a, b in zip(knots, knots[1:]):
            total += self._piece(a, b)
        total += self._piece(knots[-1], math.inf)
        return total

    def _piece(self, la: float, lb: float) -> float:
        ta = math.exp(la)
        lt = np.log(self.table_t)
        lv = np.log(self.table_v)
        k = int(np.clip(np.searchsorted(lt, la, side="right") - 1, 0, len(lt) - 2))
        s = (lv[k + 1] - lv[k]) / (lt[k + 1] - lt[k])
        va = self(ta)
        # int_ta^tb t (ta/t)^s / va dt
        e = 2 - s
        if math.isinf(lb):
            return ta**2 / (va * -e)
        tb = math.exp(lb)
        if abs(e) < 1e-14:
            return ta**2 / va * (lb - la)
        return ta**s / va * (tb**e - ta**e) / e


@dataclass
class GrowthGauges:
    H: float
    H_delta: float
    chi: float
    E_delta: float


def chi(s: float, t: float) -> float:
    """``sinh(s t)/s``, continued by ``t`` at ``s = 0``."""
    if s == 0:
        return t
    if abs(s * t) < 1e-4:
        # series keeps full relative accuracy near the removable singularity
        x = s * t
        return t * (1 + x * x / 6 + x**4 / 120)
    return math.sinh(s * t) / s


def log_chi(s: float, t: float) -> float:
    """``log chi(s, t)`` without overflow for large ``s t``."""
    x = abs(s * t)
    if x < 20:
        return math.log(chi(s, t))
    return x + math.log1p(-math.exp(-2 * x)) - math.log(2 * abs(s))


def H_gauge(V: VolumeProfile, r: float) -> float:
    """``H(r) = V(r)/r^2 int_r^inf t/V(t) dt``."""
    if V.table_t is None and V.kappa == 0 and V.mu > 2:
        return 1.0 / (V.mu - 2)
    return V(r) / r**2 * V.tail(r)


def H_delta_gauge(V: VolumeProfile, r: float, delta: float) -> float:
    """``H(r, delta) = (1/r) (V(r)/r)^(1+delta) int_r^inf t/V(t) dt``."""
    return (V(r) / r) ** (1 + delta) / r * V.tail(r)


def chi_tail(sigma: float, m_dim: int, r: float) -> float:
    """``int_r^inf chi(sigma, t)^(1-2m) dt``."""
    if sigma == 0:
        if m_dim == 1:
            raise ParabolicProfile("int_r^inf dt/t diverges (sigma = 0, m = 1)")
        return r ** (2 - 2 * m_dim) / (2 * m_dim - 2)
    if m_dim == 1:
        return -math.log(math.tanh(sigma * r / 2))
    val, _ = integrate.quad(
        lambda t: math.exp((1 - 2 * m_dim) * log_chi(sigma, t)), r, np.inf, limit=200, epsabs=0, epsrel=1e-12
    )
    return val


def E_gauge(sigma: float, tau: float, m_dim: int, r: float, delta: float) -> float:
    """``((2m-1) tau^2 + 1/r) / chi(tau, r)^((1-2m)(1+delta)) * int_r^inf chi(sigma, t)^(1-2m) dt``."""
    lead = (2 * m_dim - 1) * tau**2 + 1 / r
    return lead * math.exp((2 * m_dim - 1) * (1 + delta) * log_chi(tau, r)) * chi_tail(sigma, m_dim, r)


def gauges(V: VolumeProfile, sigma: float, tau: float, m_dim: int, r: float, delta: float) -> GrowthGauges:
    if r <= 0 or delta <= 0:
        raise ValueError("need r > 0 and delta > 0")
    if sigma < 0 or tau < sigma:
        raise ValueError("need 0 <= sigma <= tau")
    return GrowthGauges(
        H=H_gauge(V, r),
        H_delta=H_delta_gauge(V, r, delta),
        chi=chi(tau, r),
        E_delta=E_gauge(sigma, tau, m_dim, r, delta),
    )


# ---------------------------------------------------------------------------
# defects
# ---------------------------------------------------------------------------


def defect_from_samples(samples: Sequence[NevanlinnaSample], a, t_floor: float = 1e-12) -> DefectEstimate:
    """``1 - max Nbar/T`` over the top half of the grid, clamped to ``[0, 1]``."""
    if len(samples) < 8:
        raise ValueError("defect estimation needs at least 8 radii")
    tail = samples[len(samples) // 2 :]
    key = value_key(a)
    ratios = [s.values[key].Nbar / s.T for s in tail if s.T > t_floor]
    top = max(ratios) if ratios else 0.0
    return DefectEstimate(a, float(min(1.0, max(0.0, 1.0 - top))), (tail[0].r, tail[-1].r))


def defect(
    eq: AlgebroidEquation, dom: DomainModel, a, r_grid: Sequence[float], n_theta: int = N_THETA, seed: int = 0
) -> DefectEstimate:
    r_grid = list(r_grid)
    if any(b <= a_ for a_, b in zip(r_grid, r_grid[1:])):
        raise ValueError("r_grid must be increasing")
    samples = sample_grid(eq, dom, r_grid, [a], n_theta, seed, with_branching=False)
    return defect_from_samples(samples, a)


def geometric_grid(r_min: float, r_max: float, count: int) -> np.ndarray:
    return np.geomspace(r_min, r_max, count)
