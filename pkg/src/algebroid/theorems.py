"""Finite-grid checks of the main value-distribution inequalities.

Every check produces a :class:`TheoremLedger` of per-radius rows
``(lhs, rhs, margin = rhs - lhs, passed)``. Asymptotic ``O(.)`` terms are
turned into concrete functions by calibrating their coefficients on a
prefix of the grid and freezing them for the remaining rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .branchlab import MonodromyCertificate
from .errors import BoundaryHitsCritical, ValueAtReference
from .nevan import (
    DomainModel,
    Functionals,
    N_THETA,
    NevanlinnaSample,
    _log_plus,
    defect_from_samples,
    value_key,
)
from .polyalg import (
    AlgebroidEquation,
    eval_psi,
    inverse_shift_equation,
    is_inf,
    multiset_distance,
    roots_at,
    zero_divisor,
)

FMT_EPS = 5e-5
ROW_TOL = 1e-9
CALIBRATION_FRACTION = 0.25
EXCEPTIONAL_LIMIT = 0.1
DEFECT_EPS = 0.05


# ---------------------------------------------------------------------------
# ledgers
# ---------------------------------------------------------------------------


@dataclass
class LedgerRow:
    r: float
    lhs: float
    rhs: float
    margin: float
    passed: bool


@dataclass
class TheoremLedger:
    theorem: str
    rows: list[LedgerRow]
    exceptional_limit: float = 0.0
    calibration: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def exceptional_fraction(self) -> float:
        if not self.rows:
            return 0.0
        return sum(not r.passed for r in self.rows) / len(self.rows)

    @property
    def verdict(self) -> bool:
        return self.exceptional_fraction <= self.exceptional_limit

    @property
    def margins(self) -> list[float]:
        return [r.margin for r in self.rows]

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "verdict": self.verdict,
            "exceptional_fraction": self.exceptional_fraction,
            "exceptional_limit": self.exceptional_limit,
            "calibration": self.calibration,
            "notes": self.notes,
            "rows": [{"r": r.r, "lhs": r.lhs, "rhs": r.rhs, "margin": r.margin, "passed": r.passed} for r in self.rows],
        }


def _rows(rs, lhs, rhs, tol: float = ROW_TOL) -> list[LedgerRow]:
    return [LedgerRow(float(r), float(a), float(b), float(b - a), bool(b - a >= -tol)) for r, a, b in zip(rs, lhs, rhs)]


def _check_reference(eq: AlgebroidEquation, dom: DomainModel, a=None):
    o = dom.o
    lead = complex(eq.A[-1](o))
    if abs(lead) <= 1e-12 * max(eq.A[-1].abs_eval(o), 1e-300):
        raise ValueAtReference(f"w has a pole at the reference point {o}")
    if a is not None and not is_inf(a):
        val = eval_psi(eq, o, a)
        scale = sum(abs(A(o)) * max(1.0, abs(a)) ** j for j, A in enumerate(eq.A))
        if abs(val) <= 1e-12 * scale:
            raise ValueAtReference(f"w takes the value {a} at the reference point {o}")
        return val, lead
    return None, lead


# ---------------------------------------------------------------------------
# First Main Theorem
# ---------------------------------------------------------------------------


def fmt_residual(
    eq: AlgebroidEquation,
    dom: DomainModel,
    a,
    r_grid: Sequence[float],
    n_theta: int = N_THETA,
    seed: int = 0,
    eps: float = FMT_EPS,
) -> TheoremLedger:
    """``|T(r, 1/(w-a)) - T(r, w) + (1/nu) log|psi(o,a)/A_nu(o)|| <= log+|a| + log 2``.

    ``T(r, 1/(w-a))`` is the characteristic of the transformed equation
    (shift by ``a``, then reverse the coefficients).
    """
    if is_inf(a):
        raise ValueError("the value a must be finite")
    a = complex(a)
    val, lead = _check_reference(eq, dom, a)
    corr = math.log(abs(val / lead)) / eq.nu
    fw = Functionals(eq, dom, n_theta, seed)
    fi = Functionals(inverse_shift_equation(eq, a), dom, n_theta, seed)
    bound = math.log(max(abs(a), 1.0)) + math.log(2) + eps
    lhs = [abs(fi.characteristic(r) - fw.characteristic(r) + corr) for r in r_grid]
    return TheoremLedger(
        "fmt",
        _rows(r_grid, lhs, [bound] * len(lhs), tol=0.0),
        notes={"value": value_key(a), "correction": corr, "bound": bound},
    )


# ---------------------------------------------------------------------------
# branch divisor
# ---------------------------------------------------------------------------


def branch_divisor_bound(
    eq: AlgebroidEquation,
    dom: DomainModel,
    r_grid: Sequence[float],
    n_theta: int = N_THETA,
    seed: int = 0,
    certificate: MonodromyCertificate | None = None,
) -> TheoremLedger:
    """``N_bran(r) <= (2 nu - 2) T(r) + C`` with ``C >= 0`` fixed at the first radius."""
    _check_reference(eq, dom)
    f = Functionals(eq, dom, n_theta, seed, certificate)
    T = np.array([f.characteristic(r) for r in r_grid])
    Nb = np.array([f.branch_counting(r) for r in r_grid])
    k = 2 * eq.nu - 2
    C = max(0.0, float(Nb[0] - k * T[0]))
    return TheoremLedger(
        "bran",
        _rows(r_grid, Nb, k * T + C),
        calibration={"C": C},
        notes={"branch_divisor_degree": sum(o for _, o in f.branch_divisor())},
    )


# ---------------------------------------------------------------------------
# calibrated error terms
# ---------------------------------------------------------------------------


def _basis(dom: DomainModel, r: np.ndarray, T: np.ndarray) -> np.ndarray:
    growth = r if dom.hyperbolic else np.log(np.maximum(r, 1e-300))
    return np.column_stack([_log_plus(np.maximum(T, 0.0)), growth, np.ones_like(r)])


def calibrate(X: np.ndarray, deficit: np.ndarray) -> np.ndarray:
    """Smallest error term ``X @ k >= deficit`` on the calibration rows.

    Minimizes the summed slack; the two growth coefficients are nonnegative
    and the constant is free.
    """
    res = linprog(
        c=X.sum(axis=0),
        A_ub=-X,
        b_ub=-deficit,
        bounds=[(0, None), (0, None), (None, None)],
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"calibration failed: {res.message}")
    return res.x


def _calibrated_ledger(name, dom, r_grid, T, lhs, base, calibration_fraction, extra_notes) -> TheoremLedger:
    r = np.asarray(r_grid, float)
    X = _basis(dom, r, np.asarray(T))
    n_cal = max(2, int(math.ceil(calibration_fraction * len(r))))
    kappa = calibrate(X[:n_cal], np.asarray(lhs)[:n_cal] - np.asarray(base)[:n_cal])
    rhs = np.asarray(base) + X @ kappa
    return TheoremLedger(
        name,
        _rows(r, lhs, rhs),
        exceptional_limit=EXCEPTIONAL_LIMIT,
        calibration={
            "kappa_logT": float(kappa[0]),
            "kappa_growth": float(kappa[1]),
            "kappa_const": float(kappa[2]),
            "growth_term": "r" if dom.hyperbolic else "log r",
            "calibration_rows": n_cal,
        },
        notes=extra_notes,
    )


def growth_trend(samples: Sequence[NevanlinnaSample], dom: DomainModel) -> list[float]:
    """``((tau - sigma) r - T(r, Ric)) / T(r, w)`` per radius; a trend, not a verdict."""
    # sigma = tau on both model domains, so only the Ricci term remains
    return [float(-s.T_ricci / s.T) if s.T > 1e-12 else float("nan") for s in samples]


# ---------------------------------------------------------------------------
# Second Main Theorem and defects
# ---------------------------------------------------------------------------


def smt_check(
    eq: AlgebroidEquation,
    dom: DomainModel,
    values: Sequence,
    r_grid: Sequence[float],
    n_theta: int = N_THETA,
    seed: int = 0,
    calibration_fraction: float = CALIBRATION_FRACTION,
    samples: Sequence[NevanlinnaSample] | None = None,
) -> TheoremLedger:
    """``(q - 2 nu) T + T(r, Ric) <= sum_j Nbar(r, a_j) + error``.

    The error is ``k1 log+ T + k2 log r + k3`` on the plane and
    ``k1 log+ T + k2 r + k3`` on the disc.
    """
    keys = [value_key(a) for a in values]
    if len(set(keys)) != len(keys):
        raise ValueError("target values must be distinct")
    for a in values:
        _check_reference(eq, dom, a)
    if samples is None:
        f = Functionals(eq, dom, n_theta, seed)
        samples = [f.sample(float(r), values, with_branching=False) for r in r_grid]
    q = len(values)
    T = np.array([s.T for s in samples])
    lhs = (q - 2 * eq.nu) * T + np.array([s.T_ricci for s in samples])
    base = np.array([math.fsum(s.values[k].Nbar for k in keys) for s in samples])
    trend = growth_trend(samples, dom)
    return _calibrated_ledger(
        "smt", dom, r_grid, T, lhs, base, calibration_fraction, {"q": q, "values": keys, "growth_trend_last": trend[-1]}
    )


def defect_relation(
    eq: AlgebroidEquation,
    dom: DomainModel,
    values: Sequence,
    r_grid: Sequence[float],
    n_theta: int = N_THETA,
    seed: int = 0,
    eps: float = DEFECT_EPS,
    samples: Sequence[NevanlinnaSample] | None = None,
) -> tuple[float, bool, dict]:
    """Sum of simple defects against ``2 nu``."""
    if samples is None:
        f = Functionals(eq, dom, n_theta, seed)
        samples = [f.sample(float(r), values, with_branching=False) for r in r_grid]
    per = {value_key(a): defect_from_samples(samples, a).simple_defect for a in values}
    total = math.fsum(per.values())
    return total, total <= 2 * eq.nu + eps, per


def _log_derivative_proximity(eq: AlgebroidEquation, dom: DomainModel, r: float, n_theta: int) -> float:
    A0, A1 = eq.A
    d0, d1 = A0.derivative(), A1.derivative()
    if d0.is_zero() and d1.is_zero():
        return 0.0
    for phase in (0.0, 0.5):
        z = dom.boundary(r, n_theta, phase)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.abs(d0(z) / A0(z) - d1(z) / A1(z))
        if dom.hyperbolic:
            ratio = ratio * (1 - np.abs(z) ** 2) / 2
        if np.all(np.isfinite(ratio)):
            return float(math.fsum(_log_plus(ratio)) / n_theta)
    raise BoundaryHitsCritical(f"zero or pole of f on the boundary of radius {r}")


def ldl_check(
    eq: AlgebroidEquation,
    dom: DomainModel,
    r_grid: Sequence[float],
    n_theta: int = N_THETA,
    seed: int = 0,
    calibration_fraction: float = CALIBRATION_FRACTION,
) -> TheoremLedger:
    """``m(r, |grad f| / |f|)`` against a calibrated ``O(log+ T + growth)`` bound (``nu = 1``).

    On the disc the gradient norm carries the metric factor ``(1 - |z|^2)/2``.
    """
    if eq.nu != 1:
        raise ValueError("the logarithmic derivative check needs a single-valued (nu = 1) equation")
    f = Functionals(eq, dom, n_theta, seed)
    T = np.array([f.characteristic(r) for r in r_grid])
    lhs = np.array([_log_derivative_proximity(eq, dom, r, n_theta) for r in r_grid])
    return _calibrated_ledger("ldl", dom, r_grid, T, lhs, np.zeros_like(lhs), calibration_fraction, {})


# ---------------------------------------------------------------------------
# arithmetic criteria
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriterionInput:
    """Sheet numbers and truncation levels of a sharing/dependence problem.

    ``k`` entries are positive integers or ``math.inf``.
    """

    q: int
    k: tuple
    mu: int = 1
    nu: int = 1
    sheets: tuple[int, ...] = (1, 1)
    nu0: int = 1
    varsigma: int = 1

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(self.k))
        object.__setattr__(self, "sheets", tuple(self.sheets))
        if len(self.k) != self.q:
            raise ValueError(f"need q = {self.q} truncation levels, got {len(self.k)}")
        for x in (*self.k, self.mu, self.nu, *self.sheets, self.nu0, self.varsigma):
            if not (x == math.inf or (int(x) == x and x >= 1)):
                raise ValueError(f"entries must be positive integers or inf, got {x}")

    @property
    def k0(self):
        return max(self.k)


def _ratio(k) -> Fraction:
    """``k/(k+1)`` with ``inf -> 1``."""
    return Fraction(1) if k == math.inf else Fraction(int(k), int(k) + 1)


def _inv_plus_one(k) -> Fraction:
    """``1/(k+1)`` with ``inf -> 0``."""
    return Fraction(0) if k == math.inf else Fraction(1, int(k) + 1)


def dependence_gamma(inp: CriterionInput) -> Fraction:
    """``sum k_j/(k_j+1) - (k0 nu_1...nu_l/(k0+1)) sum 1/nu_i - 2 nu_0``."""
    prod = math.prod(inp.sheets)
    return (
        sum((_ratio(k) for k in inp.k), Fraction(0))
        - _ratio(inp.k0) * prod * sum((Fraction(1, s) for s in inp.sheets), Fraction(0))
        - 2 * inp.nu0
    )


def diagonal_gamma(inp: CriterionInput) -> Fraction:
    """``sum k_j/(k_j+1) - 2 k0 s/(k0+1) - 2 s`` with ``s = varsigma``."""
    s = inp.varsigma
    return sum((_ratio(k) for k in inp.k), Fraction(0)) - 2 * s * _ratio(inp.k0) - 2 * s


def uniqueness_condition(inp: CriterionInput) -> tuple[bool, bool]:
    """Both inequalities ``q - 2mu - 2 k0 nu/(k0+1) - sum 1/(k_j+1) > 0`` and its mirror."""
    tail = sum((_inv_plus_one(k) for k in inp.k), Fraction(0))
    r0 = _ratio(inp.k0)
    first = inp.q - 2 * inp.mu - 2 * inp.nu * r0 - tail
    second = inp.q - 2 * inp.nu - 2 * inp.mu * r0 - tail
    return first > 0, second > 0


# ---------------------------------------------------------------------------
# shared values
# ---------------------------------------------------------------------------


@dataclass
class SharingReport:
    per_value: dict
    shared_count: int
    nonempty_shared: int
    forced: bool
    identical: bool
    region_radius: float

    def to_json(self) -> dict:
        return {
            "per_value": self.per_value,
            "shared_count": self.shared_count,
            "nonempty_shared": self.nonempty_shared,
            "forced": self.forced,
            "identical": self.identical,
            "region_radius": self.region_radius,
        }


def _same_support(s: Sequence[complex], t: Sequence[complex], tol: float) -> bool:
    if len(s) != len(t):
        return False
    return all(any(abs(x - y) <= tol * (1 + abs(x)) for y in t) for x in s) and all(
        any(abs(x - y) <= tol * (1 + abs(y)) for x in s) for y in t
    )


def sharing_analyzer(
    eq_u: AlgebroidEquation,
    eq_v: AlgebroidEquation,
    dom: DomainModel,
    candidates: Sequence,
    r_grid: Sequence[float],
    k: Sequence | float = math.inf,
    tol: float = 1e-6,
    n_probe: int = 16,
    seed: int = 0,
) -> SharingReport:
    """Compare truncated supports of ``u*a`` and ``v*a`` inside ``Delta(max r)``.

    A value whose supports are both empty counts as shared but does not feed
    the uniqueness criterion, which needs nonempty supports.
    """
    region = dom.enclosing_disc(float(max(r_grid)))
    ks = list(k) if isinstance(k, (list, tuple)) else [k] * len(candidates)
    per, shared, nonempty_k = {}, 0, []
    for a, kk in zip(candidates, ks):
        su = zero_divisor(eq_u, a, region, seed=seed).truncated_support(kk)
        sv = zero_divisor(eq_v, a, region, seed=seed).truncated_support(kk)
        same = _same_support(su, sv, tol)
        per[value_key(a)] = {"u": [[z.real, z.imag] for z in su], "v": [[z.real, z.imag] for z in sv], "shared": same}
        if same:
            shared += 1
            if su:
                nonempty_k.append(kk)
    forced = False
    if nonempty_k:
        inp = CriterionInput(q=len(nonempty_k), k=tuple(nonempty_k), mu=eq_u.nu, nu=eq_v.nu)
        forced = all(uniqueness_condition(inp))
    # probe points on a deterministic spiral inside the region
    golden = math.pi * (3 - math.sqrt(5))
    identical = eq_u.nu == eq_v.nu
    for j in range(n_probe if identical else 0):
        z = region.center + 0.9 * region.radius * math.sqrt((j + 0.5) / n_probe) * complex(math.cos(j * golden), math.sin(j * golden))
        if multiset_distance(roots_at(eq_u, z, seed).values(), roots_at(eq_v, z, seed).values()) > 1e-8:
            identical = False
            break
    return SharingReport(per, shared, len(nonempty_k), forced, identical, region.radius)
