"""Critical points, path tracking, monodromy and Puiseux expansions.

Sheets at the basepoint are numbered by the sorted order of the roots there.
A permutation ``perm`` of a loop maps sheet ``i`` to the sheet ``perm[i]`` it
arrives on after continuation. Running loop ``g1`` and then ``g2`` acts as
``compose(p2, p1)``, i.e. ``p2[p1[i]]``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    CriticalPointsTooClose,
    FitIllConditioned,
    PathTooClose,
    RootOnBoundary,
    SolverDiverged,
    TrackingAmbiguous,
)
from .polyalg import (
    BOUNDARY_TOL,
    CLUSTER_TOL,
    AlgebroidEquation,
    CPoly,
    Disc,
    RootSet,
    chordal,
    cluster_roots,
    discriminant,
    poly_roots,
    poly_zeros,
    roots_at,
)

LOOP_SAMPLES = 64
MAX_LOOP_RADIUS = 1.0
DEFAULT_CLEARANCE = 1e-4
DISPLACEMENT_FRACTION = 0.1
MATCH_RATIO = 2.0
MIN_STEP = 1e-12
GOLDEN_ANGLE = math.pi * (3 - math.sqrt(5))

Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(second: Sequence[int], first: Sequence[int]) -> Perm:
    """Apply ``first`` then ``second``."""
    return tuple(second[i] for i in first)


def inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j)
            j = p[j]
        out.append(tuple(c))
    return out


def cycle_type(p: Sequence[int]) -> list[int]:
    return sorted((len(c) for c in cycles(p)), reverse=True)


def orbits(perms: Sequence[Sequence[int]], n: int) -> list[set[int]]:
    """Orbits of ``{0..n-1}`` under the group generated by ``perms``."""
    left, out = set(range(n)), []
    while left:
        start = min(left)
        orb, stack = {start}, [start]
        while stack:
            i = stack.pop()
            for p in perms:
                j = p[i]
                if j not in orb:
                    orb.add(j)
                    stack.append(j)
        out.append(orb)
        left -= orb
    return out


# ---------------------------------------------------------------------------
# critical points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalPoint:
    location: complex
    kind: str  # "multiple-root", "pole-branch" or "both"
    discriminant_multiplicity: int


def _classify(eq: AlgebroidEquation, z0: complex, seed: int) -> str:
    rs = roots_at(eq, z0, seed=seed)
    if rs.n_infinite == 0:
        return "multiple-root"
    finite_multiple = any(m > 1 for _, m in cluster_roots(rs.finite, CLUSTER_TOL)) if len(rs.finite) else False
    return "both" if finite_multiple else "pole-branch"


def all_critical_points(eq: AlgebroidEquation, seed: int = 0) -> list[CriticalPoint]:
    """Zeros of the discriminant and of ``A_nu`` in the whole plane."""
    J = discriminant(eq)
    if J.is_zero(1e-12 * max(J.norm(), 1.0)):
        raise ValueError("discriminant vanishes identically (repeated factor in w)")
    J = J.trimmed(1e-13)
    pts: list[list] = [[z, m] for z, m in poly_zeros(J, seed=seed)] if J.degree > 0 else []
    if eq.A[-1].degree > 0:
        for z, _ in poly_zeros(eq.A[-1], seed=seed):
            if not any(abs(z - p[0]) <= CLUSTER_TOL * (1 + abs(z)) for p in pts):
                pts.append([z, 0])
    out = [CriticalPoint(complex(z), _classify(eq, z, seed), int(m)) for z, m in pts]
    out.sort(key=lambda c: (round(c.location.real, 9), round(c.location.imag, 9)))
    return out


def critical_points(eq: AlgebroidEquation, region: Disc, seed: int = 0) -> list[CriticalPoint]:
    out = []
    for c in all_critical_points(eq, seed):
        d = abs(c.location - region.center)
        if abs(d - region.radius) <= BOUNDARY_TOL * (1 + region.radius):
            raise RootOnBoundary(f"critical point {c.location} lies on the region boundary")
        if d < region.radius:
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# tracking
# ---------------------------------------------------------------------------


@dataclass
class TrackResult:
    end: RootSet
    tracked: np.ndarray  # continued roots, indexed like the start sheets
    perm: Perm  # start sheet i -> index into end.finite
    steps: int = 0


class _Tracker:
    def __init__(self, eq: AlgebroidEquation):
        self.eq = eq
        self.dA = [a.derivative() for a in eq.A]
        self.steps = 0

    def coeffs(self, z: complex):
        return self.eq.coeffs_at(z), np.array([complex(d(z)) for d in self.dA])

    @staticmethod
    def _chart_terms(c, dc, w):
        """Value, w-derivative and z-derivative in the chart chosen per root."""
        big = np.abs(w) > 1
        x = np.where(big, 1 / np.where(big, w, 1), w)
        # ascending coefficients in x for each chart
        f = np.empty_like(x)
        fx = np.empty_like(x)
        fz = np.empty_like(x)
        for chart, cc, dd in ((False, c, dc), (True, c[::-1], dc[::-1])):
            m = big == chart
            if not np.any(m):
                continue
            xm = x[m]
            f[m] = np.polyval(cc[::-1], xm)
            fx[m] = np.polyval(np.polyder(cc[::-1]), xm) if len(cc) > 1 else 0
            fz[m] = np.polyval(dd[::-1], xm)
        return big, x, f, fx, fz

    def tangent(self, z, w):
        c, dc = self.coeffs(z)
        big, x, f, fx, fz = self._chart_terms(c, dc, w)
        return big, x, -fz / fx

    def correct(self, z, big, x, iters: int = 12):
        c, dc = self.coeffs(z)
        x = x.copy()
        # the chart stays fixed during the corrector
        for _ in range(iters):
            f = np.where(big, np.polyval(c, x), np.polyval(c[::-1], x))
            fx = np.where(big, np.polyval(np.polyder(c), x), np.polyval(np.polyder(c[::-1]), x))
            if np.any(fx == 0):
                raise SolverDiverged(f"zero derivative in corrector at z={z}")
            dx = f / fx
            x = x - dx
            if np.all(np.abs(dx) <= 1e-14 * (1 + np.abs(x))):
                return np.where(big, 1 / x, x)
        if np.all(np.abs(dx) <= 1e-9 * (1 + np.abs(x))):
            return np.where(big, 1 / x, x)
        raise SolverDiverged(f"corrector did not converge at z={z}")


def _min_sep(w: np.ndarray) -> float:
    n = len(w)
    if n < 2:
        return 2.0
    return min(chordal(w[i], w[j]) for i in range(n) for j in range(i))


def _segment_distance(a: complex, b: complex, p: complex) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    t = ((p - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(a + t * d - p)


def _check_clearance(path: np.ndarray, avoid: Sequence[complex], clearance: float):
    for k in range(len(path) - 1):
        for p in avoid:
            if _segment_distance(path[k], path[k + 1], p) < clearance:
                raise PathTooClose(f"segment {path[k]} -> {path[k + 1]} passes within {clearance} of {p}")
    if len(path) == 1:
        for p in avoid:
            if abs(path[0] - p) < clearance:
                raise PathTooClose(f"point {path[0]} within {clearance} of {p}")


def match_roots(prev: Sequence, new: Sequence, ratio: float = MATCH_RATIO) -> Perm:
    """Nearest-neighbour matching ``prev[i] -> new[perm[i]]`` with assignment repair."""
    n = len(prev)
    cost = np.array([[chordal(a, b) for b in new] for a in prev])
    greedy = tuple(int(np.argmin(row)) for row in cost)
    if len(set(greedy)) == n:
        perm = greedy
    else:
        r, c = linear_sum_assignment(cost)
        perm = tuple(int(x) for x in c[np.argsort(r)])
    if n > 1:
        for i in range(n):
            d1 = cost[i, perm[i]]
            d2 = min(cost[i, j] for j in range(n) if j != perm[i])
            if d2 < ratio * d1:
                raise TrackingAmbiguous(f"root {prev[i]} has match ratio {d2 / max(d1, 1e-300):.3g} < {ratio}")
    return perm


def _track_segment(tr: _Tracker, z0: complex, z1: complex, w: np.ndarray) -> np.ndarray:
    z = z0
    total = abs(z1 - z0)
    if total == 0:
        return w
    direction = (z1 - z0) / total
    done = 0.0
    h = total
    while done < total:
        h = min(h, total - done)
        while True:
            if h < MIN_STEP * (1 + abs(z)):
                raise TrackingAmbiguous(f"step size underflow near z={z}")
            zn = z1 if done + h >= total else z + h * direction
            dz = zn - z
            try:
                big, x, dxdz = tr.tangent(z, w)
                wn = tr.correct(zn, big, x + dz * dxdz)
            except (SolverDiverged, FloatingPointError, ZeroDivisionError):
                h /= 2
                continue
            sep = min(_min_sep(w), _min_sep(wn))
            disp = max(chordal(a, b) for a, b in zip(w, wn))
            if disp < DISPLACEMENT_FRACTION * sep:
                break
            h /= 2
        tr.steps += 1
        w, z = wn, zn
        done += h
        h *= 1.5
    return w


def track_roots(
    eq: AlgebroidEquation,
    path: Sequence[complex],
    start: RootSet | None = None,
    avoid: Sequence[complex] | None = None,
    clearance: float = DEFAULT_CLEARANCE,
    seed: int = 0,
) -> TrackResult:
    """Continue the root multiset along a polyline.

    ``avoid`` defaults to every critical point of the equation. Each vertex
    segment is refined adaptively until consecutive roots move by less than
    a tenth of their minimal separation.
    """
    path = np.asarray(path, dtype=complex).ravel()
    if avoid is None:
        avoid = [c.location for c in all_critical_points(eq, seed)]
    _check_clearance(path, avoid, clearance)
    if start is None:
        start = roots_at(eq, path[0], seed=seed)
    if start.n_infinite or start.has_multiple():
        raise PathTooClose(f"start point {path[0]} is critical")
    tr = _Tracker(eq)
    w0 = np.asarray(start.finite, dtype=complex)
    w = tr.correct(path[0], np.abs(w0) > 1, np.where(np.abs(w0) > 1, 1 / w0, w0))
    for k in range(len(path) - 1):
        w = _track_segment(tr, path[k], path[k + 1], w)
    end = roots_at(eq, path[-1], seed=seed)
    perm = match_roots(list(w), list(end.finite))
    return TrackResult(end, w, perm, tr.steps)


# ---------------------------------------------------------------------------
# monodromy
# ---------------------------------------------------------------------------


@dataclass
class MonodromyCertificate:
    basepoint: complex
    base_roots: np.ndarray
    critical_points: list[CriticalPoint]
    permutations: list[Perm]
    cycle_types: list[list[int]]
    branch_orders: list[int]
    transitive: bool
    loop_radii: list[float]
    loops: list[np.ndarray] = field(repr=False)
    infinity_permutation: Perm | None = None
    infinity_loop: np.ndarray | None = field(default=None, repr=False)
    complete: bool = True

    @property
    def nu(self) -> int:
        return len(self.base_roots)

    @property
    def irreducible(self) -> str:
        if not self.complete:
            return "unknown"
        return "certified" if self.transitive else "refuted"

    def product(self) -> Perm:
        """Composition of all finite loops in certificate order."""
        p = identity(self.nu)
        for q in self.permutations:
            p = compose(q, p)
        return p

    def product_matches_infinity(self) -> bool:
        return self.infinity_permutation is not None and self.product() == inverse(self.infinity_permutation)

    def branch_divisor(self) -> list[tuple[complex, int]]:
        return [(c.location, b) for c, b in zip(self.critical_points, self.branch_orders) if b > 0]

    def to_json(self) -> dict:
        return {
            "basepoint": [self.basepoint.real, self.basepoint.imag],
            "base_roots": [[w.real, w.imag] for w in self.base_roots],
            "critical_points": [
                {
                    "location": [c.location.real, c.location.imag],
                    "kind": c.kind,
                    "discriminant_multiplicity": c.discriminant_multiplicity,
                    "permutation": list(p),
                    "cycle_type": ct,
                    "branch_order": b,
                    "loop_radius": r,
                }
                for c, p, ct, b, r in zip(self.critical_points, self.permutations, self.cycle_types, self.branch_orders, self.loop_radii)
            ],
            "infinity_permutation": None if self.infinity_permutation is None else list(self.infinity_permutation),
            "transitive": self.transitive,
            "complete": self.complete,
            "irreducible": self.irreducible,
            "product_matches_infinity": self.product_matches_infinity(),
        }


def _corridor_score(b: complex, crit: Sequence[complex]) -> float:
    """Smallest gap between a corridor ``b -> c`` and any other critical point."""
    if not crit:
        return math.inf
    score = min(abs(b - c) for c in crit)
    for c in crit:
        for p in crit:
            if p != c:
                score = min(score, _segment_distance(b, c, p))
    return score


def choose_basepoint(region: Disc, crit: Sequence[complex], tries: int = 64) -> complex:
    """Deterministic basepoint near the region centre with clear corridors."""
    scale = region.radius if math.isfinite(region.radius) else 1.0
    sep = min((abs(a - b) for i, a in enumerate(crit) for b in crit[:i]), default=scale)
    best, best_score = None, -1.0
    for k in range(tries):
        rad = 0.37 * scale * math.sqrt((k + 0.5) / tries)
        b = region.center + rad * cmath.exp(1j * (0.5 + k * GOLDEN_ANGLE))
        s = _corridor_score(b, crit)
        if s >= 0.25 * sep:
            return b
        if s > best_score:
            best, best_score = b, s
    return best


def _largest_gap_direction(angles: Sequence[float]) -> float:
    if not angles:
        return 0.0
    a = sorted(x % (2 * math.pi) for x in angles)
    gaps = [(a[(i + 1) % len(a)] - a[i]) % (2 * math.pi) or 2 * math.pi for i in range(len(a))]
    i = int(np.argmax(gaps))
    return (a[i] + gaps[i] / 2) % (2 * math.pi)


def _circle(center: complex, radius: float, start_angle: float, n: int, clockwise: bool = False) -> np.ndarray:
    sgn = -1 if clockwise else 1
    t = start_angle + sgn * 2 * math.pi * np.arange(n + 1) / n
    return center + radius * np.exp(1j * t)


def loop_path(b: complex, c: complex, rho: float, n: int = LOOP_SAMPLES) -> np.ndarray:
    """Counterclockwise loop around ``c`` of radius ``rho``, reached from ``b`` by a straight corridor."""
    u = (c - b) / abs(c - b)
    entry_angle = cmath.phase(-u)
    circle = _circle(c, rho, entry_angle, n)
    return np.concatenate([[b], circle, [b]])


def big_loop_path(b: complex, radius: float, direction: float, clockwise: bool, n: int = 4 * LOOP_SAMPLES) -> np.ndarray:
    circle = _circle(b, radius, direction, n, clockwise)
    return np.concatenate([[b], circle, [b]])


def monodromy(
    eq: AlgebroidEquation,
    region: Disc,
    basepoint: complex | None = None,
    seed: int = 0,
    radius_scale: float = 1.0,
    with_infinity: bool = True,
) -> MonodromyCertificate:
    """Local permutations around every critical point inside ``region``.

    Loops are ordered counterclockwise by the direction of their corridor,
    starting just after the widest angular gap, so that their product in
    this order is the counterclockwise loop around all of them.
    """
    everything = all_critical_points(eq, seed)
    crit = critical_points(eq, region, seed)
    locs = [c.location for c in crit]
    complete = len(crit) == len(everything)
    nu = eq.nu
    if basepoint is None:
        basepoint = choose_basepoint(region, locs)
    b = complex(basepoint)
    all_locs = [c.location for c in everything]
    for p in all_locs:
        if abs(b - p) < 1e-9 * (1 + abs(p)):
            raise PathTooClose(f"basepoint {b} is a critical point")

    phi0 = _largest_gap_direction([cmath.phase(c - b) for c in locs])
    order = sorted(range(len(crit)), key=lambda i: (cmath.phase(locs[i] - b) - phi0) % (2 * math.pi))
    crit = [crit[i] for i in order]
    locs = [locs[i] for i in order]

    base = roots_at(eq, b, seed=seed)
    radii, loops, perms = [], [], []
    for c in locs:
        others = [abs(c - p) for p in all_locs if p != c] + [abs(c - b)]
        rho = radius_scale * min(0.5 * min(others), MAX_LOOP_RADIUS)
        if rho < 1e-7 * (1 + abs(c)):
            raise CriticalPointsTooClose(f"critical point {c} has loop radius {rho:.3g}")
        radii.append(rho)
    clearance = 0.5 * min(radii) if radii else DEFAULT_CLEARANCE
    for c, rho in zip(locs, radii):
        path = loop_path(b, c, rho)
        res = track_roots(eq, path, base, avoid=all_locs, clearance=min(clearance, 0.5 * rho), seed=seed)
        loops.append(path)
        perms.append(res.perm)

    inf_perm, inf_loop = None, None
    if with_infinity:
        reach = max((abs(p - b) for p in all_locs), default=0.0)
        R = 1.5 * reach + 1.0
        inf_loop = big_loop_path(b, R, phi0, clockwise=True)
        inf_perm = track_roots(eq, inf_loop, base, avoid=all_locs, clearance=min(0.25 * R, clearance), seed=seed).perm

    gens = perms + ([inf_perm] if inf_perm is not None else [])
    transitive = len(orbits(gens, nu)) == 1
    return MonodromyCertificate(
        basepoint=b,
        base_roots=np.asarray(base.finite),
        critical_points=crit,
        permutations=perms,
        cycle_types=[cycle_type(p) for p in perms],
        branch_orders=[nu - len(cycles(p)) for p in perms],
        transitive=transitive,
        loop_radii=radii,
        loops=loops,
        infinity_permutation=inf_perm,
        infinity_loop=inf_loop,
        complete=complete,
    )


def certify_irreducibility(eq: AlgebroidEquation, seed: int = 0) -> AlgebroidEquation:
    """Return ``eq`` with its irreducibility flag set from monodromy transitivity."""
    crit = all_critical_points(eq, seed)
    reach = max((abs(c.location) for c in crit), default=1.0)
    cert = monodromy(eq, Disc(0j, 2 * reach + 1), seed=seed)
    return eq.with_irreducible(cert.irreducible)


# ---------------------------------------------------------------------------
# Puiseux expansions
# ---------------------------------------------------------------------------


@dataclass
class PuiseuxExpansion:
    """One cycle's branch as ``u(zeta) = sum_j b_j zeta**j`` with ``z = center + zeta**lam``.

    ``coefficients`` is dense (``b_0 .. b_order``); entries strictly between
    ``0`` and ``tau`` are zero. With ``chart == "reciprocal"`` the series
    describes ``1/w`` (a pole of the branch). The ``zeta`` branch is rotated
    so that ``arg b_tau`` lies in ``[-pi/lam, pi/lam)``.
    """

    center: complex
    lam: int
    tau: int
    coefficients: np.ndarray
    truncation_order: int
    residual: float
    ring_radius: float
    chart: str = "direct"

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return np.polyval(self.coefficients[::-1], zeta)

    def branch_value(self, zeta):
        u = self(zeta)
        return 1 / u if self.chart == "reciprocal" else u

    def to_json(self) -> dict:
        return {
            "center": [self.center.real, self.center.imag],
            "lambda": self.lam,
            "tau": self.tau,
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
            "truncation_order": self.truncation_order,
            "residual": self.residual,
            "ring_radius": self.ring_radius,
            "chart": self.chart,
        }


def newton_polygon_slopes(coeffs: dict[tuple[int, int], complex], tol: float = 1e-10) -> list[tuple[int, int]]:
    """Slopes of the lower hull of ``{(j, i): a_ij != 0}`` in ``sum a_ij s^i v^j``.

    Each slope is returned as a reduced fraction ``(p, q)`` meaning ``v ~ s^(p/q)``
    on the edges that reach ``j = 0``-side, i.e. for roots ``v -> 0``.
    """
    scale = max((abs(c) for c in coeffs.values()), default=0.0)
    pts: dict[int, int] = {}
    for (i, j), c in coeffs.items():
        if abs(c) > tol * scale:
            pts[j] = min(pts.get(j, i), i) if j in pts else i
    if 0 not in pts:
        raise ValueError("v = 0 is a root for all s; shifted constant term vanishes")
    xs = sorted(pts)
    hull: list[tuple[int, int]] = []
    for x in xs:
        p = (x, pts[x])
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if y2 >= y1:
            break
        num, den = y1 - y2, x2 - x1
        g = math.gcd(num, den)
        out.append((num // g, den // g))
    return out


def _local_bivariate(eq: AlgebroidEquation, center: complex, b0: complex) -> dict[tuple[int, int], complex]:
    """Coefficients ``a_ij`` of ``psi(center + s, b0 + v)``."""
    out: dict[tuple[int, int], complex] = {}
    for k, A in enumerate(eq.A):
        As = A.shift(center).coeffs
        for j in range(k + 1):
            cj = math.comb(k, j) * b0 ** (k - j)
            if cj == 0:
                continue
            for i, a in enumerate(As):
                out[(i, j)] = out.get((i, j), 0) + a * cj
    return out


def _refine_multiple(c: np.ndarray, w0: complex, mult: int, iters: int = 8) -> complex:
    """Polish a ``mult``-fold root as a simple root of the ``(mult-1)``-th derivative."""
    p = np.polyder(c[::-1], mult - 1) if mult > 1 else c[::-1]
    dp = np.polyder(p)
    w = complex(w0)
    for _ in range(iters):
        d = np.polyval(dp, w)
        if d == 0:
            break
        step = np.polyval(p, w) / d
        w -= step
        if abs(step) <= 1e-16 * (1 + abs(w)):
            break
    return w if abs(w - w0) <= 1e-4 * (1 + abs(w0)) else complex(w0)


def _ring_samples(eq, center, rho, lam, n, start_roots, sheet, angle0, seed):
    """Track ``sheet`` around the ring ``lam`` times; returns zeta and u samples."""
    ring = center + rho * np.exp(1j * (angle0 + 2 * math.pi * lam * np.arange(n + 1) / n))
    # dense polyline along the ring so every sample is a vertex
    tr = _Tracker(eq)
    w = np.asarray(start_roots, dtype=complex)
    vals = [w[sheet]]
    for k in range(n - 1):
        w = _track_segment_arc(tr, center, rho, angle0 + 2 * math.pi * lam * k / n, angle0 + 2 * math.pi * lam * (k + 1) / n, w)
        vals.append(w[sheet])
    zeta = rho ** (1 / lam) * np.exp(1j * (angle0 + 2 * math.pi * lam * np.arange(n) / n) / lam)
    return zeta, np.array(vals), ring


def _track_segment_arc(tr, center, rho, t0, t1, w, pieces: int = 4):
    ts = np.linspace(t0, t1, pieces + 1)
    pts = center + rho * np.exp(1j * ts)
    for a, b in zip(pts, pts[1:]):
        w = _track_segment(tr, a, b, w)
    return w


def puiseux_expand(
    eq: AlgebroidEquation,
    center: complex,
    sheet_cycle: Sequence[int],
    order: int,
    certificate: MonodromyCertificate | None = None,
    ring_radius: float | None = None,
    seed: int = 0,
) -> PuiseuxExpansion:
    """Puiseux series of one branch cycle at a critical point.

    With a certificate, ``sheet_cycle`` lists basepoint sheets, and the first
    one is continued along the corridor to the sampling ring. Without one,
    the indices refer to the sorted roots at the ring's entry point
    ``center + ring_radius``.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    center = complex(center)
    lam = len(sheet_cycle)
    all_locs = [c.location for c in all_critical_points(eq, seed)]
    others = [abs(center - p) for p in all_locs if abs(center - p) > CLUSTER_TOL * (1 + abs(center))]
    if ring_radius is None:
        ring_radius = min(0.5 * min(others, default=2.0), MAX_LOOP_RADIUS)
    rho = ring_radius
    s = rho ** (1 / lam)
    if order > 60 or s**order < 1e-10:
        raise FitIllConditioned(f"ring scale {s:.3g} too small for order {order}")

    if certificate is not None:
        b = certificate.basepoint
        u = (center - b) / abs(center - b)
        entry = center - rho * u
        base = RootSet(b, certificate.base_roots, 0)
        res = track_roots(eq, [b, entry], base, avoid=all_locs, clearance=min(0.5 * rho, DEFAULT_CLEARANCE), seed=seed)
        start_roots = res.tracked
        angle0 = cmath.phase(-u)
    else:
        entry = center + rho
        start_roots = roots_at(eq, entry, seed=seed).finite
        angle0 = 0.0
    sheet = sheet_cycle[0]

    n = max(4 * order, 64 * lam)
    zeta, w, _ = _ring_samples(eq, center, rho, lam, n, start_roots, sheet, angle0, seed)
    # least squares on scaled powers: columns (zeta/s)^j are orthogonal on the ring
    V = np.vander(zeta / s, order + 1, increasing=True)

    def fit(vals):
        c, *_ = np.linalg.lstsq(V, vals, rcond=None)
        return c / s ** np.arange(order + 1)

    chart = "direct"
    rs_center = roots_at(eq, center, seed=seed)
    b = fit(w)
    if rs_center.n_infinite >= lam:
        # the sheet runs into a pole exactly when 1/w has vanishing constant term
        b_rec = fit(1 / w)
        if abs(b_rec[0]) <= 1e-6 * np.max(np.abs(1 / w)):
            chart, w, b = "reciprocal", 1 / w, b_rec

    # lambda-th root of unity rotation normalizing arg b_tau
    mags = np.abs(b[1:]) * s ** np.arange(1, order + 1)
    thresh = 1e-8 * max(np.max(np.abs(w)), 1.0)
    nz = np.nonzero(mags > thresh)[0]
    if not len(nz):
        raise FitIllConditioned("no nonconstant term found in the fitted series")
    tau_fit = int(nz[0]) + 1

    b0_exact = b[0]
    if chart == "direct":
        cands = [r for r, m in rs_center.multiplicities() if m >= lam and r != math.inf]
        if cands:
            b0_exact = _refine_multiple(eq.coeffs_at(center), min(cands, key=lambda r: abs(r - b[0])), lam)
        local = _local_bivariate(eq, center, b0_exact)
    else:
        rev = AlgebroidEquation(eq.A[::-1], check_gcd=False)
        local = _local_bivariate(rev, center, 0j)
        b0_exact = 0j
    taus = {p * lam // q for p, q in newton_polygon_slopes(local) if (p * lam) % q == 0}
    if tau_fit not in taus:
        raise FitIllConditioned(f"fitted leading exponent {tau_fit}/{lam} not on the Newton polygon {sorted(taus)}")
    tau = tau_fit
    b[0] = b0_exact
    b[1:tau] = 0

    # rotate zeta -> omega^k zeta so that arg b_tau lands in [-pi/lam, pi/lam)
    best_k, best = 0, math.inf
    for k in range(lam):
        ang = cmath.phase(b[tau] * cmath.exp(2j * math.pi * k * tau / lam))
        if -math.pi / lam - 1e-12 <= ang < math.pi / lam - 1e-12 and abs(ang) < best:
            best_k, best = k, abs(ang)
    rot = np.exp(2j * math.pi * best_k * np.arange(order + 1) / lam)
    b = b * rot

    out = PuiseuxExpansion(
        center=center,
        lam=lam,
        tau=tau,
        coefficients=b,
        truncation_order=order,
        residual=0.0,
        ring_radius=rho,
        chart=chart,
    )
    out.residual = puiseux_residual(eq, out, s)
    return out


def puiseux_residual(eq: AlgebroidEquation, exp: PuiseuxExpansion, scale: float, n: int = 256) -> float:
    """``max |psi(center + zeta^lam, series(zeta))|`` over the ring ``|zeta| = scale``.

    For a truncated series this behaves like ``scale**(truncation_order + 1)``.
    """
    probe = scale * np.exp(1j * (math.pi / n + 2 * math.pi * np.arange(n) / n))
    val = exp(probe)
    cz = eq.coeffs_at(exp.center + probe**exp.lam)
    if exp.chart == "reciprocal":
        cz = cz[:, ::-1]
    return float(np.max(np.abs(np.sum(cz * val[:, None] ** np.arange(eq.nu + 1), axis=1))))
