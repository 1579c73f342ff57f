import math

import numpy as np
import pytest

from algebroid.branchlab import (
    all_critical_points,
    compose,
    critical_points,
    cycle_type,
    cycles,
    inverse,
    monodromy,
    newton_polygon_slopes,
    puiseux_expand,
    puiseux_residual,
    track_roots,
)
from algebroid.errors import FitIllConditioned, PathTooClose
from algebroid.polyalg import AlgebroidEquation, CPoly, Disc, Z, equation
from oracles import dense_oracle_perm

SQRT_Z = equation(-Z, 0, 1)
SQRT_SHIFT = equation(-(Z - 1), 0, 1)
CBRT = equation(-Z, 0, 0, 1)
TWO_POINT = equation(-(Z - 1) * (Z - 2), 0, 1)
REDUCIBLE = AlgebroidEquation([-(Z**2), CPoly([0]), CPoly([1])])
POLE = equation(-1, 0, Z)


# --- examples -------------------------------------------------------------


def test_critical_point_examples():
    (c,) = critical_points(SQRT_Z, Disc(0, 2))
    assert abs(c.location) < 1e-12 and c.kind == "multiple-root"
    (c,) = critical_points(SQRT_SHIFT, Disc(0, 2))
    assert abs(c.location - 1) < 1e-12 and c.kind == "multiple-root"
    (c,) = critical_points(POLE, Disc(0, 2))
    assert abs(c.location) < 1e-12 and c.kind == "pole-branch"


def test_critical_points_both_kind():
    # z w^2 + 2 z w + (z - 1): A_2 vanishes at 0 and the remaining linear
    # equation has a single root, so 0 is a pole without a finite collision
    eq = equation(Z - 1, 2 * Z, Z)
    kinds = {round(c.location.real, 6): c.kind for c in all_critical_points(eq)}
    assert kinds[0.0] == "pole-branch"
    # z w^3 - (w - 1)^2 style: at 0 the reduced equation has a double root
    eq2 = AlgebroidEquation([CPoly([1]), CPoly([-2]), CPoly([1]), Z])
    kinds2 = {round(c.location.real, 6): c.kind for c in all_critical_points(eq2)}
    assert kinds2[0.0] == "both"


def test_track_full_loop_swaps():
    loop = np.exp(1j * np.linspace(0, 2 * math.pi, 9))
    res = track_roots(SQRT_Z, loop)
    assert res.perm == (1, 0)


def test_track_real_segment_identity():
    res = track_roots(SQRT_Z, [1, 4])
    assert res.perm == (0, 1)
    assert np.allclose(sorted(res.tracked.real), [-2, 2])


def test_track_constant_path():
    res = track_roots(CBRT, [1 + 1j, 1 + 1j])
    assert res.perm == (0, 1, 2)


def test_track_too_close():
    with pytest.raises(PathTooClose):
        track_roots(SQRT_Z, [-1, 1])


def test_monodromy_examples():
    cert = monodromy(SQRT_Z, Disc(0, 2))
    assert cert.permutations == [(1, 0)] and cert.branch_orders == [1] and cert.transitive
    cert = monodromy(CBRT, Disc(0, 2))
    assert cert.cycle_types == [[3]] and cert.branch_orders == [2] and cert.irreducible == "certified"
    cert = monodromy(REDUCIBLE, Disc(0, 2))
    assert cert.permutations == [(0, 1)] and not cert.transitive
    assert cert.irreducible == "refuted"


def test_permutation_helpers():
    p, q = (1, 2, 0), (1, 0, 2)
    assert compose(inverse(p), p) == (0, 1, 2)
    assert compose(q, p) == (0, 2, 1)
    assert cycle_type((1, 0, 3, 2, 4)) == [2, 2, 1]
    assert len(cycles((0, 1, 2))) == 3


# --- oracles and properties -----------------------------------------------


@pytest.mark.parametrize("eq", [SQRT_Z, CBRT, TWO_POINT, REDUCIBLE, POLE, equation(-Z, -3, 0, 1)])
def test_monodromy_matches_dense_sampling(eq):
    cert = monodromy(eq, Disc(0, 4))
    for path, perm in zip(cert.loops, cert.permutations):
        assert dense_oracle_perm(eq, cert.base_roots, path) == perm
    assert dense_oracle_perm(eq, cert.base_roots, cert.infinity_loop) == cert.infinity_permutation


@pytest.mark.parametrize("eq", [SQRT_Z, CBRT, TWO_POINT, equation(-Z, -3, 0, 1)])
def test_monodromy_stable_under_radius_halving(eq):
    a = monodromy(eq, Disc(0, 4))
    b = monodromy(eq, Disc(0, 4), radius_scale=0.5)
    assert a.permutations == b.permutations


def test_product_equals_inverse_at_infinity_random():
    rng = np.random.default_rng(4)
    for _ in range(6):
        nu = int(rng.integers(2, 5))
        A = [CPoly(rng.normal(size=2) + 1j * rng.normal(size=2)) for _ in range(nu + 1)]
        eq = AlgebroidEquation(A)
        reach = max(abs(c.location) for c in all_critical_points(eq))
        cert = monodromy(eq, Disc(0, 2 * reach + 1))
        assert cert.complete
        assert cert.product_matches_infinity()
        for ct in cert.cycle_types:
            assert sum(ct) == nu


def test_branch_orders_sum_riemann_hurwitz():
    # irreducible generic curves: total branching = 2 nu + 2 g - 2 with g >= 0,
    # so the total is even and at least 2 nu - 2 including infinity
    rng = np.random.default_rng(8)
    for _ in range(4):
        A = [CPoly(rng.normal(size=2) + 1j * rng.normal(size=2)) for _ in range(4)]
        eq = AlgebroidEquation(A)
        reach = max(abs(c.location) for c in all_critical_points(eq))
        cert = monodromy(eq, Disc(0, 2 * reach + 1))
        total = sum(cert.branch_orders) + eq.nu - len(cycles(cert.infinity_permutation))
        assert total % 2 == 0 and total >= 2 * eq.nu - 2


# --- Puiseux ----------------------------------------------------------------


def _expand_at(eq, center, order=6, **kw):
    cert = monodromy(eq, Disc(0, 3))
    i = min(range(len(cert.critical_points)), key=lambda k: abs(cert.critical_points[k].location - center))
    cyc = max(cycles(cert.permutations[i]), key=len)
    return puiseux_expand(eq, center, cyc, order, certificate=cert, **kw)


def test_puiseux_sqrt():
    p = _expand_at(SQRT_Z, 0)
    assert (p.lam, p.tau) == (2, 1)
    assert np.allclose(p.coefficients, [0, 1, 0, 0, 0, 0, 0], atol=1e-10)


def test_puiseux_shifted_sqrt():
    p = _expand_at(SQRT_SHIFT, 1)
    assert (p.lam, p.tau) == (2, 1)
    assert np.allclose(p.coefficients, [0, 1, 0, 0, 0, 0, 0], atol=1e-10)


def test_puiseux_three_halves():
    p = _expand_at(equation(1 - Z**3, -2, 1), 0)
    assert (p.lam, p.tau) == (2, 3)
    assert np.allclose(p.coefficients, [1, 0, 0, 1, 0, 0, 0], atol=1e-10)


def test_puiseux_binomial_series():
    # w^2 = z (1 + z): w = zeta sqrt(1 + zeta^2) = zeta + zeta^3/2 - zeta^5/8 + ...
    p = _expand_at(equation(-Z * (1 + Z), 0, 1), 0, order=7)
    expect = [0, 1, 0, 0.5, 0, -0.125, 0, 0.0625]
    assert np.allclose(p.coefficients, expect, atol=1e-8)


def test_puiseux_pole_chart():
    p = _expand_at(POLE, 0)
    assert p.chart == "reciprocal" and (p.lam, p.tau) == (2, 1)


def test_puiseux_local_cycle_without_certificate():
    p = puiseux_expand(CBRT, 0, (0, 1, 2), 4)
    assert (p.lam, p.tau) == (3, 1)
    assert abs(abs(p.coefficients[1]) - 1) < 1e-10


def test_puiseux_residual_growth_law():
    eq = equation(-Z * (1 + Z) * (2 + Z), 0, 1)
    p = _expand_at(eq, 0, order=5)
    r1, r2 = puiseux_residual(eq, p, 0.1), puiseux_residual(eq, p, 0.05)
    # residual decays at least like scale^(order+1); psi_w also vanishes at
    # the branch point, so halving the scale divides by 2^6 or more
    assert r1 / r2 > 2**6 / 2
    assert r1 < 1e-3


def test_puiseux_residual_shrinks_with_order():
    eq = equation(-Z * (1 + Z) * (2 + Z), 0, 1)
    r = [_expand_at(eq, 0, order=k).residual for k in (3, 7, 11)]
    assert r[0] > r[1] > r[2]


def test_puiseux_reconstructs_branch():
    eq = equation(-Z * (1 + Z), 0, 1)
    p = _expand_at(eq, 0, order=12)
    for zeta in 0.3 * np.exp(1j * np.linspace(0, 2 * math.pi, 7)):
        u = p(zeta)
        assert abs(u**2 - zeta**2 * (1 + zeta**2)) < 1e-8


def test_puiseux_ill_conditioned():
    with pytest.raises(FitIllConditioned):
        puiseux_expand(SQRT_Z, 0, (0, 1), 50, ring_radius=1e-6)


def test_newton_polygon_slopes():
    # v^2 - s^3  ->  v ~ s^(3/2)
    assert newton_polygon_slopes({(0, 2): 1, (3, 0): -1}) == [(3, 2)]
    assert newton_polygon_slopes({(0, 3): 1, (1, 0): -1}) == [(1, 3)]
