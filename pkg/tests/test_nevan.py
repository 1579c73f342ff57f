import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algebroid.errors import BoundaryHitsCritical, ParabolicProfile, ValueAtReference
from algebroid.nevan import (
    DISC,
    INF,
    PLANE,
    DomainModel,
    Functionals,
    VolumeProfile,
    branch_counting,
    characteristic,
    chi,
    counting,
    defect,
    E_gauge,
    gauges,
    H_delta_gauge,
    H_gauge,
    proximity,
    ricci_characteristic,
    ricci_closed_form,
    sample_grid,
)
from algebroid.polyalg import CPoly, Z, equation, poly_zeros, value_polynomial

SQRT_Z = equation(-Z, 0, 1)
SQRT_SHIFT = equation(-(Z - 1), 0, 1)
QUARTIC = equation(-(Z**2 - 1) * (Z**2 - 4), 0, 1)
MOBIUS = equation(-(Z - 1), Z + 1)
RATIONAL2 = equation(-(Z**2 + 0.5), Z**2 - 3)


# --- examples -------------------------------------------------------------


def test_proximity_examples():
    assert proximity(SQRT_Z, PLANE, INF, math.e**2) == pytest.approx(1.0, abs=1e-12)
    assert proximity(SQRT_Z, PLANE, INF, 0.5) == 0.0
    const = equation(-0.5, 1)
    for r in (0.5, 3.0, 50.0):
        assert proximity(const, PLANE, INF, r) == 0.0


def test_counting_examples():
    assert counting(SQRT_Z, PLANE, 1, math.e) == pytest.approx(0.5, abs=1e-12)
    for r in (0.5, 3.0, 40.0):
        assert counting(SQRT_Z, PLANE, INF, r) == 0.0
        assert counting(SQRT_Z, DISC, 1, r) == 0.0


def test_counting_at_reference_rejected():
    with pytest.raises(ValueAtReference):
        counting(SQRT_Z, PLANE, 0, 2.0)


def test_characteristic_examples():
    s = characteristic(SQRT_Z, PLANE, math.e**2)
    assert (s.T, s.m, s.N) == pytest.approx((1.0, 1.0, 0.0), abs=1e-12)
    assert math.isnan(s.N_bran)  # branch point at o


def test_polynomial_characteristic_slope():
    p = (Z - 0.3) * (Z + 0.7j) * (Z - 2)
    eq = equation(-p, 1)
    rs = np.exp(np.linspace(3, 8, 6))
    T = [characteristic(eq, PLANE, r).T for r in rs]
    slope = np.polyfit(np.log(rs), T, 1)[0]
    assert slope == pytest.approx(3.0, abs=1e-3)


def test_branch_counting_examples():
    o = 0.1
    val = branch_counting(SQRT_Z, DomainModel(o=o), math.e)
    assert val == pytest.approx(0.5 * math.log(math.e / o), abs=1e-12)
    assert branch_counting(SQRT_SHIFT, PLANE, math.e) == pytest.approx(0.5, abs=1e-12)
    assert branch_counting(equation(-(Z**2) - 1, 1), PLANE, 10.0) == 0.0
    with pytest.raises(ValueAtReference):
        branch_counting(SQRT_Z, PLANE, math.e)


def test_ricci_examples():
    assert ricci_characteristic(PLANE, 7.0) == 0.0
    assert ricci_characteristic(DISC, 0.0) == 0.0
    assert abs(ricci_characteristic(DISC, 1e-4)) < 1e-8
    for r in (0.5, 2.0, 5.0, 10.0, 40.0):
        assert ricci_characteristic(DISC, r) == pytest.approx(ricci_closed_form(r), rel=1e-10)
    ratios = [abs(ricci_characteristic(DISC, r)) / r for r in np.linspace(1, 10, 10)]
    assert max(ratios) <= 2.0  # |T(r, Ric)| <= 2 r on the disc


def test_gauge_examples():
    V = VolumeProfile(4)
    for r in (1.0, 3.0, 100.0):
        assert H_gauge(V, r) == pytest.approx(0.5, abs=1e-12)
    assert chi(0, 3.7) == 3.7
    assert chi(1, 1) == pytest.approx(1.17520119, abs=1e-8)


def test_gauge_quadrature_matches_closed_form():
    V = VolumeProfile(4)
    # force the generic quadrature path through a tiny log factor
    W = VolumeProfile(4, kappa=1e-12)
    assert W(3.0) * W.tail(3.0) / 9 == pytest.approx(H_gauge(V, 3.0), rel=1e-9)
    tab = VolumeProfile.tabulated([1, 2, 4, 8], [1, 16, 256, 4096])
    assert H_gauge(tab, 3.0) == pytest.approx(0.5, rel=1e-12)
    assert H_delta_gauge(V, 2.0, 0.1) == pytest.approx((16 / 2) ** 1.1 / 2 * 2.0**-2 / 2, rel=1e-12)


def test_e_gauge_closed_forms():
    # m = 1, sigma = tau = 1: int_r^inf dt / sinh t = -log tanh(r/2)
    r, d = 2.0, 0.1
    expect = (1 + 1 / r) * math.sinh(r) ** 1.1 * -math.log(math.tanh(r / 2))
    assert E_gauge(1, 1, 1, r, d) == pytest.approx(expect, rel=1e-12)
    # sigma = tau = 0, m = 2: int_r^inf t^-3 = r^-2 / 2
    expect0 = (1 / r) * r ** (3 * 1.1) * r**-2 / 2
    assert E_gauge(0, 0, 2, r, d) == pytest.approx(expect0, rel=1e-12)
    # generic quadrature path agrees with a direct scipy integral
    from scipy.integrate import quad

    tail, _ = quad(lambda t: (math.sinh(0.5 * t) / 0.5) ** -3, r, 200.0, epsabs=0, epsrel=1e-12)
    expect2 = (3 * 0.25 + 1 / r) * (math.sinh(0.5 * r) / 0.5) ** (3 * 1.1) * tail
    assert E_gauge(0.5, 0.5, 2, r, d) == pytest.approx(expect2, rel=1e-8)


def test_parabolic_profiles_rejected():
    with pytest.raises(ParabolicProfile):
        H_gauge(VolumeProfile(2), 3.0)
    with pytest.raises(ParabolicProfile):
        E_gauge(0, 0, 1, 2.0, 0.1)
    with pytest.raises(ParabolicProfile):
        H_gauge(VolumeProfile.tabulated([1, 2], [1, 4]), 3.0)
    g = gauges(VolumeProfile(4), 0.0, 0.0, 2, 2.0, 0.1)
    assert g.chi == 2.0 and math.isfinite(g.E_delta)


def test_defect_examples():
    grid = np.exp(np.linspace(1, 8, 16))
    assert defect(SQRT_Z, PLANE, INF, grid).simple_defect == 1.0
    assert defect(SQRT_Z, PLANE, 1, grid).simple_defect == pytest.approx(0.0, abs=1e-9)


def test_defect_exponential_proxy():
    # Taylor truncation of e^z: omits 0 on discs well inside its zero ring
    coeffs = [1 / math.factorial(k) for k in range(31)]
    eq = equation(-CPoly(coeffs), 1)
    grid = np.linspace(2, 8, 12)
    assert defect(eq, PLANE, 0, grid).simple_defect > 0.95


def test_boundary_hits_critical():
    f = Functionals(equation(-1, 0, Z - 2), PLANE, n_theta=64)
    # radius 2 nodes include z = 2 for both phases? phase 0 hits, phase 1/2 does not
    assert np.isfinite(f.proximity(INF, 2.0))
    g = Functionals(equation(-1, 0, (Z - 2) * (Z - 2 * np.exp(1j * math.pi / 64))), PLANE, n_theta=64)
    with pytest.raises(BoundaryHitsCritical):
        g.proximity(INF, 2.0)


# --- properties -------------------------------------------------------------


CORPUS = [SQRT_SHIFT, QUARTIC, MOBIUS, RATIONAL2, equation(-(Z - 1), 0, 0, 1)]


@pytest.mark.parametrize("eq", CORPUS)
def test_quadrature_self_convergence(eq):
    # radii kept at least ~0.3 away from the a-points and critical points
    for a in (INF, 2.0, -0.5 + 1j):
        for r in (0.7, 2.7, 8.3):
            m1 = proximity(eq, PLANE, a, r, n_theta=1024)
            m2 = proximity(eq, PLANE, a, r, n_theta=2048)
            assert abs(m1 - m2) <= 1e-6 * max(abs(m2), 1e-3)


@pytest.mark.parametrize("eq", CORPUS)
@pytest.mark.parametrize("dom", [PLANE, DISC])
def test_characteristic_monotone_and_consistent(eq, dom):
    grid = np.geomspace(0.3, 6.0, 12)
    samples = sample_grid(eq, dom, grid, values=[3.0, -0.5 + 1j])
    T = [s.T for s in samples]
    assert all(b >= a - 1e-6 for a, b in zip(T, T[1:]))
    for s in samples:
        assert s.T == s.m + s.N
        for v in s.values.values():
            assert 0 <= v.Nbar <= v.N


def _classical_counting(eq, a, r):
    p = eq.A[-1] if a == INF else value_polynomial(eq, a)
    zs = np.roots(p.coeffs[::-1]) if p.degree > 0 else []
    return sum(math.log(r / abs(z)) for z in zs if abs(z) < r) / eq.nu


@pytest.mark.parametrize("eq", CORPUS)
def test_counting_matches_classical_formula(eq):
    for a in (INF, 3.0, 0.3 - 0.4j):
        for r in (0.5, 1.7, 4.0, 30.0):
            assert counting(eq, PLANE, a, r) == pytest.approx(_classical_counting(eq, a, r), abs=1e-9)


def test_poincare_counting_matches_hyperbolic_kernel():
    # zeros of psi(z, 0) = z^2 - 1/4 at +-1/2; o = 0.2
    eq = equation(-(Z**2) + 0.25, 0, 1)
    o = 0.2
    dom = DomainModel("poincare-disc", o)
    r = 3.0
    expect = 0.0
    for z in (0.5, -0.5):
        d = abs((z - o) / (1 - o * z))
        expect += math.log(math.tanh(r / 2) / d)
    assert counting(eq, dom, 0, r) == pytest.approx(expect / 2, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 10))
def test_chi_continuous_at_zero(t):
    assert abs(chi(1e-6, t) - t) <= 1e-8


def test_inverse_shift_characteristic_matches_proximity():
    # m(r, 1/(w - a)) for w equals m(r, a) computed directly
    from algebroid.polyalg import inverse_shift_equation

    a = 0.7 + 0.2j
    inv = inverse_shift_equation(QUARTIC, a)
    for r in (0.8, 2.5, 7.0):
        assert proximity(inv, PLANE, INF, r) == pytest.approx(proximity(QUARTIC, PLANE, a, r), abs=1e-9)
