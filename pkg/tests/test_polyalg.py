from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from algebroid.errors import IdenticallyZero, InexactDivision, PoleAtPoint, RootOnBoundary
from algebroid.polyalg import (
    INF,
    CPoly,
    Disc,
    Z,
    AlgebroidEquation,
    common_factor_degree,
    decompose,
    discriminant,
    discriminant_by_roots,
    equation,
    eval_psi,
    multiset_distance,
    pole_divisor,
    poly_roots,
    poly_zeros,
    value_polynomial,
    reduce,
    roots_at,
    shifted_equation,
    sylvester_resultant,
    vieta_products,
    zero_divisor,
)

SQRT_Z = equation(-Z, 0, 1)
SQRT_SHIFT = equation(-(Z - 1), 0, 1)


def random_equation(rng, nu, deg):
    A = [CPoly(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)) for _ in range(nu + 1)]
    return AlgebroidEquation(A)


# --- examples -------------------------------------------------------------


def test_eval_psi_examples():
    assert eval_psi(SQRT_Z, 4, 2) == 0
    assert eval_psi(SQRT_Z, 0, 1) == 1
    assert eval_psi(SQRT_SHIFT, 1, 0) == 0


def test_roots_at_examples():
    r = roots_at(SQRT_Z, 1)
    assert sorted(r.finite.real) == pytest.approx([-1, 1])
    r0 = roots_at(SQRT_Z, 0)
    assert np.allclose(r0.finite, 0) and r0.n_infinite == 0
    assert r0.has_multiple()
    rp = roots_at(equation(-1, 0, Z), 0)
    assert rp.n_infinite == 2 and len(rp.finite) == 0
    assert rp.values() == [INF, INF]


def test_sylvester_examples():
    assert sylvester_resultant(SQRT_Z).allclose(CPoly([0, -4]))
    a, b, c = 2.0, -3.0, 0.5
    R = sylvester_resultant(equation(c, b, a))
    assert R.allclose(CPoly([-a * (b * b - 4 * a * c)]))
    lin = equation(-(Z**2 + 1), 1)
    assert sylvester_resultant(lin).allclose(CPoly([1]))


def test_discriminant_examples():
    assert discriminant(SQRT_Z).allclose(CPoly([0, 4]))
    a, b, c = 2.0, -3.0, 0.5
    assert discriminant(equation(c, b, a)).allclose(CPoly([b * b - 4 * a * c]))
    assert discriminant(SQRT_SHIFT).allclose(4 * (Z - 1))


def test_exact_inputs_accepted():
    eq = AlgebroidEquation([[Fraction(-1, 2), 0], [0], [1]])
    assert discriminant(eq).allclose(CPoly([2]))


def test_inexact_division_detected():
    with pytest.raises(InexactDivision):
        CPoly([1, 0, 1]).exact_div(CPoly([1, 1]))


def test_vieta_examples():
    assert vieta_products(SQRT_Z, 9) == pytest.approx([0, -9])
    assert vieta_products(SQRT_SHIFT, 2) == pytest.approx([0, -1])
    assert vieta_products(equation(1, Z, 1), 3) == pytest.approx([-3, 1])
    with pytest.raises(PoleAtPoint):
        vieta_products(equation(-1, 0, Z), 0)


def test_pole_divisor_examples():
    d = pole_divisor(equation(-1, 0, Z), Disc(0, 2))
    assert d.degree == 1 and abs(d.entries[0][0]) < 1e-12
    assert pole_divisor(SQRT_Z, Disc(0, 2)).degree == 0
    d2 = pole_divisor(equation(-Z, 0, Z**2 - 1), Disc(0, 2))
    assert sorted(round(z.real, 9) for z in d2.support) == [-1, 1]
    assert [m for _, m in d2.entries] == [1, 1]


def test_zero_divisor_examples():
    d0 = zero_divisor(SQRT_Z, 0, Disc(0, 2))
    assert d0.degree == 1 and abs(d0.entries[0][0]) < 1e-12
    d1 = zero_divisor(SQRT_Z, 1, Disc(0, 2))
    assert d1.degree == 1 and abs(d1.entries[0][0] - 1) < 1e-12
    assert zero_divisor(SQRT_Z, INF, Disc(0, 2)).degree == 0


def test_zero_divisor_errors():
    # (w - 1)(w + z): the value 1 is taken identically on one component
    with pytest.raises(IdenticallyZero):
        zero_divisor(equation(-Z, Z - 1, 1), 1, Disc(0, 2))
    with pytest.raises(RootOnBoundary):
        zero_divisor(SQRT_Z, 1, Disc(0, 1))


def test_reduce_examples():
    assert reduce([1, -1]) == pytest.approx(np.array([-1, 0, 1]))
    assert reduce([INF, INF]) == pytest.approx(np.array([1, 0, 0]))
    c = reduce([2, 3])
    assert c / c[-1] == pytest.approx(np.array([6, -5, 1]))


def test_decompose_examples():
    assert multiset_distance(decompose([6, -5, 1]), [2, 3]) < 1e-12
    assert multiset_distance(decompose([-1, 0, 1]), [1, -1]) < 1e-12
    assert decompose([1, 0, 0]) == [INF, INF]


def test_shifted_equation_matches_substitution():
    rng = np.random.default_rng(3)
    eq = random_equation(rng, 3, 2)
    a = 0.7 - 0.2j
    sh = shifted_equation(eq, a)
    for z in [0.1, 1 + 1j, -2j]:
        for u in [0.3, -1 + 0.5j]:
            assert eval_psi(sh, z, u) == pytest.approx(eval_psi(eq, z, u + a), rel=1e-12, abs=1e-12)


def test_common_factor_rejected():
    with pytest.raises(ValueError):
        equation((Z - 1) * Z, 0, Z - 1)
    assert common_factor_degree([Z - 1, (Z - 1) ** 2]) == 1
    assert common_factor_degree([Z, Z + 1]) == 0


# --- properties -----------------------------------------------------------


def test_roots_match_companion_oracle():
    rng = np.random.default_rng(11)
    for _ in range(40):
        d = int(rng.integers(1, 12))
        c = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
        ours = poly_roots(c, seed=int(rng.integers(1 << 30)))
        ref = np.roots(c[::-1])
        assert multiset_distance(list(ours), list(ref)) < 1e-8


def test_vieta_product_of_roots():
    rng = np.random.default_rng(5)
    for _ in range(10):
        nu = int(rng.integers(1, 5))
        eq = random_equation(rng, nu, 3)
        for z in rng.normal(size=20) + 1j * rng.normal(size=20):
            w = roots_at(eq, z).finite
            expected = (-1) ** nu * eq.A[0](z) / eq.A[-1](z)
            assert abs(np.prod(w) - expected) <= 1e-8 * max(1.0, abs(expected))


def test_discriminant_product_identity():
    rng = np.random.default_rng(7)
    for _ in range(10):
        eq = random_equation(rng, int(rng.integers(2, 5)), int(rng.integers(0, 4)))
        J = discriminant(eq)
        for z in rng.normal(size=5) + 1j * rng.normal(size=5):
            ref = discriminant_by_roots(eq, z)
            assert abs(J(z) - ref) <= 1e-6 * abs(ref)


def test_discriminant_zero_iff_multiple_root():
    # J vanishes exactly where the root multiset (infinity counted with
    # multiplicity = degree drop) has a repeated entry.
    cases = [
        equation(-Z, 0, 1),
        equation(-1, 0, Z),
        equation(1, 1, Z),  # single pole at 0: J(0) = 1
        equation(-(Z - 1) * (Z - 2), 0, 1),
        equation(-Z, 0, 0, 1),
    ]
    for eq in cases:
        J = discriminant(eq)
        for z0, _ in poly_zeros(J):
            assert roots_at(eq, z0).has_multiple()
        for z0 in [0.5 + 0.1j, 3.0, -1j]:
            if abs(J(z0)) > 1e-9:
                assert not roots_at(eq, z0).has_multiple()
    assert abs(discriminant(equation(1, 1, Z))(0)) == pytest.approx(1)
    assert not roots_at(equation(1, 1, Z), 0).has_multiple()


def test_divisor_degrees_match_polynomial_degree():
    rng = np.random.default_rng(9)
    for _ in range(10):
        eq = random_equation(rng, 2, int(rng.integers(1, 5)))
        big = Disc(0, 1e3)
        assert pole_divisor(eq, big).degree == eq.A[-1].degree
        a = complex(rng.normal(), rng.normal())
        assert zero_divisor(eq, a, big).degree == value_polynomial(eq, a).degree


sphere_point = st.one_of(
    st.just(INF),
    st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
)


@settings(max_examples=200, deadline=None)
@given(st.lists(sphere_point, min_size=1, max_size=6))
def test_reduce_decompose_round_trip(points):
    # well-separated finite points keep the round trip inside the tolerance
    finite = [p for p in points if p != INF]
    assume(all(abs(a - b) >= 1e-2 for i, a in enumerate(finite) for b in finite[:i]))
    back = decompose(reduce(points))
    assert multiset_distance(back, points) < 1e-8


@settings(max_examples=100, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=5))
def test_reduce_is_scale_normalized(points):
    c = reduce(points)
    assert np.max(np.abs(c)) == pytest.approx(1.0)
