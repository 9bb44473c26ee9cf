from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iwasawa_layer.group_ring import (
    augmentation,
    cyclotomic_quotient_shape,
    cyclotomic_quotient_shape_snf,
    cyclotomic_ring,
    fiber_check,
    group_ring,
    make_alpha,
    norm_element,
    to_cyclotomic,
    to_fiber_pair,
)

primes = st.sampled_from([3, 5, 7])


def test_norm_element_coefficients():
    for p in (3, 5, 7, 11):
        assert norm_element(p, 6).signed_coeffs() == [comb(p, k + 1) for k in range(p)]


def test_t_power_p_reduction():
    R = group_ring(5, 6)
    assert R.T_power(5).signed_coeffs() == [0, -5, -10, -10, -5]


def test_example_high_powers(golden):
    data = golden("quotient_p5_m2_r6_j1.json")
    R = group_ring(5, 6)
    for k, coeffs in data["t_powers"].items():
        assert R.T_power(int(k)).signed_coeffs() == coeffs
    assert make_alpha(2, 6, 1, 5, 6).signed_coeffs() == data["alpha"]


def test_sigma_has_order_p():
    for p in (3, 5, 7):
        R = group_ring(p, 5)
        assert R.sigma ** p == R.one
        assert R.sigma ** (p - 1) != R.one


def test_norm_is_killed_by_t_and_projection():
    for p in (3, 5, 7):
        R = group_ring(p, 5)
        Nm = norm_element(p, 5)
        assert R.T * Nm == R.zero
        assert to_cyclotomic(Nm).is_zero()
        assert int(augmentation(Nm)) == p


@given(primes, st.lists(st.integers(-50, 50), min_size=1, max_size=8), st.lists(st.integers(-50, 50), min_size=1, max_size=8))
def test_projections_are_ring_maps(p, a, b):
    R = group_ring(p, 5)
    x, y = R.element(a), R.element(b)
    assert to_cyclotomic(x * y) == to_cyclotomic(x) * to_cyclotomic(y)
    assert int(augmentation(x * y)) == int(augmentation(x)) * int(augmentation(y)) % R.modulus
    assert to_fiber_pair(x).is_compatible()


@given(primes, st.lists(st.integers(-50, 50), min_size=1, max_size=6), st.lists(st.integers(-50, 50), min_size=1, max_size=6), st.lists(st.integers(-50, 50), min_size=1, max_size=6))
def test_group_ring_associative_commutative(p, a, b, c):
    R = group_ring(p, 4)
    x, y, z = R.element(a), R.element(b), R.element(c)
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z


def test_sigma_basis_round_trip():
    R = group_ring(5, 4)
    x = R.element([3, 1, 4, 1, 5])
    assert R.from_sigma_basis(x.sigma_coeffs()) == x


def test_fiber_check_rejects_incompatible():
    C = cyclotomic_ring(5, 3)
    assert fiber_check(C.element([2, 1]), 7)
    assert not fiber_check(C.element([2, 1]), 3)


def test_pi_power_relation():
    for p in (3, 5, 7):
        C = cyclotomic_ring(p, 6)
        assert C.pi ** (p - 1) == C.unit_u() * p
        assert C.unit_u().coefficient_valuations()[0] == 0


def test_pi_valuation():
    C = cyclotomic_ring(5, 6)
    assert (C.pi**7).pi_valuation() == 7
    assert C.element([5]).pi_valuation() == 4


@pytest.mark.parametrize("p", [3, 5, 7])
def test_cyclotomic_quotient_formula_matches_snf(p):
    for r in range(0, 3 * (p - 1) + 1):
        assert cyclotomic_quotient_shape(p, r) == cyclotomic_quotient_shape_snf(p, r)
        assert sum(cyclotomic_quotient_shape(p, r)) == r


def test_make_alpha_validates():
    with pytest.raises(ValueError):
        make_alpha(0, 1, 1, 3, 4)
    with pytest.raises(ValueError):
        make_alpha(1, 1, 3, 3, 4)
