import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from iwasawa_layer.finite_field import (
    finite_field,
    is_irreducible,
    is_squarefree,
    least_irreducible,
    monic_polys,
    poly_divmod,
    poly_eval,
    poly_gcd,
    poly_mul,
    poly_pow,
    squarefree_decomposition,
    squarefree_part,
    trim,
)

polys = st.lists(st.integers(0, 2), min_size=1, max_size=9).map(lambda c: trim(c, 3))


def test_irreducible_counts():
    # number of monic irreducibles of degree n over F_3: 3, 3, 8, 18, 48
    for n, expected in [(1, 3), (2, 3), (3, 8), (4, 18), (5, 48)]:
        assert sum(is_irreducible(f, 3) for f in monic_polys(3, n)) == expected


def test_least_irreducible():
    assert least_irreducible(3, 2) == (1, 0, 1)
    f = least_irreducible(3, 10)
    assert is_irreducible(f, 3)
    # nothing earlier in the enumeration order is irreducible
    for g in monic_polys(3, 10):
        if g == f:
            break
        assert not is_irreducible(g, 3)


@given(polys, polys.filter(bool))
def test_divmod(f, g):
    q, r = poly_divmod(f, g, 3)
    assert len(r) < len(g)
    assert trim([a + b for a, b in itertools.zip_longest(poly_mul(q, g, 3), r, fillvalue=0)], 3) == f


@given(polys.filter(lambda f: len(f) > 1), polys.filter(lambda f: len(f) > 1))
def test_squarefree_decomposition(f, g):
    h = poly_mul(poly_mul(f, f, 3), g, 3)
    F, S = squarefree_part(h, 3)
    assert poly_mul(F, poly_mul(S, S, 3), 3) == h
    assert is_squarefree(F, 3)
    prod = (h[-1],)
    for a, e in squarefree_decomposition(h, 3):
        assert is_squarefree(a, 3)
        prod = poly_mul(prod, poly_pow(a, e, 3), 3)
    assert prod == h


def test_pth_power_part():
    # (x + 1)^3 (x^2 + 1) has a cube factor that Yun's loop alone misses
    h = poly_mul(poly_pow((1, 1), 3, 3), (1, 0, 1), 3)
    assert dict((e, a) for a, e in squarefree_decomposition(h, 3)) == {1: (1, 0, 1), 3: (1, 1)}


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_field_axioms(k):
    F = finite_field(3, k)
    xs = F.elements()
    rng = np.random.default_rng(k)
    a, b, c = (rng.integers(0, F.q, 200) for _ in range(3))
    assert np.array_equal(F.mul(a, b), F.mul(b, a))
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert np.array_equal(F.mul(xs, np.ones_like(xs)), xs)
    # Frobenius is additive and bijective: evaluate x^3 on the whole field
    cubes = F.evaluate((0, 0, 0, 1))
    assert len(set(cubes.tolist())) == F.q


def test_mul_matches_polynomial_arithmetic():
    F = finite_field(3, 4)
    for a in range(0, F.q, 7):
        for b in range(0, F.q, 11):
            expected = F.from_poly(F._mul_poly(F.to_poly(a), F.to_poly(b)))
            assert int(F.mul(np.array([a]), np.array([b]))[0]) == expected


def test_evaluate_prime_field():
    F = finite_field(3, 1)
    f = (1, 2, 0, 1)
    assert F.evaluate(f).tolist() == [poly_eval(f, x, 3) for x in range(3)]


def test_quadratic_character_counts():
    for k in (1, 2, 3):
        F = finite_field(3, k)
        chi = F.quadratic_character(F.elements())
        assert chi[0] == 0 and int((chi == 1).sum()) == (F.q - 1) // 2


def test_prime_field_squares_in_extensions():
    # -1 = 2 is a non-square in F_3 and a square in F_9
    assert not finite_field(3, 1).is_square_prime(2)
    assert finite_field(3, 2).is_square_prime(2)


def test_gcd_monic():
    assert poly_gcd((2, 2), (1, 1), 3) == (1, 1)
