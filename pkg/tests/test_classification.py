import pytest
from hypothesis import given
from hypothesis import strategies as st

from iwasawa_layer.classification import (
    canonical_shape,
    format_shape,
    is_cyclic,
    is_lambda_one_by_order,
    is_lambda_one_pair,
    parse_shape,
    pretty_shape,
    closed_form_shape,
    possible_a1_shapes,
    a1_families,
)

primes = st.sampled_from([3, 5, 7, 11])


@st.composite
def params(draw):
    p = draw(primes)
    return p, draw(st.integers(1, 5)), draw(st.integers(1, 6 * (p - 1))), draw(st.integers(1, p - 1))


def test_shape_text_round_trip():
    assert format_shape((3, 2, 1, 1, 1)) == "3.2.1.1.1"
    assert parse_shape("3.2.1.1.1") == (3, 2, 1, 1, 1)
    assert format_shape(()) == "0"
    assert parse_shape("0") == ()


@pytest.mark.parametrize("bad", ["", "1.2", "2.0", "a.b", "-1", "2..1"])
def test_parse_shape_rejects(bad):
    with pytest.raises(ValueError):
        parse_shape(bad)


@given(st.lists(st.integers(0, 9), max_size=8))
def test_canonical_shape_round_trip(exps):
    shape = canonical_shape(exps)
    assert parse_shape(format_shape(shape)) == shape


def test_pretty_shape():
    assert pretty_shape((3, 2), 3) == "27x9"
    assert pretty_shape((5, 4), 3) == "3^5x3^4"
    assert pretty_shape((5, 4, 1), 3) == "3^5x3^4x3"
    assert pretty_shape((2, 2, 2, 1), 5) == "25x25x25x5"
    assert pretty_shape((), 3) == "1"


@given(params())
def test_order_is_p_to_r_plus_m(args):
    p, m, r, j = args
    assert sum(closed_form_shape(p, m, r, j)) == r + m


@given(params())
def test_at_most_p_factors(args):
    p, m, r, j = args
    assert len(closed_form_shape(p, m, r, j)) <= p


def test_table_rows_examples():
    assert closed_form_shape(5, 2, 6, 1) == (3, 2, 1, 1, 1)
    assert closed_form_shape(3, 1, 1, 1) == (2,)
    assert closed_form_shape(3, 1, 2, 1) == (2, 1)
    assert closed_form_shape(3, 1, 2, 2) == (1, 1, 1)


def test_invalid_parameters():
    for args in [(3, 0, 1, 1), (3, 1, 0, 1), (3, 1, 1, 0), (3, 1, 1, 3)]:
        with pytest.raises(ValueError):
            closed_form_shape(*args)


def test_enumerate_small_cases():
    got = [(e.shape, e.r, e.j_count) for e in possible_a1_shapes(3, 1, 5)]
    assert got == [
        ((2,), 1, 2),
        ((2, 1), 2, 1),
        ((1, 1, 1), 2, 1),
        ((2, 2), 3, 2),
        ((3, 2), 4, 2),
    ]


def test_enumerate_p5_split():
    entries = {e.shape: e.j_count for e in possible_a1_shapes(5, 1, 5) if e.r == 4}
    assert entries == {(2, 1, 1, 1): 3, (1, 1, 1, 1, 1): 1}


def test_enumerate_empty_below_m():
    assert possible_a1_shapes(3, 2, 2) == []


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_enumeration_equals_direct_families(p, m):
    bound = m + (p - 1) * (m + 3)
    listed = {e.shape for e in possible_a1_shapes(p, m, bound)}
    assert listed == a1_families(p, m, bound)


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_order_determines_shape_except_one_collision(p, m):
    by_order = {}
    for e in possible_a1_shapes(p, m, m + (p - 1) * (m + 3)):
        by_order.setdefault(e.order_exponent, set()).add(e.shape)
    multi = {k: v for k, v in by_order.items() if len(v) > 1}
    assert list(multi) == [m * p]
    assert len(multi[m * p]) == 2


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_excluded_family_member_is_not_new(p, m):
    # the member with m = s + 1, b = p - 2 coincides with one already listed
    s = m - 1
    shape = canonical_shape([m + 1] + [s + 1] * (p - 2) + [s])
    listed = {e.shape for e in possible_a1_shapes(p, m, sum(shape))}
    assert sum(shape) == m * p
    assert shape in listed


def test_j_counts_sum_to_p_minus_one():
    for p in (3, 5, 7):
        for m in (1, 2):
            per_r = {}
            for e in possible_a1_shapes(p, m, m + 12):
                per_r[e.r] = per_r.get(e.r, 0) + e.j_count
            assert set(per_r.values()) == {p - 1}


def test_lambda_one_criteria():
    assert is_lambda_one_pair(1, (2,))
    assert not is_lambda_one_pair(1, (1, 1))
    assert is_lambda_one_by_order(1, (1, 1))
    assert is_cyclic((3,)) and not is_cyclic(()) and not is_cyclic((1, 1))
    # within the list of possible A_1 the two criteria agree
    for p in (3, 5, 7):
        for m in (1, 2, 3):
            for e in possible_a1_shapes(p, m, m + 8):
                assert is_lambda_one_pair(m, e.shape) == is_lambda_one_by_order(m, e.shape)
