import numpy as np
import pytest

from iwasawa_layer.finite_field import finite_field, is_squarefree, poly_mul, squarefree_part
from iwasawa_layer.function_field import (
    HyperellipticModel,
    WeilBoundError,
    artin_schreier_pullback,
    class_number,
    enumerate_h,
    first_layer_model,
    point_count,
    reversal,
    survey_ff,
    survey_record,
    e1_predicted,
    zeta_from_counts,
)
from iwasawa_layer.heuristics import decimal_str


def naive_count(f, k):
    """Affine points by squaring every y, plus points at infinity."""
    F = finite_field(3, k)
    xs = F.elements()
    squares = np.bincount(F.mul(xs, xs), minlength=F.q)
    total = int(squares[F.evaluate(f)].sum())
    return total + HyperellipticModel(3, f).points_at_infinity(k)


def test_point_count_examples():
    assert point_count((0, 1), 1) == 4
    assert point_count((1, 2, 0, 1), 1) == 7


@pytest.mark.parametrize("f", [(1, 2, 0, 1), (0, 1, 1, 0, 0, 0, 0, 1), (2, 0, 1, 1, 0, 1), (1, 0, 0, 0, 1, 0, 2)])
def test_point_count_matches_naive(f):
    for k in (1, 2, 3, 4):
        assert point_count(f, k) == naive_count(f, k)


def test_even_degree_infinity():
    # leading coefficient 2 is a non-square in F_3 and a square in F_9
    f = (1, 0, 1, 0, 2)
    assert HyperellipticModel(3, f).points_at_infinity(1) == 0
    assert HyperellipticModel(3, f).points_at_infinity(2) == 2


def test_elliptic_class_number():
    h, zeta = class_number((1, 2, 0, 1))
    assert h == 7
    assert zeta.numerator == (1, 3, 3)


def test_genus_zero():
    assert class_number((0, 1))[0] == 1


def test_weil_violation_detected():
    with pytest.raises(WeilBoundError):
        zeta_from_counts(3, 1, [20])


def test_reciprocal_roots_and_extra_count():
    for h in enumerate_h()[:5]:
        _, zeta = class_number(h)
        roots = zeta.reciprocal_roots()
        assert np.allclose(np.abs(roots), np.sqrt(3), atol=1e-6)
        assert abs(np.prod(1 - roots).real - zeta.class_number) < 1e-6
        g = zeta.genus
        assert zeta.predicted_count(g + 1) == point_count(h, g + 1)


def test_enumeration():
    hs = enumerate_h()
    assert len(hs) == 195
    assert len(set(hs)) == len(hs)
    for h in hs:
        assert len(h) == 8 and h[-1] == 1 and h[0] == 0 and is_squarefree(h, 3)
    seen = set(hs)
    assert all(reversal(h) not in seen or reversal(h) == h for h in hs)


def test_reversal_is_an_involution_and_preserves_h0():
    hs = enumerate_h()
    for h in hs[:10]:
        r = reversal(h)
        assert reversal(r) == h
        assert class_number(h)[0] == class_number(r)[0]


def test_pullback_model(golden):
    data = golden("ff_pullback_genus.json")
    for item in data["samples"]:
        h = tuple(item["h"])
        H = artin_schreier_pullback(h)
        assert len(H) - 1 <= 24
        model = first_layer_model(h)
        F, S = squarefree_part(H, 3)
        assert poly_mul(F, poly_mul(S, S, 3), 3) == H
        assert model.genus == item["genus"] <= 11


def test_first_layer_rejects_bad_input():
    with pytest.raises(ValueError):
        first_layer_model((1, 1, 0, 0, 0, 0, 0, 1))


def test_record_injectivity():
    for h in enumerate_h()[:40]:
        rec = survey_record(h)
        if rec.e0 >= 1:
            assert rec.e1 >= rec.e0 + 1


def test_e1_predicted_row():
    row = e1_predicted()
    assert [decimal_str(v, 2) for v in row.values()] == ["0.67", "0.22", "0.07", "0.02", "0.01"]
    assert decimal_str(row["9x3 or 3x3x3"], 4) == "0.2222"


def test_first_n_survey():
    s = survey_ff(first=20)
    assert s.total == 20 and not s.violations
