"""One test per acceptance criterion; a PASS/FAIL line for each is printed at the end of the run."""
import json
import random
import time

import pytest

from iwasawa_layer.classification import format_shape, closed_form_shape
from iwasawa_layer.cli import main, run_battery
from iwasawa_layer.function_field import survey_ff, e1_predicted
from iwasawa_layer.group_ring import cyclotomic_quotient_shape, cyclotomic_quotient_shape_snf
from iwasawa_layer.heuristics import (
    clm_cyclic_prob,
    compatibility_check,
    decimal_str,
    ejv_lambda_prob,
    predicted_a1_distribution,
)
from iwasawa_layer.quadratic import class_number, compose, identity_form, reduced_forms, survey
from iwasawa_layer.reiner import (
    ReinerIdeal,
    fixed_subgroup_order,
    fixed_subgroup_order_brute_force,
    ideal_grid,
    quotient_brute_force,
    quotient_shape_snf,
)
from iwasawa_layer.records import parse_records, synthetic_records, tabulate

from fractions import Fraction


def cli_json(capsys, *argv):
    code = main(["--json", *argv])
    out = capsys.readouterr().out
    assert code == 0
    return json.loads(out)


@pytest.mark.criterion(1)
def test_worked_example(criterion, capsys, golden):
    data = golden("quotient_p5_m2_r6_j1.json")
    start = time.perf_counter()
    got = cli_json(capsys, "quotient", "--p", "5", "--m", "2", "--r", "6", "--j", "1", "--show-matrix")
    elapsed = time.perf_counter() - start
    cols = [[row[c] for row in got["relation_matrix"]] for c in range(5)]
    criterion.append(f"shape {got['shape']}, divisors {got['snf_valuations']}, {elapsed:.3f}s")
    assert cols == data["columns"]
    assert got["snf_valuations"] == [1, 1, 1, 2, 3]
    assert got["shape"] == "3.2.1.1.1"
    assert elapsed < 1


@pytest.mark.criterion(2)
def test_cross_validation_battery(criterion):
    start = time.perf_counter()
    cases = mismatches = brute = 0
    for p in (3, 5, 7):
        for I in ideal_grid(p, 3):
            cases += 1
            expected = closed_form_shape(p, I.m, I.r, I.j)
            snf = quotient_shape_snf(I)
            mismatches += snf != expected or sum(snf) != I.r + I.m
            if p == 3:
                brute += 1
                mismatches += quotient_brute_force(I) != expected
    elapsed = time.perf_counter() - start
    criterion.append(f"{cases} ideals ({brute} by brute force), {mismatches} mismatches, {elapsed:.1f}s")
    assert mismatches == 0
    assert elapsed < 300


@pytest.mark.criterion(3)
def test_fixed_subgroup_both_directions(criterion):
    exceptions = cases = 0
    for I in ideal_grid(3, 2, max_r=6, js=range(3)):
        cases += 1
        fixed = fixed_subgroup_order(I)
        ok = fixed == I.m if I.j else fixed > I.m
        ok &= fixed == fixed_subgroup_order_brute_force(I)
        exceptions += not ok
    criterion.append(f"{cases} ideals (j = 0 included), {exceptions} exceptions")
    assert exceptions == 0


@pytest.mark.criterion(4)
def test_cyclotomic_quotients(criterion):
    cases = 0
    for p in (3, 5, 7):
        for r in range(1, 3 * (p - 1) + 1):
            cases += 1
            assert cyclotomic_quotient_shape(p, r) == cyclotomic_quotient_shape_snf(p, r), (p, r)
    criterion.append(f"{cases} cases exact")


P3_M1_ROW = ["0.6667", "0.1111", "0.1111", "0.0741", "0.0247", "0.0082", "0.0027", "0.0009", "0.0003", "0.0001", "0.0000"]
P3_M2_ROW = ["0.6667", "0.2222", "0.0741", "0.0123", "0.0123", "0.0082", "0.0027", "0.0009", "0.0003", "0.0001", "0.0000"]
P5_M1_ROW = ["0.8000", "0.1600", "0.0320", "0.0048", "0.0016", "0.0013", "0.0003", "0.0001"]


@pytest.mark.criterion(5)
def test_heuristic_tables(criterion, capsys):
    start = time.perf_counter()
    lam = cli_json(capsys, "heuristics", "lambda", "--p", "3", "--max-r", "6")
    ejv = [row["ejv"] for row in lam["rows"]]
    new = [row["new"] for row in lam["rows"]]
    rows = {}
    for key, (p, m, max_r) in {"2": (3, 1, 10), "3": (3, 2, 10), "4": (5, 1, 7)}.items():
        data = cli_json(capsys, "heuristics", "a1", "--p", str(p), "--m", str(m), "--max-r", str(max_r))
        rows[key] = [c["predicted"] for c in data["columns"]]
    elapsed = time.perf_counter() - start
    criterion.append(f"lambda rows and three predicted rows, {elapsed:.2f}s")
    assert ejv == ["0.28006", "0.10502", "0.03635", "0.01227", "0.00411", "0.00137"]
    assert new == ["0.28006", "0.10648", "0.03555", "0.01185", "0.00395", "0.00132"]
    assert rows == {"2": P3_M1_ROW, "3": P3_M2_ROW, "4": P5_M1_ROW}
    assert elapsed < 1


@pytest.mark.criterion(6)
def test_compatibility_identity(criterion):
    for p in (3, 5, 7, 11):
        assert ejv_lambda_prob(p, 1).ratio(clm_cyclic_prob(p)) == Fraction(p - 1, p)
        for m in (1, 2, 3):
            assert predicted_a1_distribution(p, m, 1).cyclic_mass() == Fraction(p - 1, p)
        assert compatibility_check(p).ok
    criterion.append("exact for p = 3, 5, 7, 11 and m <= 3")


@pytest.mark.criterion(7)
def test_quadratic_survey(criterion):
    assert class_number(-23) == 3 and class_number(-4) == 1 and class_number(-3) == 1
    rng = random.Random(7)
    for d in (-23, -3299, -4027, -9748, -1000003):
        forms = reduced_forms(d)
        e = identity_form(d)
        for _ in range(1000):
            f, g, h = (rng.choice(forms) for _ in range(3))
            assert compose(compose(f, g), h) == compose(f, compose(g, h))
            assert compose(f, g) == compose(g, f)
            assert compose(f, e) == f and compose(f, f.inverse()) == e
    start = time.perf_counter()
    # d = -1 - 3j with |d| from about 10^6; stop after 10^4 fundamental discriminants
    res = survey(3, "-1-3j", 333_333, 433_333, limit=10_000)
    elapsed = time.perf_counter() - start
    frac = decimal_str(res.divisible_fraction(), 4)
    criterion.append(
        f"h(-23)=3, h(-4)=h(-3)=1, group laws ok; {res.count} discriminants "
        f"{res.results[0].d}..{res.results[-1].d} in {elapsed:.0f}s, 3 | h fraction {frac}"
    )
    assert res.count == 10_000
    assert elapsed < 600


OBSERVED_E1 = {"9": 0.77, "9x3 or 3x3x3": 0.16, "9x9": 0.04, "27x9": 0.00, "27x27": 0.04}


@pytest.mark.criterion(8)
def test_function_field_survey(criterion):
    start = time.perf_counter()
    full = survey_ff()
    elapsed = time.perf_counter() - start
    fr = full.e1_fractions()
    first = full.records[:200]
    first_e0 = [r for r in first if r.e0 == 1]
    predicted = [decimal_str(v, 2) for v in e1_predicted().values()]
    criterion.append(
        f"{full.total} fields in {elapsed:.0f}s; 3 | h0: {full.divisible}; e0 histogram {full.e0_histogram()}; "
        f"e0=1 e1-distribution " + " ".join(decimal_str(fr[k], 2) for k in OBSERVED_E1)
        + f"; first 200: {sum(r.e0 >= 1 for r in first)} divisible, {len(first_e0)} with e0=1, "
        f"{sum(r.e1 == 2 for r in first_e0)} with e1=2"
    )
    assert elapsed < 1800
    assert not full.violations
    for r in full.records:
        if r.e0 >= 1:
            assert r.e1 >= r.e0 + 1
    for k, target in OBSERVED_E1.items():
        assert abs(float(fr[k]) - target) <= 0.10, k
    assert predicted == ["0.67", "0.22", "0.07", "0.02", "0.01"]


@pytest.mark.criterion(9)
def test_ingestion_stands_in_for_number_field_data(criterion):
    report = parse_records(["d,a0,a1", "-9748,1,2", "-1,1,1.1", "-2,2,2.2"], 3)
    assert [a.record.d for a in report.anomalies] == [-1, -2]
    for p, m, r in [(3, 1, 6), (3, 2, 5), (5, 1, 4)]:
        assert tabulate(synthetic_records(p, m, r), p, m, r).absolute_deviation == 0
    criterion.append(
        "computed number-field rows of the A_1 tables are not reproducible here "
        "(degree-2p class groups); violating records are flagged and exact synthetic data tabulates with zero deviation"
    )
