"""Command line interface: ``iwasawa-layer <command> ...`` (or ``python -m iwasawa_layer``)."""
from __future__ import annotations

import argparse
import sys
import time
import warnings

from . import classification as cl
from . import function_field as ff
from . import heuristics as hz
from . import quadratic as qd
from . import records as rc
from .group_ring import cyclotomic_quotient_shape, cyclotomic_quotient_shape_snf
from .padic import PrecisionError
from .reiner import (
    ReinerIdeal,
    fixed_subgroup_order,
    fixed_subgroup_order_brute_force,
    ideal_grid,
    norm_image_order,
    quotient_brute_force,
    determined_model,
    quotient_shape_snf,
)
from .render import PLACES, dumps, text_table


class CommandFailed(Exception):
    """Raised by a command whose checks found problems; maps to exit code 1."""


def _emit(args, text: str, data) -> None:
    print(dumps(data) if args.json else text)


# ----------------------------------------------------------------- commands


def cmd_classify(args) -> None:
    shape = cl.closed_form_shape(args.p, args.m, args.r, args.j)
    data = {"p": args.p, "m": args.m, "r": args.r, "j": args.j, "shape": cl.format_shape(shape)}
    lines = [f"shape {cl.format_shape(shape)}  ({cl.pretty_shape(shape, args.p)})"]
    mismatch = False
    I = ReinerIdeal(args.p, args.m, args.r, args.j)
    if args.verify_snf:
        snf = quotient_shape_snf(I)
        data["snf_shape"] = cl.format_shape(snf)
        mismatch |= snf != shape
        lines.append(f"snf   {cl.format_shape(snf)}  {'ok' if snf == shape else 'MISMATCH'}")
    if args.verify_brute:
        brute = quotient_brute_force(I)
        data["brute_force_shape"] = cl.format_shape(brute)
        mismatch |= brute != shape
        lines.append(f"brute {cl.format_shape(brute)}  {'ok' if brute == shape else 'MISMATCH'}")
    data["ok"] = not mismatch
    _emit(args, "\n".join(lines), data)
    if mismatch:
        raise CommandFailed("verification mismatch")


def cmd_enumerate(args) -> None:
    entries = cl.possible_a1_shapes(args.p, args.m, args.max_exp)
    rows = [
        [e.r, cl.format_shape(e.shape), cl.pretty_shape(e.shape, args.p), e.j_count, e.order_exponent]
        for e in entries
    ]
    text = text_table(["r", "shape", "group", "j count", "log_p order"], rows)
    data = [
        {"r": e.r, "shape": cl.format_shape(e.shape), "group": cl.pretty_shape(e.shape, args.p), "j_count": e.j_count}
        for e in entries
    ]
    _emit(args, text, data)


def cmd_quotient(args) -> None:
    I = ReinerIdeal(args.p, args.m, args.r, args.j)
    model = determined_model(I)
    shape = model.shape
    vals = sorted(model.snf.divisor_valuations)
    data = {
        "p": args.p,
        "m": args.m,
        "r": args.r,
        "j": args.j,
        "precision": model.precision,
        "snf_valuations": vals,
        "shape": cl.format_shape(shape),
    }
    lines = []
    if args.show_matrix:
        rows = model.relation_matrix.signed_rows()
        data["relation_matrix"] = rows
        label = "T^i * alpha" if args.j else "T^i * alpha, p^m N"
        lines.append(f"relation matrix (columns {label}; T-basis rows; mod {args.p}^{model.precision})")
        headers = [f"T^{i}*a" for i in range(args.p)] + (["p^m*N"] if len(rows[0]) > args.p else [])
        lines.append(text_table(headers, rows))
    lines.append("SNF divisor valuations: " + ", ".join(map(str, vals)))
    lines.append(f"shape {cl.format_shape(shape)}  ({cl.pretty_shape(shape, args.p)})")
    _emit(args, "\n".join(lines), data)


def cmd_heuristics_lambda(args) -> None:
    models = ["ejv", "new"] if args.model is None else [args.model]
    places = args.places
    rows, data = [], []
    for r in range(1, args.max_r + 1):
        row, item = [r], {"r": r}
        for name in models:
            value = hz.ejv_lambda_prob(args.p, r) if name == "ejv" else hz.new_lambda_prob(args.p, r)
            row.append(value.rounded(places))
            item[name] = value.rounded(places)
            item[f"{name}_coefficient"] = str(value.coefficient)
        rows.append(row)
        data.append(item)
    e = hz.eta(args.p)
    text = text_table(["lambda"] + [m.upper() if m == "ejv" else m for m in models], rows)
    text += f"\n(probabilities are rational multiples of eta({args.p}) = {hz.decimal_str(e.value, 15)})"
    _emit(args, text, {"p": args.p, "eta": e.value, "rows": data})


def cmd_heuristics_a1(args) -> None:
    dist = hz.predicted_a1_distribution(args.p, args.m, args.max_r)
    cols = [cl.pretty_shape(e.shape, args.p) for e in dist.entries] + [f"r>{args.max_r}"]
    vals = [hz.decimal_str(e.probability, PLACES) for e in dist.entries]
    vals.append(hz.decimal_str(dist.tail_mass, PLACES))
    text = text_table([""] + cols, [["Predicted"] + vals])
    data = {
        "p": args.p,
        "m": args.m,
        "max_r": args.max_r,
        "columns": [
            {
                "shape": cl.format_shape(e.shape),
                "label": cl.pretty_shape(e.shape, args.p),
                "r": e.r,
                "j_count": e.j_count,
                "predicted": hz.decimal_str(e.probability, PLACES),
                "exact": str(e.probability),
            }
            for e in dist.entries
        ],
        "tail_mass": str(dist.tail_mass),
    }
    _emit(args, text, data)


def cmd_heuristics_compat(args) -> None:
    rep = hz.compatibility_check(args.p)
    lines = [
        f"P(lambda=1) / P(A_0 cyclic) = {rep.heuristic_ratio}  (exact; eta cancels)",
        f"numeric ratio = {hz.decimal_str(rep.heuristic_ratio_numeric, 25)}",
        f"expected (p-1)/p = {rep.expected}",
    ]
    lines += [f"cyclic mass of predicted A_1, m={m}: {v}" for m, v in rep.cyclic_masses.items()]
    lines.append("ok" if rep.ok else "FAILED")
    _emit(args, "\n".join(lines), rep)
    if not rep.ok:
        raise CommandFailed("compatibility identity failed")


def cmd_survey_quad(args) -> None:
    start = time.perf_counter()
    res = qd.survey(args.p, args.family, args.min, args.max, jobs=args.jobs, limit=args.limit)
    elapsed = time.perf_counter() - start
    buckets = res.buckets()
    fr = res.fractions()
    rows = [[k, v, hz.decimal_str(fr[k], PLACES)] for k, v in buckets.items()]
    lines = [
        text_table(["A_0", "count", "fraction"], rows, title=f"family {args.family}, p = {args.p}"),
        f"discriminants: {res.count}; not fundamental: {res.skipped_not_fundamental}; "
        f"split: {res.skipped_split}; excluded units (-3, -4): {len(res.flagged)}",
        f"fraction with {args.p} | h: {hz.decimal_str(res.divisible_fraction(), PLACES)}",
    ]
    if args.rows:
        lines.append("d\th\tsylow_shape")
        lines += [f"{r.d}\t{r.h}\t{r.sylow_text}" for r in res.results]
    data = {
        "p": args.p,
        "family": args.family,
        "count": res.count,
        "buckets": buckets,
        "fractions": {k: hz.decimal_str(v, PLACES) for k, v in fr.items()},
        "divisible_fraction": hz.decimal_str(res.divisible_fraction(), PLACES),
        "skipped_not_fundamental": res.skipped_not_fundamental,
        "skipped_split": res.skipped_split,
        "excluded_units": res.flagged,
        "seconds": round(elapsed, 2),
    }
    if args.rows:
        data["rows"] = [r.row() for r in res.results]
    _emit(args, "\n".join(lines), data)


def _ff_summary(survey: ff.FFSurvey) -> tuple[list[str], dict]:
    fr = survey.e1_fractions()
    pred = ff.e1_predicted()
    names = list(ff.E1_CLASSES.values())
    table = text_table(
        [""] + names,
        [
            [f"Computed ({survey.label})"] + [hz.decimal_str(fr.get(n, 0), 2) for n in names],
            ["Predicted"] + [hz.decimal_str(pred.get(n, 0), 2) for n in names],
        ],
    )
    e1 = survey.e1_histogram()
    lines = [
        f"{survey.label}: {survey.total} fields; 3 | h0: {survey.divisible}; "
        f"e0 histogram {survey.e0_histogram()}; e0=1 with e1=2: {e1.get(2, 0)}",
        table,
    ]
    if survey.violations:
        lines.append(f"e1 >= e0 + 1 FAILS for {len(survey.violations)} fields")
    data = {
        "label": survey.label,
        "fields": survey.total,
        "divisible": survey.divisible,
        "e0_histogram": survey.e0_histogram(),
        "e1_histogram_given_e0_1": e1,
        "computed": {n: hz.decimal_str(fr.get(n, 0), PLACES) for n in names},
        "predicted": {n: hz.decimal_str(pred.get(n, 0), PLACES) for n in names},
        "violations": len(survey.violations),
    }
    return lines, data


def cmd_survey_ff(args) -> None:
    full = ff.survey_ff(jobs=args.jobs)
    surveys = [full]
    if args.first is not None:
        sub = full.records[: args.first]
        surveys = [ff.FFSurvey(sub, f"first {args.first}", [r for r in full.violations if r in sub])]
    else:
        sub = full.records[:200]
        surveys.append(ff.FFSurvey(sub, "first 200", [r for r in full.violations if r in sub]))
    lines, data = [], {"surveys": []}
    for s in surveys:
        text, item = _ff_summary(s)
        lines += text + [""]
        data["surveys"].append(item)
    if args.rows:
        lines.append("h\th0\te0\th1\te1\te1_class")
        for r in surveys[0].records:
            lines.append(f"{ff.poly_str(r.h)}\t{r.h0}\t{r.e0}\t{r.h1 or ''}\t{'' if r.e1 is None else r.e1}\t{r.e1_class}")
        data["rows"] = [
            {"h": list(r.h), "h0": r.h0, "e0": r.e0, "h1": r.h1, "e1": r.e1, "e1_class": r.e1_class}
            for r in surveys[0].records
        ]
    _emit(args, "\n".join(lines).rstrip(), data)
    if any(s.violations for s in surveys):
        raise CommandFailed("e1 >= e0 + 1 violated")


def cmd_ingest(args) -> None:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", rc.DuplicateRecordWarning)
        report = rc.ingest_csv(args.file, args.p)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    tab = rc.tabulate(report.records, args.p, args.m, args.max_r)
    lines = [f"{len(report.records)} records from {args.file}; duplicates skipped: {len(report.duplicates)}"]
    for a in report.anomalies:
        lines.append(f"ANOMALY line {a.line}: d = {a.record.d}: {a.reason}")
    lines.append(tab.render())
    data = {
        "records": len(report.records),
        "duplicates": [{"line": ln, "d": d} for ln, d in report.duplicates],
        "anomalies": [{"line": a.line, "d": a.record.d, "reason": a.reason} for a in report.anomalies],
        "table": tab.as_json(),
    }
    _emit(args, "\n".join(lines), data)
    if report.anomalies:
        raise CommandFailed(f"{len(report.anomalies)} anomalies")


def run_battery(p: int, max_m: int, max_r: int | None, brute: bool | None = None) -> tuple[int, list[str]]:
    """Cross-check the closed form, Smith form, brute force and fixed points.

    Returns (number of cases, failure messages).
    """
    brute = (p == 3) if brute is None else brute
    cases, failures = 0, []
    for I in ideal_grid(p, max_m, max_r):
        cases += 1
        label = f"(p={p}, m={I.m}, r={I.r}, j={I.j})"
        expected = cl.closed_form_shape(p, I.m, I.r, I.j)
        snf = quotient_shape_snf(I)
        if snf != expected:
            failures.append(f"{label}: table {expected} != snf {snf}")
        if sum(snf) != I.r + I.m:
            failures.append(f"{label}: order exponent {sum(snf)} != r + m")
        if brute:
            try:
                bf = quotient_brute_force(I)
            except (MemoryError, PrecisionError) as exc:
                failures.append(f"{label}: brute force unavailable ({exc})")
            else:
                if bf != expected:
                    failures.append(f"{label}: table {expected} != brute force {bf}")
    # fixed points and the norm image, including j = 0
    for I in ideal_grid(p, max_m, max_r, js=range(p)):
        cases += 1
        label = f"(p={p}, m={I.m}, r={I.r}, j={I.j})"
        fixed = fixed_subgroup_order(I)
        if (I.j != 0 and fixed != I.m) or (I.j == 0 and fixed <= I.m):
            failures.append(f"{label}: fixed subgroup has order {p}^{fixed}")
        if I.j != 0 and norm_image_order(I) != I.m:
            failures.append(f"{label}: norm image has order {p}^{norm_image_order(I)}")
        if brute and sum(cl.closed_form_shape(p, I.m, I.r, max(I.j, 1))) <= 12:
            bf = fixed_subgroup_order_brute_force(I)
            if bf != fixed:
                failures.append(f"{label}: fixed subgroup {fixed} != brute force {bf}")
    top = (p - 1) * (max_m + 2) if max_r is None else max_r
    for r in range(1, top + 1):
        cases += 1
        if cyclotomic_quotient_shape(p, r) != cyclotomic_quotient_shape_snf(p, r):
            failures.append(f"(p={p}, r={r}): cyclotomic quotient mismatch")
    return cases, failures


def cmd_verify(args) -> None:
    cases, failures = run_battery(args.p, args.max_m, args.max_r)
    if failures:
        text = "\n".join(failures) + f"\n{len(failures)} failures in {cases} cases"
    else:
        text = f"all checks passed: {cases} cases"
    _emit(args, text, {"cases": cases, "failures": failures})
    if failures:
        raise CommandFailed(f"{len(failures)} failures")


# ------------------------------------------------------------------ parser


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _odd_prime(text: str) -> int:
    value = int(text)
    if value < 3 or value % 2 == 0 or any(value % k == 0 for k in range(3, int(value**0.5) + 1, 2)):
        raise argparse.ArgumentTypeError(f"expected an odd prime, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="JSON output")

    parser = argparse.ArgumentParser(
        prog="iwasawa-layer",
        description="Structure of the first layer of a Z_p-extension, heuristics and surveys.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, parent=sub):
        sp = parent.add_parser(name, parents=[common], help=help_text, description=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("classify", cmd_classify, "closed-form structure of Z_p[sigma]/I")
    sp.add_argument("--p", type=_odd_prime, required=True)
    sp.add_argument("--m", type=_positive, required=True)
    sp.add_argument("--r", type=_positive, required=True)
    sp.add_argument("--j", type=_positive, required=True)
    sp.add_argument("--verify-snf", action="store_true")
    sp.add_argument("--verify-brute", action="store_true")

    sp = add("enumerate", cmd_enumerate, "all possible A_1 for cyclic A_0 of order p^m")
    sp.add_argument("--p", type=_odd_prime, required=True)
    sp.add_argument("--m", type=_positive, required=True)
    sp.add_argument("--max-exp", type=_positive, required=True, help="bound on log_p |A_1|")

    sp = add("quotient", cmd_quotient, "relation matrix and Smith normal form of Z_p[sigma]/I")
    sp.add_argument("--p", type=_odd_prime, required=True)
    sp.add_argument("--m", type=_positive, required=True)
    sp.add_argument("--r", type=_positive, required=True)
    sp.add_argument("--j", type=int, required=True, help="0 <= j <= p-1")
    sp.add_argument("--show-matrix", action="store_true")

    hp = sub.add_parser("heuristics", parents=[common], help="heuristic distributions")
    hsub = hp.add_subparsers(dest="heuristic", required=True)
    sp = add("lambda", cmd_heuristics_lambda, "distribution of lambda", hsub)
    sp.add_argument("--p", type=_odd_prime, default=3)
    sp.add_argument("--model", choices=["ejv", "new"], default=None, help="default: both")
    sp.add_argument("--max-r", type=_positive, default=6)
    sp.add_argument("--places", type=_positive, default=5)
    sp = add("a1", cmd_heuristics_a1, "predicted distribution of A_1", hsub)
    sp.add_argument("--p", type=_odd_prime, default=3)
    sp.add_argument("--m", type=_positive, default=1)
    sp.add_argument("--max-r", type=_positive, default=10)
    sp = add("compat", cmd_heuristics_compat, "consistency of the lambda = 1 probabilities", hsub)
    sp.add_argument("--p", type=_odd_prime, default=3)

    vp = sub.add_parser("survey", parents=[common], help="class group surveys")
    vsub = vp.add_subparsers(dest="survey", required=True)
    sp = add("quad", cmd_survey_quad, "imaginary quadratic class groups over a family", vsub)
    sp.add_argument("--p", type=_odd_prime, default=3)
    sp.add_argument("--family", required=True, help="e.g. -1-3j, -3j, -2-5k, zero, nonsplit")
    sp.add_argument("--min", type=_positive, required=True)
    sp.add_argument("--max", type=_positive, required=True)
    sp.add_argument("--jobs", type=_positive, default=1)
    sp.add_argument("--limit", type=_positive, default=None, help="stop after this many discriminants")
    sp.add_argument("--rows", action="store_true", help="also print d, h, sylow_shape rows")
    sp = add("ff", cmd_survey_ff, "hyperelliptic curves over F_3 and their first-layer pullbacks", vsub)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--full", action="store_true", help="whole deduplicated family (default)")
    group.add_argument("--first", type=_positive, default=None, help="only the first N polynomials")
    sp.add_argument("--jobs", type=_positive, default=1)
    sp.add_argument("--rows", action="store_true", help="also print one row per polynomial")

    sp = add("ingest", cmd_ingest, "check and tabulate external (d, A_0, A_1) records")
    sp.add_argument("--file", required=True)
    sp.add_argument("--p", type=_odd_prime, required=True)
    sp.add_argument("--m", type=_positive, required=True)
    sp.add_argument("--max-r", type=_positive, default=None)

    sp = add("verify", cmd_verify, "cross-validation battery")
    sp.add_argument("--p", type=_odd_prime, required=True)
    sp.add_argument("--max-m", type=_positive, required=True)
    sp.add_argument("--max-r", type=_positive, default=None)
    return parser


def _join_family(argv: list[str]) -> list[str]:
    # family names such as -3j start with a dash; glue them to their flag
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--family":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--family={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_family(argv))
    if not hasattr(args, "json"):
        args.json = False
    try:
        args.func(args)
    except CommandFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, PrecisionError, rc.IngestError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


__all__ = ["main", "build_parser", "run_battery", "CommandFailed"]

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
