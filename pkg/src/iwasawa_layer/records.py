"""Externally computed (d, A_0, A_1) records: ingestion, checking and tabulation.

Records come from CSV files with header ``d,a0,a1``, shapes in the dotted
exponent form. A record whose A_0 is cyclic of order p^m must have an A_1
from the list of possible structures for that m; anything else is reported
as an anomaly, since it would contradict the classification.
"""
from __future__ import annotations

import csv
import io
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .classification import Shape, format_shape, parse_shape, pretty_shape, possible_a1_shapes
from .heuristics import decimal_str, predicted_a1_distribution
from .padic import check_odd_prime
from .render import PLACES, text_table

HEADER = ["d", "a0", "a1"]


class IngestError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateRecordWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SurveyRecord:
    d: int
    a0: Shape
    a1: Shape
    source: str = ""

    @property
    def m(self) -> int | None:
        """log_p |A_0| when A_0 is cyclic, else None."""
        return self.a0[0] if len(self.a0) == 1 else None


@dataclass(frozen=True)
class Anomaly:
    line: int
    record: SurveyRecord
    reason: str


@dataclass
class IngestReport:
    p: int
    records: list[SurveyRecord]
    anomalies: list[Anomaly] = field(default_factory=list)
    duplicates: list[tuple[int, int]] = field(default_factory=list)  # (line, d)

    @property
    def ok(self) -> bool:
        return not self.anomalies


def allowed_a1(p: int, m: int, max_order_exponent: int) -> set[Shape]:
    return {e.shape for e in possible_a1_shapes(p, m, max_order_exponent)}


def check_record(rec: SurveyRecord, p: int) -> str | None:
    """Reason the record contradicts the classification, or None."""
    m = rec.m
    if m is None:
        return None
    if sum(rec.a1) <= m:
        return f"|A_1| = {p}^{sum(rec.a1)} is not larger than |A_0| = {p}^{m}"
    if rec.a1 not in allowed_a1(p, m, sum(rec.a1)):
        return f"A_1 = {format_shape(rec.a1)} is not a possible structure for m = {m}"
    return None


def parse_records(lines: Iterable[str], p: int, source: str = "") -> IngestReport:
    check_odd_prime(p)
    report = IngestReport(p, [])
    seen: dict[int, int] = {}
    header_seen = False
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        fields = [x.strip() for x in next(csv.reader([text]))]
        if not header_seen:
            if fields != HEADER:
                raise IngestError(lineno, f"expected header {','.join(HEADER)}, got {text!r}")
            header_seen = True
            continue
        if len(fields) != 3:
            raise IngestError(lineno, f"expected 3 fields, got {len(fields)}")
        try:
            d = int(fields[0])
        except ValueError:
            raise IngestError(lineno, f"malformed discriminant {fields[0]!r}") from None
        try:
            a0, a1 = parse_shape(fields[1]), parse_shape(fields[2])
        except ValueError as exc:
            raise IngestError(lineno, str(exc)) from None
        if d in seen:
            report.duplicates.append((lineno, d))
            warnings.warn(
                f"line {lineno}: duplicate d = {d} (first on line {seen[d]}); keeping the first",
                DuplicateRecordWarning,
                stacklevel=2,
            )
            continue
        seen[d] = lineno
        rec = SurveyRecord(d, a0, a1, source)
        report.records.append(rec)
        reason = check_record(rec, p)
        if reason:
            report.anomalies.append(Anomaly(lineno, rec, reason))
    if not header_seen:
        raise IngestError(0, "missing header")
    return report


def ingest_csv(path: str | Path, p: int) -> IngestReport:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_records(fh, p, source=str(path))


def render_csv(records: Iterable[SurveyRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for r in records:
        writer.writerow([r.d, format_shape(r.a0), format_shape(r.a1)])
    return buf.getvalue()


def records_json(records: Iterable[SurveyRecord]) -> list[dict]:
    return [{"d": r.d, "a0": format_shape(r.a0), "a1": format_shape(r.a1)} for r in records]


# ------------------------------------------------------------ tabulation


@dataclass(frozen=True)
class TableRow:
    shape: Shape | None  # None for the tail beyond max_r
    r: int | None
    count: int
    empirical: Fraction
    predicted: Fraction

    @property
    def deviation(self) -> Fraction:
        return self.empirical - self.predicted


@dataclass
class Tabulation:
    p: int
    m: int
    max_r: int
    total: int
    excluded: int
    rows: list[TableRow]
    unexpected: dict[Shape, int]  # observed shapes outside the predicted list
    note: str = ""

    @property
    def absolute_deviation(self) -> Fraction:
        off_list = Fraction(sum(self.unexpected.values()), self.total) if self.total else Fraction(0)
        return sum((abs(r.deviation) for r in self.rows), Fraction(0)) + off_list

    @property
    def chi_square(self) -> float:
        """Descriptive sum of (O - E)^2 / E over rows with E > 0."""
        out = 0.0
        for r in self.rows:
            if r.predicted and self.total:
                expected = float(r.predicted) * self.total
                out += (r.count - expected) ** 2 / expected
        return out

    def columns(self) -> list[str]:
        return [pretty_shape(r.shape, self.p) if r.shape is not None else f"r>{self.max_r}" for r in self.rows]

    def render(self, label: str = "Empirical") -> str:
        headers = ["", "Number of d"] + self.columns()
        emp = [label, str(self.total)] + [decimal_str(r.empirical, PLACES) for r in self.rows]
        pred = ["Predicted", ""] + [decimal_str(r.predicted, PLACES) for r in self.rows]
        lines = [text_table(headers, [emp, pred], title=f"p = {self.p}, A_0 cyclic of order {self.p}^{self.m}")]
        lines.append(
            f"excluded (other A_0): {self.excluded}; absolute deviation "
            f"{decimal_str(self.absolute_deviation, PLACES)}; chi-square {self.chi_square:.4f}"
        )
        if self.unexpected:
            lines.append(
                "shapes outside the predicted list: "
                + ", ".join(f"{format_shape(s)} x{n}" for s, n in sorted(self.unexpected.items()))
            )
        if self.note:
            lines.append(self.note)
        return "\n".join(lines)

    def as_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "max_r": self.max_r,
            "number_of_d": self.total,
            "excluded": self.excluded,
            "columns": [
                {
                    "shape": format_shape(r.shape) if r.shape is not None else f"r>{self.max_r}",
                    "label": col,
                    "count": r.count,
                    "empirical": decimal_str(r.empirical, PLACES),
                    "predicted": decimal_str(r.predicted, PLACES),
                    "empirical_exact": str(r.empirical),
                    "predicted_exact": str(r.predicted),
                }
                for r, col in zip(self.rows, self.columns())
            ],
            "absolute_deviation": decimal_str(self.absolute_deviation, PLACES),
            "chi_square": round(self.chi_square, 4),
            "unexpected": {format_shape(s): n for s, n in sorted(self.unexpected.items())},
            "note": self.note,
        }


def tabulate(records: Iterable[SurveyRecord], p: int, m: int, max_r: int | None = None) -> Tabulation:
    """Empirical A_1 frequencies against the predicted distribution.

    Only records with A_0 cyclic of order p^m are used; the rest are
    counted as excluded. Shapes are listed up to r = max_r (default: the
    largest r observed, at least 1), followed by a tail row for r > max_r.
    """
    records = list(records)
    chosen = [r for r in records if r.m == m]
    excluded = len(records) - len(chosen)
    observed = Counter(r.a1 for r in chosen)
    if max_r is None:
        max_r = max([sum(s) - m for s in observed] + [1])
    dist = predicted_a1_distribution(p, m, max_r)
    total = len(chosen)
    rows = []
    listed = set()
    for e in dist.entries:
        n = observed.get(e.shape, 0)
        listed.add(e.shape)
        rows.append(TableRow(e.shape, e.r, n, Fraction(n, total) if total else Fraction(0), e.probability))
    possible_tail = allowed_a1(p, m, max(sum(s) for s in observed) if observed else m)
    tail = sum(n for s, n in observed.items() if s not in listed and s in possible_tail)
    rows.append(TableRow(None, None, tail, Fraction(tail, total) if total else Fraction(0), dist.tail_mass))
    unexpected = {s: n for s, n in observed.items() if s not in listed and s not in possible_tail}
    note = "" if total else f"no records with A_0 cyclic of order {p}^{m}"
    return Tabulation(p, m, max_r, total, excluded, rows, unexpected, note)


def synthetic_records(p: int, m: int, max_r: int, scale: int = 1) -> list[SurveyRecord]:
    """Records in exact proportion to the predicted distribution.

    N = scale * p^max_r records; the tail mass goes to the first shape
    with r = max_r + 1.
    """
    n = scale * p**max_r
    dist = predicted_a1_distribution(p, m, max_r)
    out: list[SurveyRecord] = []
    d = -1
    for e in dist.entries:
        count = e.probability * n
        assert count.denominator == 1
        for _ in range(int(count)):
            out.append(SurveyRecord(d, (m,), e.shape))
            d -= 1
    tail_shape = possible_a1_shapes(p, m, m + max_r + 1)[-1].shape
    for _ in range(int(dist.tail_mass * n)):
        out.append(SurveyRecord(d, (m,), tail_shape))
        d -= 1
    return out


__all__ = [
    "SurveyRecord",
    "IngestError",
    "DuplicateRecordWarning",
    "Anomaly",
    "IngestReport",
    "allowed_a1",
    "check_record",
    "parse_records",
    "ingest_csv",
    "render_csv",
    "records_json",
    "TableRow",
    "Tabulation",
    "tabulate",
    "synthetic_records",
]
