"""Class numbers of hyperelliptic curves over F_p and the F_3 tower survey.

The base field is K = F_3(X); its first Artin-Schreier layer is
K_1 = F_3(t) with t^3 - t + 1/X = 0, ramified only at X = 0. For each
quadratic field K(sqrt(h)) we compute the divisor class number h0 of
y^2 = h(x) and, when 3 | h0, the class number h1 of the pullback curve
over K_1, recording e0 = v_3(h0) and e1 = v_3(h1).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .finite_field import (
    Poly,
    finite_field,
    is_squarefree,
    monic_polys,
    poly_compose,
    poly_mul,
    poly_pow,
    poly_scale,
    squarefree_part,
    trim,
)
from .padic import int_valuation


class WeilBoundError(ArithmeticError):
    """A computed zeta function violates the Riemann hypothesis bounds."""


@dataclass(frozen=True)
class HyperellipticModel:
    """y^2 = f(x) over F_p with f squarefree."""

    p: int
    f: Poly

    def __post_init__(self):
        if len(self.f) < 2:
            raise ValueError("f must have positive degree")
        if not is_squarefree(self.f, self.p):
            raise ValueError("f must be squarefree")

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    @property
    def genus(self) -> int:
        return (self.degree - 1) // 2

    def points_at_infinity(self, k: int) -> int:
        if self.degree % 2:
            return 1
        return 2 if finite_field(self.p, k).is_square_prime(self.f[-1]) else 0


@dataclass(frozen=True)
class ZetaData:
    q: int
    genus: int
    point_counts: tuple[int, ...]
    numerator: tuple[int, ...]  # a_0 .. a_2g of P(T)
    class_number: int

    def reciprocal_roots(self) -> np.ndarray:
        return 1 / np.roots(list(self.numerator)[::-1]) if self.genus else np.array([])

    def predicted_count(self, k: int) -> int:
        """#C(F_{q^k}) from the numerator via Newton's identities."""
        g, a = self.genus, self.numerator
        # power sums s_i of reciprocal roots: s_k = -k a_k - sum_{i<k} s_i a_{k-i}
        s = []
        for n in range(1, k + 1):
            an = a[n] if n <= 2 * g else 0
            val = -n * an - sum(s[i - 1] * (a[n - i] if n - i <= 2 * g else 0) for i in range(1, n))
            s.append(val)
        return self.q**k + 1 - s[k - 1]


def point_count(f: Poly, k: int, p: int = 3) -> int:
    """Points on the smooth model of y^2 = f(x) over F_{p^k}."""
    model = HyperellipticModel(p, trim(f, p))
    F = finite_field(p, k)
    chi = F.quadratic_character(F.evaluate(model.f))
    return int(F.q + chi.sum()) + model.points_at_infinity(k)


def weil_bounds(q: int, g: int) -> tuple[int, int]:
    lo = (math.sqrt(q) - 1) ** (2 * g)
    hi = (math.sqrt(q) + 1) ** (2 * g)
    return math.floor(lo), math.ceil(hi)


def zeta_from_counts(q: int, g: int, counts) -> ZetaData:
    """Numerator of the zeta function from N_1..N_g.

    Power sums of the reciprocal roots give a_1..a_g by Newton's identities;
    the functional equation a_(2g-i) = q^(g-i) a_i fills in the rest.
    """
    counts = tuple(int(c) for c in counts)
    if len(counts) < g:
        raise ValueError(f"need {g} point counts, got {len(counts)}")
    s = [q**k + 1 - counts[k - 1] for k in range(1, g + 1)]
    a = [Fraction(1)]
    for k in range(1, g + 1):
        a.append(-sum(s[i - 1] * a[k - i] for i in range(1, k + 1)) / k)
    if any(x.denominator != 1 for x in a):
        raise WeilBoundError("non-integral zeta coefficients")
    coeffs = [int(x) for x in a] + [0] * g
    for i in range(g):
        coeffs[2 * g - i] = q ** (g - i) * coeffs[i]
    h = sum(coeffs)
    lo, hi = weil_bounds(q, g)
    if not lo <= h <= hi:
        raise WeilBoundError(f"class number {h} outside [{lo}, {hi}] for q={q}, g={g}")
    for k, n in enumerate(counts[:g], start=1):
        if abs(n - (q**k + 1)) > 2 * g * math.sqrt(q**k):
            raise WeilBoundError(f"N_{k} = {n} violates the Weil bound")
    return ZetaData(q, g, counts, tuple(coeffs), h)


def class_number(f: Poly, p: int = 3) -> tuple[int, ZetaData]:
    """Divisor class number h = P(1) of y^2 = f(x) over F_p."""
    model = HyperellipticModel(p, trim(f, p))
    g = model.genus
    counts = [point_count(model.f, k, p) for k in range(1, g + 1)]
    zeta = zeta_from_counts(p, g, counts)
    return zeta.class_number, zeta


# ------------------------------------------------------------ the survey


def _reverse(h: Poly, p: int) -> Poly:
    """X^8 h(1/X) made monic by X -> -X when its leading coefficient is -1."""
    padded = list(h) + [0] * (9 - len(h))
    rev = trim(padded[::-1], p)
    if rev[-1] != 1:
        rev = trim([c * (-1) ** i for i, c in enumerate(rev)], p)
        rev = poly_scale(rev, pow(rev[-1], -1, p), p)
    return rev


def reversal(h: Poly, p: int = 3) -> Poly:
    return _reverse(h, p)


def enumerate_h(deg: int = 7, p: int = 3) -> list[Poly]:
    """Monic squarefree h of the given odd degree with h(0) = 0, one per reversal pair.

    Candidates are visited in the order of ``monic_polys`` and a polynomial
    is kept unless its reversal was kept earlier.
    """
    if deg % 2 == 0:
        raise ValueError("degree must be odd")
    if deg != 7:
        # the reversal X^8 h(1/X) keeps degree 7 only for deg = 7
        raise ValueError("only degree 7 is supported")
    kept: list[Poly] = []
    seen: set[Poly] = set()
    for h in monic_polys(p, deg):
        if h[0] != 0 or not is_squarefree(h, p):
            continue
        if h in seen:
            continue
        kept.append(h)
        seen.add(h)
        seen.add(_reverse(h, p))
    return kept


def artin_schreier_pullback(h: Poly, p: int = 3) -> Poly:
    """H(t) = u^8 h(-1/u) with u = t^3 - t."""
    u = trim([0, -1, 0, 1], p)
    if len(h) - 1 > 8:
        raise ValueError("degree of h must be at most 8")
    H: Poly = ()
    for i, c in enumerate(h):
        if c:
            term = poly_scale(poly_pow(u, 8 - i, p), c * (-1) ** i, p)
            H = trim([a + b for a, b in _zip_pad(H, term)], p)
    return H


def _zip_pad(f, g):
    n = max(len(f), len(g))
    return [((f[i] if i < len(f) else 0), (g[i] if i < len(g) else 0)) for i in range(n)]


def first_layer_model(h: Poly, p: int = 3) -> HyperellipticModel:
    """The curve over K_1 defining K_1(sqrt(h)), in squarefree form."""
    if len(h) < 2 or h[0] != 0:
        raise ValueError("h must have h(0) = 0")
    if not is_squarefree(h, p):
        raise ValueError("h must be squarefree")
    H = artin_schreier_pullback(h, p)
    F, S = squarefree_part(H, p)
    assert poly_mul(F, poly_mul(S, S, p), p) == H
    if len(F) < 2:
        raise ValueError(f"pullback of {h} is a constant times a square")
    return HyperellipticModel(p, F)


E1_CLASSES = {2: "9", 3: "9x3 or 3x3x3", 4: "9x9", 5: "27x9", 6: "27x27"}


@dataclass(frozen=True)
class FFRecord:
    h: Poly
    h0: int
    e0: int
    h1: int | None
    e1: int | None

    @property
    def e1_class(self) -> str:
        if self.e0 != 1 or self.e1 is None:
            return ""
        return E1_CLASSES.get(self.e1, f"e1={self.e1}")


def survey_record(h: Poly, p: int = 3) -> FFRecord:
    h0, _ = class_number(h, p)
    e0 = int_valuation(h0, p, 10**6)
    h1 = e1 = None
    if e0 >= 1:
        h1, _ = class_number(first_layer_model(h, p).f, p)
        e1 = int_valuation(h1, p, 10**6)
    return FFRecord(h, h0, e0, h1, e1)


@dataclass
class FFSurvey:
    records: list[FFRecord]
    label: str = "full"
    violations: list[FFRecord] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def divisible(self) -> int:
        return sum(1 for r in self.records if r.e0 >= 1)

    def e0_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(r.e0 for r in self.records if r.e0 >= 1).items()))

    def e1_histogram(self) -> dict[int, int]:
        """e1 counts among the fields with e0 = 1."""
        return dict(sorted(Counter(r.e1 for r in self.records if r.e0 == 1).items()))

    def e1_fractions(self) -> dict[str, Fraction]:
        rows = [r for r in self.records if r.e0 == 1]
        out = {name: Fraction(0) for name in E1_CLASSES.values()}
        if not rows:
            return out
        for r in rows:
            name = r.e1_class
            out[name] = out.get(name, Fraction(0)) + Fraction(1, len(rows))
        return out


def survey_ff(first: int | None = None, p: int = 3, jobs: int = 1) -> FFSurvey:
    """Class numbers over the deduplicated degree-7 family (or its first n members)."""
    polys = enumerate_h(7, p)
    label = "full"
    if first is not None:
        polys = polys[:first]
        label = f"first {first}"
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            records = list(pool.map(survey_record, polys, [p] * len(polys), chunksize=8))
    else:
        records = [survey_record(h, p) for h in polys]
    violations = [r for r in records if r.e0 >= 1 and r.e1 is not None and r.e1 < r.e0 + 1]
    return FFSurvey(records, label, violations)


def e1_predicted(p: int = 3, max_r: int = 5) -> dict[str, Fraction]:
    """Predicted e1 classes: A_1 distribution for m = 1 with equal orders merged."""
    from .heuristics import predicted_a1_distribution

    dist = predicted_a1_distribution(p, 1, max_r)
    out: dict[str, Fraction] = {}
    for e in dist.entries:
        name = E1_CLASSES.get(sum(e.shape))
        if name is not None:
            out[name] = out.get(name, Fraction(0)) + e.probability
    return out


def poly_str(f: Poly) -> str:
    """Ascending coefficients, e.g. ``0,1,0,2,0,0,0,1``."""
    return ",".join(map(str, f))


__all__ = [
    "HyperellipticModel",
    "ZetaData",
    "WeilBoundError",
    "point_count",
    "class_number",
    "zeta_from_counts",
    "enumerate_h",
    "reversal",
    "artin_schreier_pullback",
    "first_layer_model",
    "survey_record",
    "survey_ff",
    "FFRecord",
    "FFSurvey",
    "e1_predicted",
    "poly_str",
    "poly_compose",
]
