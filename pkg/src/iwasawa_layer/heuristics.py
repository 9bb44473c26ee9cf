"""Heuristic distributions for class groups and the lambda-invariant.

Every probability here is a rational number times
``eta(p) = prod_{j>=1} (1 - p^-j)``. They are kept in that form so that
ratios cancel eta exactly; decimals appear only when a value is rendered.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from functools import lru_cache

import mpmath

from .classification import Shape, is_cyclic, possible_a1_shapes
from .padic import check_odd_prime

WORKING_DPS = 50
TRUNCATION = mpmath.mpf(10) ** -30


@dataclass(frozen=True)
class EtaValue:
    p: int
    value: mpmath.mpf
    terms: int
    error_bound: mpmath.mpf


@lru_cache(maxsize=None)
def eta(p: int) -> EtaValue:
    """prod_{j=1}^{J} (1 - p^-j) with J the first index where p^-J < 1e-30.

    The neglected factors change the product by at most sum_{j>J} p^-j.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    with mpmath.workdps(WORKING_DPS):
        value = mpmath.mpf(1)
        J = 0
        while True:
            J += 1
            term = mpmath.mpf(p) ** -J
            value *= 1 - term
            if term < TRUNCATION:
                break
        bound = mpmath.mpf(p) ** -J / (p - 1)
        return EtaValue(p, +value, J, bound)


@dataclass(frozen=True)
class HeuristicValue:
    """A probability of the form ``coefficient * eta(p)``."""

    p: int
    coefficient: Fraction
    label: str = field(default="", compare=False)

    @property
    def value(self) -> mpmath.mpf:
        with mpmath.workdps(WORKING_DPS):
            return mpmath.mpf(self.coefficient.numerator) / self.coefficient.denominator * eta(
                self.p
            ).value

    def __float__(self) -> float:
        return float(self.value)

    def __add__(self, other: "HeuristicValue") -> "HeuristicValue":
        if other.p != self.p:
            raise ValueError("mismatched p")
        return HeuristicValue(self.p, self.coefficient + other.coefficient, self.label)

    def scaled(self, factor: Fraction) -> "HeuristicValue":
        return HeuristicValue(self.p, self.coefficient * factor, self.label)

    def ratio(self, other: "HeuristicValue") -> Fraction:
        """Exact quotient; the eta factors cancel."""
        if other.p != self.p:
            raise ValueError("mismatched p")
        return self.coefficient / other.coefficient

    def rounded(self, places: int) -> str:
        return decimal_str(self.value, places)


def decimal_str(x, places: int) -> str:
    """Round half-up to a fixed number of places (Fraction, mpf or int)."""
    if isinstance(x, Fraction):
        d = Decimal(x.numerator) / Decimal(x.denominator)
    else:
        with mpmath.workdps(WORKING_DPS):
            d = Decimal(mpmath.nstr(mpmath.mpf(x), 40, strip_zeros=False))
    return str(d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP))


def _partial_product(p: int, r: int, power: int) -> Fraction:
    out = Fraction(1)
    for j in range(1, r + 1):
        out *= (1 - Fraction(1, p**j)) ** power
    return out


def clm_rank_prob(p: int, r: int) -> HeuristicValue:
    """P(p-rank = r) = p^(-r^2) eta prod_{j<=r} (1 - p^-j)^-2."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return HeuristicValue(p, Fraction(1, p ** (r * r)) * _partial_product(p, r, -2), f"clm rank={r}")


def clm_cyclic_prob(p: int) -> HeuristicValue:
    """P(A_0 cyclic) = p^-1 (1 - p^-1)^-2 eta."""
    return HeuristicValue(p, Fraction(1, p) / (1 - Fraction(1, p)) ** 2, "clm cyclic")


def ejv_lambda_prob(p: int, r: int) -> HeuristicValue:
    """P(lambda = r) = p^-r eta prod_{j<=r} (1 - p^-j)^-1."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return HeuristicValue(p, Fraction(1, p**r) * _partial_product(p, r, -1), f"ejv lambda={r}")


def ejv_lambda_one_direct(p: int) -> mpmath.mpf:
    """p^-1 prod_{j>=2} (1 - p^-j), multiplied out directly."""
    with mpmath.workdps(WORKING_DPS):
        value = mpmath.mpf(1) / p
        j = 2
        while True:
            term = mpmath.mpf(p) ** -j
            value *= 1 - term
            if term < TRUNCATION:
                return +value
            j += 1


def new_lambda_prob(p: int, r: int) -> HeuristicValue:
    """sum_{k=1}^{r} P(rank = k) p^-(r-k) (p-1)/p."""
    if r < 1:
        raise ValueError("r must be >= 1")
    total = Fraction(0)
    for k in range(1, r + 1):
        total += clm_rank_prob(p, k).coefficient * Fraction(1, p ** (r - k)) * Fraction(p - 1, p)
    return HeuristicValue(p, total, f"new lambda={r}")


def aut_size_exponent(p: int, m: int, r: int) -> tuple[int, int]:
    """(p - 1, m + r - 1): the unit group of a quotient of order p^(m+r)."""
    if m < 1 or r < 1:
        raise ValueError("need m >= 1 and r >= 1")
    return p - 1, m + r - 1


def aut_size(p: int, m: int, r: int) -> int:
    unit, exp = aut_size_exponent(p, m, r)
    return unit * p**exp


@dataclass(frozen=True)
class A1Prediction:
    shape: Shape
    r: int
    j_count: int
    probability: Fraction


@dataclass(frozen=True)
class A1Distribution:
    p: int
    m: int
    max_r: int
    entries: tuple[A1Prediction, ...]
    tail_mass: Fraction

    def total(self) -> Fraction:
        return sum((e.probability for e in self.entries), Fraction(0))

    def cyclic_mass(self) -> Fraction:
        return sum((e.probability for e in self.entries if is_cyclic(e.shape)), Fraction(0))

    def as_dict(self) -> dict[Shape, Fraction]:
        return {e.shape: e.probability for e in self.entries}


def a1_normalizer(p: int, m: int) -> Fraction:
    """sum over all possible A_1 of 1/|Aut|: (p-1) * sum_r 1/((p-1) p^(r+m-1))."""
    # geometric series in 1/p starting at p^-m
    return Fraction(1, p**m) / (1 - Fraction(1, p))


def predicted_a1_distribution(p: int, m: int, max_r: int) -> A1Distribution:
    """Frequencies of A_1 weighted by the inverse size of its automorphism group."""
    check_odd_prime(p)
    normalizer = a1_normalizer(p, m)
    assert normalizer == Fraction(1, (p - 1) * p ** (m - 1))
    entries = []
    for entry in possible_a1_shapes(p, m, m + max_r):
        weight = Fraction(entry.j_count, aut_size(p, m, entry.r))
        prob = weight / normalizer
        assert prob == Fraction(entry.j_count, p**entry.r)
        entries.append(A1Prediction(entry.shape, entry.r, entry.j_count, prob))
    return A1Distribution(p, m, max_r, tuple(entries), Fraction(1, p**max_r))


@dataclass(frozen=True)
class CompatibilityReport:
    p: int
    expected: Fraction
    heuristic_ratio: Fraction
    heuristic_ratio_numeric: mpmath.mpf
    cyclic_masses: dict[int, Fraction]
    ok: bool


def compatibility_check(p: int, max_m: int = 3) -> CompatibilityReport:
    """Three routes to P(A_1 cyclic | A_0 cyclic) = (p-1)/p."""
    expected = Fraction(p - 1, p)
    ejv1 = ejv_lambda_prob(p, 1)
    clm = clm_cyclic_prob(p)
    exact = ejv1.ratio(clm)
    with mpmath.workdps(WORKING_DPS):
        numeric = ejv_lambda_one_direct(p) / clm.value
        numeric_ok = abs(numeric - mpmath.mpf(p - 1) / p) < mpmath.mpf(10) ** -25
    masses = {m: predicted_a1_distribution(p, m, 1).cyclic_mass() for m in range(1, max_m + 1)}
    ok = exact == expected and numeric_ok and all(v == expected for v in masses.values())
    return CompatibilityReport(p, expected, exact, numeric, masses, ok)
