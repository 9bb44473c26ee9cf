"""Closed-form structure of Z_p[sigma]/I and the list of possible A_1.

A finite abelian p-group is written as a non-increasing tuple of
exponents: ``(3, 2, 1, 1, 1)`` is p^3 x p^2 x p x p x p and ``()`` is the
trivial group. The text form joins exponents with dots ("3.2.1.1.1"),
with "0" for the trivial group.
"""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from typing import Iterable

Shape = tuple[int, ...]


def canonical_shape(exponents: Iterable[int]) -> Shape:
    exps = [int(e) for e in exponents]
    if any(e < 0 for e in exps):
        raise ValueError(f"negative exponent in {exps}")
    return tuple(sorted((e for e in exps if e > 0), reverse=True))


def format_shape(shape: Iterable[int]) -> str:
    shape = canonical_shape(shape)
    return ".".join(map(str, shape)) if shape else "0"


def parse_shape(text: str) -> Shape:
    text = text.strip()
    if not text:
        raise ValueError("empty shape")
    try:
        exps = [int(part) for part in text.split(".")]
    except ValueError:
        raise ValueError(f"malformed shape {text!r}") from None
    if text == "0":
        return ()
    if any(e <= 0 for e in exps) or exps != sorted(exps, reverse=True):
        raise ValueError(f"shape {text!r} must be positive and non-increasing")
    return tuple(exps)


def order_exponent(shape: Shape) -> int:
    return sum(shape)


def is_cyclic(shape: Shape) -> bool:
    """Non-trivial and cyclic."""
    return len(shape) == 1


def pretty_shape(shape: Shape, p: int) -> str:
    """Render as in the data tables, e.g. ``27x9``, or ``3^5x3^4x3`` once a factor reaches 100."""
    if not shape:
        return "1"
    if p ** shape[0] < 100:
        return "x".join(str(p**e) for e in shape)
    return "x".join(f"{p}^{e}" if e > 1 else str(p) for e in shape)


def _check_params(p: int, m: int, r: int, j: int) -> None:
    if m < 1 or r < 1:
        raise ValueError(f"need m >= 1 and r >= 1, got m={m}, r={r}")
    if not 1 <= j <= p - 1:
        raise ValueError(f"need 1 <= j <= p-1, got j={j}")


def closed_form_shape(p: int, m: int, r: int, j: int) -> Shape:
    """Structure of Z_p[sigma]/(T^r + j p^(m-1) N) from the case table."""
    _check_params(p, m, r, j)
    s, t = divmod(r, p - 1)
    if m < s:
        exps = [m - 1] + [s + 1] * (t + 1) + [s] * (p - t - 2)
    elif m > s and t != 0:
        exps = [m + 1] + [s + 1] * (t - 1) + [s] * (p - t)
    elif m > s:
        exps = [m + 1] + [s] * (p - 2) + [s - 1]
    elif t != 0:
        exps = [m - 1] + [m + 1] * (t + 1) + [m] * (p - t - 2)
    elif (j - (-1) ** m) % p != 0:
        exps = [m + 1, m - 1] + [m] * (p - 2)
    else:
        exps = [m] * p
    return canonical_shape(exps)


@dataclass(frozen=True)
class A1Candidate:
    shape: Shape
    j_count: int
    r: int

    @property
    def order_exponent(self) -> int:
        return sum(self.shape)


def possible_a1_shapes(p: int, m: int, max_order_exponent: int) -> list[A1Candidate]:
    """All possible A_1 for cyclic A_0 of order p^m, up to a bound on |A_1|.

    Each shape is reported with the r producing it and how many
    j in [1, p-1] do so; ordered by r, then by the least j producing it.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    entries: "OrderedDict[tuple[int, Shape], int]" = OrderedDict()
    for r in range(1, max_order_exponent - m + 1):
        for j in range(1, p):
            key = (r, closed_form_shape(p, m, r, j))
            entries[key] = entries.get(key, 0) + 1
    # insertion order already runs over j ascending within each r
    return [A1Candidate(shape, n, r) for (r, shape), n in entries.items()]


def a1_families(p: int, m: int, max_order_exponent: int) -> set[Shape]:
    """The three families of possible A_1, listed directly without the enumeration."""
    found: set[Shape] = set()
    bound = max_order_exponent
    if m * p <= bound:
        found.add(canonical_shape([m] * p))
    s = m
    while m - 1 + (p - 1) * s + 1 <= bound:
        for a in range(1, p):
            shape = canonical_shape([m - 1] + [s + 1] * a + [s] * (p - 1 - a))
            if sum(shape) <= bound:
                found.add(shape)
        s += 1
    for s in range(0, m):
        for b in range(0, p - 1):
            if m == s + 1 and b == p - 2:
                continue
            shape = canonical_shape([m + 1] + [s + 1] * b + [s] * (p - 1 - b))
            if sum(shape) <= bound:
                found.add(shape)
    return found


def is_lambda_one_pair(m: int, shape1: Shape) -> bool:
    """A_0 cyclic of order p^m and A_1 cyclic (of order p^(m+1))."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return tuple(shape1) == (m + 1,)


def is_lambda_one_by_order(m: int, shape1: Shape) -> bool:
    """The index criterion |A_1| / |A_0| = p."""
    return sum(shape1) == m + 1
