"""Class groups of imaginary quadratic fields from reduced binary quadratic forms.

Forms are triples (a, b, c) with b^2 - 4ac = d < 0 and a > 0. The class
number is the number of reduced forms; the p-Sylow subgroup is built by
Gauss composition and described by the orders of its p^k-multiples.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .classification import Shape, canonical_shape, format_shape
from .padic import check_odd_prime, int_valuation

MAX_ABS_DISCRIMINANT = 10**8
TRIAL_LIMIT = 10**4  # trial division certifies squarefreeness up to TRIAL_LIMIT^2
UNIT_EXCEPTIONS = (-3, -4)


class DiscriminantError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("a must be positive")
        if self.discriminant >= 0:
            raise ValueError("form must be positive definite")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        return b >= 0 if (abs(b) == a or a == c) else True

    def reduced(self) -> "QuadForm":
        return reduce_form(self.a, self.b, self.c)

    def inverse(self) -> "QuadForm":
        return reduce_form(self.a, -self.b, self.c)

    def __mul__(self, other: "QuadForm") -> "QuadForm":
        return compose(self, other)

    def __pow__(self, n: int) -> "QuadForm":
        return form_pow(self, n)

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def reduce_form(a: int, b: int, c: int) -> QuadForm:
    while True:
        if not -a < b <= a:
            # b <- b + 2ka with k chosen to land in (-a, a]
            k = (a - b) // (2 * a)
            c = c + k * (b + k * a)
            b = b + 2 * k * a
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadForm(a, b, c)


def identity_form(d: int) -> QuadForm:
    return QuadForm(1, d % 2, (d % 2 - d) // 4)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(u, v, g) with u a + v b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return x0, y0, a


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Gauss composition via united forms, followed by reduction."""
    if f.discriminant != g.discriminant:
        raise ValueError("forms of different discriminants")
    a1, b1, c1 = f.a, f.b, f.c
    a2, b2, c2 = g.a, g.b, g.c
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        u, _, d = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        x2, y2, d1 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return reduce_form(a3, b3, c3)


def form_pow(f: QuadForm, n: int) -> QuadForm:
    if n < 0:
        return form_pow(f.inverse(), -n)
    result, base = identity_form(f.discriminant), f
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def is_squarefree_int(n: int) -> bool:
    """Trial division; exact for |n| <= 10^8."""
    n = abs(n)
    if n > TRIAL_LIMIT**2:
        raise DiscriminantError(f"|{n}| is outside the certified squarefree range")
    q = 2
    while q * q <= n:
        if n % q == 0:
            n //= q
            if n % q == 0:
                return False
        q += 1 if q == 2 else 2
    return True


def is_fundamental(d: int) -> bool:
    if d >= 0:
        raise DiscriminantError("d must be negative")
    if d % 4 == 1:
        return is_squarefree_int(d)
    if d % 4 == 0:
        return (d // 4) % 4 in (2, 3) and is_squarefree_int(d // 4)
    return False


def kronecker_odd(d: int, p: int) -> int:
    """(d | p) for an odd prime p."""
    r = pow(d % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def p_nonsplit(d: int, p: int) -> bool:
    check_odd_prime(p)
    return kronecker_odd(d, p) != 1


def reduced_forms(d: int) -> list[QuadForm]:
    """All reduced forms of discriminant d, sorted by (a, b)."""
    if d >= 0 or d % 4 not in (0, 1):
        raise DiscriminantError(f"{d} is not a negative discriminant")
    if -d > MAX_ABS_DISCRIMINANT:
        raise DiscriminantError(f"|d| = {-d} exceeds the budget {MAX_ABS_DISCRIMINANT}")
    A = math.isqrt(-d // 3)
    a = np.arange(1, A + 1, dtype=np.int64)[:, None]
    b = np.arange(d % 2, A + 1, 2, dtype=np.int64)[None, :]
    num = b * b - d
    ok = (b <= a) & (num % (4 * a) == 0)
    c = num // (4 * a)
    ok &= c >= a
    ai, bi = np.nonzero(ok)
    out = []
    for i, j in zip(ai.tolist(), bi.tolist()):
        aa, bb = i + 1, int(b[0, j])
        cc = (bb * bb - d) // (4 * aa)
        out.append(QuadForm(aa, bb, cc))
        if 0 < bb < aa < cc:
            out.append(QuadForm(aa, -bb, cc))
    out.sort(key=lambda f: (f.a, f.b))
    return out


def class_number(d: int) -> int:
    return len(reduced_forms(d))


def subgroup_closure(
    gens: Iterable[QuadForm], d: int, start: set[QuadForm] | None = None
) -> set[QuadForm]:
    """Subgroup generated by the given forms (and the subgroup ``start``)."""
    group = set(start) if start else {identity_form(d)}
    for g in gens:
        if g in group:
            continue
        frontier = list(group)
        while frontier:
            new = []
            for x in frontier:
                y = compose(x, g)
                if y not in group:
                    group.add(y)
                    new.append(y)
            frontier = new
    return group


def shape_from_elements(elements: set[QuadForm], p: int) -> Shape:
    """Shape of a finite abelian p-group from the sizes |p^k S|."""
    sizes = [len(elements)]
    current = elements
    while len(current) > 1:
        current = {form_pow(x, p) for x in current}
        sizes.append(len(current))
    logs = [int_valuation(s, p, 10**6) for s in sizes] + [0]
    above = [x - y for x, y in zip(logs, logs[1:])] + [0]
    exps: list[int] = []
    for k in range(len(above) - 1):
        exps += [k + 1] * (above[k] - above[k + 1])
    return canonical_shape(exps)


@dataclass(frozen=True)
class ClassGroupResult:
    d: int
    h: int
    p: int
    sylow_shape: Shape
    flagged: bool = False  # d = -3 or -4

    @property
    def sylow_text(self) -> str:
        return format_shape(self.sylow_shape)

    def row(self) -> dict:
        return {"d": self.d, "h": self.h, "sylow_shape": self.sylow_text}


def class_group(d: int, p: int) -> ClassGroupResult:
    check_odd_prime(p)
    if not is_fundamental(d):
        raise DiscriminantError(f"{d} is not a fundamental discriminant")
    forms = reduced_forms(d)
    h = len(forms)
    v = int_valuation(h, p, 10**6)
    shape: Shape = ()
    if v:
        cofactor = h // p**v
        target = p**v
        sylow = {identity_form(d)}
        for f in forms:
            if len(sylow) == target:
                break
            g = form_pow(f, cofactor)
            if g not in sylow:
                sylow = subgroup_closure([g], d, sylow)
        if len(sylow) != target:
            raise ArithmeticError(f"p-Sylow of size {len(sylow)}, expected {target}")
        shape = shape_from_elements(sylow, p)
    return ClassGroupResult(d, h, p, shape, d in UNIT_EXCEPTIONS)


def genus_count(d: int) -> int:
    """Number of genera 2^(t-1), t the number of primes dividing d."""
    n, t, q = -d, 0, 2
    while q * q <= n:
        if n % q == 0:
            t += 1
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        t += 1
    return 2 ** (t - 1)


# ----------------------------------------------------------------- surveys

_FAMILY = re.compile(r"^\s*-\s*(?:(\d+)\s*-\s*)?(\d*)\s*\*?\s*([a-z])\s*$")


@dataclass(frozen=True)
class Family:
    """Discriminants d = -(offset + step * j)."""

    offset: int
    step: int
    text: str

    def discriminant(self, j: int) -> int:
        return -(self.offset + self.step * j)


def parse_family(text: str, p: int) -> Family | None:
    """Parse ``-1-3j``, ``-3j``, ``-2-5k`` and the like.

    ``zero`` means d = -p k; ``nonsplit`` returns None, meaning every d with
    p non-split (indexed by j = |d|).
    """
    if text == "nonsplit":
        return None
    if text == "zero":
        text = f"-{p}k"
    m = _FAMILY.match(text)
    if not m:
        raise ValueError(f"unrecognised family {text!r}")
    offset = int(m.group(1) or 0)
    step = int(m.group(2) or 1)
    return Family(offset, step, text)


@dataclass
class SurveyResult:
    p: int
    family: str
    results: list[ClassGroupResult]
    skipped_not_fundamental: int = 0
    skipped_split: int = 0
    flagged: list[int] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.results)

    def buckets(self) -> dict[str, int]:
        """Counts of p ∤ h, cyclic of order p^m for each m, and non-cyclic."""
        out: Counter[str] = Counter()
        for r in self.results:
            if not r.sylow_shape:
                out["p∤h"] += 1
            elif len(r.sylow_shape) == 1:
                out[f"cyclic m={r.sylow_shape[0]}"] += 1
            else:
                out["non-cyclic"] += 1
        keys = ["p∤h"] + sorted((k for k in out if k.startswith("cyclic")), key=lambda k: int(k[9:]))
        keys += ["non-cyclic"]
        return {k: out.get(k, 0) for k in keys}

    def fractions(self) -> dict[str, Fraction]:
        n = self.count
        return {k: Fraction(v, n) if n else Fraction(0) for k, v in self.buckets().items()}

    def divisible_fraction(self) -> Fraction:
        n = self.count
        return Fraction(sum(1 for r in self.results if r.sylow_shape), n) if n else Fraction(0)


def _survey_one(args) -> tuple[int, ClassGroupResult | str]:
    d, p = args
    if not is_fundamental(d):
        return d, "not fundamental"
    if not p_nonsplit(d, p):
        return d, "split"
    return d, class_group(d, p)


def survey(
    p: int,
    family: str,
    jmin: int,
    jmax: int,
    jobs: int = 1,
    limit: int | None = None,
) -> SurveyResult:
    """Class groups for d in a family with jmin <= j <= jmax.

    With ``limit``, stops after that many qualifying discriminants.
    d = -3 and -4 are computed but kept out of the statistics.
    """
    check_odd_prime(p)
    fam = parse_family(family, p)
    if jmin > jmax:
        raise ValueError("empty range")
    ds = [fam.discriminant(j) if fam else -j for j in range(jmin, jmax + 1)]
    if any(d >= 0 for d in ds):
        raise ValueError("family produces non-negative discriminants")
    out = SurveyResult(p, family, [])

    def consume(pairs):
        for d, res in pairs:
            if res == "not fundamental":
                out.skipped_not_fundamental += 1
            elif res == "split":
                out.skipped_split += 1
            elif res.flagged:
                out.flagged.append(d)
            else:
                out.results.append(res)
                if limit is not None and out.count >= limit:
                    return

    tasks = [(d, p) for d in ds]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            consume(pool.map(_survey_one, tasks, chunksize=64))
    else:
        consume(map(_survey_one, tasks))
    out.results.sort(key=lambda r: -r.d)
    return out


__all__ = [
    "QuadForm",
    "ClassGroupResult",
    "DiscriminantError",
    "reduce_form",
    "identity_form",
    "compose",
    "form_pow",
    "is_squarefree_int",
    "is_fundamental",
    "kronecker_odd",
    "p_nonsplit",
    "reduced_forms",
    "class_number",
    "subgroup_closure",
    "shape_from_elements",
    "class_group",
    "genus_count",
    "Family",
    "parse_family",
    "SurveyResult",
    "survey",
]
