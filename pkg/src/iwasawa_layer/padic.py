"""Fixed-precision arithmetic in Z/p^N and matrix normal forms over it.

Residues are plain Python ints in ``[0, p**N)``. A residue of 0 has
valuation ``N``, read as "zero at precision" (divisible by at least p^N).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

PRECISION_GUARD_ENV = "IWASAWA_PRECISION_GUARD"


class PrecisionError(ArithmeticError):
    """A result could not be determined at the working precision."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def check_odd_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


def int_valuation(x: int, p: int, cap: int) -> int:
    """p-adic valuation of the integer ``x``, capped at ``cap``."""
    if x == 0:
        return cap
    v = 0
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v


def precision_guard() -> int:
    raw = os.environ.get(PRECISION_GUARD_ENV)
    if raw is None or raw == "":
        return 2
    guard = int(raw)
    if guard < 0:
        raise ValueError(f"{PRECISION_GUARD_ENV} must be non-negative")
    return guard


def default_precision(p: int, m: int, r: int) -> int:
    """Working precision for the ideal with parameters (m, r).

    Every elementary divisor of the quotient has exponent at most
    ``max(m, s) + 1`` with ``s = r // (p - 1)``, so ``m + ceil(r/(p-1))``
    plus the guard leaves all divisors determined.
    """
    return m + -(-r // (p - 1)) + precision_guard()


@dataclass(frozen=True)
class PAdicInt:
    p: int
    precision: int
    value: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be positive")
        if not 0 <= self.value < self.p**self.precision:
            raise ValueError("value must be reduced mod p^N")

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def valuation(self) -> int:
        return int_valuation(self.value, self.p, self.precision)

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def _coerce(self, other) -> int:
        if isinstance(other, PAdicInt):
            if (other.p, other.precision) != (self.p, self.precision):
                raise ValueError(
                    f"cannot mix Z/{self.p}^{self.precision} with "
                    f"Z/{other.p}^{other.precision}"
                )
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def _new(self, v: int) -> "PAdicInt":
        return PAdicInt(self.p, self.precision, v % self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def inverse(self) -> "PAdicInt":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self.value} is not a unit mod {self.p}")
        return self._new(pow(self.value, -1, self.modulus))

    def signed(self) -> int:
        """Representative in the symmetric range around 0."""
        half = self.modulus // 2
        return self.value - self.modulus if self.value > half else self.value

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"PAdicInt({self.value} mod {self.p}^{self.precision})"


def padic_new(p: int, N: int, v: int) -> PAdicInt:
    check_odd_prime(p)
    if N < 1:
        raise ValueError("precision must be positive")
    return PAdicInt(p, N, v % p**N)


def valuation(x: PAdicInt) -> int:
    return x.valuation()


@dataclass(frozen=True)
class LocalMatrix:
    """A matrix over Z/p^N stored as rows of reduced integer residues."""

    p: int
    precision: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        q = self.p**self.precision
        width = {len(r) for r in self.rows}
        if len(width) > 1:
            raise ValueError("ragged matrix")
        reduced = tuple(tuple(x % q for x in r) for r in self.rows)
        object.__setattr__(self, "rows", reduced)

    @classmethod
    def from_rows(cls, p: int, N: int, rows: Sequence[Sequence[int]]) -> "LocalMatrix":
        return cls(p, N, tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def from_columns(cls, p: int, N: int, cols: Sequence[Sequence[int]]) -> "LocalMatrix":
        return cls(p, N, tuple(zip(*[tuple(int(x) for x in c) for c in cols])))

    @classmethod
    def identity(cls, p: int, N: int, n: int) -> "LocalMatrix":
        return cls(p, N, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def entry(self, i: int, j: int) -> PAdicInt:
        return PAdicInt(self.p, self.precision, self.rows[i][j])

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(c) for c in zip(*self.rows)]

    def signed_rows(self) -> list[list[int]]:
        q = self.modulus
        return [[x - q if x > q // 2 else x for x in r] for r in self.rows]

    def transpose(self) -> "LocalMatrix":
        return LocalMatrix(self.p, self.precision, tuple(zip(*self.rows)))

    def __matmul__(self, other: "LocalMatrix") -> "LocalMatrix":
        if (self.p, self.precision) != (other.p, other.precision):
            raise ValueError("precision mismatch")
        cols = other.columns()
        return LocalMatrix(
            self.p,
            self.precision,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows),
        )

    def hstack(self, other: "LocalMatrix") -> "LocalMatrix":
        if (self.p, self.precision) != (other.p, other.precision):
            raise ValueError("precision mismatch")
        return LocalMatrix(
            self.p, self.precision, tuple(a + b for a, b in zip(self.rows, other.rows))
        )


@dataclass(frozen=True)
class SNFResult:
    """Elementary divisors p^v_1 | ... | p^v_k of a matrix over Z/p^N.

    ``undetermined[i]`` is True when the i-th divisor vanished at the
    working precision, so only ``v_i >= N`` is known. ``left`` and
    ``right`` satisfy ``left @ M @ right == diag(p^v)`` mod p^N.
    """

    p: int
    precision: int
    divisor_valuations: tuple[int, ...]
    undetermined: tuple[bool, ...]
    left: LocalMatrix = field(repr=False)
    right: LocalMatrix = field(repr=False)

    @property
    def determined(self) -> bool:
        return not any(self.undetermined)

    def nonunit_valuations(self) -> list[int]:
        """Exponents of the cokernel's cyclic factors, non-increasing."""
        return sorted((v for v in self.divisor_valuations if v > 0), reverse=True)


def smith_normal_form(M: LocalMatrix) -> SNFResult:
    """Valuation-pivot Smith normal form over Z/p^N.

    At each step the entry of least valuation below N is taken as pivot
    (ties broken by smallest (row, col)), scaled to an exact power of p and
    used to clear its row and column. Entries that are zero at precision
    give divisors flagged as undetermined.
    """
    p, N = M.p, M.precision
    q = p**N
    nr, nc = M.shape
    A = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(nr)] for i in range(nr)]
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]
    vals: list[int] = []
    flags: list[bool] = []

    for k in range(min(nr, nc)):
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                v = int_valuation(A[i][j], p, N)
                if v < N and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            rest = min(nr, nc) - k
            vals.extend([N] * rest)
            flags.extend([True] * rest)
            break
        v, i, j = best
        if i != k:
            A[k], A[i] = A[i], A[k]
            U[k], U[i] = U[i], U[k]
        if j != k:
            for row in A:
                row[k], row[j] = row[j], row[k]
            for row in V:
                row[k], row[j] = row[j], row[k]

        pv = p**v
        inv = pow(A[k][k] // pv, -1, q)
        A[k] = [x * inv % q for x in A[k]]
        U[k] = [x * inv % q for x in U[k]]

        for i in range(k + 1, nr):
            f = A[i][k] // pv
            if f:
                A[i] = [(a - f * b) % q for a, b in zip(A[i], A[k])]
                U[i] = [(a - f * b) % q for a, b in zip(U[i], U[k])]
        for j in range(k + 1, nc):
            f = A[k][j] // pv
            if f:
                for row in A:
                    row[j] = (row[j] - f * row[k]) % q
                for row in V:
                    row[j] = (row[j] - f * row[k]) % q
        vals.append(v)
        flags.append(False)

    return SNFResult(
        p,
        N,
        tuple(vals),
        tuple(flags),
        LocalMatrix.from_rows(p, N, U),
        LocalMatrix.from_rows(p, N, V),
    )


def kernel_mod_ideal(M: LocalMatrix) -> list[tuple[int, ...]]:
    """Generators of the row kernel ``{x : x M = 0 mod p^N}``.

    With ``U M V = D`` the condition becomes ``(x U^-1) D = 0``, which is
    solved coordinatewise and mapped back through ``U``.
    """
    snf = smith_normal_form(M)
    p, N = M.p, M.precision
    q = p**N
    nr, _ = M.shape
    U = snf.left.rows
    gens = []
    for i in range(nr):
        v = snf.divisor_valuations[i] if i < len(snf.divisor_valuations) else N
        scale = p ** (N - v)
        if scale % q == 0:
            continue
        gens.append(tuple(scale * x % q for x in U[i]))
    return gens


def kernel_order_exponent(M: LocalMatrix) -> int:
    """log_p of the number of row vectors x with x M = 0 mod p^N."""
    snf = smith_normal_form(M)
    nr, _ = M.shape
    k = len(snf.divisor_valuations)
    return sum(snf.divisor_valuations) + (nr - k) * M.precision


def det_valuation_leibniz(M: LocalMatrix) -> int:
    """Valuation of det(M) by permutation expansion; an oracle for small sizes."""
    n, nc = M.shape
    if n != nc:
        raise ValueError("square matrix required")
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        prod = sign
        for i, j in enumerate(perm):
            prod *= M.rows[i][j]
        total += prod
    return int_valuation(total % M.modulus, M.p, M.precision)
