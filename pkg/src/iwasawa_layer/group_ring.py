"""The group ring Z_p[sigma], sigma^p = 1, at finite precision.

Elements are stored in the basis 1, T, ..., T^(p-1) with T = sigma - 1.
The ring maps onto Z_p[zeta] (sigma -> zeta, T -> pi = zeta - 1) and onto
Z_p (augmentation, sigma -> 1); together these realise the group ring as
a fiber product over F_p.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

from .padic import LocalMatrix, PAdicInt, check_odd_prime, int_valuation, smith_normal_form


class GroupRing:
    """Z_p[sigma] modulo p^N, with the reduction rule for T^p."""

    def __init__(self, p: int, N: int):
        check_odd_prime(p)
        if N < 1:
            raise ValueError("precision must be positive")
        self.p = p
        self.precision = N
        self.modulus = p**N
        # (1+T)^p = 1  =>  T^p = -sum_{k=1}^{p-1} C(p,k) T^k
        self.t_power_p = tuple(
            0 if k == 0 else -comb(p, k) % self.modulus for k in range(p)
        )
        assert self.t_power_p[1] == -p % self.modulus

    def __repr__(self):
        return f"GroupRing(p={self.p}, N={self.precision})"

    def __eq__(self, other):
        return (
            isinstance(other, GroupRing)
            and (self.p, self.precision) == (other.p, other.precision)
        )

    def __hash__(self):
        return hash((GroupRing, self.p, self.precision))

    def element(self, coeffs: Sequence[int]) -> "GroupRingElement":
        coeffs = list(coeffs)
        if len(coeffs) > self.p:
            return self._reduce(coeffs)
        coeffs += [0] * (self.p - len(coeffs))
        return GroupRingElement(self, tuple(c % self.modulus for c in coeffs))

    def scalar(self, c: int) -> "GroupRingElement":
        return self.element([c])

    @property
    def one(self) -> "GroupRingElement":
        return self.scalar(1)

    @property
    def zero(self) -> "GroupRingElement":
        return self.scalar(0)

    @property
    def T(self) -> "GroupRingElement":
        return self.element([0, 1])

    @property
    def sigma(self) -> "GroupRingElement":
        return self.element([1, 1])

    def T_power(self, n: int) -> "GroupRingElement":
        if n < 0:
            raise ValueError("negative power")
        return self.T**n

    def from_sigma_basis(self, coeffs: Sequence[int]) -> "GroupRingElement":
        """Element sum a_i sigma^i, i < p, rewritten in the T-basis."""
        out = [0] * self.p
        for i, a in enumerate(coeffs):
            if i >= self.p:
                raise ValueError("sigma exponents must be < p")
            for k in range(i + 1):
                out[k] += a * comb(i, k)
        return self.element(out)

    def _reduce(self, coeffs: list[int]) -> "GroupRingElement":
        p, q = self.p, self.modulus
        c = [x % q for x in coeffs]
        for deg in range(len(c) - 1, p - 1, -1):
            top = c[deg]
            if top:
                shift = deg - p
                for k in range(1, p):
                    c[shift + k] = (c[shift + k] + top * self.t_power_p[k]) % q
            c[deg] = 0
        return GroupRingElement(self, tuple(c[:p]))

    def norm_element(self) -> "GroupRingElement":
        return norm_element(self.p, self.precision)


@lru_cache(maxsize=None)
def group_ring(p: int, N: int) -> GroupRing:
    return GroupRing(p, N)


@dataclass(frozen=True, eq=False)
class GroupRingElement:
    ring: GroupRing
    coeffs: tuple[int, ...]

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.scalar(other)
        return (
            isinstance(other, GroupRingElement)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def _check(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            return self.ring.scalar(other)
        if not isinstance(other, GroupRingElement):
            raise TypeError(f"cannot combine with {type(other).__name__}")
        if other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        o = self._check(other)
        return self.ring.element([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return self.ring.element([a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return self.ring.element([-a for a in self.coeffs])

    def __mul__(self, other):
        o = self._check(other)
        prod = [0] * (2 * self.ring.p - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        return self.ring.element(prod)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def coefficient(self, i: int) -> PAdicInt:
        return PAdicInt(self.ring.p, self.ring.precision, self.coeffs[i])

    def signed_coeffs(self) -> list[int]:
        q = self.ring.modulus
        return [c - q if c > q // 2 else c for c in self.coeffs]

    def sigma_coeffs(self) -> list[int]:
        """Coefficients in the basis 1, sigma, ..., sigma^(p-1)."""
        p, q = self.ring.p, self.ring.modulus
        out = [0] * p
        for i, b in enumerate(self.coeffs):
            for k in range(i + 1):
                out[k] += b * comb(i, k) * (-1) ** (i - k)
        return [x % q for x in out]

    def __repr__(self):
        terms = [f"{c}*T^{i}" for i, c in enumerate(self.signed_coeffs()) if c]
        return " + ".join(terms) if terms else "0"


def norm_element(p: int, N: int) -> GroupRingElement:
    """1 + sigma + ... + sigma^(p-1) in the T-basis; coefficient of T^k is C(p, k+1)."""
    R = group_ring(p, N)
    total = R.zero
    power = R.one
    for _ in range(p):
        total = total + power
        power = power * R.sigma
    return total


def mul(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    return a * b


def augmentation(a: GroupRingElement) -> PAdicInt:
    """Sum of the sigma-basis coefficients."""
    R = a.ring
    return PAdicInt(R.p, R.precision, sum(a.sigma_coeffs()) % R.modulus)


def make_alpha(m: int, r: int, j: int, p: int, N: int) -> GroupRingElement:
    """The generator T^r + j p^(m-1) N of the ideal with parameters (m, r, j)."""
    if m < 1 or r < 1 or not 0 <= j <= p - 1:
        raise ValueError(f"need m >= 1, r >= 1, 0 <= j < p; got m={m}, r={r}, j={j}")
    R = group_ring(p, N)
    return R.T_power(r) + norm_element(p, N) * (j * p ** (m - 1))


# ---------------------------------------------------------------- Z_p[zeta]


class CyclotomicRing:
    """Z_p[zeta] modulo p^N in the basis 1, pi, ..., pi^(p-2)."""

    def __init__(self, p: int, N: int):
        check_odd_prime(p)
        self.p = p
        self.precision = N
        self.modulus = p**N
        # Phi_p(1 + pi) = sum_{k=1}^{p} C(p,k) pi^(k-1) = 0
        self.pi_power = tuple(-comb(p, k + 1) % self.modulus for k in range(p - 1))

    def __eq__(self, other):
        return (
            isinstance(other, CyclotomicRing)
            and (self.p, self.precision) == (other.p, other.precision)
        )

    def __hash__(self):
        return hash((CyclotomicRing, self.p, self.precision))

    def __repr__(self):
        return f"CyclotomicRing(p={self.p}, N={self.precision})"

    def element(self, coeffs: Sequence[int]) -> "CyclotomicElement":
        n = self.p - 1
        q = self.modulus
        c = [x % q for x in coeffs]
        for deg in range(len(c) - 1, n - 1, -1):
            top = c[deg]
            if top:
                shift = deg - n
                for k in range(n):
                    c[shift + k] = (c[shift + k] + top * self.pi_power[k]) % q
            c[deg] = 0
        c += [0] * (n - len(c))
        return CyclotomicElement(self, tuple(c[:n]))

    @property
    def one(self) -> "CyclotomicElement":
        return self.element([1])

    @property
    def pi(self) -> "CyclotomicElement":
        return self.element([0, 1])

    def unit_u(self) -> "CyclotomicElement":
        """The unit u with pi^(p-1) = u p: u = -sum_{k=1}^{p-1} C(p,k)/p pi^(k-1)."""
        return self.element([-(comb(self.p, k + 1) // self.p) for k in range(self.p - 1)])


@lru_cache(maxsize=None)
def cyclotomic_ring(p: int, N: int) -> CyclotomicRing:
    return CyclotomicRing(p, N)


@dataclass(frozen=True, eq=False)
class CyclotomicElement:
    ring: CyclotomicRing
    coeffs: tuple[int, ...]

    def __eq__(self, other):
        return (
            isinstance(other, CyclotomicElement)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def _check(self, other):
        if isinstance(other, int):
            return self.ring.element([other])
        if not isinstance(other, CyclotomicElement) or other.ring != self.ring:
            raise ValueError("ring mismatch")
        return other

    def __add__(self, other):
        o = self._check(other)
        return self.ring.element([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return self.ring.element([a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __mul__(self, other):
        o = self._check(other)
        prod = [0] * (2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        return self.ring.element(prod)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def coefficient_valuations(self) -> list[int]:
        return [int_valuation(c, self.ring.p, self.ring.precision) for c in self.coeffs]

    def pi_valuation(self) -> int:
        """Valuation with respect to pi; v_pi(p) = p - 1."""
        n = self.ring.p - 1
        vals = self.coefficient_valuations()
        return min(n * v + i for i, v in enumerate(vals))


def to_cyclotomic(a: GroupRingElement) -> CyclotomicElement:
    """The projection sigma -> zeta, i.e. T -> pi."""
    C = cyclotomic_ring(a.ring.p, a.ring.precision)
    return C.element(list(a.coeffs))


@dataclass(frozen=True)
class FiberPair:
    x: CyclotomicElement
    y: PAdicInt

    def is_compatible(self) -> bool:
        return fiber_check(self.x, self.y)


def fiber_check(x: CyclotomicElement, y: PAdicInt | int) -> bool:
    """x mod pi == y mod p in F_p."""
    p = x.ring.p
    return (x.coeffs[0] - int(y)) % p == 0


def to_fiber_pair(a: GroupRingElement) -> FiberPair:
    return FiberPair(to_cyclotomic(a), augmentation(a))


# ---------------------------------------------------- structure of Z_p[zeta]/pi^r


def cyclotomic_quotient_shape(p: int, r: int) -> list[int]:
    """Shape of Z_p[zeta]/pi^r: t copies of s+1 and p-1-t copies of s."""
    if r < 0:
        raise ValueError("r must be non-negative")
    s, t = divmod(r, p - 1)
    shape = [s + 1] * t + [s] * (p - 1 - t)
    return [e for e in shape if e > 0]


def pi_power_matrix(p: int, r: int, N: int | None = None) -> LocalMatrix:
    """Columns pi^r, ..., pi^(r+p-2) written in the basis 1, pi, ..., pi^(p-2)."""
    if N is None:
        N = r // (p - 1) + 3
    C = cyclotomic_ring(p, N)
    first = C.pi**r
    cols = [(first * C.pi**i).coeffs for i in range(p - 1)]
    return LocalMatrix.from_columns(p, N, cols)


def cyclotomic_quotient_shape_snf(p: int, r: int) -> list[int]:
    snf = smith_normal_form(pi_power_matrix(p, r))
    if not snf.determined:
        raise ArithmeticError("pi-power matrix not determined at precision")
    return snf.nonunit_valuations()
