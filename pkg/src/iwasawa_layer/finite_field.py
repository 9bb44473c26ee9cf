"""Polynomials over F_p and the extension fields F_{p^k}.

Polynomials are tuples of coefficients in ascending degree with no
trailing zeros; ``()`` is the zero polynomial. Elements of F_{p^k} are
encoded as integers ``sum c_i p^i`` (polynomial basis modulo the field's
defining polynomial); zero is 0 and the prime field is ``range(p)``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .padic import is_prime

Poly = tuple[int, ...]


def trim(c, p: int) -> Poly:
    c = [x % p for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(f: Poly) -> int:
    return len(f) - 1


def poly_add(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)], p)


def poly_sub(f: Poly, g: Poly, p: int) -> Poly:
    return poly_add(f, tuple(-x for x in g), p)


def poly_mul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out, p)


def poly_scale(f: Poly, c: int, p: int) -> Poly:
    return trim([c * x for x in f], p)


def poly_pow(f: Poly, n: int, p: int) -> Poly:
    result, base = (1,), f
    while n:
        if n & 1:
            result = poly_mul(result, base, p)
        base = poly_mul(base, base, p)
        n >>= 1
    return result


def poly_divmod(f: Poly, g: Poly, p: int) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - dg, 0)
    for k in range(len(r) - 1 - dg, -1, -1):
        c = r[k + dg] * inv % p
        q[k] = c
        if c:
            for i, b in enumerate(g):
                r[k + i] = (r[k + i] - c * b) % p
    return trim(q, p), trim(r[:dg], p)


def poly_mod(f: Poly, g: Poly, p: int) -> Poly:
    return poly_divmod(f, g, p)[1]


def poly_monic(f: Poly, p: int) -> Poly:
    return poly_scale(f, pow(f[-1], -1, p), p) if f else f


def poly_gcd(f: Poly, g: Poly, p: int) -> Poly:
    while g:
        f, g = g, poly_mod(f, g, p)
    return poly_monic(f, p)


def poly_derivative(f: Poly, p: int) -> Poly:
    return trim([i * c for i, c in enumerate(f)][1:], p)


def poly_eval(f: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def poly_compose(f: Poly, g: Poly, p: int) -> Poly:
    """f(g(t))."""
    acc: Poly = ()
    for c in reversed(f):
        acc = poly_add(poly_mul(acc, g, p), (c,), p)
    return acc


def poly_powmod(f: Poly, n: int, mod: Poly, p: int) -> Poly:
    result, base = (1,), poly_mod(f, mod, p)
    while n:
        if n & 1:
            result = poly_mod(poly_mul(result, base, p), mod, p)
        base = poly_mod(poly_mul(base, base, p), mod, p)
        n >>= 1
    return result


def is_squarefree(f: Poly, p: int) -> bool:
    if len(f) <= 1:
        return True
    d = poly_derivative(f, p)
    if not d:
        return False
    return len(poly_gcd(f, d, p)) == 1


def pth_root(f: Poly, p: int) -> Poly:
    """g with g^p = f, for f whose exponents are all multiples of p (over F_p)."""
    if any(c for i, c in enumerate(f) if i % p):
        raise ValueError("not a p-th power")
    return trim(f[::p], p)


def squarefree_decomposition(f: Poly, p: int) -> list[tuple[Poly, int]]:
    """Monic squarefree factors with multiplicities, f = lc * prod a_i^e_i."""
    f = poly_monic(f, p)
    if len(f) <= 1:
        return []
    out: dict[int, Poly] = {}

    def absorb(poly: Poly, mult: int):
        if len(poly) > 1:
            out[mult] = poly_mul(out.get(mult, (1,)), poly, p)

    # Yun's algorithm; a leftover p-th power is handled recursively
    d = poly_derivative(f, p)
    c = poly_gcd(f, d, p) if d else f
    w = poly_divmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = poly_gcd(w, c, p)
        absorb(poly_divmod(w, y, p)[0], i)
        w = y
        c = poly_divmod(c, y, p)[0]
        i += 1
    if len(c) > 1:
        for g, e in squarefree_decomposition(pth_root(c, p), p):
            absorb(g, e * p)
    return sorted(((g, e) for e, g in out.items()), key=lambda x: x[1])


def squarefree_part(f: Poly, p: int) -> tuple[Poly, Poly]:
    """(F, S) with f = F * S^2 and F squarefree; F keeps f's leading coefficient."""
    F: Poly = (f[-1],)
    S: Poly = (1,)
    for g, e in squarefree_decomposition(f, p):
        if e % 2:
            F = poly_mul(F, g, p)
        S = poly_mul(S, poly_pow(g, e // 2, p), p)
    return F, S


def is_irreducible(f: Poly, p: int) -> bool:
    """Rabin's test."""
    n = degree(f)
    if n < 1:
        return False
    f = poly_monic(f, p)
    x = poly_mod((0, 1), f, p)
    primes = [d for d in range(2, n + 1) if n % d == 0 and is_prime(d)]
    for d in primes:
        h = poly_sub(poly_powmod(x, p ** (n // d), f, p), x, p)
        if len(poly_gcd(f, h, p)) > 1:
            return False
    return poly_sub(poly_powmod(x, p**n, f, p), x, p) == ()


def monic_polys(p: int, n: int):
    """All monic polynomials of degree n, lower coefficients counting up in base p."""
    for code in range(p**n):
        coeffs = []
        for _ in range(n):
            code, c = divmod(code, p)
            coeffs.append(c)
        yield tuple(coeffs) + (1,)


def least_irreducible(p: int, k: int) -> Poly:
    """Least monic irreducible of degree k, comparing coefficients from
    degree k-1 down to the constant term."""
    # monic_polys yields in exactly that order
    for f in monic_polys(p, k):
        if is_irreducible(f, p):
            return f
    raise ArithmeticError(f"no irreducible of degree {k} over F_{p}")


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FiniteField:
    """F_{p^k} with exp/log tables for a primitive element."""

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = least_irreducible(p, k) if k > 1 else (0, 1)
        self.generator = self._find_generator()
        self._build_tables()

    def __repr__(self):
        return f"FiniteField({self.p}^{self.k})"

    def to_poly(self, code: int) -> Poly:
        c = []
        while code:
            code, r = divmod(code, self.p)
            c.append(r)
        return tuple(c)

    def from_poly(self, f: Poly) -> int:
        code = 0
        for c in reversed(f):
            code = code * self.p + c % self.p
        return code

    def _mul_poly(self, a: Poly, b: Poly) -> Poly:
        if self.k == 1:
            return trim([(a[0] if a else 0) * (b[0] if b else 0)], self.p)
        return poly_mod(poly_mul(a, b, self.p), self.modulus, self.p)

    def _find_generator(self) -> int:
        n = self.q - 1
        factors = _prime_factors(n)
        for code in range(2 if self.k == 1 else self.p, self.q):
            g = self.to_poly(code)
            if self.k == 1:
                if all(pow(code, n // f, self.p) != 1 for f in factors):
                    return code
                continue
            if all(poly_powmod(g, n // f, self.modulus, self.p) != (1,) for f in factors):
                return code
        if self.q == 2:
            return 1
        raise ArithmeticError("no primitive element found")

    def _build_tables(self):
        p, k, n = self.p, self.k, self.q - 1
        g = self.to_poly(self.generator)
        # column j: digits of x^j * g
        mul_g = np.zeros((k, k), dtype=np.int64)
        for j in range(k):
            col = self._mul_poly(tuple([0] * j + [1]), g)
            mul_g[: len(col), j] = col
        block = min(256, n)
        powers = np.zeros((k, n), dtype=np.int64)
        powers[0, 0] = 1
        for i in range(1, block):
            powers[:, i] = mul_g @ powers[:, i - 1] % p
        jump = np.eye(k, dtype=np.int64)
        for _ in range(block):
            jump = mul_g @ jump % p
        for start in range(block, n, block):
            stop = min(start + block, n)
            powers[:, start:stop] = (jump @ powers[:, start - block : start])[:, : stop - start] % p
        exp = (p ** np.arange(k, dtype=np.int64)) @ powers
        log = np.full(self.q, -1, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)
        if np.any(log[1:] < 0) or log[0] != -1:
            raise ArithmeticError("generator is not primitive")
        self.exp = exp
        self.log = log

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def add_prime(self, a: np.ndarray, c: int) -> np.ndarray:
        """a + c for c in the prime field (only the constant digit changes)."""
        d0 = a % self.p
        return a - d0 + (d0 + c) % self.p

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def evaluate(self, f: Poly, xs: np.ndarray | None = None) -> np.ndarray:
        """f(x) for f in F_p[x], at every x in xs (default: the whole field)."""
        xs = self.elements() if xs is None else xs
        acc = np.zeros_like(xs)
        for c in reversed(f):
            acc = self.add_prime(self.mul(acc, xs), c)
        return acc

    def quadratic_character(self, a: np.ndarray) -> np.ndarray:
        la = self.log[a]
        return np.where(a == 0, 0, np.where(la % 2 == 0, 1, -1))

    def is_square_prime(self, c: int) -> bool:
        """Whether the prime-field element c is a square in this field."""
        c %= self.p
        return c == 0 or self.log[c] % 2 == 0


@lru_cache(maxsize=None)
def finite_field(p: int, k: int) -> FiniteField:
    return FiniteField(p, k)
