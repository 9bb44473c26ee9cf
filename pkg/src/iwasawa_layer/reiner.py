"""Finite-index ideals of Z_p[sigma] and the structure of their quotients.

An ideal is parameterized by (m, r, j): its image in Z_p[zeta] is
pi^r, its augmentation part is generated by j p^m, and p^m N is the
least multiple of the norm it contains. For j != 0 it is principal,
generated by ``alpha = T^r + j p^(m-1) N``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .classification import Shape, canonical_shape
from .group_ring import group_ring, make_alpha, norm_element
from .padic import (
    LocalMatrix,
    PrecisionError,
    SNFResult,
    check_odd_prime,
    default_precision,
    int_valuation,
    kernel_mod_ideal,
    smith_normal_form,
)

BRUTE_FORCE_BUDGET = 10**7


@dataclass(frozen=True)
class ReinerIdeal:
    p: int
    m: int
    r: int
    j: int

    def __post_init__(self):
        check_odd_prime(self.p)
        if self.m < 1 or self.r < 1:
            raise ValueError(f"need m >= 1 and r >= 1, got m={self.m}, r={self.r}")
        if not 0 <= self.j <= self.p - 1:
            raise ValueError(f"need 0 <= j <= p-1, got j={self.j}")

    @property
    def s(self) -> int:
        return self.r // (self.p - 1)

    @property
    def t(self) -> int:
        return self.r % (self.p - 1)

    @property
    def b(self) -> int:
        return self.j * self.p**self.m

    def precision(self) -> int:
        return default_precision(self.p, self.m, self.r)


@dataclass(frozen=True)
class QuotientModel:
    ideal: ReinerIdeal
    precision: int
    relation_matrix: LocalMatrix
    snf: SNFResult
    shape: Shape


def relation_matrix(I: ReinerIdeal, N: int | None = None) -> LocalMatrix:
    """p x p matrix whose i-th column is T^i * alpha in the T-basis."""
    if I.j == 0:
        raise ValueError("alpha does not generate I when j = 0; use relation_matrix_general")
    N = I.precision() if N is None else N
    R = group_ring(I.p, N)
    alpha = make_alpha(I.m, I.r, I.j, I.p, N)
    cols = [(R.T_power(i) * alpha).coeffs for i in range(I.p)]
    return LocalMatrix.from_columns(I.p, N, cols)


def relation_matrix_general(I: ReinerIdeal, N: int | None = None) -> LocalMatrix:
    """The p x (p+1) matrix: columns T^i * alpha, then p^m N."""
    N = I.precision() if N is None else N
    R = group_ring(I.p, N)
    alpha = make_alpha(I.m, I.r, I.j, I.p, N)
    cols = [(R.T_power(i) * alpha).coeffs for i in range(I.p)]
    cols.append((norm_element(I.p, N) * I.p**I.m).coeffs)
    return LocalMatrix.from_columns(I.p, N, cols)


def _relations(I: ReinerIdeal, N: int) -> LocalMatrix:
    return relation_matrix(I, N) if I.j else relation_matrix_general(I, N)


def multiplication_matrix(x_coeffs, p: int, N: int) -> LocalMatrix:
    """Matrix of y -> x*y on the T-basis (columns are x*T^i)."""
    R = group_ring(p, N)
    x = R.element(x_coeffs)
    return LocalMatrix.from_columns(p, N, [(x * R.T_power(i)).coeffs for i in range(p)])


def quotient_model(I: ReinerIdeal, N: int | None = None) -> QuotientModel:
    """Relation matrix and SNF at the given precision (no retry)."""
    N = I.precision() if N is None else N
    M = _relations(I, N)
    snf = smith_normal_form(M)
    return QuotientModel(I, N, M, snf, canonical_shape(snf.nonunit_valuations()))


def determined_model(I: ReinerIdeal, N: int | None = None) -> QuotientModel:
    """Quotient model, raising the precision by 2 (twice) until the SNF is determined."""
    N = I.precision() if N is None else N
    for attempt in range(3):
        model = quotient_model(I, N + 2 * attempt)
        if model.snf.determined and max(model.shape, default=0) < model.precision:
            return model
    raise PrecisionError(f"quotient by {I} not determined up to precision {N + 4}")


def quotient_shape_snf(I: ReinerIdeal, N: int | None = None) -> Shape:
    """Shape of Z_p[sigma]/I read off the Smith normal form of the relations.

    Raises PrecisionError if a divisor is still undetermined after raising
    the precision by 2 twice.
    """
    return determined_model(I, N).shape


# ------------------------------------------------------------ brute force


def _hermite_basis(gens, n: int, q: int) -> list[list[int]]:
    """Echelon basis of span(gens) + q Z^n by integer gcd row operations.

    Row c has zeros before column c and a positive divisor of q at c.
    """
    pool = [[int(x) % q for x in g] for g in gens]
    pool += [[q if i == c else 0 for i in range(n)] for c in range(n)]
    basis = []
    for c in range(n):
        pivot = None
        rest = []
        for row in pool:
            if row[c] == 0:
                rest.append(row)
                continue
            if pivot is None:
                pivot = row
                continue
            a, b = pivot[c], row[c]
            g, x, y = _egcd(a, b)
            new_pivot = [x * u + y * v for u, v in zip(pivot, row)]
            other = [(b // g) * u - (a // g) * v for u, v in zip(pivot, row)]
            assert other[c] == 0
            pivot = new_pivot
            rest.append([e % q if i > c else e for i, e in enumerate(other)])
        if pivot[c] < 0:
            pivot = [-e for e in pivot]
        basis.append([e % q if i > c else e for i, e in enumerate(pivot)])
        pool = rest
    return basis


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


class _CosetSpace:
    """Explicit coset representatives of Z^n / L with L in echelon form."""

    def __init__(self, basis: list[list[int]], q: int, budget: int):
        self.diag = [int(basis[c][c]) for c in range(len(basis))]
        self.q = q
        self.order = prod(self.diag)
        if self.order > budget:
            raise MemoryError(f"quotient of order {self.order} exceeds budget {budget}")
        if q**2 * max(self.diag) > 2**62:
            raise MemoryError("entries too large for the int64 enumeration")
        self.basis = np.array(basis, dtype=np.int64)

    def representatives(self) -> np.ndarray:
        grids = np.meshgrid(*[np.arange(d, dtype=np.int64) for d in self.diag], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def reduce(self, X: np.ndarray) -> np.ndarray:
        X = X.copy()
        n = X.shape[1]
        for c in range(n):
            f = np.floor_divide(X[:, c], self.diag[c])
            X -= f[:, None] * self.basis[c][None, :]
            if c + 1 < n:
                X[:, c + 1 :] %= self.q
        return X

    def encode(self, X: np.ndarray) -> np.ndarray:
        code = np.zeros(X.shape[0], dtype=np.int64)
        for c, d in enumerate(self.diag):
            code = code * d + X[:, c]
        return code


def _coset_space(I: ReinerIdeal, N: int, budget: int) -> _CosetSpace:
    M = _relations(I, N)
    basis = _hermite_basis(M.columns(), I.p, I.p**N)
    return _CosetSpace(basis, I.p**N, budget)


def shape_from_orders(order_exponents: list[int]) -> Shape:
    """Shape from o_k = log_p |p^k Q|, k = 0, 1, ..., ending at 0."""
    # o_k - o_(k+1) counts the cyclic factors of exponent > k
    above = [a - b for a, b in zip(order_exponents, order_exponents[1:])] + [0]
    exps = []
    for k in range(len(above) - 1):
        exps += [k + 1] * (above[k] - above[k + 1])
    return canonical_shape(exps)


def quotient_brute_force(
    I: ReinerIdeal, N: int | None = None, budget: int = BRUTE_FORCE_BUDGET
) -> Shape:
    """Shape of R_N / I_N by enumerating every coset.

    Coset representatives come from an echelon basis of the relation
    lattice plus p^N Z^p; the shape is recovered from the orders of
    p^k Q, counted by listing the distinct reduced multiples.
    """
    N = I.precision() if N is None else N
    space = _coset_space(I, N, budget)
    X = space.representatives()
    orders = []
    k = 0
    while True:
        count = len(np.unique(space.encode(space.reduce(X * I.p**k))))
        orders.append(int_valuation(count, I.p, 10**6))
        if count == 1:
            break
        k += 1
    shape = shape_from_orders(orders)
    if shape and shape[0] >= N:
        raise PrecisionError(f"exponent reached precision {N}; increase N")
    return shape


def fixed_subgroup_order_brute_force(
    I: ReinerIdeal, N: int | None = None, budget: int = BRUTE_FORCE_BUDGET
) -> int:
    """log_p of #{x in Q : T x = 0}, by enumeration of cosets."""
    N = I.precision() if N is None else N
    space = _coset_space(I, N, budget)
    X = space.representatives()
    Tm = np.array(multiplication_matrix([0, 1], I.p, N).rows, dtype=np.int64)
    TX = (X @ Tm.T) % I.p**N
    zero = space.reduce(TX)
    count = int(np.count_nonzero(~zero.any(axis=1)))
    return int_valuation(count, I.p, 10**6)


# --------------------------------------------------- norm image, fixed points


def _cokernel_exponent(M: LocalMatrix) -> int:
    snf = smith_normal_form(M)
    if not snf.determined:
        raise PrecisionError("cokernel not determined at precision")
    return sum(snf.divisor_valuations)


def quotient_order_exponent(I: ReinerIdeal, N: int | None = None) -> int:
    return sum(determined_model(I, N).shape)


def norm_image_order(I: ReinerIdeal, N: int | None = None) -> int:
    """log_p |N Q| computed as |Q| / |Q / N Q|, both from Smith forms."""
    model = determined_model(I, N)
    N = model.precision
    Nmat = multiplication_matrix(norm_element(I.p, N).coeffs, I.p, N)
    return sum(model.shape) - _cokernel_exponent(model.relation_matrix.hstack(Nmat))


def t_cokernel_order(I: ReinerIdeal, N: int | None = None) -> int:
    """log_p |Q / (sigma - 1) Q|."""
    model = determined_model(I, N)
    N = model.precision
    Tmat = multiplication_matrix([0, 1], I.p, N)
    return _cokernel_exponent(model.relation_matrix.hstack(Tmat))


def _inverse(M: LocalMatrix) -> LocalMatrix:
    p, N = M.p, M.precision
    q = p**N
    n, _ = M.shape
    A = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.rows)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c] % p)
        A[c], A[piv] = A[piv], A[c]
        inv = pow(A[c][c], -1, q)
        A[c] = [x * inv % q for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % q for a, b in zip(A[i], A[c])]
    return LocalMatrix.from_rows(p, N, [r[n:] for r in A])


def fixed_subgroup_order(I: ReinerIdeal, N: int | None = None) -> int:
    """log_p of the subgroup of Q fixed by sigma.

    In Smith coordinates Q = sum Z/p^(d_i), and T acts by U T U^-1. Row i
    of that matrix is scaled by p^(N - d_i) so the condition becomes a
    kernel mod p^N; its order, less that of the relations, is the answer.
    """
    model = determined_model(I, N)
    p, N = I.p, model.precision
    q = p**N
    U = model.snf.left
    d = list(model.snf.divisor_valuations)
    d += [N] * (p - len(d))
    Tp = U @ multiplication_matrix([0, 1], p, N) @ _inverse(U)
    W = LocalMatrix.from_rows(
        p, N, [[p ** (N - d[i]) * x % q for x in row] for i, row in enumerate(Tp.rows)]
    )
    gens = kernel_mod_ideal(W.transpose())
    kernel_exp = sum(N - min(int_valuation(x, p, N) for x in g) for g in gens)
    return kernel_exp - sum(N - di for di in d)


def j_split_map(p: int, m: int) -> dict[int, Shape]:
    """Observed shape for each j at the split point r = (p-1) m."""
    r = (p - 1) * m
    return {j: quotient_shape_snf(ReinerIdeal(p, m, r, j)) for j in range(1, p)}


def ideal_grid(p: int, max_m: int, max_r=None, js=None):
    """(m, r, j) triples with 1 <= r <= (p-1)(m+2) unless max_r is given."""
    for m in range(1, max_m + 1):
        top = (p - 1) * (m + 2) if max_r is None else max_r
        for r in range(1, top + 1):
            for j in (range(1, p) if js is None else js):
                yield ReinerIdeal(p, m, r, j)


__all__ = [
    "ReinerIdeal",
    "QuotientModel",
    "relation_matrix",
    "relation_matrix_general",
    "quotient_model",
    "determined_model",
    "quotient_shape_snf",
    "quotient_brute_force",
    "norm_image_order",
    "fixed_subgroup_order",
    "fixed_subgroup_order_brute_force",
    "t_cokernel_order",
    "j_split_map",
    "ideal_grid",
]
