"""Linear-code algebra: duals, hulls, Schur products, power codes,
Frobenius images and (partial) closures.

Codes are stored canonically as full-rank RREF generator matrices, so
two LinearCode values describe the same code exactly when their
generators are equal entrywise.  The zero code (k = 0) and the full
space (k = n) are both representable and accepted by every operation.
"""

from __future__ import annotations

import math

import numpy as np

from lepkit import matrix
from lepkit.field import FieldSpec
from lepkit.matrix import MatFq


class LinearCode:
    """An [n, k]_q linear code with a canonical RREF generator."""

    __slots__ = ("field", "n", "k", "gen")

    def __init__(self, field: FieldSpec, n: int, k: int, gen: MatFq):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "gen", gen)

    def __setattr__(self, name, value):
        raise AttributeError("LinearCode is immutable")

    def params(self) -> tuple[int, int, int]:
        return self.n, self.k, self.field.q

    def contains(self, word) -> bool:
        """Membership test: stacking the word must not raise the rank."""
        w = np.asarray(word, dtype=np.int64).reshape(1, self.n)
        stacked = np.concatenate([self.gen.a, w], axis=0)
        return matrix.rank(MatFq._wrap(self.field, stacked)) == self.k

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearCode):
            return NotImplemented
        return (self.field == other.field and self.n == other.n
                and self.k == other.k and np.array_equal(self.gen.a, other.gen.a))

    def __hash__(self):
        return hash((self.field, self.n, self.k, self.gen.a.tobytes()))

    def __repr__(self):
        return f"LinearCode([{self.n}, {self.k}]_{self.field.q})"


def from_generator(M: MatFq) -> LinearCode:
    """Code spanned by the rows of M; rank-deficient input is fine."""
    R, rank, _ = matrix.rref(M)
    gen = MatFq._wrap(M.field, np.ascontiguousarray(R.a[:rank]))
    return LinearCode(M.field, M.cols, rank, gen)


def zero_code(field: FieldSpec, n: int) -> LinearCode:
    return LinearCode(field, n, 0, matrix.zeros(field, 0, n))


def full_code(field: FieldSpec, n: int) -> LinearCode:
    return LinearCode(field, n, n, matrix.identity(field, n))


def _require_compatible(C1: LinearCode, C2: LinearCode):
    if C1.field != C2.field:
        raise ValueError("field mismatch")
    if C1.n != C2.n:
        raise ValueError(f"length mismatch: {C1.n} != {C2.n}")


def dual(C: LinearCode) -> LinearCode:
    """The [n, n-k] code orthogonal to C under the standard inner product."""
    ker = matrix.right_kernel(C.gen)
    return LinearCode(C.field, C.n, ker.rows, ker)


def intersect(C1: LinearCode, C2: LinearCode) -> LinearCode:
    """C1 ∩ C2, via the kernel of the stacked parity checks."""
    _require_compatible(C1, C2)
    h = matrix.vstack([dual(C1).gen, dual(C2).gen])
    ker = matrix.right_kernel(h)
    return LinearCode(C1.field, C1.n, ker.rows, ker)


def hull(C: LinearCode) -> LinearCode:
    return intersect(C, dual(C))


def hermitian_dual(C: LinearCode) -> LinearCode:
    """Dual under the Hermitian form; needs an even-degree extension."""
    if C.field.m % 2 != 0:
        raise ValueError("Hermitian dual requires an even extension degree")
    return dual(frobenius_code(C, C.field.m // 2))


def hermitian_hull(C: LinearCode) -> LinearCode:
    return intersect(C, hermitian_dual(C))


def schur_product_codes(C1: LinearCode, C2: LinearCode) -> LinearCode:
    """Span of all componentwise products of codewords.

    Bilinearity means the k1*k2 products of basis rows already span the
    full product code, so that is all we compute.
    """
    _require_compatible(C1, C2)
    if C1.k == 0 or C2.k == 0:
        return zero_code(C1.field, C1.n)
    field = C1.field
    prods = field.vmul(C1.gen.a[:, None, :], C2.gen.a[None, :, :])
    rows = prods.reshape(C1.k * C2.k, C1.n)
    return from_generator(MatFq._wrap(field, rows))


def power_code(C: LinearCode, ell: int) -> LinearCode:
    """The ell-th Schur power of C (ell = 1 gives C itself)."""
    if ell < 1:
        raise ValueError("power must be >= 1")
    acc = C
    for _ in range(ell - 1):
        acc = schur_product_codes(acc, C)
        if acc.k == C.n:
            break  # saturated at the full space; further powers fix it
    return acc


def frobenius_code(C: LinearCode, i: int) -> LinearCode:
    """Image of C under the coordinatewise i-th Frobenius map."""
    if i < 0:
        raise ValueError("Frobenius exponent must be >= 0")
    return from_generator(MatFq._wrap(C.field, C.field.vfrob(C.gen.a, i)))


def expected_power_dim(k: int, ell: int, n: int) -> int:
    """Generic dimension of the ell-th power of a random [n, k] code."""
    if ell < 1:
        raise ValueError("power must be >= 1")
    return min(math.comb(k + ell - 1, ell), n)


def closure_scalars(field: FieldSpec, r: int) -> np.ndarray:
    """The row vector (1, g, g^2, ..., g^{r-1}) with g = alpha^((q-1)/r)."""
    q = field.q
    if r < 1 or (q - 1) % r != 0:
        raise ValueError(f"r must divide q - 1 = {q - 1}, got {r}")
    step = (q - 1) // r
    return field.exp_table[(np.arange(r) * step) % (q - 1)].copy()


def closure(C: LinearCode, r: int) -> LinearCode:
    """The r-th partial closure: an [r*n, k] code.

    Coordinate blocks are ordered by closure-scalar index (block j holds
    the columns of alpha^{j(q-1)/r} * gen).  r = q - 1 is the classical
    closure; r = 1 returns C unchanged.
    """
    scalars = closure_scalars(C.field, r)
    return from_generator(matrix.kron(scalars, C.gen))
