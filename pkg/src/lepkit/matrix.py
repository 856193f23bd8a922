"""Dense exact linear algebra over a FieldSpec.

A MatFq is an immutable wrapper around a 2-d numpy array of element
encodings.  Row reduction and kernels run elementwise on the field's
lookup tables; matrix products decompose entries into base-p digit
planes and use ordinary (exact) float64 matmuls, which is much faster
than table lookups for the sizes that matter here.

Pivoting is deterministic (first nonzero entry, top to bottom), so the
reduced row echelon form — and with it every canonical code generator
— is reproducible bit for bit.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

import numpy as np

from lepkit.field import FieldSpec


class SingularMatrixError(Exception):
    """Square system has no inverse (rank < size)."""


class MatFq:
    """Immutable dense matrix over GF(q), entries encoded as ints."""

    __slots__ = ("field", "a")

    def __init__(self, field: FieldSpec, data):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"matrix data must be 2-d, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError(f"entries must lie in [0, {field.q})")
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", arr)

    def __setattr__(self, name, value):
        raise AttributeError("MatFq is immutable")

    @classmethod
    def _wrap(cls, field: FieldSpec, arr: np.ndarray) -> "MatFq":
        """Internal constructor for arrays already known to be valid."""
        self = object.__new__(cls)
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", arr)
        return self

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def transpose(self) -> "MatFq":
        return MatFq._wrap(self.field, np.ascontiguousarray(self.a.T))

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    def __matmul__(self, other: "MatFq") -> "MatFq":
        return matmul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatFq):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash((self.field, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"MatFq({self.rows}x{self.cols} over GF({self.field.q}))"


class RrefResult(NamedTuple):
    R: MatFq
    rank: int
    pivots: tuple[int, ...]


def identity(field: FieldSpec, n: int) -> MatFq:
    return MatFq._wrap(field, np.eye(n, dtype=np.int64))


def zeros(field: FieldSpec, rows: int, cols: int) -> MatFq:
    return MatFq._wrap(field, np.zeros((rows, cols), dtype=np.int64))


def _rref_inplace(field: FieldSpec, M: np.ndarray,
                  pivot_cols: int | None = None) -> tuple[int, list[int]]:
    """Gauss–Jordan on a writable array; returns (rank, pivot columns).

    Pivots are only searched in the first `pivot_cols` columns (all by
    default); trailing columns are carried along, which is how
    augmented systems are solved.
    """
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols if pivot_cols is None else pivot_cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            tmp = M[r, c:].copy()
            M[r, c:] = M[pr, c:]
            M[pr, c:] = tmp
        piv = int(M[r, c])
        if piv != 1:
            M[r, c:] = field.vmul(M[r, c:], field.inv(piv))
        others = np.nonzero(M[:, c])[0]
        others = others[others != r]
        if others.size:
            prod = field.vmul(M[others, c, None], M[r, c:][None, :])
            M[others, c:] = field.vsub(M[others, c:], prod)
        pivots.append(c)
        r += 1
    return r, pivots


def rref(M: MatFq) -> RrefResult:
    """Reduced row echelon form, rank, and pivot columns."""
    work = M.a.copy()
    rank, pivots = _rref_inplace(M.field, work)
    return RrefResult(MatFq._wrap(M.field, work), rank, tuple(pivots))


def rank(M: MatFq) -> int:
    work = M.a.copy()
    r, _ = _rref_inplace(M.field, work)
    return r


def solve(A: MatFq, B: MatFq) -> MatFq:
    """Solve A X = B for square invertible A.

    Raises SingularMatrixError when A has no inverse; callers treat that
    branch as the distinguisher's inconclusive event.
    """
    if A.rows != A.cols:
        raise ValueError("coefficient matrix must be square")
    if A.rows != B.rows:
        raise ValueError("row count mismatch")
    n = A.rows
    work = np.concatenate([A.a, B.a], axis=1)
    r, _ = _rref_inplace(A.field, work, pivot_cols=n)
    if r < n:
        raise SingularMatrixError(f"rank {r} < {n}")
    return MatFq._wrap(A.field, np.ascontiguousarray(work[:, n:]))


def invert(M: MatFq) -> MatFq:
    """Inverse of a square matrix; SingularMatrixError when rank < size."""
    return solve(M, identity(M.field, M.rows))


def right_kernel(M: MatFq) -> MatFq:
    """RREF basis of {x : M x^T = 0}, one kernel vector per row."""
    field = M.field
    R, rk, pivots = rref(M)
    free = [c for c in range(M.cols) if c not in set(pivots)]
    basis = np.zeros((len(free), M.cols), dtype=np.int64)
    if free:
        basis[np.arange(len(free)), free] = 1
        if pivots:
            basis[:, list(pivots)] = field.vneg(R.a[:rk][:, free]).T
    work = basis
    _rref_inplace(field, work)
    return MatFq._wrap(field, work)


def _digit_planes(field: FieldSpec, A: np.ndarray) -> np.ndarray:
    # (m, rows, cols) float64, plane j = base-p digit j of each entry
    return np.ascontiguousarray(
        np.moveaxis(field._digits[A], -1, 0).astype(np.float64))


def _matmul_arrays(field: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    p, m = field.p, field.m
    out_shape = (A.shape[0], B.shape[1])
    if A.shape[1] == 0:
        return np.zeros(out_shape, dtype=np.int64)
    # float64 matmuls are exact while accumulated dot products stay
    # below 2^53; the digit values involved are < p.
    if A.shape[1] * (p - 1) ** 2 * m >= 2**53:
        raise ValueError("matrix product too large for exact float64 path")
    if m == 1:
        C = A.astype(np.float64) @ B.astype(np.float64)
        return (C % p).astype(np.int64)
    DA = _digit_planes(field, A)
    DB = _digit_planes(field, B)
    conv = np.zeros((2 * m - 1,) + out_shape)
    for i in range(m):
        for j in range(m):
            conv[i + j] += DA[i] @ DB[j]
    conv %= p
    digits = np.tensordot(conv, field._redc.astype(np.float64), axes=(0, 0)) % p
    return (digits @ field._powp.astype(np.float64)).astype(np.int64)


def matmul(A: MatFq, B: MatFq) -> MatFq:
    if A.field != B.field:
        raise ValueError("field mismatch")
    if A.cols != B.rows:
        raise ValueError(f"shape mismatch: {A.shape} @ {B.shape}")
    return MatFq._wrap(A.field, _matmul_arrays(A.field, A.a, B.a))


def transpose(M: MatFq) -> MatFq:
    return M.transpose()


def block_diag(mats: Sequence[MatFq]) -> MatFq:
    if not mats:
        raise ValueError("block_diag of no blocks")
    field = mats[0].field
    if any(M.field != field for M in mats):
        raise ValueError("field mismatch")
    rows = sum(M.rows for M in mats)
    cols = sum(M.cols for M in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for M in mats:
        out[r:r + M.rows, c:c + M.cols] = M.a
        r += M.rows
        c += M.cols
    return MatFq._wrap(field, out)


def kron(row: Iterable[int], M: MatFq) -> MatFq:
    """Kronecker product of a row vector with a matrix.

    Follows the generator-matrix convention: the result is the
    horizontal stack [a_0*M | a_1*M | ...].
    """
    field = M.field
    scalars = np.asarray(list(row), dtype=np.int64)
    if scalars.ndim != 1 or scalars.size == 0:
        raise ValueError("row vector must be 1-d and non-empty")
    blocks = field.vmul(scalars[:, None, None], M.a[None, :, :])
    out = np.ascontiguousarray(np.moveaxis(blocks, 0, 1)).reshape(
        M.rows, scalars.size * M.cols)
    return MatFq._wrap(field, out)


def hstack(mats: Sequence[MatFq]) -> MatFq:
    field = mats[0].field
    return MatFq._wrap(field, np.concatenate([M.a for M in mats], axis=1))


def vstack(mats: Sequence[MatFq]) -> MatFq:
    field = mats[0].field
    return MatFq._wrap(field, np.concatenate([M.a for M in mats], axis=0))


def permute_cols(M: MatFq, perm: Sequence[int]) -> MatFq:
    """Column i of the input becomes column perm[i] of the output."""
    perm = np.asarray(perm, dtype=np.int64)
    out = np.empty_like(M.a)
    out[:, perm] = M.a
    return MatFq._wrap(M.field, out)


def scale_cols(M: MatFq, scalars: Sequence[int]) -> MatFq:
    """Multiply column i by scalars[i] (a diagonal matrix on the right)."""
    s = np.asarray(scalars, dtype=np.int64)
    return MatFq._wrap(M.field, M.field.vmul(M.a, s[None, :]))


def diagonal(M: MatFq) -> np.ndarray:
    if M.rows != M.cols:
        raise ValueError("diagonal of a non-square matrix")
    return np.diagonal(M.a).copy()
