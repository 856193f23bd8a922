import numpy as np
import pytest

from lepkit import matrix as mx
from lepkit.field import make_field
from lepkit.matrix import MatFq, SingularMatrixError

import oracles

F5 = make_field(5, 1)
F2 = make_field(2, 1)


def rand_mat(field, rows, cols, seed):
    rng = np.random.default_rng(seed)
    return MatFq(field, rng.integers(0, field.q, size=(rows, cols)))


def test_rref_identity():
    I3 = mx.identity(F5, 3)
    R, rank, pivots = mx.rref(I3)
    assert R == I3 and rank == 3 and pivots == (0, 1, 2)


def test_rref_dependent_rows():
    R, rank, pivots = mx.rref(MatFq(F5, [[2, 4], [1, 2]]))
    assert R.tolist() == [[1, 2], [0, 0]]
    assert rank == 1 and pivots == (0,)


@pytest.mark.parametrize("q,seed", [(7, 0), (7, 1), (7, 2)])
def test_rref_rank_matches_span_oracle(q, seed):
    f = make_field(q, 1)
    M = rand_mat(f, 4, 8, seed)
    assert mx.rank(M) == oracles.rank_by_span(f, M.a)


@pytest.mark.parametrize("p,m,seed", [(5, 1, 3), (2, 3, 4), (3, 2, 5)])
def test_rref_idempotent_and_row_space_preserved(p, m, seed):
    f = make_field(p, m)
    M = rand_mat(f, 5, 9, seed)
    R, rank, _ = mx.rref(M)
    R2, rank2, _ = mx.rref(R)
    assert R2 == R and rank2 == rank
    # same row space: stacking changes nothing
    stacked = mx.vstack([M, R])
    assert mx.rank(stacked) == rank


@pytest.mark.parametrize("p,m,seed", [(5, 1, 0), (2, 3, 1), (3, 2, 2)])
def test_rank_equals_rank_of_transpose(p, m, seed):
    f = make_field(p, m)
    M = rand_mat(f, 6, 4, seed)
    assert mx.rank(M) == mx.rank(M.transpose())


def test_invert_examples():
    A = MatFq(F5, [[1, 1], [0, 1]])
    assert mx.invert(A).tolist() == [[1, 4], [0, 1]]
    I4 = mx.identity(F5, 4)
    assert mx.invert(I4) == I4
    with pytest.raises(SingularMatrixError):
        mx.invert(MatFq(F5, [[1, 2], [2, 4]]))


@pytest.mark.parametrize("p,m,seed", [(5, 1, 11), (2, 3, 12), (3, 2, 13), (2, 4, 14)])
def test_invert_roundtrip(p, m, seed):
    f = make_field(p, m)
    rng = np.random.default_rng(seed)
    while True:
        M = MatFq(f, rng.integers(0, f.q, size=(6, 6)))
        try:
            Minv = mx.invert(M)
            break
        except SingularMatrixError:
            continue
    assert mx.matmul(M, Minv) == mx.identity(f, 6)
    assert mx.matmul(Minv, M) == mx.identity(f, 6)
    # rref of an invertible matrix is the identity
    assert mx.rref(M).R == mx.identity(f, 6)


def test_solve_matches_invert():
    f = make_field(3, 2)
    A = rand_mat(f, 5, 5, 21)
    B = rand_mat(f, 5, 3, 22)
    try:
        X = mx.solve(A, B)
    except SingularMatrixError:
        pytest.skip("singular sample")
    assert mx.matmul(A, X) == B


def test_right_kernel_repetition_parity():
    K = mx.right_kernel(MatFq(F2, [[1, 1, 1]]))
    assert K.tolist() == [[1, 0, 1], [0, 1, 1]]


def test_right_kernel_full_rank_square():
    K = mx.right_kernel(mx.identity(F5, 4))
    assert K.shape == (0, 4)


@pytest.mark.parametrize("p,m,rows,cols,seed", [
    (3, 2, 3, 7, 31), (2, 3, 3, 7, 32), (5, 1, 4, 9, 33)])
def test_right_kernel_spans_kernel(p, m, rows, cols, seed):
    f = make_field(p, m)
    M = rand_mat(f, rows, cols, seed)
    K = mx.right_kernel(M)
    assert K.rows == cols - mx.rank(M)
    prod = mx.matmul(M, K.transpose())
    assert not prod.a.any()
    # kernel basis itself is in canonical reduced form
    assert mx.rref(K).R == K


@pytest.mark.parametrize("p,m,seed", [(2, 1, 41), (3, 1, 42), (5, 1, 43)])
def test_right_kernel_matches_enumeration(p, m, seed):
    f = make_field(p, m)
    M = rand_mat(f, 3, 6, seed)
    K = mx.right_kernel(M)
    words = oracles.kernel_words(f, M.a)
    assert len(words) == f.q**K.rows
    kernel_span = {bytes(w) for w in oracles.span_words(f, K.a)}
    assert all(bytes(w) in kernel_span for w in words)


@pytest.mark.parametrize("p,m,seed", [(5, 1, 51), (2, 3, 52), (3, 2, 53),
                                      (2, 4, 54), (5, 2, 55), (3, 3, 56)])
def test_matmul_matches_scalar_arithmetic(p, m, seed):
    f = make_field(p, m)
    A = rand_mat(f, 5, 4, seed)
    B = rand_mat(f, 4, 6, seed + 100)
    C = mx.matmul(A, B)
    for i in range(5):
        for j in range(6):
            acc = 0
            for t in range(4):
                acc = f.add(acc, f.mul(int(A.a[i, t]), int(B.a[t, j])))
            assert int(C.a[i, j]) == acc


def test_matmul_shape_and_field_checks():
    with pytest.raises(ValueError):
        mx.matmul(mx.identity(F5, 2), mx.identity(F5, 3))
    with pytest.raises(ValueError):
        mx.matmul(mx.identity(F5, 2), mx.identity(F2, 2))


def test_kron_examples():
    M = rand_mat(F5, 2, 3, 61)
    assert mx.kron((1,), M) == M
    out = mx.kron((1, 2), mx.identity(F5, 2))
    assert out.tolist() == [[1, 0, 2, 0], [0, 1, 0, 2]]
    # entrywise definition
    out = mx.kron((2, 3), M)
    for j, s in enumerate((2, 3)):
        for r in range(2):
            for c in range(3):
                assert int(out.a[r, j * 3 + c]) == F5.mul(s, int(M.a[r, c]))


def test_block_diag():
    A = rand_mat(F5, 2, 2, 71)
    B = rand_mat(F5, 1, 3, 72)
    D = mx.block_diag([A, B])
    assert D.shape == (3, 5)
    assert D.a[:2, :2].tolist() == A.tolist()
    assert D.a[2:, 2:].tolist() == B.tolist()
    assert not D.a[:2, 2:].any() and not D.a[2:, :2].any()


def test_permute_and_scale_cols():
    M = MatFq(F5, [[1, 2, 3]])
    P = mx.permute_cols(M, [2, 0, 1])  # col0 -> col2, col1 -> col0, ...
    assert P.tolist() == [[2, 3, 1]]
    S = mx.scale_cols(M, [2, 2, 2])
    assert S.tolist() == [[2, 4, 1]]


def test_matrices_are_immutable():
    M = mx.identity(F5, 2)
    with pytest.raises(AttributeError):
        M.a = None
    with pytest.raises(ValueError):
        M.a[0, 0] = 3


def test_entry_validation():
    with pytest.raises(ValueError):
        MatFq(F5, [[7]])
    with pytest.raises(ValueError):
        MatFq(F5, [1, 2, 3])
