"""Partial closure: reducing subgroup-restricted equivalence to
permutation equivalence.

For r dividing q - 1 and U the order-r subgroup of the units, a pair
of codes is U-equivalent exactly when their r-th partial closures are
permutation equivalent.  The witness transport is constructive: a
monomial witness (d, P) lifts to a block-monomial map on the closure
coordinates whose blocks carry only coset representatives, and which
is a pure permutation precisely when every d_i lies in U.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from lepkit import codes
from lepkit.codes import LinearCode
from lepkit.field import FieldSpec
from lepkit.matrix import MatFq

if TYPE_CHECKING:
    from lepkit.instances import MonomialWitness


@dataclass(frozen=True)
class SubgroupSpec:
    """The order-r subgroup U = <alpha^((q-1)/r)> with fixed coset reps.

    coset_reps are 1, alpha, ..., alpha^((q-1)/r - 1); multiplying them
    against U tiles the unit group exactly once.
    """
    field: FieldSpec
    r: int
    generator: int
    members: tuple[int, ...]
    coset_reps: tuple[int, ...]

    @property
    def index(self) -> int:
        """(q - 1) / r, the number of cosets."""
        return (self.field.q - 1) // self.r

    def contains(self, x: int) -> bool:
        return x != 0 and self.field.dlog(x) % self.index == 0

    def __contains__(self, x: int) -> bool:
        return self.contains(x)


def make_subgroup(fld: FieldSpec, r: int) -> SubgroupSpec:
    q = fld.q
    if r < 1 or (q - 1) % r != 0:
        raise ValueError(f"r must divide q - 1 = {q - 1}, got {r}")
    step = (q - 1) // r
    gen = fld.pow(fld.alpha, step) if q > 2 else 1
    members = tuple(int(fld.exp_table[(j * step) % (q - 1)]) for j in range(r))
    reps = tuple(int(fld.exp_table[t]) for t in range(step))
    return SubgroupSpec(fld, r, gen, members, reps)


def decompose_scalar(d: int, sub: SubgroupSpec) -> tuple[int, int]:
    """Write d = alpha^(s*(q-1)/r + t) with 0 <= t < (q-1)/r, 0 <= s < r."""
    if d == 0:
        raise ZeroDivisionError("cannot decompose zero")
    j = sub.field.dlog(d)
    return j // sub.index, j % sub.index


class BlockMonomial:
    """The lifted isometry on r-th closure coordinates.

    Closure columns are laid out scalar-major: column j*n + i is the
    j-th closure scalar times coordinate i.  The map sends source
    column (j, i) to column ((j - s_i) mod r, perm[i]) scaled by
    alpha^{t_i} — a left cyclic shift by s_i inside each coordinate's
    block, composed with I_r ⊗ P outside.  All scales are coset
    representatives; they are trivial exactly when the witness diagonal
    sits inside the subgroup.
    """

    def __init__(self, sub: SubgroupSpec, perm: np.ndarray,
                 shifts: np.ndarray, scale_exps: np.ndarray):
        self.sub = sub
        self.field = sub.field
        self.r = sub.r
        self.n = len(perm)
        self.perm = np.asarray(perm, dtype=np.int64)
        self.shifts = np.asarray(shifts, dtype=np.int64)
        self.scale_exps = np.asarray(scale_exps, dtype=np.int64)

    @property
    def is_permutation(self) -> bool:
        """True when the combined map carries no scaling at all."""
        return bool(np.all(self.scale_exps == 0))

    def _column_map(self) -> tuple[np.ndarray, np.ndarray]:
        r, n = self.r, self.n
        i_idx = np.tile(np.arange(n), r)
        j_idx = np.repeat(np.arange(r), n)
        target = ((j_idx - self.shifts[i_idx]) % r) * n + self.perm[i_idx]
        scales = self.field.exp_table[self.scale_exps[i_idx]]
        return target, scales

    def as_permutation(self) -> np.ndarray:
        """The length r*n permutation (source -> target column index)."""
        if not self.is_permutation:
            raise ValueError("map scales some coordinates; not a permutation")
        target, _ = self._column_map()
        return target

    def outer_permutation(self) -> np.ndarray:
        """I_r ⊗ P alone, as a length r*n permutation."""
        r, n = self.r, self.n
        return (np.repeat(np.arange(r), n) * n
                + self.perm[np.tile(np.arange(n), r)])

    def blocks(self) -> list[MatFq]:
        """The n monomial blocks M_i (each r x r, one per coordinate)."""
        out = []
        r = self.r
        jj = np.arange(r)
        for i in range(self.n):
            block = np.zeros((r, r), dtype=np.int64)
            block[jj, (jj - self.shifts[i]) % r] = self.field.exp_table[
                self.scale_exps[i]]
            out.append(MatFq._wrap(self.field, block))
        return out

    def apply(self, M: MatFq) -> MatFq:
        """Apply the map to the columns of a k x (r*n) matrix."""
        if M.cols != self.r * self.n:
            raise ValueError(f"expected {self.r * self.n} columns, got {M.cols}")
        target, scales = self._column_map()
        out = np.empty_like(M.a)
        out[:, target] = self.field.vmul(M.a, scales[None, :])
        return MatFq._wrap(self.field, out)


def reduce_to_pep(code_a: LinearCode, code_b: LinearCode,
                  r: int) -> tuple[LinearCode, LinearCode]:
    """The r-th partial closures of both codes, each [r*n, k].

    r = q - 1 is the classical reduction of plain linear equivalence to
    permutation equivalence; r = 1 leaves the codes untouched; any
    r > 2 makes both outputs self-orthogonal.
    """
    if code_a.field != code_b.field or code_a.n != code_b.n or code_a.k != code_b.k:
        raise ValueError("inputs must share length, dimension and field")
    return codes.closure(code_a, r), codes.closure(code_b, r)


def lift_witness(witness: "MonomialWitness", sub: SubgroupSpec) -> BlockMonomial:
    """Transport a monomial witness to the r-th closure coordinates.

    Total for every witness; the result is a pure permutation exactly
    when every diagonal entry lies in the subgroup (check
    ``is_permutation``).  Applying it to a generator of the closure of
    A yields a generator of the closure of B, up to row operations.
    """
    d = np.asarray(witness.d_vec, dtype=np.int64)
    if np.any(d == 0):
        raise ValueError("witness diagonal must be nonzero")
    logs = sub.field.log_table[d]
    shifts = logs // sub.index
    scale_exps = logs % sub.index
    return BlockMonomial(sub, np.asarray(witness.perm, dtype=np.int64),
                         shifts, scale_exps)


def is_subgroup_instance(witness: "MonomialWitness", sub: SubgroupSpec) -> bool:
    """Whether every diagonal entry of the witness lies in the subgroup."""
    return all(sub.contains(int(x)) for x in np.asarray(witness.d_vec))
