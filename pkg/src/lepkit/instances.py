"""Seeded instance generation and the JSON instance file format.

Everything here is a pure function of its parameters and a seed:
trial t of an experiment derives a child seed from the master seed, so
parallel runs reproduce the exact same instances regardless of
scheduling.  The secret change of basis S is sampled and kept in the
witness for debugging, but code-level equality absorbs it: two
generator matrices describe the same code after canonicalization.

Instance files are canonical JSON (UTF-8, sorted keys) with field
elements in the base-p integer encoding::

    {"format": "lep-instance/1",
     "field": {"p": ..., "m": ..., "modulus": [...], "alpha": ...},
     "n": ..., "k": ...,
     "gen_a": [[...]], "gen_b": [[...]],
     "witness": {"d": [...], "perm": [...], "s": [[...]]} | null,
     "metadata": {"seed": "...", "subgroup_r": ... | null}}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from lepkit import matrix
from lepkit.codes import LinearCode, from_generator
from lepkit.field import FieldSpec, field_from_description
from lepkit.matrix import MatFq

if TYPE_CHECKING:
    from lepkit.reduction import SubgroupSpec

FORMAT_TAG = "lep-instance/1"


@dataclass
class MonomialWitness:
    """The secret (S, d, P) certifying B = S A D P.

    ``perm[i]`` is the target position of source coordinate i, and
    ``s_matrix`` may be None since it is recoverable (and irrelevant
    after canonicalization).
    """
    d_vec: np.ndarray
    perm: np.ndarray
    s_matrix: MatFq | None = None

    def __post_init__(self):
        self.d_vec = np.asarray(self.d_vec, dtype=np.int64)
        self.perm = np.asarray(self.perm, dtype=np.int64)
        if np.any(self.d_vec == 0):
            raise ValueError("witness diagonal entries must be nonzero")
        if sorted(self.perm.tolist()) != list(range(len(self.perm))):
            raise ValueError("perm is not a permutation")


@dataclass
class LepInstance:
    code_a: LinearCode
    code_b: LinearCode
    witness: MonomialWitness | None = None
    metadata: dict = dc_field(default_factory=dict)

    @property
    def field(self) -> FieldSpec:
        return self.code_a.field


def child_seed(master_seed: int, *key: int) -> int:
    """Deterministic per-trial seed derived by seed-sequence splitting."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(key))
    return int(ss.generate_state(1, np.uint64)[0])


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_code(fld: FieldSpec, n: int, k: int, seed) -> LinearCode:
    """Uniform [n, k] code: sample k x n matrices until full rank."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = _rng(seed)
    while True:
        cand = MatFq._wrap(fld, rng.integers(0, fld.q, size=(k, n), dtype=np.int64))
        code = from_generator(cand)
        if code.k == k:
            return code


def random_invertible(fld: FieldSpec, k: int, rng: np.random.Generator) -> MatFq:
    while True:
        cand = MatFq._wrap(fld, rng.integers(0, fld.q, size=(k, k), dtype=np.int64))
        if matrix.rank(cand) == k:
            return cand


def random_monomial(fld: FieldSpec, n: int, subgroup: "SubgroupSpec | None" = None,
                    seed=None, k: int | None = None) -> MonomialWitness:
    """Uniform monomial witness; diagonal restricted to the subgroup
    when one is given.  S is sampled only when k is provided."""
    rng = _rng(seed)
    if subgroup is not None:
        members = np.asarray(subgroup.members, dtype=np.int64)
        d = members[rng.integers(0, len(members), size=n)]
    else:
        d = rng.integers(1, fld.q, size=n, dtype=np.int64)
    perm = rng.permutation(n).astype(np.int64)
    s = random_invertible(fld, k, rng) if k is not None else None
    return MonomialWitness(d_vec=d, perm=perm, s_matrix=s)


def apply_witness(code: LinearCode, witness: MonomialWitness) -> LinearCode:
    """The code generated by gen · D · P (S changes nothing here)."""
    g = matrix.scale_cols(code.gen, witness.d_vec)
    g = matrix.permute_cols(g, witness.perm)
    return from_generator(g)


def equivalent_pair(fld: FieldSpec, n: int, k: int,
                    subgroup: "SubgroupSpec | None" = None, seed=None) -> LepInstance:
    """A seeded equivalent pair with its witness stored."""
    rng = _rng(seed)
    code_a = random_code(fld, n, k, rng)
    witness = random_monomial(fld, n, subgroup=subgroup, seed=rng, k=k)
    gb = matrix.matmul(witness.s_matrix, code_a.gen)
    gb = matrix.scale_cols(gb, witness.d_vec)
    gb = matrix.permute_cols(gb, witness.perm)
    code_b = from_generator(gb)
    meta = {"seed": str(seed), "subgroup_r": subgroup.r if subgroup else None}
    return LepInstance(code_a, code_b, witness, meta)


def random_pair(fld: FieldSpec, n: int, k: int, seed=None) -> LepInstance:
    """Two independent random codes (inequivalent with overwhelming
    probability at the sizes used here); no witness."""
    rng = _rng(seed)
    code_a = random_code(fld, n, k, rng)
    code_b = random_code(fld, n, k, rng)
    meta = {"seed": str(seed), "subgroup_r": None}
    return LepInstance(code_a, code_b, None, meta)


def verify_witness(inst: LepInstance) -> bool:
    """Check that the stored witness maps code_a onto code_b."""
    if inst.witness is None:
        raise ValueError("instance carries no witness")
    return apply_witness(inst.code_a, inst.witness) == inst.code_b


def instance_to_json(inst: LepInstance) -> dict:
    witness = None
    if inst.witness is not None:
        witness = {
            "d": inst.witness.d_vec.tolist(),
            "perm": inst.witness.perm.tolist(),
            "s": inst.witness.s_matrix.tolist() if inst.witness.s_matrix is not None else None,
        }
    meta = dict(inst.metadata)
    meta.setdefault("seed", "")
    meta.setdefault("subgroup_r", None)
    return {
        "format": FORMAT_TAG,
        "field": inst.field.describe(),
        "n": inst.code_a.n,
        "k": inst.code_a.k,
        "gen_a": inst.code_a.gen.tolist(),
        "gen_b": inst.code_b.gen.tolist(),
        "witness": witness,
        "metadata": meta,
    }


def instance_from_json(doc: dict) -> LepInstance:
    if doc.get("format") != FORMAT_TAG:
        raise ValueError(f"unsupported instance format: {doc.get('format')!r}")
    fld = field_from_description(doc["field"])
    code_a = from_generator(MatFq(fld, doc["gen_a"]))
    code_b = from_generator(MatFq(fld, doc["gen_b"]))
    if code_a.n != int(doc["n"]) or code_a.k != int(doc["k"]):
        raise ValueError("declared (n, k) disagree with gen_a")
    if code_b.n != code_a.n or code_b.k != code_a.k:
        raise ValueError("gen_a and gen_b have different parameters")
    witness = None
    w = doc.get("witness")
    if w is not None:
        s = MatFq(fld, w["s"]) if w.get("s") is not None else None
        witness = MonomialWitness(d_vec=np.asarray(w["d"], dtype=np.int64),
                                  perm=np.asarray(w["perm"], dtype=np.int64),
                                  s_matrix=s)
    return LepInstance(code_a, code_b, witness, dict(doc.get("metadata") or {}))


def dumps_instance(inst: LepInstance) -> str:
    return json.dumps(instance_to_json(inst), sort_keys=True, separators=(",", ":"))


def save_instance(inst: LepInstance, path) -> None:
    Path(path).write_text(dumps_instance(inst) + "\n", encoding="utf-8")


def load_instance(path) -> LepInstance:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return instance_from_json(doc)
