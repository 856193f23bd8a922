"""Exact-arithmetic workbench for the linear equivalence problem (LEP).

The package bundles:

* small-finite-field arithmetic (`field`) and dense exact linear
  algebra (`matrix`),
* the linear-code algebra of duals, hulls, Schur/power codes,
  Frobenius images and (partial) closures (`codes`),
* a power-code distinguisher for LEP with a registry of
  constructions per field-size form (`solver`),
* the partial-closure reduction from subgroup-restricted LEP to
  permutation equivalence (`reduction`),
* seeded instance generation and a JSON instance format
  (`instances`),
* a Monte Carlo experiment harness and CLI (`harness`).
"""

from lepkit.field import FieldSpec, make_field
from lepkit.matrix import MatFq, SingularMatrixError
from lepkit.codes import (
    LinearCode,
    closure,
    dual,
    expected_power_dim,
    frobenius_code,
    from_generator,
    hermitian_hull,
    hull,
    intersect,
    power_code,
    schur_product_codes,
)
from lepkit.solver import (
    ConstructionPlan,
    DistinguishOutcome,
    FactorSpec,
    NoApplicablePlan,
    Verdict,
    adj,
    build_side,
    diag_multiset,
    diag_subfield,
    distinguish,
    enumerate_constructions,
    fp_estimate,
    select_construction,
)
from lepkit.reduction import (
    BlockMonomial,
    SubgroupSpec,
    decompose_scalar,
    is_subgroup_instance,
    lift_witness,
    make_subgroup,
    reduce_to_pep,
)
from lepkit.instances import (
    LepInstance,
    MonomialWitness,
    equivalent_pair,
    load_instance,
    random_code,
    random_monomial,
    random_pair,
    save_instance,
    verify_witness,
)
from lepkit.harness import ExperimentReport, run_experiment

__version__ = "0.1.0"
