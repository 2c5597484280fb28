"""Cyclic and concatenated locally repairable codes over finite fields."""

from .bounds import (
    BoundReport,
    KOptProvider,
    certify_dimension_optimality,
    cm_bound,
    generalized_singleton,
    kopt_upper,
    qary_hamming_kmax,
)
from .constructions import (
    ConstructionResult,
    concatenated_rlocal,
    product_lrc,
    reversible_binary,
    rm_qary,
    simplex_lrc,
)
from .cyclic import (
    CyclicCodeSpec,
    DefiningSet,
    bch_bound,
    coset_partition,
    cyclotomic_coset,
    generator_from_defset,
    normalize_defset,
)
from .galois import Field, FieldElement, Polynomial, build_field, field_arith, field_of_order, nth_root_context
from .linear import LinearCode, WeightReport, concatenate, hamming_code, weight_report
from .locality import (
    AdditiveProjection,
    LocalityProfile,
    local_checks_at,
    local_repair,
    locality_availability_profile,
    project_additive,
    structural_rdelta_verify,
)

__version__ = "0.1.0"
