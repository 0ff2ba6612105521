"""polysigma: exact algebra of cyclic-shift Sigma matrices.

Polyadic special unitary elements built from cyclic-shift block matrices,
their elementary/full/heterogeneous Sigma matrices, the finite phase-shifted
binary and n-ary structures they generate, and a brute-force dense-matrix
oracle that adjudicates every closed-form rule.
"""

from .errors import ArityError, BudgetExceededError, DomainError, ValidationError
from .matrices import BlockCyclicMatrix, det, hadamard, hermitian, mat_mul, sigma, trace
from .phases import (
    Q12,
    ElementaryLabel,
    FullLabel,
    HetLabel,
    PauliLabel,
    StructureReport,
    ZeroLabel,
    build_elementary_semigroup,
    build_full_group,
    build_het_group,
    build_pauli_group,
    elementary_nary_mul,
    full_nary_mul,
    full_querelement,
    het_nary_mul,
    het_querelement,
    pauli_mul,
    root_of_unity,
)
from .sigma_algebra import (
    ElementarySigma,
    FullSigma,
    HetSigma,
    elementary,
    full,
    het,
    levi_civita,
    reduce_sigma_word,
)
from .su2 import (
    PolyadicSU2Element,
    SU2Params,
    binary_param_mul,
    identity_element,
    invariant_i2,
    nary_product,
    polyadic_identity,
    polyadic_trace,
    querelement,
    ternary_param_mul,
)

__version__ = "0.1.0"

__all__ = [
    "ArityError", "BudgetExceededError", "DomainError", "ValidationError",
    "BlockCyclicMatrix", "det", "hadamard", "hermitian", "mat_mul", "sigma", "trace",
    "Q12", "ElementaryLabel", "FullLabel", "HetLabel", "PauliLabel",
    "StructureReport", "ZeroLabel",
    "build_elementary_semigroup", "build_full_group", "build_het_group",
    "build_pauli_group", "elementary_nary_mul", "full_nary_mul",
    "full_querelement", "het_nary_mul", "het_querelement", "pauli_mul",
    "root_of_unity",
    "ElementarySigma", "FullSigma", "HetSigma", "elementary", "full", "het",
    "levi_civita", "reduce_sigma_word",
    "PolyadicSU2Element", "SU2Params", "binary_param_mul", "identity_element",
    "invariant_i2", "nary_product", "polyadic_identity", "polyadic_trace",
    "querelement", "ternary_param_mul",
    "__version__",
]
