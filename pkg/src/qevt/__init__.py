"""Eigenvalue transformations of block-encoded matrices, simulated exactly.

The package builds block-encodings of arbitrary square matrices, makes
their powers faithful with a counter register, synthesizes signal
processing rotations for circle-bounded polynomials, and assembles the
full transformation circuit, always verifying the encoded block against
a classical evaluation.
"""

from .analytic import (
    JordanForm,
    TruncationPlan,
    assemble_from_jordan,
    disk_samples,
    exp_plan,
    jordan_block,
    jordan_poly,
    shifted_inverse_plan,
    taylor_truncation_order,
)
from .encoding import (
    BlockEncoding,
    dilate,
    regularity_order,
    regularity_profile,
    rescale,
    top_left_block,
    verify_encoding,
)
from .errors import NormBoundError, NumericalError, QevtError, ValidationError
from .evt import (
    TransformReport,
    assemble_circuit,
    check_perturbation_bound,
    counter_order_for_degree,
    perturbation_bound,
    transform,
)
from .gqsp import (
    GqspSequence,
    apply_to_operator,
    complete,
    controlled_unitary,
    evaluate_scalar,
    polynomial_roots,
    sup_norm_on_circle,
    synthesize,
)
from .linalg import (
    PolynomialSpec,
    adjoint,
    as_matrix,
    as_polynomial,
    ensure_square,
    horner_eval,
    kron,
    matmul,
    operator_norm,
    psd_sqrt,
)
from .regularize import RegularizedEncoding, branch_shift, incrementer, regularize

__version__ = "0.1.0"

__all__ = [
    "BlockEncoding",
    "GqspSequence",
    "JordanForm",
    "NormBoundError",
    "NumericalError",
    "PolynomialSpec",
    "QevtError",
    "RegularizedEncoding",
    "TransformReport",
    "TruncationPlan",
    "ValidationError",
    "adjoint",
    "apply_to_operator",
    "as_matrix",
    "as_polynomial",
    "assemble_circuit",
    "assemble_from_jordan",
    "branch_shift",
    "check_perturbation_bound",
    "complete",
    "controlled_unitary",
    "counter_order_for_degree",
    "dilate",
    "disk_samples",
    "ensure_square",
    "evaluate_scalar",
    "exp_plan",
    "horner_eval",
    "incrementer",
    "jordan_block",
    "jordan_poly",
    "kron",
    "matmul",
    "operator_norm",
    "perturbation_bound",
    "polynomial_roots",
    "psd_sqrt",
    "regularity_order",
    "regularity_profile",
    "regularize",
    "rescale",
    "shifted_inverse_plan",
    "sup_norm_on_circle",
    "synthesize",
    "taylor_truncation_order",
    "top_left_block",
    "transform",
    "verify_encoding",
]
