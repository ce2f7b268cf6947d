"""Spectral estimation for band-limited self-adjoint operators.

The library approximates the spectrum (more precisely the essential
spectrum) of an infinite band-limited operator from the eigenvalues of its
finite compressions: build an operator spec, run an eigenvalue ladder over
a filtration, then classify points and compare eigenvalue averages against
their symbol references.
"""

from .analysis import (
    DEFAULT_SCHEDULE,
    ESSENTIAL,
    INDETERMINATE,
    NOT_IN_LAMBDA,
    TRANSIENT,
    ClassificationReport,
    ContainmentReport,
    EigLadder,
    EmpiricalMeasure,
    LadderStep,
    SpectrumEstimate,
    Thresholds,
    classify,
    containment_check,
    counting,
    density,
    eigenvalues_of,
    integrate,
    lambda_membership,
    run_ladder,
    spectrum_estimate,
    szego_reference,
    weak_star_gap,
)
from .compression import (
    CompressedMatrix,
    Filtration,
    commutator_hs_norm,
    compress,
    degree_estimate,
    dfnorm_bound,
    product_compression_defect,
    trace_state_defect,
)
from .eigensolver import (
    EigenvalueList,
    TridiagonalForm,
    householder_tridiagonalize,
    sturm_count,
    symmetric_eigenvalues,
    trace_norm,
    tridiagonal_eigenvalues,
)
from .errors import (
    BandspecError,
    ConfigError,
    ConvergenceError,
    DomainError,
    SymmetryError,
    UnsupportedOperatorError,
)
from .operators import (
    BILATERAL,
    UNILATERAL,
    OperatorSpec,
    PermutationOperator,
    PermutationSpec,
    SymbolSpec,
    almost_mathieu_operator,
    appendix_permutation,
    banded_operator,
    diagonal_part,
    entry,
    fourier_coefficients,
    laurent_operator,
    make_potential,
    permutation_operator,
)

__version__ = "0.1.0"

__all__ = [
    "BILATERAL",
    "UNILATERAL",
    "DEFAULT_SCHEDULE",
    "ESSENTIAL",
    "TRANSIENT",
    "INDETERMINATE",
    "NOT_IN_LAMBDA",
    "BandspecError",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "SymmetryError",
    "UnsupportedOperatorError",
    "OperatorSpec",
    "SymbolSpec",
    "PermutationSpec",
    "PermutationOperator",
    "Filtration",
    "CompressedMatrix",
    "TridiagonalForm",
    "EigenvalueList",
    "EmpiricalMeasure",
    "EigLadder",
    "LadderStep",
    "ClassificationReport",
    "ContainmentReport",
    "SpectrumEstimate",
    "Thresholds",
    "entry",
    "fourier_coefficients",
    "laurent_operator",
    "banded_operator",
    "diagonal_part",
    "almost_mathieu_operator",
    "appendix_permutation",
    "permutation_operator",
    "make_potential",
    "compress",
    "degree_estimate",
    "dfnorm_bound",
    "commutator_hs_norm",
    "trace_state_defect",
    "product_compression_defect",
    "householder_tridiagonalize",
    "tridiagonal_eigenvalues",
    "symmetric_eigenvalues",
    "sturm_count",
    "trace_norm",
    "counting",
    "density",
    "integrate",
    "szego_reference",
    "weak_star_gap",
    "lambda_membership",
    "classify",
    "spectrum_estimate",
    "containment_check",
    "run_ladder",
    "eigenvalues_of",
    "__version__",
]
