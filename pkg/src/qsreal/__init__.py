"""qsreal: symbolic realizability checks for quantum stochastic models.

The package decides whether a set of quantum stochastic differential
equations in annihilation/creation operators preserves the canonical
commutation relations and is the representation of an open oscillator
(coupling operator plus self-adjoint Hamiltonian), extracts that oscillator
data when it is, and synthesizes the equations from given oscillator data.
All of it is exact symbolic algebra over complex rational functions in named
real parameters, cross-checked by a truncated Fock-space numeric oracle.
"""

from .scalars import (
    ComplexRational,
    ParameterError,
    Scalar,
    ScalarDivisionError,
    ScalarError,
    ScalarField,
)
from .ops import (
    CommutationMatrix,
    ModeMismatchError,
    OpPoly,
    adjoint,
    commutator,
    format_op_poly,
    grade,
    is_annihilation_only,
    product,
)
from .matrices import (
    OpMatrix,
    OpVector,
    SingularMatrixError,
    adjoint_matrix,
    adjoint_vector,
    comm_adj_vec,
    comm_vec_adj,
    comm_vec_transpose,
    invert_scalar_matrix,
    matmul,
    quad_form,
)
from .systems import (
    ClassReport,
    ConditionResidual,
    DoubledSystem,
    NoiseModel,
    QSystem,
    annihilation_vector,
    canonical_ito_table,
    class_check,
    double_up,
    nbar,
)
from .realizability import (
    ExtractionResult,
    Oscillator,
    RealizabilityReport,
    build_report,
    check_physical_realizability,
    check_preservation,
    extract_coupling,
    extract_hamiltonian,
    synthesize,
    verify_oscillator_representation,
)
from .fock import (
    CutoffError,
    TruncatedRep,
    agree_on_safe_subspace,
    commutator_agreement,
    product_agreement,
    represent,
    represent_exact,
)
from .oracle import OracleReport, run_oracle
from .parser import ParseError, SystemDescription, parse_description, print_description

__version__ = "0.1.0"
