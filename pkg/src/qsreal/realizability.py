"""Commutation preservation, physical realizability, and oscillator synthesis.

The five realizability conditions on a doubled system (Abar, Bbar, Cbar, Dbar)
with signature matrix Jbar are:

    (1) [Abar, abar†] + [abar, Abar†] + Bbar T Bbar† = 0
    (2) [Bbar, abar†] = 0        (every entry of Bbar vs every abar component)
    (3) [abar, Bbar†] = 0
    (4) Bbar - [Cbar†, abar] Jbar = 0
    (5) Dbar - I = 0

with T the doubled noise commutation table; preservation is (1)-(3), and
realizability is all five with T = Jbar.  When they hold, the system is the
representation of an open oscillator with coupling Lbar = Cbar and a
self-adjoint Hamiltonian recovered from the drift bilinear
abar† thetabar^-1 Abar - Abar† thetabar^-1 abar.

Condition residuals are exact operator polynomials; a report never contains a
"numerically small" pass.  Later pipeline stages always run, flagged advisory
when an earlier stage failed, so one report carries maximal diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrices import (
    OpMatrix,
    OpVector,
    adjoint_matrix,
    adjoint_vector,
    comm_adj_vec,
    comm_vec_adj,
    mat_vec,
    matmul,
)
from .ops import (
    CommutationMatrix,
    ModeMismatchError,
    OpPoly,
    adjoint,
    commutator,
    grade,
    is_annihilation_only,
    product,
)
from .scalars import ScalarError, ScalarField
from .systems import (
    ClassReport,
    ConditionResidual,
    DoubledSystem,
    ExtractionStalledError,
    NbarMode,
    QSystem,
    ThetaConvention,
    annihilation_vector,
    canonical_ito_table,
    class_check,
    commutator_vector,
    double_up,
    hamiltonian_candidate,
)

__all__ = [
    "ConditionResidual",
    "ExtractionResult",
    "Oscillator",
    "RealizabilityReport",
    "build_report",
    "check_physical_realizability",
    "check_preservation",
    "extract_coupling",
    "extract_hamiltonian",
    "synthesize",
    "verify_oscillator_representation",
]

PRESERVATION_NAMES = (
    "drift_bracket_balance",   # [Abar,abar†] + [abar,Abar†] + Bbar T Bbar†
    "diffusion_commutes",      # [Bbar, abar†]
    "diffusion_adjoint_commutes",  # [abar, Bbar†]
)
REALIZABILITY_NAMES = PRESERVATION_NAMES + (
    "diffusion_from_coupling",  # Bbar - [Cbar†, abar] Jbar
    "output_identity",          # Dbar - I
)


def _comm_matrix_vs_components(mat: OpMatrix, v: OpVector,
                               theta: CommutationMatrix,
                               adjoint_components: bool) -> OpMatrix:
    """Blocks [mat, x] for each component x of v (adjointed when asked), hstacked."""
    comps = [adjoint(e) for e in v.entries] if adjoint_components else list(v.entries)
    blocks = [
        mat.map(lambda entry, x=x: commutator(entry, x, theta))
        for x in comps
    ]
    if not blocks:
        return OpMatrix.zero(mat.field, mat.mode_count, mat.rows, 0)
    return OpMatrix.hstack(blocks)


def check_preservation(d: DoubledSystem) -> list[ConditionResidual]:
    """The three commutation-preservation residuals, using the system's T table."""
    return _three_conditions(d, d.T_bar)


def check_physical_realizability(d: DoubledSystem) -> list[ConditionResidual]:
    """All five realizability residuals (the first three taken with T = Jbar)."""
    conditions = _three_conditions(d, d.J_bar)
    theta = d.theta
    coupling_block = matmul(comm_adj_vec(d.C_bar, d.a_bar, theta), d.J_bar, theta)
    cond4 = ConditionResidual.from_residual(
        REALIZABILITY_NAMES[3], d.B_bar - coupling_block)
    eye = OpMatrix.identity(d.field, d.n, 2 * d.m)
    cond5 = ConditionResidual.from_residual(
        REALIZABILITY_NAMES[4], d.D_bar - eye)
    out = conditions + [cond4, cond5]
    if d.T_bar != d.J_bar:
        out[0] = ConditionResidual(
            name=out[0].name, residual=out[0].residual, passed=out[0].passed,
            note="premise violation: system noise commutation table is not the "
                 "signature matrix; conditions evaluated with the signature matrix",
        )
    return out


def _three_conditions(d: DoubledSystem, t_bar: OpMatrix) -> list[ConditionResidual]:
    theta = d.theta
    balance = (
        comm_vec_adj(d.A_bar, d.a_bar, theta)
        + comm_vec_adj(d.a_bar, d.A_bar, theta)
        + matmul(matmul(d.B_bar, t_bar, theta), adjoint_matrix(d.B_bar), theta)
    )
    cond1 = ConditionResidual.from_residual(PRESERVATION_NAMES[0], balance)

    cond2 = ConditionResidual.from_residual(
        PRESERVATION_NAMES[1],
        _comm_matrix_vs_components(d.B_bar, d.a_bar, theta, adjoint_components=True),
        note="blocks [Bbar, adj(abar_k)] for k = 1..2n, left to right",
    )
    b_dag = adjoint_matrix(d.B_bar)
    blocks3 = [
        b_dag.map(lambda entry, x=x: commutator(x, entry, theta))
        for x in d.a_bar.entries
    ]
    resid3 = OpMatrix.hstack(blocks3) if blocks3 else \
        OpMatrix.zero(d.field, d.n, 2 * d.m, 0)
    cond3 = ConditionResidual.from_residual(
        PRESERVATION_NAMES[2], resid3,
        note="blocks [abar_j, Bbar†] for j = 1..2n, left to right",
    )
    return [cond1, cond2, cond3]


@dataclass(frozen=True)
class ExtractionResult:
    """Hamiltonian extraction output plus its own consistency diagnostics."""

    hamiltonian: OpPoly
    coupling: OpVector                 # Lbar = Cbar
    reproduction_residual: OpVector    # -i[abar, H] - (Abar - 1/2 Bbar Cbar)
    mode: NbarMode
    degrees: tuple[int, ...]

    @property
    def self_adjoint(self) -> bool:
        return adjoint(self.hamiltonian) == self.hamiltonian

    @property
    def reproduces_generator(self) -> bool:
        return self.reproduction_residual.is_zero


def extract_hamiltonian(d: DoubledSystem, mode: NbarMode = "graded") -> ExtractionResult:
    """Recover the implied Hamiltonian from the drift bilinear.

    ``graded`` (default) peels homogeneous degrees top-down; ``literal`` uses
    the single global factor i/(2 nbar) with nbar from the sup formula, and an
    integer selects that factor explicitly.  The result always reports the
    generator-reproduction residual -i[abar, H] - (Abar - 1/2 Bbar Cbar); a
    nonzero residual means no Hamiltonian of this form generates the drift,
    and the returned polynomial is diagnostic only.
    """
    field = d.field
    h, degrees = hamiltonian_candidate(d, mode)
    lhs = commutator_vector(h, d.a_bar, d.theta).scale(field.i)  # -i[abar, h]
    residual = lhs - d.drift_minus_half_bc()
    return ExtractionResult(
        hamiltonian=h,
        coupling=d.C_bar,
        reproduction_residual=residual,
        mode=mode,
        degrees=degrees,
    )


def extract_coupling(d: DoubledSystem) -> OpVector:
    """The coupling operator of a realizable system is the doubled output map."""
    return d.C_bar


@dataclass(frozen=True)
class Oscillator:
    """Open-oscillator data: commutation matrix, self-adjoint H, coupling L.

    L is the undoubled coupling vector (length = channel count) and must be
    annihilation-only; H must satisfy adjoint(H) = H.
    """

    field: ScalarField
    theta: CommutationMatrix
    hamiltonian: OpPoly
    coupling: OpVector

    def __post_init__(self):
        n = self.theta.mode_count
        if self.hamiltonian.mode_count != n or self.coupling.mode_count != n:
            raise ModeMismatchError("oscillator pieces disagree on mode count")
        if self.hamiltonian.field != self.field or self.coupling.field != self.field:
            raise ModeMismatchError("oscillator pieces disagree on field")
        if adjoint(self.hamiltonian) != self.hamiltonian:
            raise ScalarError("oscillator Hamiltonian must be self-adjoint")
        for j, entry in enumerate(self.coupling):
            if not is_annihilation_only(entry):
                raise ScalarError(
                    f"coupling entry {j + 1} contains creation operators")

    @property
    def n(self) -> int:
        return self.theta.mode_count

    @property
    def m(self) -> int:
        return len(self.coupling)


def synthesize(osc: Oscillator, m: int | None = None) -> QSystem:
    """Build the QSDE system generated by an oscillator (H, L).

    Drift entries are (1/2) [L†, a_i] L - i [a_i, H]; the diffusion matrix is
    B[i][j] = [adj(L_j), a_i]; the output map is C = L with D = I and the
    canonical vacuum noise tables.
    """
    if m is None:
        m = osc.m
    if m != osc.m:
        raise ModeMismatchError(
            f"channel count {m} != coupling length {osc.m}")
    field = osc.field
    theta = osc.theta
    n = osc.n
    a = annihilation_vector(field, n)
    l_adj = [adjoint(entry) for entry in osc.coupling]
    half = field.one / 2
    minus_i = -field.i

    drift_entries = []
    b_rows = []
    for i in range(n):
        row = [commutator(lj, a[i], theta) for lj in l_adj]  # [L_j†, a_i]
        b_rows.append(row)
        damping = OpPoly.zero(field, n)
        for bij, lj in zip(row, osc.coupling):
            if bij.is_zero or lj.is_zero:
                continue
            damping = damping + product(bij, lj, theta)
        drift = damping * half \
            + commutator(a[i], osc.hamiltonian, theta) * minus_i
        drift_entries.append(drift)

    return QSystem(
        field=field,
        theta=theta,
        A=OpVector(field, n, drift_entries),
        B=OpMatrix(field, n, n, m, b_rows),
        C=osc.coupling,
        D=OpMatrix.identity(field, n, m),
        noise=canonical_ito_table(field, m, mode_count=n),
    )


OSCILLATOR_EQUATION_NAMES = (
    "drift_from_oscillator",      # Abar = (1/2)[Lbar†, abar] Jbar Lbar + i[Hbar, abar]
    "diffusion_from_oscillator",  # Bbar = [Lbar†, abar] Jbar
    "output_is_coupling",         # Cbar = Lbar
    "output_identity",            # Dbar = I
)


def verify_oscillator_representation(osc: Oscillator,
                                     d: DoubledSystem) -> list[ConditionResidual]:
    """Residuals of the four oscillator-representation equations for (H, L)."""
    field = d.field
    theta = d.theta
    if osc.n != d.n or osc.m != d.m or osc.field != field:
        raise ModeMismatchError("oscillator and system shapes disagree")
    l_bar = osc.coupling.concat(adjoint_vector(osc.coupling))
    bracket = comm_adj_vec(l_bar, d.a_bar, theta)         # [Lbar†, abar]
    bracket_j = matmul(bracket, d.J_bar, theta)
    half = field.one / 2
    drift = mat_vec(bracket_j, l_bar, theta).scale(half) + commutator_vector(
        osc.hamiltonian, d.a_bar, theta).scale(field.i)
    r1 = ConditionResidual.from_residual(
        OSCILLATOR_EQUATION_NAMES[0], d.A_bar - drift)
    r2 = ConditionResidual.from_residual(
        OSCILLATOR_EQUATION_NAMES[1], d.B_bar - bracket_j)
    r3 = ConditionResidual.from_residual(
        OSCILLATOR_EQUATION_NAMES[2], d.C_bar - l_bar)
    eye = OpMatrix.identity(field, d.n, 2 * d.m)
    r4 = ConditionResidual.from_residual(
        OSCILLATOR_EQUATION_NAMES[3], d.D_bar - eye)
    return [r1, r2, r3, r4]


@dataclass(frozen=True)
class RealizabilityReport:
    """Full pipeline outcome: class, preservation, realizability, extraction.

    The extracted Hamiltonian/coupling are exposed only when every
    realizability condition passed; a failed run still carries the advisory
    extraction for diagnosis.
    """

    system_name: str
    class_report: ClassReport
    preservation: tuple[ConditionResidual, ...]
    realizability: tuple[ConditionResidual, ...]
    extraction: ExtractionResult | None
    extraction_error: str
    nbar_mode: NbarMode
    theta_convention: ThetaConvention

    @property
    def realizable(self) -> bool:
        return all(c.passed for c in self.realizability)

    @property
    def preserves_commutation(self) -> bool:
        return all(c.passed for c in self.preservation)

    @property
    def hamiltonian(self) -> OpPoly | None:
        if self.realizable and self.extraction is not None \
                and self.extraction.reproduces_generator:
            return self.extraction.hamiltonian
        return None

    @property
    def coupling(self) -> OpVector | None:
        if self.realizable and self.extraction is not None:
            return self.extraction.coupling
        return None


def build_report(system: QSystem, name: str = "",
                 nbar_mode: NbarMode = "graded",
                 theta_convention: ThetaConvention = "physical",
                 strict_shape: bool = True) -> RealizabilityReport:
    """Run the fixed pipeline class -> preservation -> realizability -> extraction.

    Every stage always runs; failures downgrade later stages to advisory
    rather than suppressing them.
    """
    cls = class_check(system, nbar_mode=nbar_mode, strict_shape=strict_shape,
                      theta_convention=theta_convention)
    d = double_up(system, theta_convention)
    preservation = tuple(check_preservation(d))
    realizability = tuple(check_physical_realizability(d))
    extraction = None
    extraction_error = ""
    try:
        extraction = extract_hamiltonian(d, nbar_mode)
    except (ScalarError, ExtractionStalledError, ValueError) as exc:
        extraction_error = str(exc)
    return RealizabilityReport(
        system_name=name,
        class_report=cls,
        preservation=preservation,
        realizability=realizability,
        extraction=extraction,
        extraction_error=extraction_error,
        nbar_mode=nbar_mode,
        theta_convention=theta_convention,
    )
