"""QSDE system model: drift/diffusion data, doubled form, noise algebra.

A system is the data of the quantum stochastic differential equations

    da = A(a, a') dt + B(a, a') dW        dy = C(a) dt + D dW

over n modes and m field channels, together with the commutation matrix
theta ([a_j, a_l'] = theta_jl) and the noise Ito/commutation tables.  The
doubled form stacks a with its entrywise adjoint, abar = [a; a*], and carries
the block matrices Abar, Bbar, Cbar, Dbar plus the doubled commutation and
noise-commutation matrices.

Two conventions are supported for the doubled commutation matrix:

* ``physical`` (default): thetabar = diag(theta, -theta^T), which is what the
  engine's own commutator [abar, abar†] evaluates to, and equals diag(I, -I)
  for theta = I.
* ``paper``: thetabar = diag(theta, theta^*), kept for side-by-side
  comparison with the printed convention it mirrors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

from .matrices import (
    OpMatrix,
    OpVector,
    SingularMatrixError,
    adjoint_vector,
    comm_vec_transpose,
    invert_scalar_matrix,
    mat_vec,
    quad_form,
)
from .ops import (
    CommutationMatrix,
    ModeMismatchError,
    OpPoly,
    adjoint,
    commutator,
    grade,
)
from .scalars import Scalar, ScalarError, ScalarField

__all__ = [
    "ClassReport",
    "ConditionResidual",
    "DoubledSystem",
    "ExtractionStalledError",
    "NbarMode",
    "NbarUndefinedError",
    "NoiseModel",
    "QSystem",
    "ThetaConvention",
    "annihilation_vector",
    "canonical_ito_table",
    "class_check",
    "commutator_vector",
    "double_up",
    "generator_bilinear",
    "hamiltonian_candidate",
    "literal_nbar",
    "nbar",
]

ThetaConvention = Literal["physical", "paper"]
NbarMode = Union[Literal["literal", "graded"], int]

Residual = Union[OpPoly, OpVector, OpMatrix]


@dataclass(frozen=True)
class ConditionResidual:
    """Outcome of one symbolic condition: a name, its residual, and a verdict.

    ``passed`` is true iff the residual is exactly the zero polynomial /
    vector / matrix; conditions are never 'numerically small'.
    """

    name: str
    residual: Residual
    passed: bool
    note: str = ""

    @classmethod
    def from_residual(cls, name: str, residual: Residual, note: str = "") -> "ConditionResidual":
        return cls(name=name, residual=residual, passed=residual.is_zero, note=note)


def annihilation_vector(field: ScalarField, n: int) -> OpVector:
    return OpVector(field, n, tuple(OpPoly.annihilator(field, n, j) for j in range(n)))


@dataclass(frozen=True)
class NoiseModel:
    """Second-order noise data: Ito covariance F and commutation table T."""

    field: ScalarField
    m: int
    ito: OpMatrix           # F: dw dw† = F dt
    commutation: OpMatrix   # T: [dw, dw†] = T dt

    def __post_init__(self):
        for name, mat in (("ito", self.ito), ("commutation", self.commutation)):
            if mat.rows != self.m or mat.cols != self.m:
                raise ModeMismatchError(f"noise {name} table must be {self.m}x{self.m}")
            if not mat.is_scalar_entries():
                raise ScalarError(f"noise {name} table must have scalar entries")
            if not _is_hermitian_scalar(mat):
                raise ScalarError(f"noise {name} table must be Hermitian")

    def ito_nonnegative_at(self, assignment, tol: float = 1e-12) -> bool:
        """Numeric check that F is non-negative definite at a parameter point."""
        import numpy as np

        f = np.array(
            [
                [complex(self.ito.entries[i][j].scalar_part().evaluate(assignment))
                 for j in range(self.m)]
                for i in range(self.m)
            ]
        )
        if self.m == 0:
            return True
        eigs = np.linalg.eigvalsh((f + f.conj().T) / 2)
        return bool(eigs.min() >= -tol)


def _is_hermitian_scalar(mat: OpMatrix) -> bool:
    for i in range(mat.rows):
        for j in range(mat.cols):
            a = mat.entries[i][j].scalar_part()
            b = mat.entries[j][i].scalar_part().conj()
            if a != b:
                return False
    return True


def canonical_ito_table(field: ScalarField, m: int, mode_count: int | None = None) -> NoiseModel:
    """Canonical vacuum inputs: dW_k dW_l' = delta_kl dt, F = T = I."""
    mc = m if mode_count is None else mode_count
    eye = OpMatrix.identity(field, mc, m)
    return NoiseModel(field=field, m=m, ito=eye, commutation=eye)


@dataclass(frozen=True)
class QSystem:
    """The (theta, A, B, C, D) data of one undoubled system."""

    field: ScalarField
    theta: CommutationMatrix
    A: OpVector
    B: OpMatrix
    C: OpVector
    D: OpMatrix
    noise: NoiseModel

    def __post_init__(self):
        n = self.theta.mode_count
        m = len(self.C)
        if len(self.A) != n:
            raise ModeMismatchError("drift vector length must equal mode count")
        for vec in (self.A, self.C):
            if vec.mode_count != n or vec.field != self.field:
                raise ModeMismatchError("system pieces disagree on field/modes")
        if self.B.rows != n or self.B.cols != m:
            raise ModeMismatchError(f"diffusion matrix must be {n}x{m}")
        if self.D.rows != m or self.D.cols != m:
            raise ModeMismatchError(f"output matrix must be {m}x{m}")
        if not self.D.is_scalar_entries():
            raise ScalarError("output matrix D must have scalar entries")
        if self.noise.m != m or self.noise.field != self.field:
            raise ModeMismatchError("noise model channel count mismatch")

    @property
    def n(self) -> int:
        return self.theta.mode_count

    @property
    def m(self) -> int:
        return len(self.C)

    def modes(self) -> OpVector:
        return annihilation_vector(self.field, self.n)


@dataclass(frozen=True)
class DoubledSystem:
    """Doubled-up form of a QSystem (abar = [a; a*] and the block matrices)."""

    base: QSystem
    a_bar: OpVector          # length 2n
    A_bar: OpVector          # length 2n
    B_bar: OpMatrix          # 2n x 2m
    C_bar: OpVector          # length 2m
    D_bar: OpMatrix          # 2m x 2m
    theta_bar: OpMatrix      # 2n x 2n, scalar entries
    T_bar: OpMatrix          # 2m x 2m, scalar entries
    J_bar: OpMatrix          # 2m x 2m signature diag(I, -I)
    theta_convention: ThetaConvention = "physical"

    @property
    def field(self) -> ScalarField:
        return self.base.field

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def theta(self) -> CommutationMatrix:
        return self.base.theta

    def theta_bar_inverse(self) -> OpMatrix:
        return invert_scalar_matrix(self.theta_bar)

    def drift_minus_half_bc(self) -> OpVector:
        """Abar - (1/2) Bbar Cbar, the pure-Hamiltonian part of the drift."""
        half = self.field.one / 2
        bc = mat_vec(self.B_bar, self.C_bar, self.theta)
        return self.A_bar - bc.scale(half)


def _signature_matrix(field: ScalarField, mode_count: int, m: int) -> OpMatrix:
    one = OpPoly.from_scalar(field, mode_count, field.one)
    z = OpPoly.zero(field, mode_count)
    size = 2 * m
    return OpMatrix(field, mode_count, size, size, [
        [(one if i == j and i < m else (-one if i == j else z))
         for j in range(size)]
        for i in range(size)
    ])


def _doubled_theta(field: ScalarField, theta: CommutationMatrix,
                   convention: ThetaConvention) -> OpMatrix:
    n = theta.mode_count
    z = field.zero
    grid: list[list[Scalar]] = [[z] * (2 * n) for _ in range(2 * n)]
    for j in range(n):
        for l in range(n):
            grid[j][l] = theta.entry(j, l)
            if convention == "physical":
                grid[n + j][n + l] = -theta.entry(l, j)       # -theta^T
            else:
                grid[n + j][n + l] = theta.entry(j, l).conj() # theta^*
    return OpMatrix.from_scalars(field, n, grid)


def double_up(system: QSystem,
              theta_convention: ThetaConvention = "physical") -> DoubledSystem:
    """Stack a system with its entrywise adjoint into the doubled form."""
    if isinstance(system, DoubledSystem):
        raise TypeError("system is already doubled; double_up needs the undoubled form")
    if not isinstance(system, QSystem):
        raise TypeError("double_up expects a QSystem")
    if theta_convention not in ("physical", "paper"):
        raise ValueError(f"unknown theta convention {theta_convention!r}")
    field = system.field
    n, m = system.n, system.m
    a = system.modes()
    a_bar = a.concat(adjoint_vector(a))
    A_bar = system.A.concat(adjoint_vector(system.A))
    B_bar = OpMatrix.block_diag(system.B, system.B.map(adjoint))
    C_bar = system.C.concat(adjoint_vector(system.C))
    D_bar = OpMatrix.block_diag(system.D, system.D.map(adjoint))
    theta_bar = _doubled_theta(field, system.theta, theta_convention)
    # T_bar = diag(T, -T^T): the doubled noise commutation implied by T, which
    # reduces to the signature matrix for canonical vacuum inputs.
    t = system.noise.commutation
    t_lower = OpMatrix(field, n, m, m,
                       [[-t.entries[l][j] for l in range(m)] for j in range(m)])
    T_bar = OpMatrix.block_diag(t, t_lower)
    J_bar = _signature_matrix(field, n, m)
    return DoubledSystem(
        base=system, a_bar=a_bar, A_bar=A_bar, B_bar=B_bar, C_bar=C_bar,
        D_bar=D_bar, theta_bar=theta_bar, T_bar=T_bar, J_bar=J_bar,
        theta_convention=theta_convention,
    )


# ---------------------------------------------------------------------------
# n-bar and the implied-Hamiltonian candidate
# ---------------------------------------------------------------------------

class NbarUndefinedError(ScalarError):
    """The drift is identically zero, so the literal degree bound is undefined."""


def literal_nbar(system: QSystem) -> int:
    """sup of (creation degree + annihilation degree) over the drift's monomials."""
    best = None
    for entry in system.A:
        for (h, k), _ in entry.terms():
            d = sum(h) + sum(k)
            best = d if best is None else max(best, d)
    if best is None:
        raise NbarUndefinedError("zero drift: the degree bound is undefined")
    return best


def commutator_vector(p: OpPoly, v: OpVector, theta: CommutationMatrix) -> OpVector:
    """[p, v] entrywise: entry j = [p, v_j]."""
    return OpVector(v.field, v.mode_count,
                    tuple(commutator(p, e, theta) for e in v.entries))


def _hamiltonian_drift(h: OpPoly, d: DoubledSystem) -> OpVector:
    """Doubled drift of the closed dynamics: entries -i [abar_j, h]."""
    minus_i = -d.field.i
    top = [commutator(OpPoly.annihilator(d.field, d.n, j), h, d.theta) * minus_i
           for j in range(d.n)]
    vec = OpVector(d.field, d.n, top)
    return vec.concat(adjoint_vector(vec))


def generator_bilinear(d: DoubledSystem) -> OpPoly:
    """X = abar† thetabar^-1 Abar - Abar† thetabar^-1 abar (anti-self-adjoint)."""
    tb_inv = d.theta_bar_inverse()
    return quad_form(d.a_bar, tb_inv, d.A_bar, d.theta) \
        - quad_form(d.A_bar, tb_inv, d.a_bar, d.theta)


class ExtractionStalledError(ScalarError):
    """Graded extraction failed to reduce the bilinear's degree (no candidate)."""


def hamiltonian_candidate(d: DoubledSystem, mode: NbarMode = "graded") -> tuple[OpPoly, tuple[int, ...]]:
    """Implied Hamiltonian from the drift bilinear, plus its component degrees.

    ``literal`` (or an explicit integer nb) applies the single global factor
    i/(2 nb) to the whole bilinear.  ``graded`` peels homogeneous components
    from the top degree down: the degree-D component contributes (i/2D) X_D,
    whose own bilinear is then subtracted before descending, so that mixed
    creation/annihilation powers on one mode do not leak into lower degrees.
    Degree-0 (scalar) components are discarded in both modes.
    """
    field = d.field
    x = generator_bilinear(d)
    if mode == "literal" or isinstance(mode, int):
        nb = literal_nbar(d.base) if mode == "literal" else mode
        if nb <= 0:
            raise ValueError("degree bound must be positive")
        h = x * (field.i / (2 * nb))
        h = h - OpPoly.from_scalar(field, d.n, h.scalar_part())
        degrees = tuple(sorted(grade(h)))
        return h, degrees
    if mode != "graded":
        raise ValueError(f"unknown extraction mode {mode!r}")
    h_total = OpPoly.zero(field, d.n)
    degrees: list[int] = []
    remainder = x
    while True:
        comps = {deg: comp for deg, comp in grade(remainder).items() if deg > 0}
        if not comps:
            break
        top = max(comps)
        h_top = comps[top] * (field.i / (2 * top))
        h_total = h_total + h_top
        degrees.append(top)
        drift = _hamiltonian_drift(h_top, d)
        tb_inv = d.theta_bar_inverse()
        x_top = quad_form(d.a_bar, tb_inv, drift, d.theta) \
            - quad_form(drift, tb_inv, d.a_bar, d.theta)
        remainder = remainder - x_top
        new_comps = {deg for deg in grade(remainder) if deg >= top}
        if new_comps:
            raise ExtractionStalledError(
                f"graded extraction did not reduce the degree below {top}")
    return h_total, tuple(sorted(degrees))


def nbar(system: QSystem, mode: Literal["literal", "graded"] = "literal",
         theta_convention: ThetaConvention = "physical"):
    """Degree bound of the drift: the literal sup formula, or the graded set.

    ``literal`` returns an integer; ``graded`` returns the tuple of
    homogeneous degrees of the Hamiltonian implied by the drift bilinear.
    """
    if mode == "literal":
        return literal_nbar(system)
    if mode == "graded":
        _, degrees = hamiltonian_candidate(double_up(system, theta_convention), "graded")
        return degrees
    raise ValueError(f"unknown nbar mode {mode!r}")


# ---------------------------------------------------------------------------
# Class membership (the admissible-system checks)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassReport:
    """Verdicts and exact residuals of the four class-membership conditions."""

    conditions: tuple[ConditionResidual, ...]
    nbar_literal: int | None
    nbar_graded: tuple[int, ...]
    nbar_used: NbarMode
    strict_shape: bool
    theta_convention: ThetaConvention

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, name: str) -> ConditionResidual:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)


def _shape_violations(system: QSystem, strict: bool) -> tuple[OpVector, OpVector, str]:
    """Monomial-shape residuals for drift and coupling entries.

    Drift monomials must be a power of a single annihilation generator times
    a power of a single creation generator; coupling monomials must be powers
    of a single annihilation generator.  With ``strict`` off, multi-generator
    monomials are tolerated everywhere (creation factors in the coupling are
    still violations).
    """
    field = system.field
    n = system.n

    def bad_part(poly: OpPoly, coupling: bool) -> OpPoly:
        bad = OpPoly.zero(field, n)
        for (h, k), coeff in poly.terms():
            multi = sum(1 for e in k if e) > 1 or sum(1 for e in h if e) > 1
            creation_in_coupling = coupling and any(h)
            if creation_in_coupling or (strict and multi):
                bad = bad + OpPoly.monomial(field, n, h, k, coeff)
        return bad

    a_bad = OpVector(field, n, tuple(bad_part(e, False) for e in system.A))
    c_bad = OpVector(field, n, tuple(bad_part(e, True) for e in system.C))
    note = "" if strict else "multi-generator monomials tolerated (strict shape off)"
    return a_bad, c_bad, note


def class_check(system: QSystem, nbar_mode: NbarMode = "graded",
                strict_shape: bool = True,
                theta_convention: ThetaConvention = "physical") -> ClassReport:
    """The four admissible-class conditions with exact symbolic residuals.

    (i) monomial shape of drift and coupling entries; (ii) [C, a^T] = 0;
    (iii) [A, a^T] + [a, A^T] = 0; (iv) the degree-scaled drift-bilinear
    identity against Abar - (1/2) Bbar Cbar, evaluated per ``nbar_mode``.
    Violations are reported, never raised.
    """
    field = system.field
    a = system.modes()

    a_bad, c_bad, shape_note = _shape_violations(system, strict_shape)
    shape = ConditionResidual.from_residual(
        "monomial_shape", a_bad.concat(c_bad), note=shape_note)

    coupling = ConditionResidual.from_residual(
        "coupling_commutes",
        comm_vec_transpose(system.C, a, system.theta),
    )

    antisym = ConditionResidual.from_residual(
        "drift_antisymmetry",
        comm_vec_transpose(system.A, a, system.theta)
        + comm_vec_transpose(a, system.A, system.theta),
    )

    d = double_up(system, theta_convention)
    rhs = d.drift_minus_half_bc()
    nbar_lit: int | None
    try:
        nbar_lit = literal_nbar(system)
    except NbarUndefinedError:
        nbar_lit = None

    note = ""
    if system.n == 0 or all(e.is_zero for e in system.A):
        lhs = OpVector.zero(field, system.n, 2 * system.n)
        degrees: tuple[int, ...] = ()
        note = "zero drift: identity holds vacuously"
    elif nbar_mode == "literal" or isinstance(nbar_mode, int):
        nb = nbar_lit if nbar_mode == "literal" else nbar_mode
        if nb is None or nb <= 0:
            lhs = OpVector.zero(field, system.n, 2 * system.n)
            degrees = ()
            note = "degree bound undefined for zero drift"
        else:
            x = generator_bilinear(d)
            scale = field.one / (2 * nb)
            # (1/2nb)[X†-side, abar] - (1/2nb)[X-side, abar] = -(1/nb)[X, abar]... kept
            # literally as the two-bracket difference for fidelity.
            tb_inv = d.theta_bar_inverse()
            y = quad_form(d.A_bar, tb_inv, d.a_bar, d.theta)
            xx = quad_form(d.a_bar, tb_inv, d.A_bar, d.theta)
            lhs = (commutator_vector(y, d.a_bar, d.theta)
                   - commutator_vector(xx, d.a_bar, d.theta)).scale(scale)
            degrees = (nb,)
    else:
        # i[h, abar] = -i[abar, h], the generator-reproduction left side
        h, degrees = hamiltonian_candidate(d, "graded")
        lhs = commutator_vector(h, d.a_bar, d.theta).scale(field.i)
    generator = ConditionResidual.from_residual(
        "generator_identity", lhs - rhs, note=note)

    if nbar_mode == "graded":
        graded_degrees = degrees
    else:
        try:
            graded_degrees = hamiltonian_candidate(d, "graded")[1]
        except (ExtractionStalledError, SingularMatrixError):
            graded_degrees = ()

    return ClassReport(
        conditions=(shape, coupling, antisym, generator),
        nbar_literal=nbar_lit,
        nbar_graded=graded_degrees,
        nbar_used=nbar_mode,
        strict_shape=strict_shape,
        theta_convention=theta_convention,
    )
