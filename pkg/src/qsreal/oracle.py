"""Whole-system numeric validation: re-run the condition algebra on matrices.

For a doubled system with identity commutation matrix and an exact parameter
assignment, every realizability condition can be recomputed with dense
truncated-Fock matrices (commutators and products as literal matrix
arithmetic) and compared against zero on the safe subspace.  This exercises a
completely different computational path from the symbolic normal-ordering
engine, so agreement is meaningful evidence and disagreement pinpoints the
stage that broke.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import Assignment, TruncatedRep
from .fock import represent as rep_poly
from .realizability import ExtractionResult
from .scalars import ScalarError
from .systems import DoubledSystem

__all__ = ["OracleCheck", "OracleReport", "run_oracle"]


@dataclass(frozen=True)
class OracleCheck:
    name: str
    max_error: float
    passed: bool


@dataclass(frozen=True)
class OracleReport:
    cutoff: int
    tolerance: float
    checks: tuple[OracleCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _max_degree(entries) -> int:
    return max((e.degree() or 0) for e in entries) if entries else 0


def run_oracle(d: DoubledSystem, extraction: ExtractionResult | None,
               cutoff: int, sigma: Assignment, tol: float = 1e-9) -> OracleReport:
    """Numerically recompute the five conditions and the generator identity."""
    if not d.theta.is_identity():
        raise ScalarError("the numeric oracle requires the identity "
                          "commutation matrix")
    rep = TruncatedRep(d.n, cutoff)
    a_mats = [rep_poly(e, rep, sigma) for e in d.a_bar]
    a_dag = [m.conj().T for m in a_mats]
    A_mats = [rep_poly(e, rep, sigma) for e in d.A_bar]
    B_mats = [[rep_poly(e, rep, sigma) for e in row] for row in d.B_bar.entries]
    C_mats = [rep_poly(e, rep, sigma) for e in d.C_bar]
    D_vals = [[complex(e.scalar_part().evaluate(sigma)) for e in row]
              for row in d.D_bar.entries]
    j_diag = [complex(d.J_bar.entries[i][i].scalar_part().evaluate(sigma))
              for i in range(2 * d.m)]

    deg_a = _max_degree(d.A_bar.entries)
    deg_b = _max_degree([e for row in d.B_bar.entries for e in row])
    deg_c = _max_degree(d.C_bar.entries)

    def comm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return x @ y - y @ x

    def max_on_safe(mat: np.ndarray, g: int) -> float:
        safe = rep.safe_states(g)
        if not safe:
            raise ScalarError(
                f"oracle cutoff {cutoff} too small for degree {g}")
        idx = np.ix_(safe, safe)
        return float(np.abs(mat[idx]).max())

    checks: list[OracleCheck] = []

    # (1) [Abar, abar†] + [abar, Abar†] + Bbar J Bbar†
    g1 = max(deg_a + 1, 2 * deg_b)
    worst = 0.0
    for p in range(2 * d.n):
        for q in range(2 * d.n):
            m = comm(A_mats[p], a_dag[q]) + comm(a_mats[p], A_mats[q].conj().T)
            for k in range(2 * d.m):
                m = m + j_diag[k] * (B_mats[p][k] @ B_mats[q][k].conj().T)
            worst = max(worst, max_on_safe(m, g1))
    checks.append(OracleCheck("drift_bracket_balance", worst, worst <= tol))

    # (2) [Bbar_{pj}, abar_k†] and (3) [abar_k, Bbar_{pj}†]
    g2 = deg_b + 1
    worst2 = 0.0
    worst3 = 0.0
    for p in range(2 * d.n):
        for j in range(2 * d.m):
            for k in range(2 * d.n):
                worst2 = max(worst2, max_on_safe(comm(B_mats[p][j], a_dag[k]), g2))
                worst3 = max(
                    worst3,
                    max_on_safe(comm(a_mats[k], B_mats[p][j].conj().T), g2))
    checks.append(OracleCheck("diffusion_commutes", worst2, worst2 <= tol))
    checks.append(OracleCheck("diffusion_adjoint_commutes", worst3, worst3 <= tol))

    # (4) Bbar - [Cbar†, abar] J
    g4 = max(deg_b, deg_c + 1)
    worst4 = 0.0
    for p in range(2 * d.n):
        for k in range(2 * d.m):
            m = B_mats[p][k] - comm(C_mats[k].conj().T, a_mats[p]) * j_diag[k]
            worst4 = max(worst4, max_on_safe(m, g4))
    checks.append(OracleCheck("diffusion_from_coupling", worst4, worst4 <= tol))

    # (5) Dbar - I
    eye = np.eye(2 * d.m)
    worst5 = float(np.abs(np.array(D_vals) - eye).max()) if d.m else 0.0
    checks.append(OracleCheck("output_identity", worst5, worst5 <= tol))

    # generator reproduction for the extracted Hamiltonian
    if extraction is not None:
        h_mat = rep_poly(extraction.hamiltonian, rep, sigma)
        gh = (extraction.hamiltonian.degree() or 0) + 1
        rhs = d.drift_minus_half_bc()
        worst6 = 0.0
        for j in range(2 * d.n):
            lhs = -1j * comm(a_mats[j], h_mat)
            m = lhs - rep_poly(rhs[j], rep, sigma)
            worst6 = max(worst6, max_on_safe(m, max(gh, deg_a)))
        checks.append(OracleCheck("generator_identity", worst6, worst6 <= tol))

    return OracleReport(cutoff=cutoff, tolerance=tol, checks=tuple(checks))
