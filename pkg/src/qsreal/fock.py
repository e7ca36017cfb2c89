"""Truncated Fock-space matrix representations: the numeric cross-check.

This module validates the symbolic normal-ordering algebra by substituting
finite matrices for the generators.  Each mode gets a d-level truncated Fock
space; a_j is the standard lowering matrix (subdiagonal sqrt(1)..sqrt(d-1))
tensored with identities.  Representations are only faithful against the
symbolic algebra for the identity commutation matrix.

Truncation corrupts the top of the excitation ladder, so comparisons are
restricted to matrix elements <u|.|v> with both states in the safe subspace
of total excitation <= d - 1 - g, where g bounds the operator degrees in
play; inside that region matrix elements are exact, making the float check a
genuine oracle (and the rational-arithmetic variant an exact one).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iter_product
from typing import Mapping, Sequence, Union

import numpy as np

from .ops import CommutationMatrix, OpPoly
from .scalars import ComplexRational, ScalarError

__all__ = [
    "CutoffError",
    "TruncatedRep",
    "agree_on_safe_subspace",
    "commutator_agreement",
    "product_agreement",
    "represent",
    "represent_exact",
]

Assignment = Mapping[str, Union[int, Fraction, ComplexRational]]


class CutoffError(ScalarError):
    """The cutoff is too small for the operator degrees being compared."""


class TruncatedRep:
    """Matrices for n modes on the tensor product of d-level Fock spaces."""

    def __init__(self, mode_count: int, cutoff: int):
        if mode_count < 0 or cutoff < 1:
            raise ValueError("need mode_count >= 0 and cutoff >= 1")
        self.mode_count = mode_count
        self.cutoff = cutoff
        self.dim = cutoff ** mode_count
        self._lowering: list[np.ndarray] | None = None

    # Basis states are tuples (v_1, ..., v_n), 0 <= v_j < cutoff, indexed
    # row-major: index = sum v_j * cutoff^(n-1-j).

    def state_index(self, v: Sequence[int]) -> int:
        idx = 0
        for x in v:
            idx = idx * self.cutoff + x
        return idx

    def states(self):
        return iter_product(range(self.cutoff), repeat=self.mode_count)

    def safe_states(self, degree: int) -> list[int]:
        """Indices of states with total excitation <= cutoff - 1 - degree."""
        limit = self.cutoff - 1 - degree
        return [self.state_index(v) for v in self.states() if sum(v) <= limit]

    def lowering(self, j: int) -> np.ndarray:
        """The standard lowering matrix of mode j on the full tensor space."""
        if self._lowering is None:
            d = self.cutoff
            single = np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1)
            eye = np.eye(d)
            mats = []
            for mode in range(self.mode_count):
                m = np.ones((1, 1), dtype=complex)
                for pos in range(self.mode_count):
                    m = np.kron(m, single if pos == mode else eye)
                mats.append(m)
            self._lowering = mats
        return self._lowering[j]


def _check_theta(theta: CommutationMatrix | None) -> None:
    if theta is not None and not theta.is_identity():
        raise ScalarError(
            "Fock-matrix representations are only valid for the identity "
            "commutation matrix")


def represent(p: OpPoly, rep: TruncatedRep, sigma: Assignment | None = None,
              theta: CommutationMatrix | None = None) -> np.ndarray:
    """Dense complex matrix of a normal-ordered polynomial.

    Coefficients are evaluated exactly at ``sigma`` and then converted to
    floats; creation powers act to the left of annihilation powers, exactly
    as written.
    """
    _check_theta(theta)
    if p.mode_count != rep.mode_count:
        raise ScalarError("polynomial and representation mode counts differ")
    sigma = sigma or {}
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    powers: dict[tuple[int, int, bool], np.ndarray] = {}

    def power(j: int, e: int, raise_op: bool) -> np.ndarray:
        key = (j, e, raise_op)
        m = powers.get(key)
        if m is None:
            base = rep.lowering(j).conj().T if raise_op else rep.lowering(j)
            m = np.linalg.matrix_power(base, e)
            powers[key] = m
        return m

    for (h, k), coeff in p.terms():
        mat = np.eye(rep.dim, dtype=complex)
        for j, e in enumerate(h):
            if e:
                mat = mat @ power(j, e, True)
        for j, e in enumerate(k):
            if e:
                mat = mat @ power(j, e, False)
        out += complex(coeff.evaluate(sigma)) * mat
    return out


ExactColumn = dict[int, ComplexRational]
ExactMatrix = dict[int, ExactColumn]  # column index -> sparse column


def represent_exact(p: OpPoly, rep: TruncatedRep,
                    sigma: Assignment | None = None,
                    theta: CommutationMatrix | None = None) -> ExactMatrix:
    """Exact sparse representation in the unnormalized ladder basis.

    Uses the basis |v> = a'^v |0> without sqrt normalization, in which a_j
    acts as v_j |v - e_j> and a_j' as |v + e_j>; every matrix element is then
    an exact complex rational.  Operator equality transfers between bases, so
    this is the arithmetic used for exact agreement checks (adjointness does
    not transfer: use the float basis when comparing against conjugate
    transposes).
    """
    _check_theta(theta)
    if p.mode_count != rep.mode_count:
        raise ScalarError("polynomial and representation mode counts differ")
    sigma = sigma or {}
    coeffs = [(h, k, c.evaluate(sigma)) for (h, k), c in p.terms()]
    out: ExactMatrix = {}
    for v in rep.states():
        col: ExactColumn = {}
        for h, k, c in coeffs:
            # annihilation part: falling factorials, zero if any mode empties
            weight = 1
            ok = True
            for vj, kj in zip(v, k):
                if kj > vj:
                    ok = False
                    break
                for step in range(kj):
                    weight *= (vj - step)
            if not ok or weight == 0:
                continue
            target = tuple(vj - kj + hj for vj, kj, hj in zip(v, k, h))
            if any(t >= rep.cutoff for t in target):
                continue  # truncated away, exactly like the matrix picture
            row = rep.state_index(target)
            value = c * weight
            prev = col.get(row)
            new = value if prev is None else prev + value
            if new.is_zero:
                col.pop(row, None)
            else:
                col[row] = new
        if col:
            out[rep.state_index(v)] = col
    return out


def _exact_matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    out: ExactMatrix = {}
    for col, bcol in b.items():
        acc: ExactColumn = {}
        for mid, w in bcol.items():
            acol = a.get(mid)
            if not acol:
                continue
            for row, x in acol.items():
                value = x * w
                prev = acc.get(row)
                new = value if prev is None else prev + value
                if new.is_zero:
                    acc.pop(row, None)
                else:
                    acc[row] = new
        if acc:
            out[col] = acc
    return out


def _exact_sub(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    out: ExactMatrix = {c: dict(col) for c, col in a.items()}
    for col, bcol in b.items():
        acc = out.setdefault(col, {})
        for row, w in bcol.items():
            prev = acc.get(row)
            new = -w if prev is None else prev - w
            if new.is_zero:
                acc.pop(row, None)
            else:
                acc[row] = new
        if not acc:
            out.pop(col)
    return out


def _is_exact_value(value) -> bool:
    return isinstance(value, (int, Fraction, ComplexRational))


MatrixLike = Union[OpPoly, np.ndarray]


def agree_on_safe_subspace(p: MatrixLike, q: MatrixLike, rep: TruncatedRep,
                           sigma: Assignment | None = None,
                           tol: float = 1e-9,
                           degree: int | None = None,
                           exact: bool | None = None,
                           theta: CommutationMatrix | None = None) -> bool:
    """Compare two operators' matrix elements between safe basis states.

    Inputs may be polynomials or precomputed dense matrices (pass ``degree``
    explicitly for matrices, or to override the degree bound).  The safe
    subspace is total excitation <= cutoff - 1 - degree; an empty safe
    subspace raises :class:`CutoffError`.  Exact rational arithmetic is used
    when both inputs are polynomials and the assignment is exact, unless
    ``exact`` forces a choice.
    """
    _check_theta(theta)
    sigma = sigma or {}
    polys = [x for x in (p, q) if isinstance(x, OpPoly)]
    if degree is None:
        if len(polys) < 2:
            raise CutoffError("matrix inputs need an explicit degree bound")
        degree = max((x.degree() or 0) for x in polys)
    safe = rep.safe_states(degree)
    if not safe:
        raise CutoffError(
            f"cutoff {rep.cutoff} is too small for degree {degree}")
    if exact is None:
        exact = len(polys) == 2 and all(_is_exact_value(v) for v in sigma.values())
    if exact:
        if len(polys) != 2:
            raise ScalarError("exact comparison requires polynomial inputs")
        mp = represent_exact(p, rep, sigma)
        mq = represent_exact(q, rep, sigma)
        diff = _exact_sub(mp, mq)
        safe_set = set(safe)
        for col, column in diff.items():
            if col not in safe_set:
                continue
            if any(row in safe_set for row in column):
                return False
        return True
    mp = p if isinstance(p, np.ndarray) else represent(p, rep, sigma)
    mq = q if isinstance(q, np.ndarray) else represent(q, rep, sigma)
    idx = np.ix_(safe, safe)
    a, b = mp[idx], mq[idx]
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return bool((np.abs(a - b) <= tol * scale).all())


def product_agreement(p: OpPoly, q: OpPoly, theta: CommutationMatrix,
                      rep: TruncatedRep, sigma: Assignment | None = None,
                      tol: float = 1e-9, exact: bool | None = None) -> bool:
    """Does the symbolic normal-ordered product match the matrix product?"""
    from .ops import product

    _check_theta(theta)
    sigma = sigma or {}
    g = max((p.degree() or 0), (q.degree() or 0))
    symbolic = product(p, q, theta)
    use_exact = exact
    if use_exact is None:
        use_exact = all(_is_exact_value(v) for v in sigma.values())
    if use_exact:
        lhs = represent_exact(symbolic, rep, sigma)
        rhs = _exact_matmul(represent_exact(p, rep, sigma),
                            represent_exact(q, rep, sigma))
        safe = set(rep.safe_states(g))
        if not safe:
            raise CutoffError(f"cutoff {rep.cutoff} too small for degree {g}")
        diff = _exact_sub(lhs, rhs)
        for col, column in diff.items():
            if col not in safe:
                continue
            if any(row in safe for row in column):
                return False
        return True
    mp = represent(p, rep, sigma)
    mq = represent(q, rep, sigma)
    return agree_on_safe_subspace(
        represent(symbolic, rep, sigma), mp @ mq, rep, sigma,
        tol=tol, degree=g, exact=False)


def commutator_agreement(p: OpPoly, q: OpPoly, theta: CommutationMatrix,
                         rep: TruncatedRep, sigma: Assignment | None = None,
                         tol: float = 1e-9, exact: bool | None = None) -> bool:
    """Does the symbolic commutator match the matrix commutator?"""
    from .ops import commutator

    _check_theta(theta)
    sigma = sigma or {}
    g = max((p.degree() or 0), (q.degree() or 0))
    symbolic = commutator(p, q, theta)
    use_exact = exact
    if use_exact is None:
        use_exact = all(_is_exact_value(v) for v in sigma.values())
    if use_exact:
        mp = represent_exact(p, rep, sigma)
        mq = represent_exact(q, rep, sigma)
        rhs = _exact_sub(_exact_matmul(mp, mq), _exact_matmul(mq, mp))
        lhs = represent_exact(symbolic, rep, sigma)
        safe = set(rep.safe_states(g))
        if not safe:
            raise CutoffError(f"cutoff {rep.cutoff} too small for degree {g}")
        diff = _exact_sub(lhs, rhs)
        for col, column in diff.items():
            if col not in safe:
                continue
            if any(row in safe for row in column):
                return False
        return True
    mp = represent(p, rep, sigma)
    mq = represent(q, rep, sigma)
    return agree_on_safe_subspace(
        represent(symbolic, rep, sigma), mp @ mq - mq @ mp, rep, sigma,
        tol=tol, degree=g, exact=False)
