"""Vectors and matrices of operator polynomials, and the commutator patterns.

The theorem statements are phrased through a small set of matrix-valued
commutator patterns, fixed here once and for all:

    comm_vec_adj(M, v)[j][k]       = [M_j, adj(v_k)]     (the paper-style [M, v†])
    comm_adj_vec(v, u)[j][k]       = [adj(v_k), u_j]     (the [v†, u] pattern)
    comm_vec_transpose(M, v)[j][k] = [M_j, v_k]          (the [M, v^T] pattern)

Scalar-valued matrices (signature matrices, Ito tables, commutation blocks)
are ordinary OpMatrix values whose entries have degree 0; only those can be
inverted (exact Gauss-Jordan elimination over the coefficient field).
"""

from __future__ import annotations

from typing import Callable, Sequence

from .ops import (
    CommutationMatrix,
    ModeMismatchError,
    OpPoly,
    adjoint,
    commutator,
    product,
)
from .scalars import Scalar, ScalarError, ScalarField

__all__ = [
    "OpMatrix",
    "OpVector",
    "SingularMatrixError",
    "adjoint_matrix",
    "adjoint_vector",
    "comm_adj_vec",
    "comm_vec_adj",
    "comm_vec_transpose",
    "invert_scalar_matrix",
    "matmul",
    "quad_form",
]


class SingularMatrixError(ScalarError):
    """Exact elimination found no inverse."""


class OpVector:
    """Column vector of operator polynomials over a common mode count."""

    __slots__ = ("field", "mode_count", "entries")

    def __init__(self, field: ScalarField, mode_count: int,
                 entries: Sequence[OpPoly]):
        entries = tuple(entries)
        for e in entries:
            if e.field != field or e.mode_count != mode_count:
                raise ModeMismatchError("vector entries disagree on field/modes")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "mode_count", mode_count)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("OpVector is immutable")

    @classmethod
    def zero(cls, field: ScalarField, mode_count: int, length: int) -> "OpVector":
        z = OpPoly.zero(field, mode_count)
        return cls(field, mode_count, (z,) * length)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, j: int) -> OpPoly:
        return self.entries[j]

    def __iter__(self):
        return iter(self.entries)

    def __add__(self, other: "OpVector") -> "OpVector":
        self._like(other)
        return OpVector(self.field, self.mode_count,
                        tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "OpVector") -> "OpVector":
        self._like(other)
        return OpVector(self.field, self.mode_count,
                        tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "OpVector":
        return OpVector(self.field, self.mode_count,
                        tuple(-a for a in self.entries))

    def scale(self, s) -> "OpVector":
        return OpVector(self.field, self.mode_count,
                        tuple(e * s for e in self.entries))

    def concat(self, other: "OpVector") -> "OpVector":
        self._like(other, length=False)
        return OpVector(self.field, self.mode_count, self.entries + other.entries)

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for e in self.entries)

    def _like(self, other: "OpVector", length: bool = True) -> None:
        if not isinstance(other, OpVector):
            raise TypeError("expected an OpVector")
        if other.field != self.field or other.mode_count != self.mode_count:
            raise ModeMismatchError("vectors disagree on field/modes")
        if length and len(other) != len(self):
            raise ModeMismatchError("vector lengths differ")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OpVector)
            and self.field == other.field
            and self.mode_count == other.mode_count
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.field, self.mode_count, self.entries))

    def __repr__(self) -> str:
        return "OpVector[" + "; ".join(str(e) for e in self.entries) + "]"


class OpMatrix:
    """Rectangular matrix of operator polynomials; rows/cols carried explicitly."""

    __slots__ = ("field", "mode_count", "rows", "cols", "entries")

    def __init__(self, field: ScalarField, mode_count: int, rows: int, cols: int,
                 entries: Sequence[Sequence[OpPoly]]):
        grid = tuple(tuple(row) for row in entries)
        if len(grid) != rows or any(len(r) != cols for r in grid):
            raise ModeMismatchError("matrix entries do not match declared shape")
        for row in grid:
            for e in row:
                if e.field != field or e.mode_count != mode_count:
                    raise ModeMismatchError("matrix entries disagree on field/modes")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "mode_count", mode_count)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", grid)

    def __setattr__(self, name, value):
        raise AttributeError("OpMatrix is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field: ScalarField, mode_count: int, rows: int, cols: int) -> "OpMatrix":
        z = OpPoly.zero(field, mode_count)
        return cls(field, mode_count, rows, cols, ((z,) * cols,) * rows)

    @classmethod
    def identity(cls, field: ScalarField, mode_count: int, size: int) -> "OpMatrix":
        one = OpPoly.from_scalar(field, mode_count, field.one)
        z = OpPoly.zero(field, mode_count)
        return cls(field, mode_count, size, size,
                   [[one if i == j else z for j in range(size)] for i in range(size)])

    @classmethod
    def from_scalars(cls, field: ScalarField, mode_count: int,
                     entries: Sequence[Sequence[Scalar]]) -> "OpMatrix":
        grid = [
            [OpPoly.from_scalar(field, mode_count, s) for s in row]
            for row in entries
        ]
        rows = len(grid)
        cols = len(grid[0]) if grid else 0
        return cls(field, mode_count, rows, cols, grid)

    @classmethod
    def diagonal(cls, field: ScalarField, mode_count: int,
                 diag: Sequence[OpPoly]) -> "OpMatrix":
        z = OpPoly.zero(field, mode_count)
        n = len(diag)
        return cls(field, mode_count, n, n,
                   [[diag[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def block_diag(cls, top: "OpMatrix", bottom: "OpMatrix") -> "OpMatrix":
        if top.field != bottom.field or top.mode_count != bottom.mode_count:
            raise ModeMismatchError("blocks disagree on field/modes")
        field, mc = top.field, top.mode_count
        z = OpPoly.zero(field, mc)
        rows = top.rows + bottom.rows
        cols = top.cols + bottom.cols
        grid = []
        for i in range(top.rows):
            grid.append(top.entries[i] + (z,) * bottom.cols)
        for i in range(bottom.rows):
            grid.append((z,) * top.cols + bottom.entries[i])
        return cls(field, mc, rows, cols, grid)

    @classmethod
    def hstack(cls, blocks: Sequence["OpMatrix"]) -> "OpMatrix":
        if not blocks:
            raise ModeMismatchError("hstack of no blocks")
        first = blocks[0]
        for b in blocks[1:]:
            if b.rows != first.rows or b.field != first.field \
                    or b.mode_count != first.mode_count:
                raise ModeMismatchError("hstack blocks disagree")
        grid = [
            sum((b.entries[i] for b in blocks), ())
            for i in range(first.rows)
        ]
        cols = sum(b.cols for b in blocks)
        return cls(first.field, first.mode_count, first.rows, cols, grid)

    # -- access ----------------------------------------------------------------

    def __getitem__(self, idx: tuple[int, int]) -> OpPoly:
        i, j = idx
        return self.entries[i][j]

    def row_vector(self, i: int) -> OpVector:
        return OpVector(self.field, self.mode_count, self.entries[i])

    def column(self, j: int) -> OpVector:
        return OpVector(self.field, self.mode_count,
                        tuple(self.entries[i][j] for i in range(self.rows)))

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.entries for e in row)

    def is_scalar_entries(self) -> bool:
        """True iff every entry has degree <= 0."""
        return all(e.is_scalar for row in self.entries for e in row)

    def map(self, fn: Callable[[OpPoly], OpPoly]) -> "OpMatrix":
        return OpMatrix(self.field, self.mode_count, self.rows, self.cols,
                        [[fn(e) for e in row] for row in self.entries])

    # -- arithmetic --------------------------------------------------------------

    def _like(self, other: "OpMatrix") -> None:
        if not isinstance(other, OpMatrix):
            raise TypeError("expected an OpMatrix")
        if (other.field != self.field or other.mode_count != self.mode_count
                or other.rows != self.rows or other.cols != self.cols):
            raise ModeMismatchError("matrix shapes/contexts differ")

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        self._like(other)
        return OpMatrix(self.field, self.mode_count, self.rows, self.cols,
                        [[a + b for a, b in zip(ra, rb)]
                         for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other: "OpMatrix") -> "OpMatrix":
        self._like(other)
        return OpMatrix(self.field, self.mode_count, self.rows, self.cols,
                        [[a - b for a, b in zip(ra, rb)]
                         for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self) -> "OpMatrix":
        return self.map(lambda e: -e)

    def scale(self, s) -> "OpMatrix":
        return self.map(lambda e: e * s)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OpMatrix)
            and self.field == other.field
            and self.mode_count == other.mode_count
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.field, self.mode_count, self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"OpMatrix{self.rows}x{self.cols}[{body}]"


def matmul(m: OpMatrix, n: OpMatrix, theta: CommutationMatrix) -> OpMatrix:
    """Matrix product with non-commutative entry products, left-to-right order."""
    if m.cols != n.rows:
        raise ModeMismatchError(f"inner dimensions differ: {m.cols} vs {n.rows}")
    if m.field != n.field or m.mode_count != n.mode_count:
        raise ModeMismatchError("matrices disagree on field/modes")
    zero = OpPoly.zero(m.field, m.mode_count)
    grid = []
    for i in range(m.rows):
        row = []
        for j in range(n.cols):
            acc = zero
            for k in range(m.cols):
                a = m.entries[i][k]
                b = n.entries[k][j]
                if a.is_zero or b.is_zero:
                    continue
                acc = acc + product(a, b, theta)
            row.append(acc)
        grid.append(row)
    return OpMatrix(m.field, m.mode_count, m.rows, n.cols, grid)


def mat_vec(m: OpMatrix, v: OpVector, theta: CommutationMatrix) -> OpVector:
    """m @ v with entry products in left-to-right order."""
    if m.cols != len(v):
        raise ModeMismatchError("matrix-vector dimension mismatch")
    zero = OpPoly.zero(m.field, m.mode_count)
    out = []
    for i in range(m.rows):
        acc = zero
        for k in range(m.cols):
            a = m.entries[i][k]
            b = v.entries[k]
            if a.is_zero or b.is_zero:
                continue
            acc = acc + product(a, b, theta)
        out.append(acc)
    return OpVector(m.field, m.mode_count, out)


def adjoint_matrix(m: OpMatrix) -> OpMatrix:
    """Conjugate transpose with entrywise operator adjoint."""
    return OpMatrix(m.field, m.mode_count, m.cols, m.rows,
                    [[adjoint(m.entries[i][j]) for i in range(m.rows)]
                     for j in range(m.cols)])


def adjoint_vector(v: OpVector) -> OpVector:
    """Entrywise adjoint (the conjugate block of a doubled vector)."""
    return OpVector(v.field, v.mode_count, tuple(adjoint(e) for e in v.entries))


def comm_vec_adj(m: OpVector, v: OpVector, theta: CommutationMatrix) -> OpMatrix:
    """[m, v†]: entry (j, k) = [m_j, adj(v_k)]."""
    if m.field != v.field or m.mode_count != v.mode_count:
        raise ModeMismatchError("vectors disagree on field/modes")
    v_adj = [adjoint(e) for e in v.entries]
    grid = [
        [commutator(mj, vk, theta) for vk in v_adj]
        for mj in m.entries
    ]
    return OpMatrix(m.field, m.mode_count, len(m), len(v), grid)


def comm_adj_vec(v: OpVector, u: OpVector, theta: CommutationMatrix) -> OpMatrix:
    """[v†, u]: entry (j, k) = [adj(v_k), u_j] (shape len(u) x len(v))."""
    if u.field != v.field or u.mode_count != v.mode_count:
        raise ModeMismatchError("vectors disagree on field/modes")
    v_adj = [adjoint(e) for e in v.entries]
    grid = [
        [commutator(vk, uj, theta) for vk in v_adj]
        for uj in u.entries
    ]
    return OpMatrix(u.field, u.mode_count, len(u), len(v), grid)


def comm_vec_transpose(m: OpVector, v: OpVector, theta: CommutationMatrix) -> OpMatrix:
    """[m, v^T]: entry (j, k) = [m_j, v_k]."""
    if m.field != v.field or m.mode_count != v.mode_count:
        raise ModeMismatchError("vectors disagree on field/modes")
    grid = [
        [commutator(mj, vk, theta) for vk in v.entries]
        for mj in m.entries
    ]
    return OpMatrix(m.field, m.mode_count, len(m), len(v), grid)


def quad_form(u: OpVector, s: OpMatrix, w: OpVector,
              theta: CommutationMatrix) -> OpPoly:
    """u† S w = sum_jk adj(u_j) * S_jk * w_k, in that operator order.

    S must have scalar (degree-0) entries.
    """
    if s.rows != len(u) or s.cols != len(w):
        raise ModeMismatchError("quadratic form dimension mismatch")
    if not s.is_scalar_entries():
        raise ScalarError("quad_form requires a scalar-entry middle matrix")
    acc = OpPoly.zero(u.field, u.mode_count)
    for j in range(len(u)):
        uj = adjoint(u.entries[j])
        if uj.is_zero:
            continue
        for k in range(len(w)):
            s_jk = s.entries[j][k].scalar_part()
            if s_jk.is_zero or w.entries[k].is_zero:
                continue
            acc = acc + product(uj, w.entries[k], theta) * s_jk
    return acc


def invert_scalar_matrix(m: OpMatrix) -> OpMatrix:
    """Exact inverse of a square scalar-entry matrix by Gauss-Jordan elimination."""
    if m.rows != m.cols:
        raise ModeMismatchError("only square matrices can be inverted")
    if not m.is_scalar_entries():
        raise ScalarError("only scalar-entry matrices can be inverted")
    n = m.rows
    field = m.field
    a = [[m.entries[i][j].scalar_part() for j in range(n)] for i in range(n)]
    inv = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not a[r][col].is_zero), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col].invert()
        a[col] = [x * p for x in a[col]]
        inv[col] = [x * p for x in inv[col]]
        for r in range(n):
            if r == col or a[r][col].is_zero:
                continue
            f = a[r][col]
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return OpMatrix.from_scalars(field, m.mode_count, inv)
