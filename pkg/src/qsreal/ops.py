"""Normal-ordered polynomial algebra in n bosonic modes.

Operators are finite sums of normal-ordered monomials a1'^h1 * ... * an'^hn *
a1^k1 * ... * an^kn (all creation factors left of all annihilation factors)
with :class:`~qsreal.scalars.Scalar` coefficients.  Products are reduced to
this canonical form by exhaustively rewriting a_j a_l' -> a_l' a_j + theta_jl,
where theta is a fixed Hermitian commutation matrix ([a_j, a_l'] = theta_jl;
annihilation operators commute among themselves, and so do creations).
"""

from __future__ import annotations

import re
from typing import Iterator, Mapping, Sequence

from .scalars import Scalar, ScalarError, ScalarField

__all__ = [
    "CommutationMatrix",
    "ModeMismatchError",
    "OpPoly",
    "adjoint",
    "commutator",
    "grade",
    "is_annihilation_only",
    "product",
]

Exponents = tuple[int, ...]
Monomial = tuple[Exponents, Exponents]  # (creation powers, annihilation powers)


class ModeMismatchError(ScalarError):
    """Operands disagree on mode count or parameter field."""


def _check_compatible(*items) -> None:
    first = items[0]
    for other in items[1:]:
        if other.mode_count != first.mode_count:
            raise ModeMismatchError(
                f"mode counts differ: {first.mode_count} vs {other.mode_count}"
            )
        if other.field != first.field:
            raise ModeMismatchError("operands use different parameter fields")


class CommutationMatrix:
    """Hermitian matrix theta with [a_j, a_l'] = theta_jl.

    Also owns the memoized rewriting table used to normal-order products, so
    repeated products against the same theta stay cheap.
    """

    def __init__(self, field: ScalarField, entries: Sequence[Sequence[Scalar]]):
        rows = [tuple(field.coerce(e) for e in row) for row in entries]
        n = len(rows)
        for row in rows:
            if len(row) != n:
                raise ModeMismatchError("commutation matrix must be square")
        for j in range(n):
            for l in range(j, n):
                if rows[j][l] != rows[l][j].conj():
                    raise ScalarError("commutation matrix must be Hermitian")
        self.field = field
        self.mode_count = n
        self._rows = tuple(rows)
        # (annihilation exponents, creation exponents) -> normal-ordered terms
        self._rewrite_cache: dict[Monomial, tuple[tuple[Exponents, Exponents, Scalar], ...]] = {}

    @classmethod
    def identity(cls, field: ScalarField, n: int) -> "CommutationMatrix":
        one, zero = field.one, field.zero
        return cls(field, [[one if j == l else zero for l in range(n)] for j in range(n)])

    def entry(self, j: int, l: int) -> Scalar:
        return self._rows[j][l]

    @property
    def rows(self) -> tuple[tuple[Scalar, ...], ...]:
        return self._rows

    def is_identity(self) -> bool:
        f = self.field
        return all(
            self._rows[j][l] == (f.one if j == l else f.zero)
            for j in range(self.mode_count)
            for l in range(self.mode_count)
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CommutationMatrix)
            and self.field == other.field
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self.field, self._rows))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in row) for row in self._rows)
        return f"CommutationMatrix[{body}]"

    # -- normal ordering ----------------------------------------------------

    def _normal_order(self, k: Exponents, h: Exponents):
        """Normal-ordered expansion of a^k a'^h as ((h', k', coeff), ...)."""
        key = (k, h)
        cached = self._rewrite_cache.get(key)
        if cached is not None:
            return cached
        field = self.field
        if not any(k) or not any(h):
            result = ((h, k, field.one),)
            self._rewrite_cache[key] = result
            return result
        j = next(idx for idx, e in enumerate(k) if e)
        k_red = k[:j] + (k[j] - 1,) + k[j + 1:]
        # a^k a'^h = a^(k-e_j) [ a'^h a_j + sum_l h_l theta_jl a'^(h-e_l) ]
        acc: dict[Monomial, Scalar] = {}
        for h2, k2, w in self._normal_order(k_red, h):
            key2 = (h2, k2[:j] + (k2[j] + 1,) + k2[j + 1:])
            acc[key2] = acc.get(key2, field.zero) + w
        for l, hl in enumerate(h):
            if not hl:
                continue
            theta_jl = self._rows[j][l]
            if theta_jl.is_zero:
                continue
            coeff = theta_jl * hl
            h_red = h[:l] + (h[l] - 1,) + h[l + 1:]
            for h2, k2, w in self._normal_order(k_red, h_red):
                key2 = (h2, k2)
                acc[key2] = acc.get(key2, field.zero) + w * coeff
        result = tuple(
            (hh, kk, w) for (hh, kk), w in acc.items() if not w.is_zero
        )
        self._rewrite_cache[key] = result
        return result


def _mon_sort_key(mon: Monomial):
    h, k = mon
    return (sum(h) + sum(k), h, k)


class OpPoly:
    """Normal-ordered operator polynomial (immutable value)."""

    __slots__ = ("field", "mode_count", "_terms")

    def __init__(self, field: ScalarField, mode_count: int,
                 terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Scalar] = {}
        if terms:
            for (h, k), coeff in terms.items():
                if len(h) != mode_count or len(k) != mode_count:
                    raise ModeMismatchError("monomial arity != mode count")
                coeff = field.coerce(coeff)
                if not coeff.is_zero:
                    clean[(tuple(h), tuple(k))] = coeff
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "mode_count", mode_count)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("OpPoly is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field: ScalarField, n: int) -> "OpPoly":
        return cls(field, n)

    @classmethod
    def from_scalar(cls, field: ScalarField, n: int, value) -> "OpPoly":
        zero_exp = (0,) * n
        return cls(field, n, {(zero_exp, zero_exp): field.coerce(value)})

    @classmethod
    def annihilator(cls, field: ScalarField, n: int, j: int) -> "OpPoly":
        if not 0 <= j < n:
            raise ModeMismatchError(f"mode index {j} out of range")
        e = tuple(1 if i == j else 0 for i in range(n))
        return cls(field, n, {((0,) * n, e): field.one})

    @classmethod
    def creator(cls, field: ScalarField, n: int, j: int) -> "OpPoly":
        if not 0 <= j < n:
            raise ModeMismatchError(f"mode index {j} out of range")
        e = tuple(1 if i == j else 0 for i in range(n))
        return cls(field, n, {(e, (0,) * n): field.one})

    @classmethod
    def monomial(cls, field: ScalarField, n: int, h: Sequence[int],
                 k: Sequence[int], coeff=1) -> "OpPoly":
        return cls(field, n, {(tuple(h), tuple(k)): field.coerce(coeff)})

    # -- structure -----------------------------------------------------------

    def terms(self) -> Iterator[tuple[Monomial, Scalar]]:
        """Terms in descending canonical order (total degree, then exponents)."""
        for mon in sorted(self._terms, key=_mon_sort_key, reverse=True):
            yield mon, self._terms[mon]

    def coeff(self, h: Sequence[int], k: Sequence[int]) -> Scalar:
        return self._terms.get((tuple(h), tuple(k)), self.field.zero)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_scalar(self) -> bool:
        return all(not any(h) and not any(k) for h, k in self._terms)

    def scalar_part(self) -> Scalar:
        zero_exp = (0,) * self.mode_count
        return self._terms.get((zero_exp, zero_exp), self.field.zero)

    def degree(self) -> int | None:
        """Total degree; None for the zero polynomial."""
        if not self._terms:
            return None
        return max(sum(h) + sum(k) for h, k in self._terms)

    def support(self) -> frozenset[Monomial]:
        return frozenset(self._terms)

    # -- ring operations ------------------------------------------------------

    def __add__(self, other) -> "OpPoly":
        other = self._coerce(other)
        _check_compatible(self, other)
        acc = dict(self._terms)
        for mon, coeff in other._terms.items():
            new = acc.get(mon, self.field.zero) + coeff
            if new.is_zero:
                acc.pop(mon, None)
            else:
                acc[mon] = new
        return OpPoly(self.field, self.mode_count, acc)

    __radd__ = __add__

    def __neg__(self) -> "OpPoly":
        return OpPoly(
            self.field, self.mode_count,
            {mon: -c for mon, c in self._terms.items()},
        )

    def __sub__(self, other) -> "OpPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "OpPoly":
        return self._coerce(other) + (-self)

    def __mul__(self, scalar) -> "OpPoly":
        """Scaling by a Scalar (operator products need a theta: see product)."""
        if isinstance(scalar, OpPoly):
            raise TypeError("use product(p, q, theta) for operator products")
        s = self.field.coerce(scalar)
        if s.is_zero:
            return OpPoly.zero(self.field, self.mode_count)
        return OpPoly(
            self.field, self.mode_count,
            {mon: c * s for mon, c in self._terms.items()},
        )

    __rmul__ = __mul__

    def _coerce(self, other) -> "OpPoly":
        if isinstance(other, OpPoly):
            return other
        return OpPoly.from_scalar(self.field, self.mode_count, other)

    # -- comparisons / printing ------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, OpPoly):
            if isinstance(other, int) and other == 0:
                return self.is_zero
            return NotImplemented
        return (
            self.field == other.field
            and self.mode_count == other.mode_count
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self.field, self.mode_count, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"OpPoly({self})"

    def __str__(self) -> str:
        return format_op_poly(self)


def product(p: OpPoly, q: OpPoly, theta: CommutationMatrix) -> OpPoly:
    """Normal-ordered operator product p*q under the commutation matrix."""
    _check_compatible(p, q, theta)
    field = p.field
    acc: dict[Monomial, Scalar] = {}
    for (h1, k1), c1 in p._terms.items():
        for (h2, k2), c2 in q._terms.items():
            c12 = c1 * c2
            for h3, k3, w in theta._normal_order(k1, h2):
                mon = (
                    tuple(a + b for a, b in zip(h1, h3)),
                    tuple(a + b for a, b in zip(k3, k2)),
                )
                prev = acc.get(mon)
                new = c12 * w if prev is None else prev + c12 * w
                acc[mon] = new
    return OpPoly(field, p.mode_count,
                  {mon: c for mon, c in acc.items() if not c.is_zero})


def commutator(p: OpPoly, q: OpPoly, theta: CommutationMatrix) -> OpPoly:
    """[p, q] = p*q - q*p in normal-ordered form."""
    return product(p, q, theta) - product(q, p, theta)


def adjoint(p: OpPoly) -> OpPoly:
    """Operator adjoint: swaps creation/annihilation powers, conjugates coefficients."""
    return OpPoly(
        p.field, p.mode_count,
        {(k, h): c.conj() for (h, k), c in p._terms.items()},
    )


def grade(p: OpPoly) -> dict[int, OpPoly]:
    """Split into homogeneous total-degree components (empty dict for zero)."""
    buckets: dict[int, dict[Monomial, Scalar]] = {}
    for (h, k), c in p._terms.items():
        buckets.setdefault(sum(h) + sum(k), {})[(h, k)] = c
    return {
        d: OpPoly(p.field, p.mode_count, terms)
        for d, terms in sorted(buckets.items())
    }


def is_annihilation_only(p: OpPoly) -> bool:
    """True iff no monomial contains a creation factor."""
    return all(not any(h) for h, _ in p._terms)


def default_mode_names(n: int) -> tuple[str, ...]:
    return tuple(f"a{j + 1}" for j in range(n))


_ATOM_COEFF_RE = re.compile(r"[0-9]+(/[0-9]+)?\Z|i\Z")


def format_op_poly(p: OpPoly, mode_names: Sequence[str] | None = None) -> str:
    """Canonical printing: creations before annihilations, modes ascending.

    Example: ``(-2*chi) * a1'^2 * a2``.
    """
    if p.is_zero:
        return "0"
    names = tuple(mode_names) if mode_names is not None else default_mode_names(p.mode_count)
    if len(names) != p.mode_count:
        raise ModeMismatchError("mode name list has wrong length")
    pieces = []
    for (h, k), coeff in p.terms():
        factors = []
        for j, e in enumerate(h):
            if e == 1:
                factors.append(f"{names[j]}'")
            elif e > 1:
                factors.append(f"{names[j]}'^{e}")
        for j, e in enumerate(k):
            if e == 1:
                factors.append(names[j])
            elif e > 1:
                factors.append(f"{names[j]}^{e}")
        c = str(coeff)
        wrapped = c if c.startswith("(") and c.endswith(")") \
            else (c if _ATOM_COEFF_RE.match(c) else f"({c})")
        if not factors:
            pieces.append(wrapped)
            continue
        body = " * ".join(factors)
        if coeff.is_one:
            pieces.append(body)
        elif coeff == -1:
            pieces.append(f"-{body}")
        else:
            pieces.append(f"{wrapped} * {body}")
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out
