"""Exact coefficient arithmetic: complex rational functions in real parameters.

Every coefficient that appears in an operator polynomial lives in the field
Q(i)(p1, ..., pk) of complex rational functions with Gaussian-rational
coefficients over a fixed set of named real parameters.  Elements are kept in
a canonical form (numerator and denominator coprime, denominator monic under
a graded-lexicographic monomial order) so that equality is decidable and
printing is deterministic.

Square roots are deliberately unsupported: declare the root itself as a
parameter and define the radicand from it (e.g. ``b1`` with ``k1 = b1^2/2``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from sympy.polys.domains import QQ_I
from sympy.polys.rings import PolyRing

__all__ = [
    "ComplexRational",
    "ParameterError",
    "Scalar",
    "ScalarDivisionError",
    "ScalarError",
    "ScalarField",
]

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED = {"i", "adj", "identity"}


class ScalarError(Exception):
    """Base error for the scalar field."""


class ScalarDivisionError(ScalarError, ZeroDivisionError):
    """Division by the zero scalar, or evaluation at a pole."""


class ParameterError(ScalarError):
    """Unknown parameter name, or an evaluation with parameters missing."""


RationalLike = Union[int, Fraction]


class ComplexRational:
    """An exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ComplexRational is immutable")

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        if isinstance(other, ComplexRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __add__(self, other) -> "ComplexRational":
        other = _coerce_crat(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other) -> "ComplexRational":
        return self + (-_coerce_crat(other))

    def __rsub__(self, other) -> "ComplexRational":
        return _coerce_crat(other) + (-self)

    def __mul__(self, other) -> "ComplexRational":
        other = _coerce_crat(other)
        return ComplexRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ComplexRational":
        other = _coerce_crat(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ScalarDivisionError("division by zero")
        return self * ComplexRational(other.re / norm, -other.im / norm)

    def __rtruediv__(self, other) -> "ComplexRational":
        return _coerce_crat(other) / self

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"ComplexRational({self.re!r}, {self.im!r})"

    def __str__(self) -> str:
        return _format_crat(self)


def _coerce_crat(value) -> ComplexRational:
    if isinstance(value, ComplexRational):
        return value
    if isinstance(value, (int, Fraction)):
        return ComplexRational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact complex rational")


def _format_fraction(q: Fraction) -> str:
    return str(q) if q.denominator != 1 else str(q.numerator)


def _format_crat(c: ComplexRational) -> str:
    """Grammar-compatible rendering: ``3``, ``-1/2``, ``i``, ``-2*i``, ``(1+2*i)``."""
    if c.im == 0:
        return _format_fraction(c.re)
    if c.re == 0:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{_format_fraction(c.im)}*i"
    im = c.im
    sign = "+" if im > 0 else "-"
    im_abs = -im if im < 0 else im
    im_part = "i" if im_abs == 1 else f"{_format_fraction(im_abs)}*i"
    return f"({_format_fraction(c.re)}{sign}{im_part})"


class ScalarField:
    """The field of complex rational functions over a fixed parameter set."""

    def __init__(self, params: Sequence[str] = ()):
        names = list(params)
        seen = set()
        for name in names:
            if not _IDENT_RE.match(name):
                raise ParameterError(f"invalid parameter name {name!r}")
            if name in _RESERVED:
                raise ParameterError(f"parameter name {name!r} is reserved")
            if name in seen:
                raise ParameterError(f"duplicate parameter name {name!r}")
            seen.add(name)
        self._params = tuple(names)
        self._ring = PolyRing(names, QQ_I, "grlex")
        self._index = {name: i for i, name in enumerate(names)}
        self.zero = Scalar(self, self._ring.zero, self._ring.one)
        self.one = Scalar(self, self._ring.one, self._ring.one)
        self.i = self.complex_rational(ComplexRational(0, 1))

    @property
    def params(self) -> tuple[str, ...]:
        return self._params

    def __eq__(self, other) -> bool:
        return isinstance(other, ScalarField) and self._params == other._params

    def __hash__(self) -> int:
        return hash(self._params)

    def __repr__(self) -> str:
        return f"ScalarField(params={list(self._params)!r})"

    # -- constructors ------------------------------------------------------

    def param(self, name: str) -> "Scalar":
        if name not in self._index:
            raise ParameterError(f"unknown parameter {name!r}")
        return Scalar(self, self._ring.gens[self._index[name]], self._ring.one)

    def integer(self, value: int) -> "Scalar":
        return self.rational(Fraction(value))

    def rational(self, value: RationalLike) -> "Scalar":
        return self.complex_rational(ComplexRational(value))

    def complex_rational(self, value: ComplexRational) -> "Scalar":
        ground = QQ_I.new(value.re, value.im)
        return Scalar(self, self._ring.ground_new(ground), self._ring.one)

    def coerce(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field != self:
                raise ScalarError("scalar belongs to a different parameter set")
            return value
        if isinstance(value, (int, Fraction)):
            return self.rational(value)
        if isinstance(value, ComplexRational):
            return self.complex_rational(value)
        raise TypeError(f"cannot coerce {value!r} to a Scalar")

    # -- internal helpers --------------------------------------------------

    def _make(self, num, den) -> "Scalar":
        """Canonicalize a numerator/denominator pair of ring elements."""
        if not den:
            raise ScalarDivisionError("division by the zero scalar")
        if not num:
            return self.zero
        if den.is_ground:
            if den != self._ring.one:
                num = num.quo_ground(den.LC)
                den = self._ring.one
            return Scalar(self, num, den)
        g = num.gcd(den)
        if not g.is_ground:
            num = num.quo(g)
            den = den.quo(g)
        if den.is_ground:
            if den != self._ring.one:
                num = num.quo_ground(den.LC)
                den = self._ring.one
            return Scalar(self, num, den)
        lc = den.LC
        if lc != self._ring.domain.one:
            num = num.quo_ground(lc)
            den = den.quo_ground(lc)
        return Scalar(self, num, den)

    def _conj_poly(self, poly):
        dom = self._ring.domain
        return self._ring.from_dict(
            {mon: dom.new(c.x, -c.y) for mon, c in poly.terms()}
        )


def _crat_from_ground(c) -> ComplexRational:
    # QQ_I ground elements expose rational parts as .x (real) and .y (imag)
    return ComplexRational(
        Fraction(int(c.x.numerator), int(c.x.denominator)),
        Fraction(int(c.y.numerator), int(c.y.denominator)),
    )


class Scalar:
    """A canonical element of a :class:`ScalarField`.

    Instances are immutable; do not construct directly, use the field's
    constructors or arithmetic on existing scalars.
    """

    __slots__ = ("field", "_num", "_den")

    def __init__(self, field: ScalarField, num, den):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- predicates --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._num

    @property
    def is_one(self) -> bool:
        ring = self.field._ring
        return self._num == ring.one and self._den == ring.one

    @property
    def is_constant(self) -> bool:
        return self._num.is_ground and self._den.is_ground

    def __bool__(self) -> bool:
        return not self.is_zero

    # -- arithmetic --------------------------------------------------------

    def _check(self, other) -> "Scalar":
        other = self.field.coerce(other)
        return other

    def __add__(self, other) -> "Scalar":
        other = self._check(other)
        if self._den == other._den:
            return self.field._make(self._num + other._num, self._den)
        return self.field._make(
            self._num * other._den + other._num * self._den,
            self._den * other._den,
        )

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(self.field, -self._num, self._den)

    def __sub__(self, other) -> "Scalar":
        return self + (-self._check(other))

    def __rsub__(self, other) -> "Scalar":
        return self._check(other) + (-self)

    def __mul__(self, other) -> "Scalar":
        other = self._check(other)
        ring = self.field._ring
        if self._den == ring.one and other._den == ring.one:
            return Scalar(self.field, self._num * other._num, ring.one)
        return self.field._make(
            self._num * other._num, self._den * other._den
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        return self * self._check(other).invert()

    def __rtruediv__(self, other) -> "Scalar":
        return self._check(other) * self.invert()

    def __pow__(self, exponent: int) -> "Scalar":
        if not isinstance(exponent, int):
            raise TypeError("scalar exponent must be an integer")
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = self.field.one
        base = self
        k = exponent
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def invert(self) -> "Scalar":
        if self.is_zero:
            raise ScalarDivisionError("inverting the zero scalar")
        return self.field._make(self._den, self._num)

    def conj(self) -> "Scalar":
        """Complex conjugation: fixes every parameter, maps i to -i."""
        field = self.field
        return Scalar(
            field, field._conj_poly(self._num), field._conj_poly(self._den)
        )

    # -- queries -----------------------------------------------------------

    def parameters(self) -> tuple[str, ...]:
        """Names of the parameters this scalar actually depends on."""
        used = set()
        for poly in (self._num, self._den):
            for mon, _ in poly.terms():
                for idx, exp in enumerate(mon):
                    if exp:
                        used.add(self.field._params[idx])
        return tuple(name for name in self.field._params if name in used)

    def evaluate(self, assignment: Mapping[str, object]) -> ComplexRational:
        """Substitute exact values for parameters.

        The assignment must cover every parameter occurring in this scalar;
        values may be ints, Fractions or ComplexRationals.  Raises
        :class:`ScalarDivisionError` if the denominator vanishes at the point.
        """
        field = self.field
        values: dict[str, ComplexRational] = {}
        for name, value in assignment.items():
            if name not in field._index:
                raise ParameterError(f"unknown parameter {name!r}")
            values[name] = _coerce_crat(value)
        missing = [p for p in self.parameters() if p not in values]
        if missing:
            raise ParameterError(
                "missing parameter value(s): " + ", ".join(missing)
            )
        ring = field._ring
        dom = ring.domain
        point = [
            (gen, dom.new(values.get(name, ComplexRational(0)).re,
                          values.get(name, ComplexRational(0)).im))
            for gen, name in zip(ring.gens, field._params)
        ]
        num = self._num.evaluate(point) if point else self._num.LC
        den = self._den.evaluate(point) if point else self._den.LC
        num = dom.convert(num)
        den = dom.convert(den)
        if not den:
            raise ScalarDivisionError("denominator vanishes at the assignment")
        return _crat_from_ground(num) / _crat_from_ground(den)

    def constant_value(self) -> ComplexRational:
        """The value of a parameter-free scalar."""
        if not self.is_constant:
            raise ScalarError("scalar is not constant")
        num = _crat_from_ground(self.field._ring.domain.convert(self._num.LC)) \
            if self._num else ComplexRational(0)
        den = _crat_from_ground(self.field._ring.domain.convert(self._den.LC))
        return num / den

    # -- equality / printing ------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, ComplexRational)):
            other = self.field.coerce(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (
            self.field == other.field
            and self._num == other._num
            and self._den == other._den
        )

    def __hash__(self) -> int:
        return hash((self.field, self._num, self._den))

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        num = _format_poly(self.field, self._num)
        if self._den == self.field._ring.one:
            return num
        den = _format_poly(self.field, self._den)
        return f"({num})/({den})"


def _format_monomial(field: ScalarField, mon: Iterable[int]) -> str:
    parts = []
    for name, exp in zip(field._params, mon):
        if exp == 1:
            parts.append(name)
        elif exp > 1:
            parts.append(f"{name}^{exp}")
    return "*".join(parts)


def _format_poly(field: ScalarField, poly) -> str:
    """Deterministic, re-parseable rendering of a polynomial numerator."""
    if not poly:
        return "0"
    pieces = []
    for mon, coeff in poly.terms():  # grlex-descending iteration
        c = _crat_from_ground(coeff)
        m = _format_monomial(field, mon)
        if not m:
            text = _format_crat(c)
        elif c == 1:
            text = m
        elif c == -1:
            text = f"-{m}"
        else:
            text = f"{_format_crat(c)}*{m}"
        pieces.append(text)
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out
