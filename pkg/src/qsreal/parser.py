"""Text format for system descriptions (.qs files).

A description is a sequence of line-oriented statements (``#`` starts a
comment; statements inside brackets may span lines):

    system opo                  # or: oscillator squeezer
    params b1 b2 chi            # real-valued indeterminates
    let k1 = b1^2 / 2           # scalar abbreviations (no radicals: declare
    modes a1 a2                 # the square root itself as a parameter)
    channels 2
    theta identity              # or: theta [[1, 0]; [0, 1]]
    option nbar = graded        # graded | literal | an explicit integer
    option theta_bar = physical # physical | paper
    A[1] = -k1*a1 - 2*chi*a1'*a2
    B[1][1] = -b1
    C[1] = b1*a1
    D = identity                # the default

Oscillator stanzas replace A/B/C/D with ``H = ...`` and ``L[j] = ...``.
Mode symbols denote annihilation operators; postfix ``'`` (or ``adj(..)``)
takes adjoints, ``i`` is the imaginary unit, and numeric literals are
integers (build rationals with ``/``).  Every failure is a structured
:class:`ParseError` carrying a line and column.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence, Union

from .ops import (
    CommutationMatrix,
    OpPoly,
    adjoint,
    format_op_poly,
    product,
)
from .matrices import OpMatrix, OpVector
from .realizability import Oscillator
from .scalars import Scalar, ScalarError, ScalarField
from .systems import NbarMode, QSystem, ThetaConvention, canonical_ito_table

__all__ = [
    "ParseError",
    "SystemDescription",
    "parse_description",
    "print_description",
]

_KEYWORDS = {
    "system", "oscillator", "params", "let", "modes", "channels", "theta",
    "option", "identity", "adj",
}
_TARGETS = {"A", "B", "C", "D", "H", "L"}
_RESERVED = _KEYWORDS | _TARGETS | {"i"}


class ParseError(ScalarError):
    """Lexical, syntactic or semantic failure with a source position."""

    def __init__(self, message: str, line: int, column: int, kind: str = "syntax"):
        super().__init__(f"{kind} error at {line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str       # IDENT, INT, PUNCT, NEWLINE, EOF
    text: str
    line: int
    column: int


_PUNCT = set("+-*/^'()[]=,;")


def _tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    depth = 0
    line_no = 0
    for raw_line in source.splitlines():
        line_no += 1
        i = 0
        text = raw_line
        while i < len(text):
            ch = text[i]
            if ch == "#":
                break
            if ch in " \t\r":
                i += 1
                continue
            col = i + 1
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j < len(text) and (text[j].isalpha() or text[j] == "_" or text[j] == "."):
                    raise ParseError(
                        f"malformed number {text[i:j + 1]!r} (integer literals "
                        "only; write rationals with '/')",
                        line_no, col, "lexical")
                tokens.append(Token("INT", text[i:j], line_no, col))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                tokens.append(Token("IDENT", text[i:j], line_no, col))
                i = j
                continue
            if ch in _PUNCT:
                if ch in "([":
                    depth += 1
                elif ch in ")]":
                    depth = max(0, depth - 1)
                tokens.append(Token("PUNCT", ch, line_no, col))
                i += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", line_no, col, "lexical")
        if depth == 0 and tokens and tokens[-1].kind != "NEWLINE":
            tokens.append(Token("NEWLINE", "", line_no, len(text) + 1))
    tokens.append(Token("EOF", "", line_no + 1, 1))
    return tokens


# ---------------------------------------------------------------------------
# Expression AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    line: int
    column: int


@dataclass(frozen=True)
class Num(Expr):
    value: int


@dataclass(frozen=True)
class Imag(Expr):
    pass


@dataclass(frozen=True)
class Name(Expr):
    ident: str


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    arg: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Adjoint(Expr):
    arg: Expr


@dataclass(frozen=True)
class Power(Expr):
    base: Expr
    exponent: Expr


class _TokenStream:
    def __init__(self, tokens: Sequence[Token]):
        self._tokens = tokens
        self._pos = 0

    def peek(self) -> Token:
        return self._tokens[self._pos]

    def next(self) -> Token:
        tok = self._tokens[self._pos]
        if tok.kind != "EOF":
            self._pos += 1
        return tok

    def skip_newlines(self) -> None:
        while self.peek().kind == "NEWLINE":
            self.next()

    def expect_punct(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.text == text:
            return self.next()
        raise ParseError(f"expected {text!r}, found {_describe(tok)}",
                         tok.line, tok.column)

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok.kind == "IDENT":
            return self.next()
        raise ParseError(f"expected an identifier, found {_describe(tok)}",
                         tok.line, tok.column)

    def expect_int(self) -> int:
        tok = self.peek()
        if tok.kind == "INT":
            self.next()
            return int(tok.text)
        raise ParseError(f"expected an integer, found {_describe(tok)}",
                         tok.line, tok.column)

    def at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.text == text

    def end_statement(self) -> None:
        tok = self.peek()
        if tok.kind in ("NEWLINE", "EOF"):
            if tok.kind == "NEWLINE":
                self.next()
            return
        raise ParseError(f"unexpected {_describe(tok)} after statement",
                         tok.line, tok.column)


def _describe(tok: Token) -> str:
    if tok.kind == "EOF":
        return "end of input"
    if tok.kind == "NEWLINE":
        return "end of line"
    return repr(tok.text)


def _parse_expr(ts: _TokenStream) -> Expr:
    return _parse_sum(ts)


def _parse_sum(ts: _TokenStream) -> Expr:
    left = _parse_term(ts)
    while ts.peek().kind == "PUNCT" and ts.peek().text in "+-":
        op = ts.next()
        right = _parse_term(ts)
        left = Binary(op.line, op.column, op.text, left, right)
    return left


def _parse_term(ts: _TokenStream) -> Expr:
    left = _parse_unary(ts)
    while ts.peek().kind == "PUNCT" and ts.peek().text in "*/":
        op = ts.next()
        right = _parse_unary(ts)
        left = Binary(op.line, op.column, op.text, left, right)
    return left


def _parse_unary(ts: _TokenStream) -> Expr:
    tok = ts.peek()
    if tok.kind == "PUNCT" and tok.text in "+-":
        ts.next()
        arg = _parse_unary(ts)
        return arg if tok.text == "+" else Unary(tok.line, tok.column, "-", arg)
    return _parse_power(ts)


def _parse_power(ts: _TokenStream) -> Expr:
    base = _parse_postfix(ts)
    if ts.at_punct("^"):
        op = ts.next()
        exponent = _parse_unary(ts)  # right-associative, allows -n on scalars
        return Power(op.line, op.column, base, exponent)
    return base


def _parse_postfix(ts: _TokenStream) -> Expr:
    expr = _parse_atom(ts)
    while ts.at_punct("'"):
        tok = ts.next()
        expr = Adjoint(tok.line, tok.column, expr)
    return expr


def _parse_atom(ts: _TokenStream) -> Expr:
    tok = ts.peek()
    if tok.kind == "INT":
        ts.next()
        return Num(tok.line, tok.column, int(tok.text))
    if tok.kind == "IDENT":
        ts.next()
        if tok.text == "i":
            return Imag(tok.line, tok.column)
        if tok.text == "adj":
            ts.expect_punct("(")
            inner = _parse_expr(ts)
            ts.expect_punct(")")
            return Adjoint(tok.line, tok.column, inner)
        return Name(tok.line, tok.column, tok.text)
    if tok.kind == "PUNCT" and tok.text == "(":
        ts.next()
        inner = _parse_expr(ts)
        ts.expect_punct(")")
        expr = inner
        while ts.at_punct("'"):
            t2 = ts.next()
            expr = Adjoint(t2.line, t2.column, expr)
        return expr
    raise ParseError(f"expected an expression, found {_describe(tok)}",
                     tok.line, tok.column)


# ---------------------------------------------------------------------------
# Statement AST (pre-elaboration)
# ---------------------------------------------------------------------------

@dataclass
class _RawDescription:
    kind: str | None = None
    name: str = ""
    params: list[str] = dc_field(default_factory=list)
    lets: list[tuple[str, Expr, Token]] = dc_field(default_factory=list)
    modes: list[str] = dc_field(default_factory=list)
    channels: int | None = None
    theta_identity: bool = True
    theta_rows: list[list[Expr]] | None = None
    theta_token: Token | None = None
    options: dict[str, str | int] = dc_field(default_factory=dict)
    assignments: list[tuple[str, tuple[int, ...], Expr, Token]] = dc_field(default_factory=list)
    d_identity: Token | None = None


def _parse_statements(ts: _TokenStream) -> _RawDescription:
    raw = _RawDescription()
    while True:
        ts.skip_newlines()
        tok = ts.peek()
        if tok.kind == "EOF":
            break
        if tok.kind != "IDENT":
            raise ParseError(f"expected a statement, found {_describe(tok)}",
                             tok.line, tok.column)
        head = tok.text
        if head in ("system", "oscillator"):
            ts.next()
            name = ts.expect_ident()
            if raw.kind is not None:
                raise ParseError("duplicate system/oscillator header",
                                 tok.line, tok.column, "semantic")
            raw.kind = head
            raw.name = name.text
            ts.end_statement()
        elif head == "params":
            ts.next()
            while ts.peek().kind == "IDENT":
                raw.params.append(ts.next().text)
            ts.end_statement()
        elif head == "let":
            ts.next()
            name = ts.expect_ident()
            ts.expect_punct("=")
            expr = _parse_expr(ts)
            raw.lets.append((name.text, expr, name))
            ts.end_statement()
        elif head == "modes":
            ts.next()
            while ts.peek().kind == "IDENT":
                raw.modes.append(ts.next().text)
            ts.end_statement()
        elif head == "channels":
            ts.next()
            raw.channels = ts.expect_int()
            ts.end_statement()
        elif head == "theta":
            ts.next()
            nxt = ts.peek()
            if nxt.kind == "IDENT" and nxt.text == "identity":
                ts.next()
                raw.theta_identity = True
                raw.theta_rows = None
            elif nxt.kind == "PUNCT" and nxt.text == "[":
                raw.theta_identity = False
                raw.theta_token = nxt
                raw.theta_rows = _parse_matrix(ts)
            else:
                raise ParseError("theta needs 'identity' or a bracketed matrix",
                                 nxt.line, nxt.column)
            ts.end_statement()
        elif head == "option":
            ts.next()
            key = ts.expect_ident()
            ts.expect_punct("=")
            val = ts.peek()
            if val.kind == "IDENT":
                ts.next()
                raw.options[key.text] = val.text
            elif val.kind == "INT":
                raw.options[key.text] = ts.expect_int()
            else:
                raise ParseError("option value must be a word or an integer",
                                 val.line, val.column)
            ts.end_statement()
        elif head in _TARGETS:
            _parse_assignment(ts, raw)
        else:
            raise ParseError(
                f"unknown statement {head!r} (declarations: system, oscillator, "
                "params, let, modes, channels, theta, option; assignments: "
                "A[i], B[i][j], C[v], D[i][j], H, L[j])",
                tok.line, tok.column)
    return raw


def _parse_matrix(ts: _TokenStream) -> list[list[Expr]]:
    ts.expect_punct("[")
    rows: list[list[Expr]] = []
    while True:
        ts.skip_newlines()
        ts.expect_punct("[")
        row: list[Expr] = []
        while True:
            ts.skip_newlines()
            row.append(_parse_expr(ts))
            ts.skip_newlines()
            if ts.at_punct(","):
                ts.next()
                continue
            break
        ts.expect_punct("]")
        rows.append(row)
        ts.skip_newlines()
        if ts.at_punct(";") or ts.at_punct(","):
            ts.next()
            continue
        break
    ts.skip_newlines()
    ts.expect_punct("]")
    return rows


def _parse_assignment(ts: _TokenStream, raw: _RawDescription) -> None:
    head = ts.next()  # target letter
    indices: list[int] = []
    while ts.at_punct("["):
        ts.next()
        indices.append(ts.expect_int())
        ts.expect_punct("]")
    eq = ts.expect_punct("=")
    expected = {"A": 1, "B": 2, "C": 1, "D": 2, "H": 0, "L": 1}[head.text]
    if head.text == "D" and not indices:
        nxt = ts.peek()
        if nxt.kind == "IDENT" and nxt.text == "identity":
            ts.next()
            raw.d_identity = head
            ts.end_statement()
            return
        raise ParseError("D needs two indices (or 'D = identity')",
                         head.line, head.column)
    if len(indices) != expected:
        raise ParseError(
            f"{head.text} takes {expected} index(es), got {len(indices)}",
            head.line, head.column)
    del eq
    if any(ix < 1 for ix in indices):
        raise ParseError("indices are 1-based", head.line, head.column,
                         "semantic")
    expr = _parse_expr(ts)
    raw.assignments.append((head.text, tuple(indices), expr, head))
    ts.end_statement()


# ---------------------------------------------------------------------------
# Elaboration
# ---------------------------------------------------------------------------

Value = Union[Scalar, OpPoly]


class _Env:
    def __init__(self, field: ScalarField, theta: CommutationMatrix,
                 scalars: dict[str, Scalar], modes: dict[str, OpPoly]):
        self.field = field
        self.theta = theta
        self.scalars = scalars
        self.modes = modes

    def as_op(self, v: Value) -> OpPoly:
        if isinstance(v, OpPoly):
            return v
        return OpPoly.from_scalar(self.field, self.theta.mode_count, v)

    def eval(self, expr: Expr, scalar_only: bool = False) -> Value:
        v = self._eval(expr, scalar_only)
        return v

    def _eval(self, expr: Expr, scalar_only: bool) -> Value:
        field = self.field
        if isinstance(expr, Num):
            return field.integer(expr.value)
        if isinstance(expr, Imag):
            return field.i
        if isinstance(expr, Name):
            if expr.ident in self.scalars:
                return self.scalars[expr.ident]
            if expr.ident in self.modes:
                if scalar_only:
                    raise ParseError(
                        f"mode {expr.ident!r} is not allowed in a scalar context",
                        expr.line, expr.column, "semantic")
                return self.modes[expr.ident]
            raise ParseError(f"undeclared identifier {expr.ident!r}",
                             expr.line, expr.column, "semantic")
        if isinstance(expr, Unary):
            return -self._eval(expr.arg, scalar_only)  # only '-' is produced
        if isinstance(expr, Adjoint):
            v = self._eval(expr.arg, scalar_only)
            return v.conj() if isinstance(v, Scalar) else adjoint(v)
        if isinstance(expr, Power):
            exponent = self._int_exponent(expr.exponent)
            base = self._eval(expr.base, scalar_only)
            if isinstance(base, Scalar):
                try:
                    return base ** exponent
                except ScalarError as exc:
                    raise ParseError(str(exc), expr.line, expr.column,
                                     "semantic") from exc
            if exponent < 0:
                raise ParseError("operator powers must be non-negative",
                                 expr.line, expr.column, "semantic")
            out = OpPoly.from_scalar(field, base.mode_count, field.one)
            for _ in range(exponent):
                out = product(out, base, self.theta)
            return out
        if isinstance(expr, Binary):
            left = self._eval(expr.left, scalar_only)
            right = self._eval(expr.right, scalar_only)
            if expr.op == "+":
                return self._add(left, right)
            if expr.op == "-":
                return self._add(left, -right)
            if expr.op == "*":
                return self._mul(left, right, expr)
            if expr.op == "/":
                return self._div(left, right, expr)
        raise ParseError("malformed expression", expr.line, expr.column)

    def _int_exponent(self, expr: Expr) -> int:
        if isinstance(expr, Num):
            return expr.value
        if isinstance(expr, Unary) and isinstance(expr.arg, Num):
            return -expr.arg.value
        raise ParseError("exponent must be an integer literal",
                         expr.line, expr.column, "semantic")

    def _add(self, a: Value, b: Value) -> Value:
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a + b
        return self.as_op(a) + self.as_op(b)

    def _mul(self, a: Value, b: Value, at: Expr) -> Value:
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a * b
        if isinstance(a, Scalar):
            return b * a
        if isinstance(b, Scalar):
            return a * b
        return product(a, b, self.theta)

    def _div(self, a: Value, b: Value, at: Expr) -> Value:
        if isinstance(b, OpPoly):
            if b.is_scalar:
                b = b.scalar_part()
            else:
                raise ParseError("cannot divide by an operator",
                                 at.line, at.column, "semantic")
        try:
            if isinstance(a, Scalar):
                return a / b
            return a * b.invert()
        except ScalarError as exc:
            raise ParseError(str(exc), at.line, at.column, "semantic") from exc


@dataclass(frozen=True)
class SystemDescription:
    """Elaborated content of one .qs stanza."""

    kind: str                   # "system" | "oscillator"
    name: str
    field: ScalarField
    params: tuple[str, ...]
    lets: tuple[tuple[str, Scalar], ...]
    mode_names: tuple[str, ...]
    channels: int
    theta: CommutationMatrix
    theta_is_identity: bool
    options: tuple[tuple[str, str | int], ...]
    A: OpVector | None = None
    B: OpMatrix | None = None
    C: OpVector | None = None
    D: OpMatrix | None = None
    hamiltonian: OpPoly | None = None
    coupling: OpVector | None = None

    @property
    def n(self) -> int:
        return len(self.mode_names)

    @property
    def m(self) -> int:
        return self.channels

    def option(self, key: str, default=None):
        for k, v in self.options:
            if k == key:
                return v
        return default

    def nbar_mode(self) -> NbarMode:
        value = self.option("nbar", "graded")
        if isinstance(value, int):
            return value
        if value in ("graded", "literal"):
            return value
        raise ParseError(f"invalid nbar option {value!r}", 0, 0, "semantic")

    def theta_convention(self) -> ThetaConvention:
        value = self.option("theta_bar", "physical")
        if value in ("physical", "paper"):
            return value
        raise ParseError(f"invalid theta_bar option {value!r}", 0, 0, "semantic")

    def to_qsystem(self) -> QSystem:
        if self.kind != "system":
            raise ScalarError("description is an oscillator, not a system")
        return QSystem(
            field=self.field, theta=self.theta, A=self.A, B=self.B,
            C=self.C, D=self.D,
            noise=canonical_ito_table(self.field, self.m, mode_count=self.n),
        )

    def to_oscillator(self) -> Oscillator:
        if self.kind != "oscillator":
            raise ScalarError("description is a system, not an oscillator")
        return Oscillator(
            field=self.field, theta=self.theta,
            hamiltonian=self.hamiltonian, coupling=self.coupling,
        )


_OPTION_KEYS = {"nbar", "theta_bar"}


def parse_description(source: str, filename: str = "<input>") -> SystemDescription:
    """Parse and elaborate one .qs description."""
    tokens = _tokenize(source)
    raw = _parse_statements(_TokenStream(tokens))

    if raw.kind is None:
        raw.kind = "oscillator" if any(t in ("H", "L") for t, *_ in raw.assignments) \
            else "system"

    # declaration sanity
    names_seen: set[str] = set()
    for name in raw.params + raw.modes + [n for n, _, _ in raw.lets]:
        if name in _RESERVED:
            raise ParseError(f"{name!r} is reserved", 1, 1, "semantic")
        if name in names_seen:
            raise ParseError(f"duplicate declaration of {name!r}", 1, 1,
                             "semantic")
        names_seen.add(name)

    try:
        field = ScalarField(raw.params)
    except ScalarError as exc:
        raise ParseError(str(exc), 1, 1, "semantic") from exc
    n = len(raw.modes)

    # lets are scalar-only, in order, each may use the previous ones
    scalars: dict[str, Scalar] = {p: field.param(p) for p in raw.params}
    pre_env = _Env(field, CommutationMatrix.identity(field, n), scalars, {})
    lets: list[tuple[str, Scalar]] = []
    for name, expr, tok in raw.lets:
        value = pre_env.eval(expr, scalar_only=True)
        if isinstance(value, OpPoly):
            raise ParseError(f"let {name!r} must define a scalar",
                             tok.line, tok.column, "semantic")
        scalars[name] = value
        lets.append((name, value))

    # theta
    if raw.theta_rows is None:
        theta = CommutationMatrix.identity(field, n)
        theta_is_identity = True
    else:
        tok = raw.theta_token
        rows = raw.theta_rows
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ParseError(f"theta must be {n}x{n}", tok.line, tok.column,
                             "semantic")
        entries = []
        for row in rows:
            out_row = []
            for cell in row:
                v = pre_env.eval(cell, scalar_only=True)
                out_row.append(v)
            entries.append(out_row)
        try:
            theta = CommutationMatrix(field, entries)
        except ScalarError as exc:
            raise ParseError(str(exc), tok.line, tok.column, "semantic") from exc
        theta_is_identity = theta.is_identity()

    modes = {name: OpPoly.annihilator(field, n, j)
             for j, name in enumerate(raw.modes)}
    env = _Env(field, theta, scalars, modes)

    for key in raw.options:
        if key not in _OPTION_KEYS:
            raise ParseError(f"unknown option {key!r}", 1, 1, "semantic")
    if raw.d_identity is not None and raw.kind != "system":
        raise ParseError("D assignments do not belong in an oscillator stanza",
                         raw.d_identity.line, raw.d_identity.column, "semantic")

    # channel count: declared, or inferred from the highest channel index used
    channel_targets = {"C": 0, "L": 0, "B": 1, "D": 0}
    max_channel = 0
    for target, indices, _, _ in raw.assignments:
        if target in ("C", "L") and indices:
            max_channel = max(max_channel, indices[0])
        elif target in ("B", "D") and len(indices) == 2:
            max_channel = max(max_channel, indices[1])
            if target == "D":
                max_channel = max(max_channel, indices[0])
    m = raw.channels if raw.channels is not None else max_channel
    del channel_targets

    zero = OpPoly.zero(field, n)
    a_entries = [zero] * n
    c_entries = [zero] * m
    l_entries = [zero] * m
    b_entries = [[zero] * m for _ in range(n)]
    d_entries = [[OpPoly.from_scalar(field, n, field.one) if i == j else zero
                  for j in range(m)] for i in range(m)]
    hamiltonian = zero
    allowed = {"system": {"A", "B", "C", "D"},
               "oscillator": {"H", "L"}}[raw.kind]

    for target, indices, expr, tok in raw.assignments:
        if target not in allowed:
            raise ParseError(
                f"{target} assignments do not belong in a {raw.kind} stanza",
                tok.line, tok.column, "semantic")
        value = env.eval(expr)
        op_value = env.as_op(value)
        if target == "A":
            _check_index(indices[0], n, "mode", tok)
            a_entries[indices[0] - 1] = op_value
        elif target == "C":
            _check_index(indices[0], m, "channel", tok)
            c_entries[indices[0] - 1] = op_value
        elif target == "L":
            _check_index(indices[0], m, "channel", tok)
            l_entries[indices[0] - 1] = op_value
        elif target == "B":
            _check_index(indices[0], n, "mode", tok)
            _check_index(indices[1], m, "channel", tok)
            if not op_value.is_scalar:
                raise ParseError(
                    "B entries must be scalar-valued in this format",
                    tok.line, tok.column, "semantic")
            b_entries[indices[0] - 1][indices[1] - 1] = op_value
        elif target == "D":
            _check_index(indices[0], m, "channel", tok)
            _check_index(indices[1], m, "channel", tok)
            if not op_value.is_scalar:
                raise ParseError("D entries must be scalar-valued",
                                 tok.line, tok.column, "semantic")
            d_entries[indices[0] - 1][indices[1] - 1] = op_value
        elif target == "H":
            hamiltonian = op_value

    common = dict(
        kind=raw.kind, name=raw.name or "unnamed", field=field,
        params=tuple(raw.params), lets=tuple(lets),
        mode_names=tuple(raw.modes), channels=m, theta=theta,
        theta_is_identity=theta_is_identity,
        options=tuple(sorted(raw.options.items())),
    )
    if raw.kind == "system":
        return SystemDescription(
            **common,
            A=OpVector(field, n, a_entries),
            B=OpMatrix(field, n, n, m, b_entries),
            C=OpVector(field, n, c_entries),
            D=OpMatrix(field, n, m, m, d_entries),
        )
    return SystemDescription(
        **common,
        hamiltonian=hamiltonian,
        coupling=OpVector(field, n, l_entries),
    )


def _check_index(value: int, bound: int, what: str, tok: Token) -> None:
    if not 1 <= value <= bound:
        raise ParseError(
            f"{what} index {value} out of range 1..{bound}",
            tok.line, tok.column, "semantic")


# ---------------------------------------------------------------------------
# Printing (the inverse of parsing, up to elaborated equality)
# ---------------------------------------------------------------------------

def print_description(desc: SystemDescription) -> str:
    """Render a description as .qs text; reparsing yields an equal description."""
    lines = [f"{desc.kind} {desc.name}"]
    if desc.params:
        lines.append("params " + " ".join(desc.params))
    for name, value in desc.lets:
        lines.append(f"let {name} = {value}")
    if desc.mode_names:
        lines.append("modes " + " ".join(desc.mode_names))
    lines.append(f"channels {desc.channels}")
    if desc.theta_is_identity:
        lines.append("theta identity")
    else:
        rows = "; ".join(
            "[" + ", ".join(str(desc.theta.entry(i, j)) for j in range(desc.n)) + "]"
            for i in range(desc.n)
        )
        lines.append(f"theta [{rows}]")
    for key, value in desc.options:
        lines.append(f"option {key} = {value}")
    names = desc.mode_names

    def fmt(p: OpPoly) -> str:
        return format_op_poly(p, names)

    if desc.kind == "system":
        for idx, entry in enumerate(desc.A):
            if not entry.is_zero:
                lines.append(f"A[{idx + 1}] = {fmt(entry)}")
        for i in range(desc.B.rows):
            for j in range(desc.B.cols):
                e = desc.B.entries[i][j]
                if not e.is_zero:
                    lines.append(f"B[{i + 1}][{j + 1}] = {fmt(e)}")
        for idx, entry in enumerate(desc.C):
            if not entry.is_zero:
                lines.append(f"C[{idx + 1}] = {fmt(entry)}")
        eye = OpMatrix.identity(desc.field, desc.n, desc.m)
        if desc.D == eye:
            lines.append("D = identity")
        else:
            for i in range(desc.D.rows):
                for j in range(desc.D.cols):
                    e = desc.D.entries[i][j]
                    default = desc.field.one if i == j else desc.field.zero
                    if e.scalar_part() != default or not e.is_scalar:
                        lines.append(f"D[{i + 1}][{j + 1}] = {fmt(e)}")
    else:
        if not desc.hamiltonian.is_zero:
            lines.append(f"H = {fmt(desc.hamiltonian)}")
        for idx, entry in enumerate(desc.coupling):
            if not entry.is_zero:
                lines.append(f"L[{idx + 1}] = {fmt(entry)}")
    return "\n".join(lines) + "\n"
