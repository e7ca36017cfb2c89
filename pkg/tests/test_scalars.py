"""Field arithmetic, conjugation and exact evaluation."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qsreal import (
    ComplexRational,
    ParameterError,
    ScalarDivisionError,
    ScalarField,
)

from conftest import random_scalar


@pytest.fixture(scope="module")
def field():
    return ScalarField(["b1", "k1", "chi"])


def test_additive_inverse(field):
    chi = field.param("chi")
    assert (chi + (-chi)).is_zero


def test_square_encoding_ring_arithmetic(field):
    b1 = field.param("b1")
    assert (b1 ** 2 / 2) * 2 == b1 ** 2


def test_multiplicative_inverse(field):
    k1 = field.param("k1")
    two_k1 = k1 * 2
    assert two_k1.invert() * two_k1 == field.one


def test_division_by_zero_rejected(field):
    with pytest.raises(ScalarDivisionError):
        field.zero.invert()
    with pytest.raises(ScalarDivisionError):
        field.one / field.zero


def test_conj_flips_imaginary_fixes_params(field):
    chi = field.param("chi")
    k1 = field.param("k1")
    assert (field.i * 2 * chi).conj() == -(field.i * 2 * chi)
    assert k1.conj() == k1


def test_conj_involution_random(field):
    rng = random.Random(7)
    for _ in range(50):
        x = random_scalar(rng, field)
        assert x.conj().conj() == x


def test_conj_is_automorphism(field):
    rng = random.Random(8)
    for _ in range(50):
        x, y = random_scalar(rng, field), random_scalar(rng, field)
        assert (x * y).conj() == x.conj() * y.conj()
        assert (x + y).conj() == x.conj() + y.conj()


def test_evaluate_substitution(field):
    b1 = field.param("b1")
    assert (b1 ** 2 / 2).evaluate({"b1": 2}) == ComplexRational(2)


def test_evaluate_pole(field):
    chi, k1 = field.param("chi"), field.param("k1")
    with pytest.raises(ScalarDivisionError):
        (chi / k1).evaluate({"chi": 1, "k1": 0})


def test_evaluate_missing_and_unknown_parameter(field):
    chi = field.param("chi")
    with pytest.raises(ParameterError):
        chi.evaluate({})
    with pytest.raises(ParameterError):
        chi.evaluate({"chi": 1, "nope": 2})


def test_evaluate_commutes_with_conj(field):
    """Direct-substitution oracle: evaluate(conj(x)) = conj(evaluate(x))."""
    rng = random.Random(9)
    for _ in range(60):
        x = random_scalar(rng, field)
        sigma = {"b1": Fraction(rng.randint(1, 5)),
                 "k1": Fraction(rng.randint(1, 5), 2),
                 "chi": Fraction(rng.randint(-3, 3))}
        assert x.conj().evaluate(sigma) == x.evaluate(sigma).conjugate()


# -- field axioms, exercised through hypothesis -----------------------------

_field = ScalarField(["p", "q"])


@st.composite
def scalars(draw):
    num = draw(st.integers(-6, 6))
    den = draw(st.integers(1, 4))
    im = draw(st.integers(-3, 3))
    s = _field.rational(Fraction(num, den)) + _field.i * im
    if draw(st.booleans()):
        s = s * _field.param(draw(st.sampled_from(["p", "q"])))
    if draw(st.booleans()):
        s = s + _field.param("p") * draw(st.integers(-2, 2))
    return s


@settings(max_examples=120, deadline=None)
@given(scalars(), scalars(), scalars())
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    if not x.is_zero:
        assert x * x.invert() == _field.one


@settings(max_examples=60, deadline=None)
@given(scalars(), scalars())
def test_canonical_form_is_stable(x, y):
    """Canonicalization is idempotent: rebuilding a canonical value is a no-op."""
    if y.is_zero:
        y = _field.one
    q = x / y
    assert q * y == x
    rebuilt = (q * y) / y
    assert rebuilt == q


def test_rational_function_cancellation(field):
    b1 = field.param("b1")
    assert (b1 * b1 - 1) / (b1 - 1) == b1 + 1


def test_complex_rational_arithmetic():
    a = ComplexRational(Fraction(1, 2), 1)
    b = ComplexRational(2, -1)
    assert a + b == ComplexRational(Fraction(5, 2), 0)
    assert a * b == ComplexRational(2, Fraction(3, 2))
    assert (a / a) == ComplexRational(1)
    assert complex(b) == 2 - 1j
    with pytest.raises(ScalarDivisionError):
        a / ComplexRational(0)


def test_reserved_and_duplicate_parameter_names():
    with pytest.raises(ParameterError):
        ScalarField(["i"])
    with pytest.raises(ParameterError):
        ScalarField(["x", "x"])
    with pytest.raises(ParameterError):
        ScalarField(["2bad"])
