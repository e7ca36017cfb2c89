"""Normal-ordering engine: rewrite rules, adjoints, grading, algebra laws."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from qsreal import (
    CommutationMatrix,
    ModeMismatchError,
    OpPoly,
    ScalarField,
    adjoint,
    commutator,
    format_op_poly,
    grade,
    is_annihilation_only,
    product,
)

from conftest import random_op_poly


@pytest.fixture(scope="module")
def field():
    return ScalarField(["chi", "k1", "t"])


@pytest.fixture(scope="module")
def theta(field):
    return CommutationMatrix.identity(field, 2)


def a(field, j):
    return OpPoly.annihilator(field, 2, j)


def c(field, j):
    return OpPoly.creator(field, 2, j)


def test_product_basic_rewrite(field, theta):
    a1, c1 = a(field, 0), c(field, 0)
    expected = OpPoly.monomial(field, 2, (1, 0), (1, 0)) \
        + OpPoly.from_scalar(field, 2, 1)
    assert product(a1, c1, theta) == expected


def test_product_cross_mode_commutes(field, theta):
    a1, c2 = a(field, 0), c(field, 1)
    assert product(a1, c2, theta) == OpPoly.monomial(field, 2, (0, 1), (1, 0))


def test_product_square_against_fock_value(field, theta):
    # frozen from the truncated-Fock oracle: a^2 a'^2 = a'^2 a^2 + 4 a'a + 2
    a1, c1 = a(field, 0), c(field, 0)
    a1sq = product(a1, a1, theta)
    c1sq = product(c1, c1, theta)
    expected = OpPoly.monomial(field, 2, (2, 0), (2, 0)) \
        + OpPoly.monomial(field, 2, (1, 0), (1, 0), 4) \
        + OpPoly.from_scalar(field, 2, 2)
    assert product(a1sq, c1sq, theta) == expected


def test_commutator_examples(field, theta):
    a1, a2, c1 = a(field, 0), a(field, 1), c(field, 0)
    assert commutator(a1, c1, theta) == OpPoly.from_scalar(field, 2, 1)
    assert commutator(a1, a2, theta).is_zero
    c1sq = product(c1, c1, theta)
    assert commutator(a1, c1sq, theta) == c1 * 2  # frozen from the Fock oracle


def test_parameterized_theta_entry(field):
    # [a1, a2'] = t when theta has t off-diagonal
    t = field.param("t")
    theta = CommutationMatrix(field, [[field.one, t], [t, field.one]])
    a1, c2 = a(field, 0), c(field, 1)
    assert commutator(a1, c2, theta) == OpPoly.from_scalar(field, 2, t)


def test_adjoint_examples(field, theta):
    chi = field.param("chi")
    x = OpPoly.monomial(field, 2, (1, 0), (0, 1), -2 * chi)  # -2chi a1' a2
    assert adjoint(x) == OpPoly.monomial(field, 2, (0, 1), (1, 0), -2 * chi)
    y = OpPoly.monomial(field, 2, (0, 1), (2, 0))            # a1^2 a2'
    assert adjoint(y) == OpPoly.monomial(field, 2, (2, 0), (0, 1))


def test_adjoint_involution_random(field):
    rng = random.Random(3)
    for _ in range(40):
        p = random_op_poly(rng, field, 2)
        assert adjoint(adjoint(p)) == p


def test_grade_examples(field, theta):
    chi, k1 = field.param("chi"), field.param("k1")
    a1 = a(field, 0)
    drift = a1 * (-k1) + OpPoly.monomial(field, 2, (1, 0), (0, 1), -2 * chi)
    parts = grade(drift)
    assert set(parts) == {1, 2}
    assert parts[1] == a1 * (-k1)
    assert parts[2] == OpPoly.monomial(field, 2, (1, 0), (0, 1), -2 * chi)
    assert grade(OpPoly.zero(field, 2)) == {}


def test_grade_direct_sum(field):
    rng = random.Random(4)
    for _ in range(20):
        p = random_op_poly(rng, field, 2)
        q = random_op_poly(rng, field, 2)
        combined = grade(p + q)
        reassembled = OpPoly.zero(field, 2)
        for comp in combined.values():
            reassembled = reassembled + comp
        assert reassembled == p + q


def test_is_annihilation_only(field, theta):
    b1 = field.param("k1")
    assert is_annihilation_only(a(field, 0) * b1)
    assert not is_annihilation_only(OpPoly.monomial(field, 2, (1, 0), (0, 1)))
    assert is_annihilation_only(OpPoly.from_scalar(field, 2, 5))


def test_mode_count_mismatch(field, theta):
    other = OpPoly.annihilator(field, 3, 0)
    with pytest.raises(ModeMismatchError):
        product(other, a(field, 0), theta)


def test_renormal_ordering_is_identity(field, theta):
    """Multiplying the creation part by the annihilation part reproduces a
    canonical monomial: normal ordering is idempotent on canonical forms."""
    rng = random.Random(5)
    for _ in range(30):
        h = (rng.randint(0, 2), rng.randint(0, 2))
        k = (rng.randint(0, 2), rng.randint(0, 2))
        creation = OpPoly.monomial(field, 2, h, (0, 0))
        annihilation = OpPoly.monomial(field, 2, (0, 0), k)
        assert product(creation, annihilation, theta) \
            == OpPoly.monomial(field, 2, h, k)


def test_printing_canonical_layout(field):
    chi = field.param("chi")
    p = OpPoly.monomial(field, 2, (2, 0), (0, 1), -2 * chi)
    assert format_op_poly(p, ("a1", "a2")) == "(-2*chi) * a1'^2 * a2"


# -- algebra laws over random instances, identity and parameterized theta ---

_lawfield = ScalarField(["t"])
_thetas = [
    CommutationMatrix.identity(_lawfield, 2),
    CommutationMatrix(_lawfield, [
        [_lawfield.one, _lawfield.param("t")],
        [_lawfield.param("t"), _lawfield.one],
    ]),
]


@st.composite
def op_polys(draw):
    rng = random.Random(draw(st.integers(0, 10 ** 9)))
    return random_op_poly(rng, _lawfield, 2, max_degree=3, max_terms=2)


@settings(max_examples=40, deadline=None)
@given(op_polys(), op_polys(), op_polys(), st.sampled_from([0, 1]))
def test_associativity(p, q, r, which):
    theta = _thetas[which]
    assert product(product(p, q, theta), r, theta) \
        == product(p, product(q, r, theta), theta)


@settings(max_examples=40, deadline=None)
@given(op_polys(), op_polys(), op_polys(), st.sampled_from([0, 1]))
def test_leibniz(p, q, r, which):
    theta = _thetas[which]
    lhs = commutator(p, product(q, r, theta), theta)
    rhs = product(commutator(p, q, theta), r, theta) \
        + product(q, commutator(p, r, theta), theta)
    assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(op_polys(), op_polys(), op_polys(), st.sampled_from([0, 1]))
def test_jacobi(p, q, r, which):
    theta = _thetas[which]
    total = commutator(p, commutator(q, r, theta), theta) \
        + commutator(q, commutator(r, p, theta), theta) \
        + commutator(r, commutator(p, q, theta), theta)
    assert total.is_zero


@settings(max_examples=40, deadline=None)
@given(op_polys(), op_polys(), st.sampled_from([0, 1]))
def test_antisymmetry(p, q, which):
    theta = _thetas[which]
    assert commutator(p, q, theta) == -commutator(q, p, theta)


@settings(max_examples=40, deadline=None)
@given(op_polys(), op_polys(), st.sampled_from([0, 1]))
def test_adjoint_reverses_products(p, q, which):
    theta = _thetas[which]
    assert adjoint(product(p, q, theta)) \
        == product(adjoint(q), adjoint(p), theta)
