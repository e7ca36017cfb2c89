"""Operator matrices and the matrix-valued commutator patterns."""

from __future__ import annotations

import random

import pytest

from qsreal import (
    CommutationMatrix,
    OpMatrix,
    OpPoly,
    OpVector,
    ScalarField,
    SingularMatrixError,
    adjoint_matrix,
    adjoint_vector,
    comm_adj_vec,
    comm_vec_adj,
    comm_vec_transpose,
    double_up,
    invert_scalar_matrix,
    matmul,
    product,
    quad_form,
)
from qsreal.systems import annihilation_vector

from conftest import random_op_poly, random_scalar


@pytest.fixture(scope="module")
def field():
    return ScalarField(["t", "u"])


@pytest.fixture(scope="module")
def theta(field):
    return CommutationMatrix.identity(field, 2)


def _random_matrix(rng, field, rows, cols, n=2):
    return OpMatrix(field, n, rows, cols,
                    [[random_op_poly(rng, field, n, max_degree=2, max_terms=2)
                      for _ in range(cols)] for _ in range(rows)])


def test_opo_bjb_diagonal(opo_system):
    d = double_up(opo_system)
    f = opo_system.field
    b1, b2 = f.param("b1"), f.param("b2")
    bjb = matmul(matmul(d.B_bar, d.J_bar, d.theta), adjoint_matrix(d.B_bar),
                 d.theta)
    expected_diag = [b1 ** 2, b2 ** 2, -(b1 ** 2), -(b2 ** 2)]  # 2k1, 2k2, ...
    for i in range(4):
        for j in range(4):
            entry = bjb.entries[i][j]
            if i == j:
                assert entry == OpPoly.from_scalar(f, 2, expected_diag[i])
            else:
                assert entry.is_zero


def test_matmul_identity(field, theta):
    rng = random.Random(11)
    m = _random_matrix(rng, field, 3, 3)
    eye = OpMatrix.identity(field, 2, 3)
    assert matmul(m, eye, theta) == m
    assert matmul(eye, m, theta) == m


def test_matmul_adjoint_reverses(field, theta):
    rng = random.Random(12)
    for _ in range(10):
        m = _random_matrix(rng, field, 2, 3)
        n = _random_matrix(rng, field, 3, 2)
        lhs = adjoint_matrix(matmul(m, n, theta))
        rhs = matmul(adjoint_matrix(n), adjoint_matrix(m), theta)
        assert lhs == rhs


def test_matmul_associativity_bilinearity(field, theta):
    rng = random.Random(13)
    for _ in range(6):
        m = _random_matrix(rng, field, 2, 2)
        n = _random_matrix(rng, field, 2, 3)
        p = _random_matrix(rng, field, 3, 2)
        assert matmul(matmul(m, n, theta), p, theta) \
            == matmul(m, matmul(n, p, theta), theta)
        n2 = _random_matrix(rng, field, 2, 3)
        assert matmul(m, n + n2, theta) \
            == matmul(m, n, theta) + matmul(m, n2, theta)


def test_adjoint_matrix_examples(field, theta):
    a = annihilation_vector(field, 2)
    col = OpMatrix(field, 2, 2, 1, [[a[0]], [a[1]]])
    row = adjoint_matrix(col)
    assert row.rows == 1 and row.cols == 2
    assert row.entries[0][0] == OpPoly.creator(field, 2, 0)
    assert row.entries[0][1] == OpPoly.creator(field, 2, 1)
    rng = random.Random(14)
    m = _random_matrix(rng, field, 2, 3)
    assert adjoint_matrix(adjoint_matrix(m)) == m


def test_adjoint_of_opo_drift_block(opo_system):
    """Row [A1*, A2*, A1, A2] with A1* = -k1 a1' - 2chi a2' a1."""
    d = double_up(opo_system)
    f = opo_system.field
    b1, chi = f.param("b1"), f.param("chi")
    col = OpMatrix(f, 2, 4, 1, [[e] for e in d.A_bar])
    row = adjoint_matrix(col)
    a1_star_drift = OpPoly.monomial(f, 2, (1, 0), (0, 0), -(b1 ** 2) / 2) \
        + OpPoly.monomial(f, 2, (0, 1), (1, 0), -2 * chi)
    assert row.entries[0][0] == a1_star_drift


def test_comm_vec_adj_doubled_modes(opo_system):
    d = double_up(opo_system)
    assert comm_vec_adj(d.a_bar, d.a_bar, d.theta) == d.theta_bar


def test_comm_vec_adj_opo_drift(opo_system):
    """Spot-check the displayed [Abar, abar†] entries."""
    d = double_up(opo_system)
    f = opo_system.field
    b1, b2, chi = f.param("b1"), f.param("b2"), f.param("chi")
    k1, k2 = b1 ** 2 / 2, b2 ** 2 / 2
    m = comm_vec_adj(d.A_bar, d.a_bar, d.theta)
    sc = lambda s: OpPoly.from_scalar(f, 2, s)
    mono = lambda h, k, co: OpPoly.monomial(f, 2, h, k, co)
    expected = [
        [sc(-k1), mono((1, 0), (0, 0), -2 * chi), mono((0, 0), (0, 1), 2 * chi), sc(f.zero)],
        [mono((0, 0), (1, 0), 2 * chi), sc(-k2), sc(f.zero), sc(f.zero)],
        [mono((0, 1), (0, 0), -2 * chi), sc(f.zero), sc(k1), mono((0, 0), (1, 0), 2 * chi)],
        [sc(f.zero), sc(f.zero), mono((1, 0), (0, 0), -2 * chi), sc(k2)],
    ]
    for i in range(4):
        for j in range(4):
            assert m.entries[i][j] == expected[i][j], (i, j)


def test_comm_vec_adj_constants_vanish(field, theta):
    v = OpVector(field, 2, (OpPoly.from_scalar(field, 2, 3),
                            OpPoly.from_scalar(field, 2, field.i)))
    assert comm_vec_adj(v, v, theta).is_zero


def test_comm_vec_adj_adjoint_symmetry(field, theta):
    """[u, v†]† = [v, u†] entrywise: taking the adjoint of the pattern swaps
    its arguments (consistent with [abar, abar†] being Hermitian)."""
    rng = random.Random(15)
    for _ in range(8):
        u = OpVector(field, 2, tuple(random_op_poly(rng, field, 2, 2, 2)
                                     for _ in range(2)))
        v = OpVector(field, 2, tuple(random_op_poly(rng, field, 2, 2, 2)
                                     for _ in range(3)))
        lhs = adjoint_matrix(comm_vec_adj(u, v, theta))
        rhs = comm_vec_adj(v, u, theta)
        assert lhs == rhs


def test_comm_vec_transpose_examples(opo_system):
    theta = opo_system.theta
    a = opo_system.modes()
    assert comm_vec_transpose(opo_system.C, a, theta).is_zero
    assert comm_vec_transpose(a, a, theta).is_zero
    total = comm_vec_transpose(opo_system.A, a, theta) \
        + comm_vec_transpose(a, opo_system.A, theta)
    assert total.is_zero


def test_quad_form_opo_expansion(opo_system):
    """abar† thetabar^-1 Abar expands to a1'A1 + a2'A2 - a1 A1* - a2 A2*."""
    from qsreal.ops import adjoint

    d = double_up(opo_system)
    f = opo_system.field
    theta = opo_system.theta
    tb_inv = invert_scalar_matrix(d.theta_bar)
    got = quad_form(d.a_bar, tb_inv, d.A_bar, theta)
    a = opo_system.modes()
    expected = OpPoly.zero(f, 2)
    for j in range(2):
        expected = expected + product(adjoint(a[j]), opo_system.A[j], theta)
        expected = expected - product(a[j], adjoint(opo_system.A[j]), theta)
    assert got == expected


def test_quad_form_number_operator(field, theta):
    a = annihilation_vector(field, 2)
    eye = OpMatrix.identity(field, 2, 2)
    got = quad_form(a, eye, a, theta)
    expected = OpPoly.monomial(field, 2, (1, 0), (1, 0)) \
        + OpPoly.monomial(field, 2, (0, 1), (0, 1))
    assert got == expected


def test_quad_form_zero_vector(field, theta):
    a = annihilation_vector(field, 2)
    z = OpVector.zero(field, 2, 2)
    assert quad_form(a, OpMatrix.identity(field, 2, 2), z, theta).is_zero


def test_comm_adj_vec_is_negated_transposeless_pattern(field, theta):
    rng = random.Random(16)
    u = OpVector(field, 2, tuple(random_op_poly(rng, field, 2, 2, 2)
                                 for _ in range(2)))
    v = OpVector(field, 2, tuple(random_op_poly(rng, field, 2, 2, 2)
                                 for _ in range(2)))
    assert comm_adj_vec(v, u, theta) == -comm_vec_adj(u, v, theta)


def test_invert_scalar_matrix_roundtrip(field, theta):
    rng = random.Random(17)
    for _ in range(6):
        entries = [[random_scalar(rng, field) for _ in range(3)] for _ in range(3)]
        entries[0][0] = entries[0][0] + field.one  # nudge away from singularity
        m = OpMatrix.from_scalars(field, 2, entries)
        try:
            inv = invert_scalar_matrix(m)
        except SingularMatrixError:
            continue
        assert matmul(m, inv, theta) == OpMatrix.identity(field, 2, 3)
        assert matmul(inv, m, theta) == OpMatrix.identity(field, 2, 3)


def test_invert_singular_matrix_raises(field):
    one = field.one
    m = OpMatrix.from_scalars(field, 2, [[one, one], [one, one]])
    with pytest.raises(SingularMatrixError):
        invert_scalar_matrix(m)


def test_invert_rejects_operator_entries(field):
    a1 = OpPoly.annihilator(field, 2, 0)
    m = OpMatrix(field, 2, 1, 1, [[a1]])
    with pytest.raises(Exception):
        invert_scalar_matrix(m)


def test_adjoint_vector(field):
    a = annihilation_vector(field, 2)
    star = adjoint_vector(a)
    assert star.entries[0] == OpPoly.creator(field, 2, 0)
    assert adjoint_vector(star) == a
