"""Shared fixtures: the OPO reference system and seeded random generators."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from qsreal import (
    CommutationMatrix,
    OpMatrix,
    OpPoly,
    OpVector,
    Oscillator,
    QSystem,
    Scalar,
    ScalarField,
    canonical_ito_table,
    product,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def opo_field() -> ScalarField:
    return ScalarField(["b1", "b2", "chi"])


@pytest.fixture(scope="session")
def opo_system(opo_field) -> QSystem:
    """The two-mode parametric oscillator, built directly against the API."""
    f = opo_field
    b1, b2, chi = f.param("b1"), f.param("b2"), f.param("chi")
    k1, k2 = b1 ** 2 / 2, b2 ** 2 / 2
    theta = CommutationMatrix.identity(f, 2)
    a1 = OpPoly.annihilator(f, 2, 0)
    a2 = OpPoly.annihilator(f, 2, 1)
    c1 = OpPoly.creator(f, 2, 0)
    z = OpPoly.zero(f, 2)
    A = OpVector(f, 2, (
        a1 * (-k1) + product(c1, a2, theta) * (-2 * chi),
        a2 * (-k2) + product(a1, a1, theta) * chi,
    ))
    B = OpMatrix(f, 2, 2, 2, [
        [OpPoly.from_scalar(f, 2, -b1), z],
        [z, OpPoly.from_scalar(f, 2, -b2)],
    ])
    C = OpVector(f, 2, (a1 * b1, a2 * b2))
    return QSystem(field=f, theta=theta, A=A, B=B, C=C,
                   D=OpMatrix.identity(f, 2, 2),
                   noise=canonical_ito_table(f, 2))


@pytest.fixture(scope="session")
def opo_oscillator(opo_field) -> Oscillator:
    f = opo_field
    b1, b2, chi = f.param("b1"), f.param("b2"), f.param("chi")
    theta = CommutationMatrix.identity(f, 2)
    h = OpPoly.monomial(f, 2, (2, 0), (0, 1), -f.i * chi) \
        + OpPoly.monomial(f, 2, (0, 1), (2, 0), f.i * chi)
    coupling = OpVector(f, 2, (
        OpPoly.annihilator(f, 2, 0) * b1,
        OpPoly.annihilator(f, 2, 1) * b2,
    ))
    return Oscillator(field=f, theta=theta, hamiltonian=h, coupling=coupling)


def random_scalar(rng: random.Random, field: ScalarField,
                  with_params: bool = True) -> Scalar:
    """Small random field element: Gaussian rational, optionally times a parameter."""
    num = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    im = Fraction(rng.randint(-2, 2), rng.randint(1, 2))
    s = field.rational(num) + field.i * field.rational(im)
    if with_params and field.params and rng.random() < 0.4:
        s = s * field.param(rng.choice(field.params))
    return s


def random_op_poly(rng: random.Random, field: ScalarField, n: int,
                   max_degree: int = 4, max_terms: int = 3,
                   with_params: bool = True) -> OpPoly:
    """Random normal-ordered polynomial of bounded degree (possibly zero)."""
    poly = OpPoly.zero(field, n)
    for _ in range(rng.randint(1, max_terms)):
        while True:
            h = tuple(rng.randint(0, 2) for _ in range(n))
            k = tuple(rng.randint(0, 2) for _ in range(n))
            if sum(h) + sum(k) <= max_degree:
                break
        coeff = random_scalar(rng, field, with_params)
        poly = poly + OpPoly.monomial(field, n, h, k, coeff)
    return poly


def random_annihilation_poly(rng: random.Random, field: ScalarField, n: int,
                             max_degree: int = 2,
                             homogeneous_degree: int | None = None) -> OpPoly:
    """Random annihilation-only polynomial; optionally degree-homogeneous."""
    poly = OpPoly.zero(field, n)
    zero_h = (0,) * n
    for _ in range(rng.randint(1, 2)):
        while True:
            k = tuple(rng.randint(0, max_degree) for _ in range(n))
            if homogeneous_degree is not None:
                if sum(k) == homogeneous_degree:
                    break
            elif sum(k) <= max_degree:
                break
        coeff = random_scalar(rng, field, with_params=False)
        poly = poly + OpPoly.monomial(field, n, zero_h, k, coeff)
    return poly


def random_oscillator(rng: random.Random, coupling_style: str) -> Oscillator:
    """Random oscillator with n <= 2 modes, m <= 2 channels, deg H <= 3.

    ``coupling_style``:
      * ``"faithful"``: each coupling entry is annihilation-only of degree
        <= 2, mixed degrees allowed (constants included).
      * ``"linear"``: each entry is homogeneous of degree exactly 1.
      * ``"homogeneous"``: each entry is degree-homogeneous (degree 1 or 2).
    """
    from qsreal import adjoint

    n = rng.randint(1, 2)
    m = rng.randint(1, 2)
    field = ScalarField([])
    theta = CommutationMatrix.identity(field, n)
    k_part = random_op_poly(rng, field, n, max_degree=3, max_terms=2,
                            with_params=False)
    h = k_part + adjoint(k_part)
    entries = []
    for _ in range(m):
        if coupling_style == "faithful":
            entries.append(random_annihilation_poly(rng, field, n, max_degree=2))
        elif coupling_style == "linear":
            entries.append(random_annihilation_poly(
                rng, field, n, homogeneous_degree=1))
        elif coupling_style == "homogeneous":
            entries.append(random_annihilation_poly(
                rng, field, n, homogeneous_degree=rng.randint(1, 2)))
        else:
            raise ValueError(coupling_style)
    return Oscillator(field=field, theta=theta, hamiltonian=h,
                      coupling=OpVector(field, n, entries))
