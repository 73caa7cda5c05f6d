"""Shared fixtures and independent oracles (sympy, brute force)."""
from fractions import Fraction
from math import prod

import pytest
from sympy import Matrix, factorint

from exactnt.matrix import Mat
from exactnt.order_ring import Order, order_from_monic, quadratic_order


def rad_oracle(a: int) -> int:
    return prod(factorint(a)) if a > 1 else 1


def to_sympy(M: Mat) -> Matrix:
    return Matrix(M.nrows, M.ncols, lambda i, j: M.rows[i][j])


def lattice_equal(A: Mat, B: Mat) -> bool:
    """Equal column lattices (full rank, square) via rational change of basis."""
    SA, SB = to_sympy(A), to_sympy(B)
    if SA.det() == 0 or abs(SA.det()) != abs(SB.det()):
        return False
    T = SA.inv() * SB
    return all(x.is_integer for x in T)


def kummer_suborder() -> Order:
    """Z + 2 pi Z + 2 pi^2 Z inside Z[pi], pi^3 = 2, basis (1, 2pi, 2pi^2)."""
    # (2pi)^2 = 2 (2pi^2), (2pi)(2pi^2) = 8, (2pi^2)^2 = 4 * 2 pi
    table = [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 0], [0, 0, 2], [8, 0, 0]],
        [[0, 0, 1], [8, 0, 0], [0, 4, 0]],
    ]
    return Order(3, [1, 0, 0], table)


@pytest.fixture
def gaussian():
    return quadratic_order(-1)


@pytest.fixture
def integers():
    return order_from_monic([0, 1])


@pytest.fixture
def kummer():
    return kummer_suborder()


def frac(x):
    return Fraction(x)
