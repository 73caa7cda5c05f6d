"""Maximal orders through repeated blowups of radical ideals, the maximality
decision via the reduced discriminant, and the converse reduction that
recovers rad(a) from a maximal order.
"""
from __future__ import annotations

from math import gcd

from .exact_arith import factor_oracle, is_prime, rad
from .finite_ring import FiniteRing, nilradical_given_rad
from .frac_ideal import Extension, blowup, ideal_normalize, is_invertible
from .matrix import content
from .order_ring import Order, discriminant, order_from_monic, reduced_discriminant


def _quotient_ring(S: Order, d: int) -> FiniteRing:
    n = S.n
    table = [[list(S.table[i][j]) for j in range(n)] for i in range(n)]
    return FiniteRing([d] * n, table, list(S.one))


def radical_ideal(S: Order, d: int):
    """Inverse image in S of nil(S/dS) (d square-free)."""
    nil = nilradical_given_rad(_quotient_ring(S, d), d)
    return ideal_normalize(S, nil.lattice, 1)


def maximal_order_given_d(R: Order, d: int, audit: list | None = None) -> Extension:
    """O_K, assuming every non-invertible prime of R contains the square-free d.

    ``audit`` (if given) receives each intermediate extension R -> S.
    """
    ext = Extension.trivial(R)
    if d == 1:
        return ext
    while True:
        a = radical_ideal(ext.order, d)
        step = blowup(a)
        if step.is_trivial():
            assert is_invertible(a)
            return ext
        ext = ext.then(step)
        if audit is not None:
            audit.append(ext)


def maximal_order(R: Order, oracle=None, audit: list | None = None) -> Extension:
    """O_K using d = rad|disc(R)|; the radical is the factoring-hard step."""
    D = discriminant(R)
    d = rad(abs(D), oracle)
    ext = maximal_order_given_d(R, d, audit)
    assert D == ext.index() ** 2 * discriminant(ext.order)
    return ext


def is_maximal(R: Order, oracle=None) -> bool:
    """Decide R = O_K.

    For primes p > rank, p divides [O_K : R] iff p^2 divides the reduced
    discriminant.  Small primes are settled by running the blowup loop.
    """
    delta = reduced_discriminant(R)
    n = R.n
    small = 1
    for p, e in factor_oracle(abs(delta), oracle):
        if p > n and e >= 2:
            return False
        if p <= n:
            small *= p
    return maximal_order_given_d(R, small).is_trivial()


def kummer_order(a: int, l: int) -> Order:
    """Z[X]/(X^l - a)."""
    return order_from_monic([-a] + [0] * (l - 1) + [1])


def _exponent_prime(a: int) -> int:
    """Smallest odd prime l with 2^l > a."""
    l = 3
    while (1 << l) <= a or not is_prime(l):
        l += 2
    return l


def radical_via_maxorder(a: int, oracle=maximal_order) -> int:
    """rad(a) from the maximal order of Q(a^(1/l)).

    b_i is the largest integer dividing alpha^i in O, read off as the gcd of
    the coordinates of alpha^i on a basis of O; then rad(a) = gcd of the
    c_i = a^i / b_i^l over 0 < i < l.
    """
    if a < 2:
        raise ValueError("need a > 1")
    l = _exponent_prime(a)
    R = kummer_order(a, l)
    ext = oracle(R)
    g = 0
    for i in range(1, l):
        b = content(ext.embedding.col(i))
        c, r = divmod(a ** i, b ** l)
        assert r == 0
        g = gcd(g, c)
    return g
