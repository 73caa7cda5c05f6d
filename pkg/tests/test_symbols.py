import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint

from exactnt.abgroup import FgGroup
from exactnt.errors import EvenIndex, InfiniteGroup, NotAutomorphism, NotCoprime
from exactnt.frac_ideal import principal_ideal
from exactnt.matrix import Mat
from exactnt.order_ring import order_from_monic, quadratic_order
from exactnt.symbols import (automorphism_sign, brute_force_sign, jacobi, jacobi_ideal,
                             kronecker, legendre)


def jacobi_oracle(a, b):
    """Product of Euler criteria over the factorization of b."""
    out = 1
    for p, e in factorint(b).items():
        r = pow(a, (p - 1) // 2, p)
        out *= (0 if r == 0 else (1 if r == 1 else -1)) ** e
    return out


def test_legendre_examples():
    assert legendre(2, 7) == 1
    assert legendre(3, 7) == -1
    assert legendre(1, 11) == 1
    with pytest.raises(NotCoprime):
        legendre(14, 7)
    with pytest.raises(ValueError):
        legendre(3, 9)


def test_jacobi_matches_sympy():
    for b in range(1, 200, 2):
        for a in range(-40, 120):
            if jacobi_oracle(a, b) == 0:
                with pytest.raises(NotCoprime):
                    jacobi(a, b)
            else:
                assert jacobi(a, b) == jacobi_oracle(a, b), (a, b)
    assert jacobi(1001, 9907) == -1
    with pytest.raises(ValueError):
        jacobi(3, 8)


@settings(max_examples=300)
@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_reciprocity(a, b):
    a, b = 2 * a + 1, 2 * b + 1
    from math import gcd
    if gcd(a, b) != 1:
        return
    sign = -1 if (a - 1) // 2 % 2 and (b - 1) // 2 % 2 else 1
    assert jacobi(a, b) * jacobi(b, a) == sign


def test_kronecker():
    assert kronecker(2, 7) == 1
    assert kronecker(3, 8) == -1   # (3/2) = -1 cubed
    assert kronecker(5, -3) == jacobi(5, 3)
    assert kronecker(-5, -3) == -jacobi(-5, 3)
    with pytest.raises(ValueError):
        kronecker(3, 0)


def test_automorphism_sign_examples():
    Z4 = FgGroup.cyclic(4)
    assert automorphism_sign(Z4, Mat([[-1]])) == -1
    assert automorphism_sign(Z4, Mat([[3]])) == -1
    assert automorphism_sign(FgGroup.cyclic(7), Mat([[2]])) == 1
    assert automorphism_sign(FgGroup.cyclic(6, 10), Mat.identity(2)) == 1
    with pytest.raises(NotAutomorphism):
        automorphism_sign(Z4, Mat([[2]]))
    with pytest.raises(InfiniteGroup):
        automorphism_sign(FgGroup.cyclic(0), Mat([[-1]]))


def random_automorphism(G, rng, tries=50):
    for _ in range(tries):
        M = Mat([[rng.randint(-6, 6) for _ in range(G.n)] for _ in range(G.n)])
        try:
            brute_force_sign(G, M)
        except NotAutomorphism:
            continue
        return M
    return None


def test_sign_matches_brute_force_small():
    rng = random.Random(5)
    checked = 0
    for _ in range(120):
        k = rng.choice([1, 2, 2, 3])
        moduli = [rng.randint(2, 12) for _ in range(k)]
        G = FgGroup.cyclic(*moduli)
        M = random_automorphism(G, rng)
        if M is None:
            continue
        assert automorphism_sign(G, M) == brute_force_sign(G, M), (moduli, M)
        checked += 1
    assert checked > 60


def test_sign_on_free_modules_is_jacobi_of_det():
    rng = random.Random(6)
    for b in [3, 5, 9, 15, 21, 25, 27]:
        for k in (1, 2, 3):
            G = FgGroup.cyclic(*([b] * k))
            for _ in range(5):
                M = Mat([[rng.randint(-9, 9) for _ in range(k)] for _ in range(k)])
                det = M.det()
                from math import gcd
                if gcd(det, b) != 1:
                    continue
                assert automorphism_sign(G, M) == jacobi(det, b)


def test_jacobi_ideal_over_integers():
    Z = order_from_monic([0, 1])
    for b in range(1, 40, 2):
        bI = principal_ideal(Z.int_element(b))
        for a in range(1, 40):
            from math import gcd
            if gcd(a, b) != 1:
                continue
            assert jacobi_ideal(Z, bI, Z.int_element(a)) == jacobi(a, b)
    with pytest.raises(EvenIndex):
        jacobi_ideal(Z, principal_ideal(Z.int_element(4)), Z.int_element(3))
    with pytest.raises(NotCoprime):
        jacobi_ideal(Z, principal_ideal(Z.int_element(9)), Z.int_element(3))


def test_jacobi_ideal_gaussian():
    R = quadratic_order(-1)
    three = principal_ideal(R.int_element(3))
    assert jacobi_ideal(R, three, R.element([1, 1])) == -1
    assert jacobi_ideal(R, three, R.element([0, 1])) == 1
