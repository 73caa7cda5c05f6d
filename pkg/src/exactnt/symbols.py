"""Legendre, Jacobi and Kronecker symbols, signs of automorphisms of finite
abelian groups, and Jacobi symbols of ideals in orders."""
from __future__ import annotations

from math import gcd

from .abgroup import (FgGroup, GroupMorphism, group_order, is_injective,
                      is_surjective, morphism_check, structure_decompose)
from .errors import EvenIndex, InfiniteGroup, Invalid, NotAutomorphism, NotCoprime
from .exact_arith import is_prime
from .matrix import Mat


def legendre(a: int, p: int) -> int:
    if p <= 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if a % p == 0:
        raise NotCoprime(f"{p} divides {a}")
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def jacobi(a: int, b: int) -> int:
    """(a/b) for odd b > 0 by walking the remainder sequence of a and b.

    >>> jacobi(1001, 9907), jacobi(5, 21)
    (-1, 1)
    """
    if b <= 0 or b % 2 == 0:
        raise ValueError("b must be odd and positive")
    if gcd(a, b) != 1:
        raise NotCoprime(f"gcd({a}, {b}) != 1")
    sign = 1
    x0, x1 = a % b, b  # (a/b) only depends on a mod b
    while x1 != 1:
        x2 = x0 % x1
        u, v = 0, x2
        while v % 2 == 0:
            v //= 2
            u += 1
        if u == 0:
            # odd remainder: reciprocity
            if (x1 - 1) * (x2 - 1) // 4 % 2:
                sign = -sign
            x0, x1 = x1, x2
        else:
            x3 = x1 % x2
            e = u * (x1 * x1 - x3 * x3) // 8 + (v - 1) // 2 * ((x1 - x3) // 2)
            if e % 2:
                sign = -sign
            x0, x1 = x2, x3
    return sign


def kronecker(a: int, b: int) -> int:
    """(a/b) for b != 0, via b = u * c * 2^k with u = +-1 and c odd."""
    if b == 0:
        raise ValueError("b must be nonzero")
    if gcd(a, b) != 1:
        raise NotCoprime(f"gcd({a}, {b}) != 1")
    sign = 1
    if b < 0:
        b = -b
        if a < 0:
            sign = -sign
    k = 0
    while b % 2 == 0:
        b //= 2
        k += 1
    if k % 2 and (a * a - 1) // 8 % 2:
        sign = -sign
    return sign * jacobi(a, b)


# -- signs of automorphisms --------------------------------------------------

def _odd_chain_sign(moduli: list[int], M: Mat) -> int:
    """Sign of x -> Mx on prod Z/n_k with n_k a divisibility chain of odd
    numbers (largest first).

    Peels A = n_m B (n_m the smallest invariant): B/A is free over Z/n_m,
    where the sign is a Jacobi symbol of the determinant, and A is again a
    chain with one fewer nontrivial factor.
    """
    sign = 1
    depth = 0
    while moduli:
        depth += 1
        assert depth <= 64 * max(len(moduli), 1)
        nm = moduli[-1]
        det = M.det() % nm
        sign *= jacobi(det, nm)
        keep = [i for i, n in enumerate(moduli) if n // nm > 1]
        moduli = [moduli[i] // nm for i in keep]
        M = M.submatrix(keep, keep) if keep else Mat.zeros(0, 0)
    return sign


def _perm_sign(perm: list[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _two_part_sign(moduli: list[int], M: Mat) -> int:
    """Sign on a finite abelian 2-group: only Z/2^k (k >= 2) and (Z/2)^2 can
    carry an odd automorphism."""
    if len(moduli) == 1 and moduli[0] >= 4:
        a = M.rows[0][0] % moduli[0]
        return -1 if (a - 1) // 2 % 2 else 1
    if moduli == [2, 2]:
        elems = [(x, y) for x in range(2) for y in range(2)]
        perm = []
        for x, y in elems:
            img = ((M.rows[0][0] * x + M.rows[0][1] * y) % 2,
                   (M.rows[1][0] * x + M.rows[1][1] * y) % 2)
            perm.append(elems.index(img))
        return _perm_sign(perm)
    return 1


def _restricted(moduli, M, idx):
    sub = M.submatrix(idx, idx)
    return [moduli[i] for i in idx], sub


def _check_automorphism(B: FgGroup, sigma) -> GroupMorphism:
    phi = sigma.phi if isinstance(sigma, GroupMorphism) else sigma
    try:
        f = morphism_check(B, B, phi)
    except Invalid as exc:
        raise NotAutomorphism(str(exc)) from None
    if not (is_injective(f) and is_surjective(f)):
        raise NotAutomorphism("map is not bijective")
    return f


def _chain_form(G: FgGroup, phi: Mat):
    """Invariant factors (largest first) and the matrix of phi on them."""
    dec = structure_decompose(G)
    M = dec.to_parts.phi * phi * dec.from_parts.phi
    return list(dec.moduli), M


def automorphism_sign(B: FgGroup, sigma) -> int:
    """Parity of sigma as a permutation of the finite group B, without
    enumerating B."""
    if group_order(B) == float("inf"):
        raise InfiniteGroup("the sign is only defined on finite groups")
    f = _check_automorphism(B, sigma)
    dec = structure_decompose(B, S=[2])
    M = dec.to_parts.phi * f.phi * dec.from_parts.phi
    moduli = list(dec.moduli)
    two = [i for i, q in enumerate(moduli) if q % 2 == 0]
    odd = [i for i, q in enumerate(moduli) if q % 2 == 1]
    if two:
        # sgn(alpha x gamma) = sgn(alpha)^#C sgn(gamma)^#A; #odd part is odd
        # and #two part is even, so only the 2-part contributes.
        q2, M2 = _restricted(moduli, M, two)
        G2 = FgGroup.cyclic(*q2)
        chain, C = _chain_form(G2, M2)
        return _two_part_sign(chain, C)
    if not odd:
        return 1
    q, Mo = _restricted(moduli, M, odd)
    chain, C = _chain_form(FgGroup.cyclic(*q), Mo)
    return _odd_chain_sign(chain, C)


def brute_force_sign(B: FgGroup, sigma) -> int:
    """Permutation parity by enumerating B (small groups only)."""
    from itertools import product

    f = _check_automorphism(B, sigma)
    dec = structure_decompose(B)
    if dec.r:
        raise InfiniteGroup("the sign is only defined on finite groups")
    moduli = list(dec.moduli)
    elems = list(product(*(range(m) for m in moduli)))
    index = {e: i for i, e in enumerate(elems)}
    M = dec.to_parts.phi * f.phi * dec.from_parts.phi
    perm = []
    for e in elems:
        img = tuple(v % m for v, m in zip(M.apply(list(e)), moduli))
        perm.append(index[img])
    return _perm_sign(perm)


def jacobi_ideal(R, b_ideal, a) -> int:
    """(a / b) for an integral ideal b of odd index with aR + b = R."""
    from .frac_ideal import ideal_norm_index, ideal_sum, principal_ideal, unit_ideal

    if b_ideal.den != 1:
        raise ValueError("the ideal must be integral")
    if a.den != 1:
        raise ValueError("a must lie in the order")
    index = ideal_norm_index(b_ideal)
    if index.denominator != 1 or index.numerator % 2 == 0:
        raise EvenIndex(f"index {index} is even")
    if a.is_zero() or ideal_sum(principal_ideal(a), b_ideal) != unit_ideal(R):
        raise NotCoprime("aR + b is not the unit ideal")
    Q = FgGroup(R.n, b_ideal.basis)
    return automorphism_sign(Q, R.mult_matrix_int(list(a.num)))
