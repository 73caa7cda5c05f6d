"""Finite commutative rings and their nilradicals.

A ring is stored on a diagonal additive presentation ``prod Z/d_i`` (an
invariant-factor chain) with a multiplication table on the generators.
Ideals are full-rank lattices L in Z^m containing diag(d), kept in Hermite
form, so that the ideal is L / diag(d) Z^m.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

from .abgroup import FgGroup, structure_decompose
from .coprime_basis import refine
from .errors import BadRadical, Invalid, NotPrimePower
from .exact_arith import is_squarefree, prime_power_base, primes_upto, rad
from .lattice import hnf_modular, kernel_basis
from .matrix import Mat, mat_pow_mod, triangular_adjugate


class FiniteRing:
    def __init__(self, invariants, table, one):
        self.d = tuple(int(x) for x in invariants)
        self.m = len(self.d)
        self.table = tuple(tuple(tuple(int(v) % dk for v, dk in zip(c, self.d)) for c in row)
                           for row in table)
        self.one = tuple(int(v) % dk for v, dk in zip(one, self.d))

    def __repr__(self):
        return f"FiniteRing(d={list(self.d)})"

    @property
    def order(self) -> int:
        return prod(self.d)

    def reduce(self, x):
        return tuple(int(v) % dk for v, dk in zip(x, self.d))

    def basis_vector(self, i):
        return tuple(int(i == j) for j in range(self.m))

    def add(self, x, y):
        return self.reduce(a + b for a, b in zip(x, y))

    def mul(self, x, y):
        out = [0] * self.m
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                c = xi * yj
                if c:
                    for k, t in enumerate(self.table[i][j]):
                        out[k] += c * t
        return self.reduce(out)

    def power(self, x, e: int):
        result, base = self.one, self.reduce(x)
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def is_zero(self, x):
        return not any(self.reduce(x))

    def elements(self):
        """All elements; only for small rings (tests)."""
        from itertools import product as cartesian
        return cartesian(*(range(dk) for dk in self.d))

    def exponent(self) -> int:
        # with an invariant chain the largest invariant is the exponent
        return max(self.d, default=1)

    def quotient_by_integer(self, c: int) -> tuple["FiniteRing", list[int]]:
        """A/cA together with the coordinates of A that survive."""
        g = [gcd(dk, c) for dk in self.d]
        keep = [i for i in range(self.m) if g[i] > 1]
        table = [[[self.table[i][j][k] for k in keep] for j in keep] for i in keep]
        B = FiniteRing([g[i] for i in keep], table, [self.one[k] for k in keep])
        return B, keep


@dataclass(frozen=True, eq=False)
class RingIdeal:
    ring: FiniteRing
    lattice: Mat  # HNF, full rank, contains diag(d)

    def __eq__(self, other):
        return isinstance(other, RingIdeal) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def generators(self):
        """Nonzero residues of the lattice columns."""
        gens = (self.ring.reduce(c) for c in self.lattice.cols())
        return [g for g in gens if any(g)]

    def is_zero(self) -> bool:
        return not self.generators()

    def size(self) -> int:
        return self.ring.order // abs(self.lattice.det())

    def contains(self, x) -> bool:
        coords = self.lattice.inverse().apply(list(x))
        return all(c.denominator == 1 for c in coords)

    def __repr__(self):
        return f"RingIdeal(gens={self.generators()})"


def _relations(A: FiniteRing) -> Mat:
    return Mat.diag(list(A.d))


def ideal_from_lattice_gens(A: FiniteRing, gens: Mat) -> RingIdeal:
    """Subgroup generated by the columns of gens (plus the relations)."""
    if A.m == 0:
        return RingIdeal(A, Mat.zeros(0, 0))
    return RingIdeal(A, hnf_modular(gens, A.exponent()))


def ideal_generated(A: FiniteRing, elements) -> RingIdeal:
    """The ideal generated by the given elements (closed under A-multiplication)."""
    cols = []
    for x in elements:
        for j in range(A.m):
            cols.append(list(A.mul(x, A.basis_vector(j))))
    if not cols:
        return zero_ideal(A)
    return ideal_from_lattice_gens(A, Mat.from_cols(cols, A.m))


def zero_ideal(A: FiniteRing) -> RingIdeal:
    return ideal_from_lattice_gens(A, Mat.zeros(A.m, 0))


def unit_ideal(A: FiniteRing) -> RingIdeal:
    return ideal_from_lattice_gens(A, Mat.identity(A.m))


def _scaled_dual(H: Mat, D: int) -> Mat:
    """D * H^-T for an HNF lattice H containing D*Z^n (an integer matrix)."""
    adj, h = triangular_adjugate(H)
    return Mat([[D * v // h for v in r] for r in adj.T.rows], H.nrows, H.nrows)


def _intersect_lattices(L1: Mat, L2: Mat, D: int) -> Mat:
    """Intersection of two lattices that both contain D*Z^n, by duality:
    the dual of an intersection is the sum of the duals."""
    S = hnf_modular(_scaled_dual(L1, D).hstack(_scaled_dual(L2, D)), D)
    return hnf_modular(_scaled_dual(S, D), D)


def ideal_intersection(I: RingIdeal, J: RingIdeal) -> RingIdeal:
    return RingIdeal(I.ring, _intersect_lattices(I.lattice, J.lattice, I.ring.exponent()))


def _preimage_from_quotient(A: FiniteRing, keep: list[int], L_B: Mat) -> Mat:
    """Lattice of A mapping into the ideal L_B of A/cA (coordinates ``keep``)."""
    cols = []
    for col in L_B.cols():
        v = [0] * A.m
        for pos, i in enumerate(keep):
            v[i] = col[pos]
        cols.append(v)
    kept = set(keep)
    for i in range(A.m):
        if i not in kept:
            cols.append([int(i == j) for j in range(A.m)])
    return hnf_modular(Mat.from_cols(cols, A.m), A.exponent())


# -- validation --------------------------------------------------------------

def _check_axioms(A: FiniteRing):
    m, d, T = A.m, A.d, A.table
    for i in range(m):
        for j in range(m):
            for k in range(m):
                if (d[i] * T[i][j][k]) % d[k]:
                    raise Invalid("multiplication does not respect the additive relations",
                                  witness={"i": i, "j": j, "k": k})
    for i in range(m):
        for j in range(i + 1, m):
            if T[i][j] != T[j][i]:
                raise Invalid("multiplication is not commutative", witness={"i": i, "j": j})
    for j in range(m):
        if A.mul(A.one, A.basis_vector(j)) != A.basis_vector(j):
            raise Invalid("identity vector is not a unit element", witness={"j": j})
    for i in range(m):
        for j in range(m):
            for k in range(m):
                left = A.mul(T[i][j], A.basis_vector(k))
                right = A.mul(A.basis_vector(i), T[j][k])
                if left != right:
                    raise Invalid("multiplication is not associative",
                                  witness={"i": i, "j": j, "k": k})


def validate_finite_ring(moduli, table, one) -> FiniteRing:
    """Check a ring given on prod Z/moduli_i and move it to invariant-factor form."""
    moduli = [int(x) for x in moduli]
    m = len(moduli)
    if len(one) != m or len(table) != m or any(len(r) != m for r in table) \
            or any(len(c) != m for r in table for c in r):
        raise Invalid("table shape does not match the number of generators")
    if any(x <= 0 for x in moduli):
        raise Invalid("moduli must be positive (the ring must be finite)", witness={"moduli": moduli})
    raw = FiniteRing(moduli, table, one)
    _check_axioms(raw)
    dec = structure_decompose(FgGroup.cyclic(*moduli))
    new_d = list(dec.moduli)
    k = len(new_d)
    to_p, from_p = dec.to_parts.phi, dec.from_parts.phi
    basis = [raw.reduce(from_p.col(a)) for a in range(k)]
    new_table = [[to_p.apply(list(raw.mul(basis[a], basis[b]))) for b in range(k)]
                 for a in range(k)]
    new_one = to_p.apply(list(raw.one))
    A = FiniteRing(new_d, new_table, new_one)
    _check_axioms(A)
    return A


# -- nilradicals -------------------------------------------------------------

def _frobenius_matrix(B: FiniteRing, p: int) -> Mat:
    cols = [list(B.power(B.basis_vector(i), p)) for i in range(B.m)]
    return Mat.from_cols(cols, B.m)


def _kernel_mod(M: Mat, c: int) -> Mat:
    """Lattice {x in Z^k : M x = 0 mod c} (contains c Z^k).

    It is c times the dual of the lattice spanned by the rows of M and c*Z^k.
    """
    H = hnf_modular(M.T, c)
    return hnf_modular(_scaled_dual(H, c), c)


def _nil_lattice_prime(B: FiniteRing, p: int) -> Mat:
    """nil(B) for an F_p-algebra B as a lattice containing p Z^k."""
    k = B.m
    t = 0
    while p ** t < k:
        t += 1
    F = _frobenius_matrix(B, p)
    Ft = mat_pow_mod(F, t, p) if t else Mat.identity(k)
    return _kernel_mod(Ft, p)


def nilradical_prime_power(A: FiniteRing) -> RingIdeal:
    N = A.order
    if N == 1:
        return unit_ideal(A)
    p = prime_power_base(N)
    if p is None:
        raise NotPrimePower(f"#A = {N} is not a prime power")
    B, keep = A.quotient_by_integer(p)
    return RingIdeal(A, _preimage_from_quotient(A, keep, _nil_lattice_prime(B, p)))


def _trace_form(B: FiniteRing) -> Mat:
    k = B.m

    def tr(x):
        return sum(B.mul(x, B.basis_vector(j))[j] for j in range(k))

    return Mat([[tr(B.table[i][j]) for j in range(k)] for i in range(k)], k, k)


def _trace_radical_lattice(B: FiniteRing, c: int) -> Mat:
    if any(dk != c for dk in B.d):
        raise Invalid("ring is not free over Z/cZ", witness={"invariants": list(B.d), "c": c})
    return _kernel_mod(_trace_form(B), c)


def trace_radical(B: FiniteRing, m: int | None = None) -> RingIdeal:
    """Trad(B / (Z/m)) for B free over Z/m."""
    if m is None:
        m = B.exponent()
    if B.m == 0:
        return unit_ideal(B)
    return RingIdeal(B, _trace_radical_lattice(B, m))


def nilradical_given_rad(A: FiniteRing, r: int | None = None) -> RingIdeal:
    """nil(A) from r = rad(#A) with no further factoring."""
    N = A.order
    if r is None:
        r = rad(N)
    if N == 1:
        return unit_ideal(A)
    e = A.exponent()
    if r <= 0 or e % r:
        raise BadRadical(f"{r} does not divide the exponent {e}")
    if pow(r, e.bit_length(), e) != 0:
        raise BadRadical(f"{r} misses a prime factor of the exponent {e}")
    l = N.bit_length() - 1
    size_mod_r = prod(gcd(dk, r) for dk in A.d)
    basis = refine([r, size_mod_r] + list(primes_upto(l)))
    lattice = None
    for c in basis:
        if size_mod_r % c:
            continue
        B, keep = A.quotient_by_integer(c)
        if c <= l:
            part = _nil_lattice_prime(B, c)
        else:
            part = _trace_radical_lattice(B, c)
        pre = _preimage_from_quotient(A, keep, part)
        lattice = pre if lattice is None else _intersect_lattices(lattice, pre, A.exponent())
    return RingIdeal(A, lattice)


def is_local(A: FiniteRing):
    """``(True, maximal ideal)`` or ``(False, None)``."""
    N = A.order
    p = prime_power_base(N) if N > 1 else None
    if p is None:
        return False, None
    nil = nilradical_prime_power(A)
    # A/nil = B/nil(B) with B = A/pA; it is a field iff the fixed space of
    # Frobenius on it is one-dimensional.
    B, _ = A.quotient_by_integer(p)
    NB = _nil_lattice_prime(B, p)
    M = _frobenius_matrix(B, p) - Mat.identity(B.m)
    kappa = kernel_basis(M.hstack(-NB))  # x with (F - 1) x in nil(B)
    W = hnf_modular(kappa.take_rows(range(B.m)), p)
    if abs(NB.det()) // abs(W.det()) == p:
        return True, nil
    return False, None


def is_reduced(A: FiniteRing, oracle=None) -> bool:
    """nil(A) = 0, via a square-free test on exp(A) (the hard step)."""
    if A.order == 1:
        return True
    d = A.exponent()
    if not is_squarefree(d, oracle):
        return False
    return nilradical_given_rad(A, d).is_zero()


is_reduced_given_squarefree_test = is_reduced


def brute_force_nilradical(A: FiniteRing) -> set:
    """{x : x^#A = 0} by enumeration (test oracle for small rings)."""
    N = A.order
    return {x for x in A.elements() if A.is_zero(A.power(x, N))}


# -- constructors ------------------------------------------------------------

def integers_mod(n: int) -> FiniteRing:
    return validate_finite_ring([n], [[[1]]], [1])


def polynomial_quotient_ring(n: int, coeffs) -> FiniteRing:
    """(Z/n)[x]/(f) for monic f given low-to-high."""
    f = [int(c) for c in coeffs]
    k = len(f) - 1
    powers = []
    cur = [1] + [0] * (k - 1)
    for _ in range(2 * k - 1):
        powers.append([v % n for v in cur])
        top = cur[-1]
        cur = [0] + cur[:-1]
        cur = [c - top * f[i] for i, c in enumerate(cur)]
    table = [[powers[i + j] for j in range(k)] for i in range(k)]
    return validate_finite_ring([n] * k, table, [1] + [0] * (k - 1))


def product_ring(A: FiniteRing, B: FiniteRing) -> FiniteRing:
    m, k = A.m, B.m
    table = []
    for i in range(m + k):
        row = []
        for j in range(m + k):
            if i < m and j < m:
                row.append(list(A.table[i][j]) + [0] * k)
            elif i >= m and j >= m:
                row.append([0] * m + list(B.table[i - m][j - m]))
            else:
                row.append([0] * (m + k))
        table.append(row)
    return validate_finite_ring(list(A.d) + list(B.d), table, list(A.one) + list(B.one))
