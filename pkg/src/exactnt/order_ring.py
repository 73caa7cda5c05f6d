"""Orders of number fields given by multiplication tables.

An order of rank n is stored as the coordinates of 1 and an n x n x n
table with ``e_i * e_j = sum_k table[i][j][k] e_k``.  Elements of the
fraction field are integer coordinate vectors over a common positive
denominator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import Invalid, NoPrimitiveFound
from .exact_arith import primes_upto
from .lattice import kernel_basis
from .matrix import Mat, common_denominator, content
from . import polynomial as poly

DOMAIN_UNVERIFIED = "domain_unverified"
DOMAIN_CERTIFIED = "domain_certified"


class Order:
    """A validated order; build with :func:`validate_order`."""

    def __init__(self, n: int, one, table, status: str = DOMAIN_UNVERIFIED):
        self.n = n
        self.one = tuple(one)
        self.table = tuple(tuple(tuple(c) for c in row) for row in table)
        self.status = status
        self._primitive = None

    def __repr__(self):
        return f"Order(n={self.n}, one={list(self.one)})"

    # integer-coordinate arithmetic

    def mul(self, x, y):
        n = self.n
        out = [0] * n
        T = self.table
        for i in range(n):
            xi = x[i]
            if not xi:
                continue
            for j in range(n):
                c = xi * y[j]
                if c:
                    tij = T[i][j]
                    for k in range(n):
                        if tij[k]:
                            out[k] += c * tij[k]
        return out

    def basis_vector(self, i):
        return [int(i == j) for j in range(self.n)]

    def mult_matrix_int(self, x) -> Mat:
        """Matrix of y -> x*y on integer coordinates (x integral)."""
        n = self.n
        cols = [self.mul(x, self.basis_vector(j)) for j in range(n)]
        return Mat.from_cols(cols, n)

    def element(self, num, den=1) -> "KElement":
        return KElement.make(self, num, den)

    def int_element(self, k: int) -> "KElement":
        return KElement.make(self, [k * c for c in self.one], 1)

    @property
    def trace_vector(self):
        """Tr(e_k) for each basis element."""
        return [self.mult_matrix_int(self.basis_vector(k)).trace() for k in range(self.n)]

    def trace_gram(self) -> Mat:
        tv = self.trace_vector
        n = self.n
        return Mat([[sum(self.table[i][j][k] * tv[k] for k in range(n)) for j in range(n)]
                    for i in range(n)], n, n)


@dataclass(frozen=True, eq=False)
class KElement:
    order: Order
    num: tuple
    den: int

    @classmethod
    def make(cls, order, num, den=1):
        num = [int(v) for v in num]
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = [-v for v in num], -den
        g = gcd(den, content(num))
        if g > 1:
            num, den = [v // g for v in num], den // g
        return cls(order, tuple(num), den)

    @classmethod
    def from_fractions(cls, order, coords):
        coords = [Fraction(c) for c in coords]
        d = 1
        for c in coords:
            d = lcm(d, c.denominator)
        return cls.make(order, [int(c * d) for c in coords], d)

    def coords(self):
        return [Fraction(v, self.den) for v in self.num]

    def is_zero(self):
        return not any(self.num)

    def __mul__(self, other):
        if isinstance(other, int):
            return KElement.make(self.order, [v * other for v in self.num], self.den)
        return KElement.make(self.order, self.order.mul(self.num, other.num), self.den * other.den)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, int):
            other = self.order.int_element(other)
        d = lcm(self.den, other.den)
        a, b = d // self.den, d // other.den
        return KElement.make(self.order, [a * x + b * y for x, y in zip(self.num, other.num)], d)

    __radd__ = __add__

    def __neg__(self):
        return KElement.make(self.order, [-v for v in self.num], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __eq__(self, other):
        return isinstance(other, KElement) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        M = mult_matrix(self)
        inv = M.inverse()
        return KElement.from_fractions(self.order, inv.apply(list(Fraction(c) for c in self.order.one)))

    def __truediv__(self, other):
        if isinstance(other, int):
            return KElement.make(self.order, self.num, self.den * other)
        return self * other.inverse()

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = self.order.int_element(1)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self):
        return f"KElement({list(self.num)}/{self.den})"


def validate_order(n: int, one, table) -> Order:
    """Check ring axioms on basis elements and that the discriminant is nonzero."""
    one = [int(v) for v in one]
    if len(one) != n or len(table) != n or any(len(r) != n for r in table) \
            or any(len(c) != n for r in table for c in r):
        raise Invalid("table shape does not match rank", witness={"n": n})
    T = [[[int(v) for v in c] for c in r] for r in table]
    R = Order(n, one, T)
    for i in range(n):
        for j in range(i + 1, n):
            if T[i][j] != T[j][i]:
                raise Invalid("multiplication is not commutative", witness={"i": i, "j": j})
    for j in range(n):
        if R.mul(one, R.basis_vector(j)) != R.basis_vector(j):
            raise Invalid("identity vector is not a unit element", witness={"j": j})
    for i in range(n):
        for j in range(n):
            eij = T[i][j]
            for k in range(n):
                left = R.mul(eij, R.basis_vector(k))
                right = R.mul(R.basis_vector(i), T[j][k])
                if left != right:
                    raise Invalid("multiplication is not associative",
                                  witness={"i": i, "j": j, "k": k})
    if discriminant(R) == 0:
        raise Invalid("discriminant is zero: the algebra is not reduced")
    if n == 1:
        R.status = DOMAIN_CERTIFIED
    return R


def order_from_monic(coeffs) -> Order:
    """The order Z[X]/(f) for monic integer f given low-to-high."""
    f = [int(c) for c in coeffs]
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        raise ValueError("need a monic polynomial of degree >= 1")
    powers = []
    cur = [1] + [0] * (n - 1)
    for _ in range(2 * n - 1):
        powers.append(cur)
        # multiply by X and reduce with X^n = -(f_0 + ... + f_{n-1} X^{n-1})
        top = cur[-1]
        cur = [0] + cur[:-1]
        cur = [c - top * f[k] for k, c in enumerate(cur)]
    table = [[powers[i + j] for j in range(n)] for i in range(n)]
    return validate_order(n, [1] + [0] * (n - 1), table)


def quadratic_order(d: int, f: int = 1) -> Order:
    """Z[f*sqrt(d)] with basis (1, f*sqrt(d))."""
    return order_from_monic([-d * f * f, 0, 1])


def mult_matrix(x: KElement) -> Mat:
    R = x.order
    M = R.mult_matrix_int(list(x.num))
    if x.den == 1:
        return M
    return Mat([[Fraction(v, x.den) for v in r] for r in M.rows], R.n, R.n)


def trace(x: KElement) -> Fraction:
    return Fraction(mult_matrix(x).trace())


def norm(x: KElement) -> Fraction:
    return Fraction(mult_matrix(x).det())


def char_poly(x: KElement) -> list:
    """Characteristic polynomial, low-to-high, monic (Faddeev-LeVerrier)."""
    M = mult_matrix(x)
    n = M.nrows
    Mf = Mat([[Fraction(v) for v in r] for r in M.rows], n, n)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = Mat.zeros(n, n)
    I = Mat.identity(n)
    for k in range(1, n + 1):
        Mk = Mf * (Mk + I * coeffs[n - k + 1])
        coeffs[n - k] = -Mk.trace() / k
    return coeffs


def discriminant(R: Order) -> int:
    return R.trace_gram().det()


def minimal_polynomial(x: KElement) -> list[int]:
    """Primitive integer minimal polynomial (low-to-high, positive leading)."""
    R = x.order
    num = list(x.num)
    powers = [list(R.one)]
    while True:
        powers.append(R.mul(powers[-1], num))
        kappa = kernel_basis(Mat.from_cols(powers, R.n))
        if kappa.ncols:
            c = kappa.col(0)
            break
    # relation among num^k; substitute num = den * x
    f = [ck * x.den ** k for k, ck in enumerate(c)]
    g = content(f)
    f = [v // g for v in f]
    if f[-1] < 0:
        f = [-v for v in f]
    return f


def _certify_irreducible(f: list[int], tries: int = 60) -> bool:
    """Irreducible over Q if irreducible modulo some good prime."""
    n = len(f) - 1
    if n <= 1:
        return True
    disc_ok = 0
    for p in primes_upto(2000):
        if f[-1] % p == 0:
            continue
        fp = poly.to_monic_mod(f, p)
        if not poly.is_squarefree_mod(fp, p):
            continue
        if poly.is_irreducible_mod(fp, p):
            return True
        disc_ok += 1
        if disc_ok >= tries:
            break
    return False


def _candidates(n, bound):
    yield from ([int(i == j) for j in range(n)] for i in range(n))
    import itertools
    for b in range(1, bound + 1):
        for c in itertools.product(range(-b, b + 1), repeat=n):
            if max(abs(v) for v in c) == b:
                yield list(c)


def primitive_element(R: Order, bound: int = 3):
    """Return ``(x, minpoly)`` with x generating Q (x) R as an algebra.

    Tries basis elements, then integer combinations with coefficients up to
    ``bound``.  If the minimal polynomial is shown irreducible (via an
    irreducible reduction modulo a prime) the order is marked
    domain_certified.
    """
    if R._primitive is not None:
        return R._primitive
    for c in _candidates(R.n, bound):
        x = R.element(c)
        f = minimal_polynomial(x)
        if len(f) - 1 != R.n:
            continue
        if not poly.is_squarefree_q(f):
            continue
        if _certify_irreducible(f):
            R.status = DOMAIN_CERTIFIED
        R._primitive = (x, f)
        return x, f
    raise NoPrimitiveFound(bound)


def reduced_discriminant(R: Order) -> int:
    """Exponent of R-dagger / R, which is isomorphic to coker(trace Gram)."""
    from .abgroup import FgGroup, group_exponent

    T = R.trace_gram()
    e, _ = group_exponent(FgGroup(R.n, T))
    return e


def trace_dual(R: Order):
    from .frac_ideal import ideal_normalize

    Tinv = R.trace_gram().inverse()
    d = common_denominator(Tinv)
    return ideal_normalize(R, (Tinv * d).to_int(), d)


def element_power(x: KElement, k: int) -> KElement:
    return x ** k
