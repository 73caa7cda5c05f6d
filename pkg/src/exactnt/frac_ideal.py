"""Fractional ideals of an order, blowups, and coprime bases of ideals.

An ideal is a full-rank lattice ``basis / den`` in the coordinates of its
order, with ``basis`` in upper-triangular column Hermite form and ``den``
as small as possible.  Overorders produced by blowups come back as an
:class:`Extension`, which keeps the new multiplication table together with
the matrix that rewrites coordinates of the old order in the new one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import NotFullRank
from .lattice import hnf_modular, hnf_of_span, kernel_basis
from .matrix import Mat, common_denominator, content, triangular_adjugate
from .order_ring import KElement, Order, discriminant, minimal_polynomial


@dataclass(frozen=True, eq=False)
class FracIdeal:
    order: Order
    basis: Mat
    den: int

    def __eq__(self, other):
        return (isinstance(other, FracIdeal) and self.order is other.order
                and self.den == other.den and self.basis == other.basis)

    def __hash__(self):
        return hash((self.den, self.basis))

    def __repr__(self):
        return f"FracIdeal({self.basis.rows}/{self.den})"

    @property
    def n(self):
        return self.order.n

    def is_integral(self):
        return self.den == 1

    def contains(self, x: KElement) -> bool:
        """Whether x (an element of the fraction field) lies in the ideal."""
        # x = num/xden in I = B Z^n / den  <=>  den * B^{-1} num / xden integral
        coords = self.basis.inverse().apply([Fraction(v * self.den, x.den) for v in x.num])
        return all(c.denominator == 1 for c in coords)

    def gens(self):
        return [KElement.make(self.order, c, self.den) for c in self.basis.cols()]


def _module_closure(R: Order, gens: Mat) -> Mat:
    """Hermite basis of the R-module spanned by the columns of gens."""
    n = R.n
    cols = []
    for b in gens.cols():
        if any(b):
            for j in range(n):
                cols.append(R.mul(b, R.basis_vector(j)))
    if not cols:
        raise NotFullRank("generated module is zero")
    try:
        return hnf_of_span(Mat.from_cols(cols, n))
    except ValueError:
        raise NotFullRank("generated module is not of full rank") from None


def _normalized(R: Order, H: Mat, den: int) -> FracIdeal:
    g = gcd(den, content(v for r in H.rows for v in r))
    if g > 1:
        H = Mat([[v // g for v in r] for r in H.rows], R.n, R.n)
        den //= g
    return FracIdeal(R, H, den)


def ideal_normalize(R: Order, gens: Mat, den: int = 1) -> FracIdeal:
    """Canonical form of the R-module generated by the columns of gens / den."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    return _normalized(R, _module_closure(R, gens), den)


def _module_normalize(R: Order, gens: Mat, den: int, multiple: int = 0) -> FracIdeal:
    """Like :func:`ideal_normalize` for columns already spanning an R-module.

    ``multiple``, if nonzero, is an integer m with m*Z^n inside the span;
    the Hermite form is then computed modulo m directly.
    """
    if multiple:
        return _normalized(R, hnf_modular(gens, multiple), den)
    try:
        H = hnf_of_span(gens)
    except ValueError:
        raise NotFullRank("module is not of full rank") from None
    return _normalized(R, H, den)


def _diag_product(H: Mat) -> int:
    out = 1
    for i in range(H.nrows):
        out *= H.rows[i][i]
    return abs(out)


def _from_fraction_matrix(R: Order, M: Mat) -> FracIdeal:
    d = common_denominator(M)
    return ideal_normalize(R, (M * d).to_int(), d)


def unit_ideal(R: Order) -> FracIdeal:
    return ideal_normalize(R, Mat.identity(R.n), 1)


def principal_ideal(x: KElement) -> FracIdeal:
    R = x.order
    if x.is_zero():
        raise NotFullRank("the zero ideal is not a fractional ideal")
    return ideal_normalize(R, R.mult_matrix_int(list(x.num)), x.den)


def ideal_from_elements(R: Order, elements) -> FracIdeal:
    d = 1
    for x in elements:
        d = lcm(d, x.den)
    cols = [[v * (d // x.den) for v in x.num] for x in elements]
    return ideal_normalize(R, Mat.from_cols(cols, R.n), d)


def _scaled(I: FracIdeal, D: int) -> Mat:
    return I.basis * (D // I.den)


def ideal_sum(I: FracIdeal, J: FracIdeal) -> FracIdeal:
    D = lcm(I.den, J.den)
    m = gcd(_diag_product(I.basis) * (D // I.den), _diag_product(J.basis) * (D // J.den))
    return _module_normalize(I.order, _scaled(I, D).hstack(_scaled(J, D)), D, m)


def ideal_product(I: FracIdeal, J: FracIdeal) -> FracIdeal:
    R = I.order
    cols = [R.mul(a, b) for a in I.basis.cols() for b in J.basis.cols()]
    # I*J contains det(B_I) det(B_J) R
    m = _diag_product(I.basis) * _diag_product(J.basis)
    return _module_normalize(R, Mat.from_cols(cols, R.n), I.den * J.den, m)


def ideal_intersect(I: FracIdeal, J: FracIdeal) -> FracIdeal:
    """Intersection through the kernel of (u, v) -> B_I u - B_J v."""
    D = lcm(I.den, J.den)
    A, B = _scaled(I, D), _scaled(J, D)
    kappa = kernel_basis(A.hstack(-B))
    gens = A * kappa.take_rows(range(I.n))
    m = lcm(_diag_product(I.basis) * (D // I.den), _diag_product(J.basis) * (D // J.den))
    return _module_normalize(I.order, gens, D, m)


def ideal_quotient(I: FracIdeal, J: FracIdeal) -> FracIdeal:
    """I:J = {x : xJ in I}.

    Writing the constraints as ``C x`` integral for a rational matrix C
    (one block per basis element of J), the solution set is the lattice dual
    to the row span of C.
    """
    R = I.order
    adj, h = triangular_adjugate(I.basis)
    # C = I.den * adj * M(j) / (J.den * h) for each basis element j of J
    blocks = [adj * R.mult_matrix_int(j) * I.den for j in J.basis.cols()]
    rows = blocks[0].vstack(*blocks[1:])
    D = J.den * h
    # det(B_J) * 1 lies in J's lattice and rows of adj span h Z^n, so the
    # row lattice contains det(B_J) * I.den * h * Z^n
    H = hnf_modular(rows.T, _diag_product(J.basis) * I.den * h)
    # solutions: H^T x in D Z^n, i.e. x in D H^-T Z^n
    adjH, hH = triangular_adjugate(H)
    # adj(H)^T D H^T = D det(H) I, so the span contains D det(H) Z^n
    return _module_normalize(R, adjH.T * D, hH, D * hH)


def ideal_arith(op: str, I: FracIdeal, J: FracIdeal) -> FracIdeal:
    ops = {"sum": ideal_sum, "product": ideal_product,
           "quotient": ideal_quotient, "intersect": ideal_intersect}
    if op not in ops:
        raise ValueError(f"unknown ideal operation {op!r}")
    if I.order is not J.order:
        raise ValueError("ideals live over different orders")
    return ops[op](I, J)


def ideal_power(I: FracIdeal, k: int) -> FracIdeal:
    if k < 0:
        return ideal_power(ideal_quotient(unit_ideal(I.order), I), -k)
    result = unit_ideal(I.order)
    base = I
    while k:
        if k & 1:
            result = ideal_product(result, base)
        k >>= 1
        if k:
            base = ideal_product(base, base)
    return result


def ideal_norm_index(I: FracIdeal) -> Fraction:
    """det(basis)/den^n; equals #(R/I) for integral I."""
    return Fraction(abs(I.basis.det()), I.den ** I.n)


def is_invertible(I: FracIdeal) -> bool:
    R = I.order
    inv = ideal_quotient(unit_ideal(R), I)
    return ideal_quotient(inv, inv) == unit_ideal(R)


# -- overorders --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Extension:
    """An order S containing R; column j of ``embedding`` is e_j of R in
    S-coordinates."""
    base: Order
    order: Order
    embedding: Mat

    @classmethod
    def trivial(cls, R: Order):
        return cls(R, R, Mat.identity(R.n))

    def map_element(self, x: KElement) -> KElement:
        return KElement.make(self.order, self.embedding.apply(list(x.num)), x.den)

    def map_ideal(self, I: FracIdeal) -> FracIdeal:
        return ideal_normalize(self.order, self.embedding * I.basis, I.den)

    def then(self, other: "Extension") -> "Extension":
        """R -> S (self) followed by S -> T (other)."""
        return Extension(self.base, other.order, other.embedding * self.embedding)

    def lattice(self) -> FracIdeal:
        """S as a fractional ideal of R (an R-module containing R)."""
        return _from_fraction_matrix(self.base, self.embedding.inverse())

    def index(self) -> int:
        """[S : R]."""
        return abs(self.embedding.det())

    def is_trivial(self) -> bool:
        return self.index() == 1


def order_from_lattice(L: FracIdeal) -> Extension:
    """Turn a fractional ideal that is a ring containing R into an order."""
    R = L.order
    n = R.n
    H, d = L.basis, L.den
    adj, h = triangular_adjugate(H)

    def coords(vec, scale, div):
        out = []
        for v in adj.apply([x * scale for x in vec]):
            q, r = divmod(v, div)
            if r:
                return None
            out.append(q)
        return out

    cols = H.cols()
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            c = coords(R.mul(cols[i], cols[j]), 1, h * d)
            if c is None:
                raise ValueError("lattice is not closed under multiplication")
            row.append(c)
        table.append(row)
    one = coords(R.one, d, h)
    if one is None:
        raise ValueError("lattice does not contain 1")
    # a multiplicatively closed lattice of the algebra inherits the ring axioms
    S = Order(n, one, table, R.status)
    emb_cols = [coords(R.basis_vector(j), d, h) for j in range(n)]
    if any(c is None for c in emb_cols):
        raise ValueError("lattice does not contain the order")
    emb = Mat.from_cols(emb_cols, n)
    ext = Extension(R, S, emb)
    # index law: disc(R) = [S:R]^2 disc(S)
    assert discriminant(R) == ext.index() ** 2 * discriminant(S)
    return ext


def blowup(I: FracIdeal) -> Extension:
    """Bl(I) = I^(n-1) : I^(n-1) as an order over I's order."""
    n = I.n
    P = ideal_power(I, max(n - 1, 1))
    return order_from_lattice(ideal_quotient(P, P))


def _is_rational(x: KElement) -> bool:
    one = x.order.one
    # x * den must be a rational multiple of the identity vector
    k = next(i for i, v in enumerate(one) if v)
    return all(v * one[k] == x.num[k] * o for v, o in zip(x.num, one))


def blowup_pair(R: Order, alpha: KElement, beta: KElement) -> Extension:
    """Bl(alpha R + beta R) = R + p_1 R + ... + p_{k-1} R with gamma = alpha/beta
    and p_j = a_k gamma^j + ... + a_{k-j} from gamma's minimal polynomial."""
    if alpha.is_zero() or beta.is_zero():
        raise ValueError("generators must be nonzero")
    gamma = alpha / beta
    if _is_rational(gamma):
        return Extension.trivial(R)
    f = minimal_polynomial(gamma)
    k = len(f) - 1
    elems = [R.int_element(1)]
    for j in range(1, k):
        p = R.int_element(0)
        for i in range(j + 1):
            p = p + gamma ** (j - i) * f[k - i]
        elems.append(p)
    gens = [x * R.element(R.basis_vector(i)) for x in elems for i in range(R.n)]
    L = ideal_from_elements(R, gens)
    return order_from_lattice(L)


# -- coprime bases of ideals -------------------------------------------------

@dataclass(frozen=True, eq=False)
class IdealCoprimeBasis:
    extension: Extension  # R -> S
    basis: list
    expo: list

    @property
    def order(self):
        return self.extension.order


def _ideal_valuation(I: FracIdeal, c: FracIdeal, c_inv: FracIdeal) -> tuple[int, FracIdeal]:
    e = 0
    while ideal_sum(I, c) == c:
        I = ideal_product(I, c_inv)
        e += 1
    return e, I


def ideal_coprime_basis(R: Order, X) -> IdealCoprimeBasis:
    """Smallest overorder S over which S*X has a coprime basis, and that basis."""
    ext = Extension.trivial(R)
    X = list(X)
    for I in X:
        if I.order is not R or not I.is_integral():
            raise ValueError("inputs must be integral ideals of R")

    def grow(J: FracIdeal):
        nonlocal ext
        step = blowup(J)
        if not step.is_trivial():
            ext = ext.then(step)
            return step
        return None

    def over_S(I: FracIdeal) -> FracIdeal:
        return ext.map_ideal(I)

    labels: dict[int, FracIdeal] = {}
    adj: dict[int, set] = {}
    unit = None
    for I in X:
        grow(over_S(I))
    unit = unit_ideal(ext.order)
    next_id = 0
    for I in X:
        J = over_S(I)
        if J == unit:
            continue
        labels[next_id] = J
        adj[next_id] = set()
        next_id += 1
    for a in labels:
        for b in labels:
            if a < b:
                adj[a].add(b)
                adj[b].add(a)

    def remove(v):
        for w in adj.pop(v):
            adj[w].discard(v)
        del labels[v]

    while True:
        best = None
        for a, nb in adj.items():
            for b in nb:
                if a < b:
                    key = (-ideal_norm_index(labels[a]) * ideal_norm_index(labels[b]), a, b)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, a, b = best
        adj[a].discard(b)
        adj[b].discard(a)
        c = ideal_sum(labels[a], labels[b])
        step = grow(c)
        if step is not None:
            for v in list(labels):
                labels[v] = step.map_ideal(labels[v])
            c = step.map_ideal(c)
            unit = unit_ideal(ext.order)
            for v in [v for v in labels if labels[v] == unit]:
                remove(v)
        if c == unit:
            continue
        c_inv = ideal_quotient(unit, c)
        vc = next_id
        next_id += 1
        common = (adj.get(a, set()) & adj.get(b, set()))
        labels[vc] = c
        adj[vc] = set()
        for v in common | {a, b}:
            if v in labels and v != vc:
                adj[vc].add(v)
                adj[v].add(vc)
        for v in (a, b):
            if v in labels:
                labels[v] = ideal_product(labels[v], c_inv)
        for v in (a, b, vc):
            if v in labels and labels[v] == unit:
                remove(v)

    basis = [labels[v] for v in sorted(labels)]
    inverses = [ideal_quotient(unit, c) for c in basis]
    expo = []
    for I in X:
        J = over_S(I)
        row = []
        for c, ci in zip(basis, inverses):
            e, J = _ideal_valuation(J, c, ci)
            row.append(e)
        assert J == unit, "input is not a product of the basis ideals"
        expo.append(row)
    return IdealCoprimeBasis(ext, basis, expo)
