"""Factor refinement: minimal coprime bases of integers and the utilities
that only need a coprime basis (power-product tests, rational
multiplicative relations, the largest common perfect-power root).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import heapq
from math import gcd

from .lattice import kernel_basis
from .matrix import Mat


@dataclass(frozen=True)
class CoprimeBasis:
    elems: tuple
    expo: tuple  # expo[i][j] = exponent of elems[j] in input i

    def reconstruct(self, i: int) -> int:
        out = 1
        for c, e in zip(self.elems, self.expo[i]):
            out *= c ** e
        return out


class _RefinementGraph:
    """Vertex labels plus the set of pairs not yet known to be coprime.

    Edges are picked by largest label product, ties broken by the smaller
    vertex ids; a lazy heap keeps each pick logarithmic.
    """

    def __init__(self, labels):
        self.label = {}
        self.version = {}
        self.adj = {}
        self.heap = []
        self.next_id = 0
        for a in labels:
            self.add(a)
        ids = list(self.label)
        for i in ids:
            for j in ids:
                if i < j:
                    self.connect(i, j)

    def add(self, value):
        vid = self.next_id
        self.next_id += 1
        self.label[vid] = value
        self.version[vid] = 0
        self.adj[vid] = set()
        return vid

    def _push(self, a, b):
        u, v = min(a, b), max(a, b)
        key = -self.label[u] * self.label[v]
        heapq.heappush(self.heap, (key, u, v, self.version[u], self.version[v]))

    def connect(self, a, b):
        self.adj[a].add(b)
        self.adj[b].add(a)
        self._push(a, b)

    def relabel(self, vid, value):
        self.label[vid] = value
        self.version[vid] += 1
        for other in self.adj[vid]:
            self._push(vid, other)

    def remove(self, vid):
        for other in self.adj.pop(vid):
            self.adj[other].discard(vid)
        del self.label[vid]

    def pick_edge(self):
        while self.heap:
            _, u, v, vu, vv = heapq.heappop(self.heap)
            if u in self.label and v in self.adj[u] \
                    and self.version[u] == vu and self.version.get(v) == vv:
                return u, v
        return None


def refine(values) -> list[int]:
    """Run the graph refinement and return the labels left at the end."""
    g = _RefinementGraph([a for a in values if a != 1])
    while True:
        edge = g.pick_edge()
        if edge is None:
            break
        U, V = edge
        g.adj[U].discard(V)
        g.adj[V].discard(U)
        u, v = g.label[U], g.label[V]
        w = gcd(u, v)
        if w != 1:
            W = g.add(w)
            for s in (g.adj[U] & g.adj[V]) | {U, V}:
                g.connect(W, s)
            g.relabel(U, u // w)
            g.relabel(V, v // w)
            for s in (U, V, W):
                if g.label[s] == 1:
                    g.remove(s)
    return sorted(g.label.values())


def valuation(a: int, c: int) -> int:
    """Largest e with c^e | a (c > 1, a != 0)."""
    e = 0
    while a % c == 0:
        a //= c
        e += 1
    return e


def coprime_basis_factor(a) -> CoprimeBasis:
    """Minimal coprime basis of positive integers with exponent matrix.

    >>> cb = coprime_basis_factor([4500, 5400])
    >>> cb.elems, cb.expo
    ((5, 6), ((3, 2), (2, 3)))
    """
    a = [int(x) for x in a]
    if any(x <= 0 for x in a):
        raise ValueError("coprime_basis_factor needs positive integers")
    elems = tuple(refine(a))
    expo = tuple(tuple(valuation(x, c) for c in elems) for x in a)
    cb = CoprimeBasis(elems, expo)
    for i, x in enumerate(a):
        assert cb.reconstruct(i) == x
    return cb


def _signed_exponents(q):
    """Coprime basis of all numerators/denominators and the exponent vector
    of each q_i (numerator exponents minus denominator exponents)."""
    q = [Fraction(x) for x in q]
    if any(x == 0 for x in q):
        raise ValueError("zero has no multiplicative exponents")
    parts = []
    for x in q:
        parts.append(abs(x.numerator))
        parts.append(x.denominator)
    elems = refine(parts)
    vecs = []
    for x in q:
        num, den = abs(x.numerator), x.denominator
        vecs.append([valuation(num, c) - valuation(den, c) for c in elems])
    return q, elems, vecs


def power_product_is_one(q, n) -> bool:
    """Decide whether prod q_i^{n_i} = 1 without forming the product.

    >>> power_product_is_one([2, 4], [10**6, -5 * 10**5])
    True
    """
    if len(q) != len(n):
        raise ValueError("q and n must have the same length")
    q, elems, vecs = _signed_exponents(q)
    if sum(k for x, k in zip(q, n) if x < 0) % 2:
        return False
    return all(sum(v[j] * k for v, k in zip(vecs, n)) == 0 for j in range(len(elems)))


def rational_mult_kernel(q) -> Mat:
    """Columns form a basis of {k : prod q_i^{k_i} = 1}."""
    q, elems, vecs = _signed_exponents(q)
    m = len(q)
    rows = [[v[j] for v in vecs] + [0] for j in range(len(elems))]
    # parity of the number of negative factors: s.k - 2y = 0
    rows.append([1 if x < 0 else 0 for x in q] + [-2])
    kappa = kernel_basis(Mat(rows, len(rows), m + 1))
    basis = kappa.take_rows(range(m))
    for col in basis.cols():
        assert power_product_is_one(q, col)
    return basis


def rex(a) -> int:
    """Product over primes p of p^(gcd of the p-adic valuations of the a_i).

    >>> rex([12, 18]), rex([4, 8]), rex([])
    (6, 2, 1)
    """
    cb = coprime_basis_factor(a)
    out = 1
    for j, c in enumerate(cb.elems):
        g = 0
        for row in cb.expo:
            g = gcd(g, row[j])
        out *= c ** g
    return out
