"""Quadratic lattices, LLL reduction on Gram data, and the integer linear
algebra built from a single weighted LLL call.

The LLL loop is the fraction-free variant: it keeps the integers
``d_i = det(Gram of b_1..b_i)`` and ``lam[i][j] = d_j * mu_ij`` so that the
whole reduction runs on Python ints even when the weight ``omega`` has
hundreds of digits.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import Cancelled, DimensionMismatch, NoSolution, NotPositiveDefinite
from .exact_arith import ext_gcd, multi_gcd_coefficients
from .matrix import Mat, bareiss_det, common_denominator


@dataclass(frozen=True)
class QuadLattice:
    gram: Mat

    def __post_init__(self):
        g = self.gram
        if g.nrows != g.ncols:
            raise DimensionMismatch("Gram matrix must be square")
        for i in range(g.nrows):
            for j in range(i):
                if g[i, j] != g[j, i]:
                    raise ValueError("Gram matrix must be symmetric")

    @property
    def n(self):
        return self.gram.nrows

    @classmethod
    def from_basis(cls, basis: Mat):
        """Lattice spanned by the columns of ``basis`` with the dot product."""
        return cls(basis.T * basis)


@dataclass(frozen=True)
class GramSchmidtData:
    qstar: list
    mu: list


@dataclass(frozen=True)
class RelationInstance:
    """Relation-finding input: ``w`` holds ``t * w_i`` as integer columns."""
    t: int
    w: Mat
    omega: int

    @property
    def s(self):
        return self.w.ncols

    @property
    def n(self):
        return self.w.nrows


def gram_schmidt(L: QuadLattice) -> GramSchmidtData:
    n = L.n
    g = [[Fraction(a) for a in r] for r in L.gram.rows]
    mu = [[Fraction(0)] * n for _ in range(n)]
    qstar = []
    for i in range(n):
        for j in range(i):
            s = g[i][j] - sum(mu[j][k] * mu[i][k] * qstar[k] for k in range(j))
            mu[i][j] = s / qstar[j]
        qi = g[i][i] - sum(mu[i][k] ** 2 * qstar[k] for k in range(i))
        if qi <= 0:
            raise NotPositiveDefinite(f"q(b_{i + 1}*) = {qi} is not positive")
        qstar.append(qi)
    return GramSchmidtData(qstar, mu)


def is_c_reduced(L: QuadLattice, c=2) -> bool:
    c = Fraction(c)
    gs = gram_schmidt(L)
    n = L.n
    if any(abs(gs.mu[i][j]) > Fraction(1, 2) for i in range(n) for j in range(i)):
        return False
    return all(c * gs.qstar[k + 1] >= gs.qstar[k] for k in range(n - 1))


def _check_cancel(token):
    if token is None:
        return
    hit = token() if callable(token) else token.is_set()
    if hit:
        raise Cancelled("lattice reduction cancelled")


def _lll_int(G, c: Fraction, cancel=None):
    """Reduce the integer Gram matrix ``G``; return the list of basis vectors.

    Loop invariant: b_1..b_{k-1} are size-reduced and satisfy the exchange
    condition ``c*q(b_{i+1}*) >= q(b_i*)``; a swap at position k restores it
    for the shorter prefix.
    """
    n = len(G)
    p, q = c.numerator, c.denominator
    H = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return H
    # d[i] for 1-based i, d[0] = 1; lam 1-based as well
    d = [1] + [0] * n
    lam = [[0] * (n + 1) for _ in range(n + 1)]

    def dot_current(k, j):
        # b_k is untouched (k > kmax) so b_k . b_j = (G H_j)[k]
        Gk = G[k - 1]
        return sum(Gk[m] * H[j - 1][m] for m in range(n) if H[j - 1][m])

    def incorporate(k):
        for j in range(1, k + 1):
            u = dot_current(k, j) if j < k else G[k - 1][k - 1]
            for i in range(1, j):
                u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
            if j < k:
                lam[k][j] = u
            else:
                if u <= 0:
                    raise NotPositiveDefinite("Gram matrix is not positive definite")
                d[k] = u

    def red(k, l):
        two_lam = 2 * lam[k][l]
        if abs(two_lam) > d[l]:
            r = (two_lam + d[l]) // (2 * d[l])
            Hk, Hl = H[k - 1], H[l - 1]
            for m in range(n):
                if Hl[m]:
                    Hk[m] -= r * Hl[m]
            lam[k][l] -= r * d[l]
            lk, ll = lam[k], lam[l]
            for i in range(1, l):
                if ll[i]:
                    lk[i] -= r * ll[i]

    def swap(k, kmax):
        H[k - 1], H[k - 2] = H[k - 2], H[k - 1]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 2] * d[k] + lm * lm) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - lm * t) // d[k - 1]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k]
        d[k - 1] = B

    if G[0][0] <= 0:
        raise NotPositiveDefinite("Gram matrix is not positive definite")
    d[1] = G[0][0]
    k, kmax = 2, 1
    while k <= n:
        _check_cancel(cancel)
        if k > kmax:
            kmax = k
            incorporate(k)
        red(k, k - 1)
        if p * d[k] * d[k - 2] < q * d[k - 1] * d[k - 1]:
            swap(k, kmax)
            k = max(2, k - 1)
            continue
        for l in range(k - 2, 0, -1):
            red(k, l)
        k += 1
    return H


def lll_reduce(L: QuadLattice, c=2, cancel=None) -> tuple[Mat, QuadLattice]:
    """Return ``(U, L')`` with ``L'.gram = U^T L.gram U`` c-reduced.

    The columns of U are the reduced basis in the original coordinates.
    ``cancel`` may be a callable or an object with ``is_set()``; it is polled
    once per iteration.
    """
    c = Fraction(c)
    if c <= Fraction(4, 3):
        raise ValueError("LLL needs c > 4/3")
    D = common_denominator(L.gram)
    G = (L.gram * D).to_int().rows
    H = _lll_int(G, c, cancel)
    U = Mat.from_cols(H, L.n)
    return U, QuadLattice(U.T * L.gram * U)


def omega_bound(n: int, B: int) -> int:
    """Weight used by kernel_image: 2^(n-1) n^(n+1) B^(2n) + 1."""
    return 2 ** (n - 1) * n ** (n + 1) * B ** (2 * n) + 1


def kernel_image(phi: Mat) -> tuple[int, Mat, Mat]:
    """Split Z^n into a kernel basis and an image-complement for ``phi``.

    Returns ``(r, kappa, iota)`` with r the rank of phi: the columns of kappa are a basis of
    ker(phi), ``phi * iota`` is a basis of im(phi), and ``(kappa | iota)``
    is unimodular.

    >>> r, kappa, iota = kernel_image(Mat([[1, 2], [2, 4]]))
    >>> r, Mat([[1, 2], [2, 4]]) * kappa
    (1, Mat([[0], [0]], 2, 1))
    """
    m, n = phi.shape
    if n == 0:
        return 0, Mat.zeros(0, 0), Mat.zeros(0, 0)
    B = phi.max_abs()
    omega = omega_bound(n, B)
    prows = phi.rows
    G = []
    for i in range(n):
        row = []
        for j in range(n):
            s = sum(prows[t][i] * prows[t][j] for t in range(m))
            row.append(omega * s + (1 if i == j else 0))
        G.append(row)
    H = _lll_int(G, Fraction(2))
    in_kernel = [all(sum(r[t] * h[t] for t in range(n)) == 0 for r in prows) for h in H]
    r = n - sum(in_kernel)
    # the weighted form puts every kernel vector ahead of the rest
    if any(in_kernel[n - r:]) or not all(in_kernel[:n - r]):
        raise AssertionError("kernel vectors did not come first after reduction")
    kappa = Mat.from_cols(H[:n - r], n)
    iota = Mat.from_cols(H[n - r:], n)
    return r, kappa, iota


def kernel_basis(phi: Mat) -> Mat:
    return kernel_image(phi)[1]


def image_basis(phi: Mat) -> Mat:
    """Basis (as columns) of the subgroup of Z^m spanned by phi's columns."""
    if phi.ncols == 0:
        return Mat.zeros(phi.nrows, 0)
    _, _, iota = kernel_image(phi)
    return phi * iota


def span_basis(gens: Mat, chunk: int | None = None) -> Mat:
    """Basis of the column span, feeding generators in small batches so the
    weighted reductions stay low-dimensional."""
    n, k = gens.shape
    chunk = chunk or max(2, n)
    if k <= n + chunk:
        return image_basis(gens)
    cols = gens.cols()
    basis = image_basis(Mat.from_cols(cols[:n + chunk], n))
    for start in range(n + chunk, k, chunk):
        block = Mat.from_cols(basis.cols() + cols[start:start + chunk], n)
        basis = image_basis(block)
    return basis


def is_surjective_matrix(phi: Mat) -> bool:
    """Whether phi: Z^n -> Z^m is onto."""
    m = phi.nrows
    if m == 0:
        return True
    r, _, iota = kernel_image(phi)
    if r != m:
        return False
    return abs((phi * iota).det()) == 1


def image_subset(phi: Mat, psi: Mat) -> bool:
    """Decide im(psi) within im(phi) via the kernel of (a, b) -> phi a - psi b."""
    if phi.nrows != psi.nrows:
        raise DimensionMismatch("phi and psi must share a target")
    k = psi.ncols
    if k == 0 or psi.is_zero():
        return True
    stacked = phi.hstack(-psi)
    kappa = kernel_basis(stacked)
    proj = kappa.take_rows(range(phi.ncols, phi.ncols + k))
    return is_surjective_matrix(proj)


def solve_preimage(phi: Mat, b) -> list[int]:
    """Return an integer vector a with ``phi a = b`` or raise NoSolution."""
    b = list(b)
    if len(b) != phi.nrows:
        raise DimensionMismatch("right-hand side has the wrong length")
    n = phi.ncols
    psi = phi.hstack(Mat.column(b))
    kappa = kernel_basis(psi)
    last = kappa.row(n) if kappa.ncols else []
    g, coeffs = multi_gcd_coefficients(last)
    if g != 1:
        raise NoSolution("vector is not in the image")
    x = [0] * (n + 1)
    for c, col in zip(coeffs, kappa.cols()):
        if c:
            for i in range(n + 1):
                x[i] -= c * col[i]
    a = x[:n]
    if phi.apply(a) != b:
        raise AssertionError("preimage failed verification")
    return a


def hnf_full_rank(basis: Mat) -> Mat:
    """Upper-triangular column Hermite form of a nonsingular square matrix.

    Diagonal entries are positive and each entry to the right of a
    diagonal entry lies in ``[0, diag)``.
    """
    n = basis.nrows
    if basis.ncols != n:
        raise DimensionMismatch("hnf_full_rank needs a square basis")
    cols = basis.cols()
    for i in range(n - 1, -1, -1):
        for j in range(i):
            a = cols[j][i]
            if a == 0:
                continue
            b = cols[i][i]
            g, x, y = ext_gcd(b, a)
            bg, ag = b // g, a // g
            ci, cj = cols[i], cols[j]
            cols[i] = [x * u + y * v for u, v in zip(ci, cj)]
            cols[j] = [bg * v - ag * u for u, v in zip(ci, cj)]
        if cols[i][i] == 0:
            raise ValueError("basis is singular")
        if cols[i][i] < 0:
            cols[i] = [-u for u in cols[i]]
    for i in range(n - 1, -1, -1):
        piv = cols[i][i]
        for j in range(i + 1, n):
            f = cols[j][i] // piv
            if f:
                cols[j] = [v - f * u for u, v in zip(cols[i], cols[j])]
    return Mat.from_cols(cols, n)


def relation_kernel(inst: RelationInstance) -> Mat:
    """Basis of the integer relations among vectors known only approximately.

    ``inst.w`` holds the scaled approximations ``t*w_i`` as integer
    columns.  With ``q(x) = |x|^2 + |sum x_i t w_i|^2`` the reduced basis
    vectors satisfying ``q(b) <= omega`` form the relation module, provided
    omega and t meet the separation bounds for the true vectors (the caller's
    obligation; with smaller values the answer may be wrong).
    """
    s = inst.s
    if s == 0:
        return Mat.zeros(0, 0)
    W = inst.w.rows
    n = inst.n
    G = [[sum(W[t][i] * W[t][j] for t in range(n)) + (1 if i == j else 0) for j in range(s)]
         for i in range(s)]
    H = _lll_int(G, Fraction(2))
    keep = []
    for h in H:
        proj = [sum(W[t][i] * h[i] for i in range(s)) for t in range(n)]
        if sum(x * x for x in h) + sum(x * x for x in proj) <= inst.omega:
            keep.append(h)
    return Mat.from_cols(keep, s)


def relation_bounds(n: int, s: int, B, lam) -> tuple[int, int]:
    """Smallest integers ``(omega, t)`` meeting the separation bounds

    omega >= 2^(2n+s+1) n^(2n+2) s (B/lam)^(2n)  and  t >= 2 n s sqrt(omega)/lam

    for rational upper bound ``B`` on the generator lengths and rational lower
    bound ``lam`` on the shortest nonzero lattice vector length.
    """
    from math import isqrt

    ratio = Fraction(B) / Fraction(lam)
    w = 2 ** (2 * n + s + 1) * n ** (2 * n + 2) * s * ratio ** (2 * n)
    omega = -((-w.numerator) // w.denominator)
    # t >= 2ns sqrt(omega)/lam  <=>  t^2 lam^2 >= 4 n^2 s^2 omega
    lam = Fraction(lam)
    rhs = 4 * n * n * s * s * omega / (lam * lam)
    t = isqrt(-((-rhs.numerator) // rhs.denominator))
    while Fraction(t * t) < rhs:
        t += 1
    return omega, max(t, 1)


def hnf_modular(gens: Mat, D: int, shrink: bool = False) -> Mat:
    """Hermite form (as in :func:`hnf_full_rank`) of the lattice spanned by
    the columns of gens together with D*Z^n.

    All work is done modulo D, so entry sizes stay bounded by D.  With
    ``shrink`` the caller promises that D is a multiple of the covolume of
    the column span itself; the modulus is then divided by each pivot.
    """
    n = gens.nrows
    D = abs(D)
    if D == 0:
        raise ValueError("modulus must be nonzero")
    work = [[v % D for v in c] for c in gens.cols()]
    work = [c for c in work if any(c)]
    H = [None] * n
    R = D
    for i in range(n - 1, -1, -1):
        piv = [0] * n
        rest = []
        for c in work:
            ci = c[i] % R
            if ci == 0:
                rest.append(c)
                continue
            pi = piv[i]
            if pi and ci % pi == 0:
                # plain elimination, the pivot stays
                f = ci // pi
                other = [(b - f * a) % R for a, b in zip(piv[:i], c[:i])]
            else:
                g, u, v = ext_gcd(pi, ci)
                pg, cg = pi // g, ci // g
                new_piv = [(u * a + v * b) % R for a, b in zip(piv, c)]
                other = [(pg * b - cg * a) % R for a, b in zip(piv[:i], c[:i])]
                piv = new_piv
            if any(other):
                rest.append(other + [0] * (n - i))
        g, u, _ = ext_gcd(piv[i], R)
        col = [(u * a) % R for a in piv[:i]] + [g] + [0] * (n - i - 1)
        H[i] = col
        if shrink:
            R //= g
        else:
            # the combination of piv and R*e_i that vanishes in row i
            rest.append([(R // g) * a for a in piv])
        work = [[a % R for a in c[:i]] + [0] * (n - i) for c in rest]
        work = [c for c in work if any(c)]
    for i in range(n - 1, -1, -1):
        d = H[i][i]
        for j in range(i + 1, n):
            f = H[j][i] // d
            if f:
                H[j] = [b - f * a for a, b in zip(H[i], H[j])]
    return Mat.from_cols(H, n)


_SELECT_PRIME = (1 << 61) - 1


def _independent_columns(cols, n, order):
    """Indices of n columns independent modulo a large prime (or None)."""
    p = _SELECT_PRIME
    echelon = []  # (pivot index, reduced row) pairs
    chosen = []
    for idx in order:
        v = [x % p for x in cols[idx]]
        for piv, row in echelon:
            if v[piv]:
                f = v[piv]
                v = [(a - f * b) % p for a, b in zip(v, row)]
        piv = next((k for k, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = pow(v[piv], -1, p)
        echelon.append((piv, [x * inv % p for x in v]))
        chosen.append(idx)
        if len(chosen) == n:
            return chosen
    return None


def lattice_det_multiple(gens: Mat) -> int:
    """A positive multiple of the covolume of the (full-rank) column span,
    as the gcd of a few maximal minors; 0 if no independent set is found."""
    n, k = gens.shape
    cols = gens.cols()
    D = 0
    orders = [range(k), range(k - 1, -1, -1)]
    for order in orders:
        sel = _independent_columns(cols, n, list(order))
        if sel is None:
            continue
        minor = abs(bareiss_det([[cols[j][i] for j in sel] for i in range(n)]))
        D = gcd(D, minor)
        if D == 1:
            break
    return D


def hnf_of_span(gens: Mat) -> Mat:
    """Hermite form of the column span of an integer matrix of full row rank."""
    n = gens.nrows
    if n == 0:
        return Mat.zeros(0, 0)
    D = lattice_det_multiple(gens)
    if D == 0:
        basis = span_basis(gens)
        if basis.ncols != n:
            raise ValueError("generators do not span a full-rank lattice")
        return hnf_full_rank(basis)
    return hnf_modular(gens, D, shrink=True)
