"""Kernels of multiplicative maps out of Z^m.

* ``ideal_power_kernel``: exponent vectors k with prod a_i^k_i = O_K.
* ``unit_class_kernel``: k with prod alpha_i^k_i a unit of O_K.
* ``multiplicative_kernel``: k with prod alpha_i^k_i = 1, found by
  approximating complex logarithms and recovering integer relations; every
  generator is then checked exactly.

Complex roots are isolated with disks certified from exact evaluations at
dyadic Gaussian points: if z is any point, some root of a squarefree f of
degree n lies within n|f(z)/f'(z)| of z, so n pairwise disjoint disks of
that kind hold one root each.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import mpmath

from .errors import PrecisionBudgetExceeded
from .frac_ideal import FracIdeal, ideal_coprime_basis, principal_ideal
from .lattice import RelationInstance, image_basis, kernel_basis, relation_bounds, relation_kernel
from .matrix import Mat
from .order_ring import KElement, Order, primitive_element

# rational lower bound for (log 2)^2 = 0.4804...
LOG2_SQUARED_LOWER = Fraction(48, 100)
DEFAULT_LADDER_MAX = 1 << 15  # bits


# -- ideal exponents ---------------------------------------------------------

def _split_fraction(I: FracIdeal):
    R = I.order
    N = FracIdeal(R, I.basis, 1)
    D = principal_ideal(R.int_element(I.den))
    return N, D


def ideal_power_kernel(R: Order, ideals) -> Mat:
    """Basis (columns) of the k in Z^m with prod (O_K a_i)^k_i = O_K."""
    ideals = list(ideals)
    m = len(ideals)
    if m == 0:
        return Mat.zeros(0, 0)
    parts = []
    for I in ideals:
        if not any(any(r) for r in I.basis.rows):
            raise ValueError("ideals must be nonzero")
        parts.extend(_split_fraction(I))
    cb = ideal_coprime_basis(R, parts)
    r = len(cb.basis)
    if r == 0:
        return Mat.identity(m)
    # column i: exponents of N_i minus exponents of D_i
    E = Mat.from_cols(
        [[a - b for a, b in zip(cb.expo[2 * i], cb.expo[2 * i + 1])] for i in range(m)], r)
    return kernel_basis(E)


def unit_class_kernel(R: Order, alphas) -> Mat:
    """Basis of the k with prod alpha_i^k_i in O_K^*."""
    alphas = list(alphas)
    for a in alphas:
        if a.is_zero():
            raise ValueError("elements must be nonzero")
    return ideal_power_kernel(R, [principal_ideal(a) for a in alphas])


# -- certified complex embeddings --------------------------------------------

def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _poly_at(coeffs, a: int, b: int, bits: int):
    """Exact value of sum c_k w^k at w = (a + b i) / 2^bits, as a pair of
    Fractions."""
    d = len(coeffs) - 1
    re, im = 0, 0
    for k in range(d, -1, -1):
        re, im = re * a - im * b, re * b + im * a
        re += coeffs[k] << (bits * (d - k))
    den = 1 << (bits * d)
    return Fraction(re, den), Fraction(im, den)


def _abs2(z) -> Fraction:
    return z[0] * z[0] + z[1] * z[1]


def _sqrt_upper(x: Fraction, bits: int = 64) -> Fraction:
    """Rational upper bound for sqrt(x), accurate to about 2^-bits relative."""
    if x <= 0:
        return Fraction(0)
    s = 1 << (2 * bits)
    num = x.numerator * s
    q = -(-num // x.denominator)
    r = isqrt(q)
    if r * r < q:
        r += 1
    return Fraction(r, 1 << bits)


def _sqrt_lower(x: Fraction, bits: int = 64) -> Fraction:
    if x <= 0:
        return Fraction(0)
    s = 1 << (2 * bits)
    return Fraction(isqrt(x.numerator * s // x.denominator), 1 << bits)


@dataclass(frozen=True)
class RootDisk:
    """Dyadic center (a + b i) / 2^bits and a rational radius."""
    a: int
    b: int
    bits: int
    radius: Fraction

    def center(self):
        return Fraction(self.a, 1 << self.bits), Fraction(self.b, 1 << self.bits)


@dataclass(frozen=True)
class EmbeddingData:
    minpoly: tuple
    roots: tuple  # RootDisk per embedding
    bits: int


def _poly_derivative(f):
    return [k * f[k] for k in range(1, len(f))]


def certified_roots(f, bits: int) -> EmbeddingData | None:
    """Disks around all complex roots of the squarefree integer polynomial f,
    centers rounded to ``bits`` fractional bits; None if the disks computed
    at this precision do not certify."""
    n = len(f) - 1
    df = _poly_derivative(f)
    with mpmath.workprec(bits + 32):
        try:
            approx = mpmath.polyroots(list(reversed(f)), maxsteps=50 + 10 * n,
                                      extraprec=bits + 32)
        except mpmath.libmp.NoConvergence:
            return None
        disks = []
        for z in approx:
            z = mpmath.mpc(z)
            a = int(mpmath.nint(z.real * mpmath.mpf(2) ** bits))
            b = int(mpmath.nint(z.imag * mpmath.mpf(2) ** bits))
            fz = _poly_at(f, a, b, bits)
            dz = _poly_at(df, a, b, bits)
            d2 = _abs2(dz)
            if d2 == 0:
                return None
            r2 = n * n * _abs2(fz) / d2
            disks.append(RootDisk(a, b, bits, _sqrt_upper(r2, 2 * bits)))
    for i in range(n):
        ci = disks[i].center()
        for j in range(i + 1, n):
            cj = disks[j].center()
            dist2 = (ci[0] - cj[0]) ** 2 + (ci[1] - cj[1]) ** 2
            rr = disks[i].radius + disks[j].radius
            if dist2 <= rr * rr:
                return None
    return EmbeddingData(tuple(f), tuple(disks), bits)


def _power_coords(R: Order, x: KElement) -> Mat:
    """Inverse of the matrix whose columns are 1, x, ..., x^(n-1)."""
    n = R.n
    cols = []
    p = R.int_element(1)
    for _ in range(n):
        cols.append(p.coords())
        p = p * x
    return Mat.from_cols(cols, n).inverse()


@dataclass(frozen=True)
class LogApprox:
    """Approximate (Re, Im) of log sigma(alpha) per embedding, each within
    ``error``."""
    values: tuple  # length 2n, Fractions
    error: Fraction


def _to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    v = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -v if sign else v


def _log_one(g, disk: RootDisk, prec: int):
    """Approximate log of g(rho) for the root rho inside ``disk``; returns
    (re, im, err) or None if the disk is too coarse."""
    d = len(g) - 1
    den = 1
    for c in g:
        den = den * c.denominator // gcd(den, c.denominator)
    gi = [int(c * den) for c in g]
    v = _poly_at(gi, disk.a, disk.b, disk.bits)
    v = (v[0] / den, v[1] / den)
    c = disk.center()
    zabs = _sqrt_upper(_abs2(c), prec) + disk.radius
    # |g(rho) - g(z)| <= r * sup |g'| on the disk
    slope = sum(k * abs(g[k]) * zabs ** (k - 1) for k in range(1, d + 1))
    e = disk.radius * slope
    vabs = _sqrt_lower(_abs2(v), max(prec, 64))
    if vabs == 0 or 2 * e > vabs:
        return None
    rel = e / vabs
    # |log(1+u)| <= |u| / (1 - |u|) <= 2|u| for |u| <= 1/2, covers both parts
    err = 2 * rel
    with mpmath.workprec(prec + 32):
        w = mpmath.mpc(mpmath.mpf(v[0].numerator) / v[0].denominator,
                       mpmath.mpf(v[1].numerator) / v[1].denominator)
        lw = mpmath.log(w)
        re = _to_fraction(lw.real)
        im = _to_fraction(lw.imag)
    slack = Fraction(1 + abs(int(re)) + 4, 1 << (prec - 4))
    return re, im, err + slack


def log_embeddings(R: Order, alphas, error: Fraction, ladder_max: int = DEFAULT_LADDER_MAX):
    """Approximations of log sigma(alpha_j) for all complex embeddings sigma,
    each coordinate within ``error``.  The branch of each logarithm is the
    one nearest the principal value of the approximation; any branch works
    downstream since 2 pi i Z^X is added to the lattice."""
    x, f = primitive_element(R)
    P = _power_coords(R, x)
    polys = [P.apply(a.coords()) for a in alphas]
    bits = 64
    target_bits = max(1, (1 / error).__ceil__().bit_length()) + 8
    bits = max(bits, target_bits)
    while bits <= ladder_max:
        emb = certified_roots(f, bits)
        if emb is not None:
            out = []
            ok = True
            for g in polys:
                vals, worst = [], Fraction(0)
                for disk in emb.roots:
                    res = _log_one(g, disk, bits)
                    if res is None:
                        ok = False
                        break
                    re, im, err = res
                    vals.extend([re, im])
                    worst = max(worst, err)
                if not ok or worst > error:
                    ok = False
                    break
                out.append(LogApprox(tuple(vals), worst))
            if ok:
                return emb, out
        bits *= 2
    raise PrecisionBudgetExceeded(f"no certified logarithms within {ladder_max} bits")


# -- the log lattice ---------------------------------------------------------

@dataclass(frozen=True)
class LogLatticeApprox:
    """Columns of ``w`` are t * (t-approximations) of the lattice generators:
    first the log vectors, then 2 pi i e_sigma for each embedding."""
    w: Mat
    t: int
    omega: int
    count: int  # number of log generators before the 2 pi rows


def _round(x: Fraction) -> int:
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


def _two_pi_columns(n: int, t: int) -> list[list[int]]:
    bits = t.bit_length() + 16
    with mpmath.workprec(bits + 16):
        tp = _to_fraction(2 * mpmath.pi)
    val = _round(tp * t)
    cols = []
    for k in range(n):
        col = [0] * (2 * n)
        col[2 * k + 1] = val
        cols.append(col)
    return cols


def embed_logs(R: Order, alphas, t: int, omega: int = 1,
               ladder_max: int = DEFAULT_LADDER_MAX) -> LogLatticeApprox:
    """t-approximations of (log sigma(alpha_j))_sigma, coordinates ordered
    (Re, Im) per embedding, plus the 2 pi i rows."""
    alphas = list(alphas)
    n = R.n
    _, logs = log_embeddings(R, alphas, Fraction(1, 2 * t), ladder_max)
    cols = [[_round(v * t) for v in la.values] for la in logs]
    cols += _two_pi_columns(n, t)
    return LogLatticeApprox(Mat.from_cols(cols, 2 * n), t, omega, len(alphas))


def _norm_upper(vec: list[Fraction]) -> Fraction:
    return _sqrt_upper(sum(v * v for v in vec), 32)


def _pow2_ceiling(x: Fraction) -> int:
    p = 1
    while p < x:
        p *= 2
    return p


def _exact_product(alphas, k) -> KElement:
    R = alphas[0].order
    acc = R.int_element(1)
    for a, e in zip(alphas, k):
        if e:
            acc = acc * (a ** e)
    return acc


def multiplicative_kernel(R: Order, alphas, ladder_max: int = DEFAULT_LADDER_MAX,
                          transcript: list | None = None) -> Mat:
    """Basis (columns) of {k in Z^m : prod alpha_i^k_i = 1}."""
    alphas = list(alphas)
    m = len(alphas)
    if m == 0:
        return Mat.zeros(0, 0)
    H = unit_class_kernel(R, alphas)
    h = H.ncols
    if h == 0:
        return Mat.zeros(m, 0)
    n = R.n
    dim = 2 * n
    s = h + n
    weights = [sum(abs(v) for v in H.col(i)) for i in range(h)]
    wmax = max(weights)

    def generators(err):
        _, logs = log_embeddings(R, alphas, err, ladder_max)
        vecs = []
        for i in range(h):
            col = H.col(i)
            vecs.append([sum(col[j] * logs[j].values[c] for j in range(m)) for c in range(dim)])
        return vecs

    # coarse pass for B
    coarse = generators(Fraction(1, 1 << 10) / wmax)
    slack = _sqrt_upper(Fraction(dim)) / (1 << 9)
    B = max([_norm_upper(v) + slack for v in coarse] + [Fraction(7)])
    B = _pow2_ceiling(B)
    omega, t = relation_bounds(dim, s, B, LOG2_SQUARED_LOWER)
    # each combined coordinate within 1/(2t) before rounding to 1/t
    fine = generators(Fraction(1, 2 * t * wmax))
    cols = [[_round(v * t) for v in vec] for vec in fine]
    cols += _two_pi_columns(n, t)
    inst = RelationInstance(t, Mat.from_cols(cols, dim), omega)
    M = relation_kernel(inst)
    Y = Mat([M.rows[i] for i in range(h)], h, M.ncols)
    K = image_basis(H * Y) if M.ncols else Mat.zeros(m, 0)
    for j in range(K.ncols):
        k = K.col(j)
        if _exact_product(alphas, k) != R.int_element(1):
            raise AssertionError(f"relation {k} failed exact verification")
    if transcript is not None:
        transcript.append({"unit_class_kernel": H.tolist(), "B": B, "t": t,
                           "omega": omega, "relations": M.tolist(),
                           "verified": [K.col(j) for j in range(K.ncols)]})
    return K
