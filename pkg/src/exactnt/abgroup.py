"""Finitely generated abelian groups presented as cokernels ``Z^n / im(rel)``.

Elements are integer vectors of length ``n``; two vectors are the same
group element when their difference lies in ``im(rel)``.  Morphisms are
integer matrices between the ambient free groups.  Every computation below
reduces to ``kernel_image`` / ``solve_preimage`` on suitably stacked
matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

from .coprime_basis import refine, valuation
from .errors import DimensionMismatch, InfiniteGroup, Invalid, NoSolution
from .lattice import (image_basis, image_subset, is_surjective_matrix, kernel_basis,
                      kernel_image, solve_preimage)
from .matrix import Mat, block_diag, kron

INFINITE = math.inf


@dataclass(frozen=True, eq=False)
class FgGroup:
    n: int
    rel: Mat

    def __post_init__(self):
        if self.rel.nrows != self.n:
            raise DimensionMismatch(f"relation matrix has {self.rel.nrows} rows, expected {self.n}")

    @classmethod
    def free(cls, n):
        return cls(n, Mat.zeros(n, 0))

    @classmethod
    def cyclic(cls, *moduli):
        """Product of cyclic groups Z/m (m = 0 gives a free factor)."""
        k = len(moduli)
        cols = [[m if i == j else 0 for i in range(k)] for j, m in enumerate(moduli)]
        return cls(k, Mat.from_cols(cols, k))

    @classmethod
    def trivial(cls):
        return cls(0, Mat.zeros(0, 0))

    def zero(self):
        return [0] * self.n

    def contains_relation(self, vec) -> bool:
        """Whether ``vec`` represents the zero element."""
        if all(v == 0 for v in vec):
            return True
        try:
            solve_preimage(self.rel, list(vec))
            return True
        except NoSolution:
            return False

    def equal(self, x, y) -> bool:
        return self.contains_relation([a - b for a, b in zip(x, y)])

    @cached_property
    def decomposition(self):
        return structure_decompose(self)

    def canonical(self, x) -> tuple:
        """Canonical coordinates of x: free part, then residues mod the invariants."""
        dec = self.decomposition
        coords = dec.to_parts.phi.apply(list(x))
        r = dec.r
        return tuple(coords[:r]) + tuple(c % m for c, m in zip(coords[r:], dec.moduli))

    def __repr__(self):
        return f"FgGroup(n={self.n}, rel={self.rel.rows})"


@dataclass(frozen=True, eq=False)
class GroupMorphism:
    src: FgGroup
    dst: FgGroup
    phi: Mat

    def __call__(self, x):
        return self.phi.apply(list(x))

    def compose(self, other: "GroupMorphism") -> "GroupMorphism":
        """``self o other``."""
        return GroupMorphism(other.src, self.dst, self.phi * other.phi)


def morphism_check(src: FgGroup, dst: FgGroup, phi: Mat) -> GroupMorphism:
    """Validate that phi induces a morphism src -> dst; raise Invalid if not."""
    if phi.shape != (dst.n, src.n):
        raise DimensionMismatch(f"matrix shape {phi.shape} does not match {dst.n}x{src.n}")
    if not image_subset(dst.rel, phi * src.rel):
        raise Invalid("relations of the source are not mapped into the relations of the target")
    return GroupMorphism(src, dst, phi)


def identity_morphism(A: FgGroup) -> GroupMorphism:
    return GroupMorphism(A, A, Mat.identity(A.n))


def zero_morphism(A: FgGroup, B: FgGroup) -> GroupMorphism:
    return GroupMorphism(A, B, Mat.zeros(B.n, A.n))


def morphisms_equal(f: GroupMorphism, g: GroupMorphism) -> bool:
    """f = g iff every ambient vector is sent into im(rel_dst) by f - g."""
    return image_subset(f.dst.rel, f.phi - g.phi)


def _relations_in_basis(gamma: Mat, alpha: Mat) -> Mat:
    """Solve ``gamma X = alpha`` column by column (gamma injective)."""
    cols = [solve_preimage(gamma, c) for c in alpha.cols()]
    return Mat.from_cols(cols, gamma.ncols)


def pullback_of_relations(f: GroupMorphism) -> Mat:
    """Basis (columns) of {x in Z^a : phi x in im(rel_dst)}."""
    a = f.src.n
    stacked = f.phi.hstack(-f.dst.rel)
    kappa = kernel_basis(stacked)
    return image_basis(kappa.take_rows(range(a)))


def kernel_image_of(f: GroupMorphism) -> tuple[GroupMorphism, GroupMorphism]:
    """Injections k: K -> src and i: I -> dst with im k = ker f, im i = im f."""
    gamma = pullback_of_relations(f)
    K = FgGroup(gamma.ncols, _relations_in_basis(gamma, f.src.rel))
    k = GroupMorphism(K, f.src, gamma)
    I = FgGroup(f.src.n, gamma)
    i = GroupMorphism(I, f.dst, f.phi)
    return k, i


def is_surjective(f: GroupMorphism) -> bool:
    return is_surjective_matrix(f.phi.hstack(f.dst.rel))


def is_injective(f: GroupMorphism) -> bool:
    return image_subset(f.src.rel, pullback_of_relations(f))


def preimage(f: GroupMorphism, b) -> list[int]:
    """Some a with f(a) = b in the target, or NoSolution."""
    sol = solve_preimage(f.phi.hstack(f.dst.rel), list(b))
    return sol[:f.src.n]


def direct_product(A: FgGroup, B: FgGroup):
    """Return ``(P, (incl_A, incl_B), (proj_A, proj_B))``."""
    P = FgGroup(A.n + B.n, block_diag(A.rel, B.rel))
    iA = Mat.identity(A.n).vstack(Mat.zeros(B.n, A.n))
    iB = Mat.zeros(A.n, B.n).vstack(Mat.identity(B.n))
    pA = Mat.identity(A.n).hstack(Mat.zeros(A.n, B.n))
    pB = Mat.zeros(B.n, A.n).hstack(Mat.identity(B.n))
    return (P,
            (GroupMorphism(A, P, iA), GroupMorphism(B, P, iB)),
            (GroupMorphism(P, A, pA), GroupMorphism(P, B, pB)))


def group_order(A: FgGroup):
    """#A, or INFINITE.  Uses #coker = |det| of a basis of the relations."""
    if A.n == 0:
        return 1
    if A.rel.ncols == 0:
        return INFINITE
    r, _, iota = kernel_image(A.rel)
    if r < A.n:
        return INFINITE
    return abs((A.rel * iota).det())


def element_order(A: FgGroup, a):
    """Order of a in A (INFINITE for non-torsion elements)."""
    a = list(a)
    if A.contains_relation(a):
        return 1
    stacked = Mat.column(a).hstack(-A.rel)
    kappa = kernel_basis(stacked)
    g = 0
    for c in kappa.row(0) if kappa.ncols else []:
        g = math.gcd(g, c)
    return g if g else INFINITE


def _combine_witnesses(e1, w1, e2, w2):
    """Given elements of orders e1, e2 return one of order lcm(e1, e2).

    The orders are split over a coprime basis into coprime m1 | e1 and
    m2 | e2 with m1*m2 = lcm, then (e1/m1) w1 + (e2/m2) w2 has order m1*m2.
    """
    m1 = m2 = 1
    for c in refine([e1, e2]):
        v1, v2 = valuation(e1, c), valuation(e2, c)
        if v1 >= v2:
            m1 *= c ** v1
        else:
            m2 *= c ** v2
    f1, f2 = e1 // m1, e2 // m2
    return m1 * m2, [f1 * x + f2 * y for x, y in zip(w1, w2)]


def group_exponent(A: FgGroup):
    """Return ``(e, a)`` with e = exp(A) and ord(a) = e."""
    if group_order(A) == INFINITE:
        raise InfiniteGroup("exponent of an infinite group")
    e, w = 1, A.zero()
    for i in range(A.n):
        gen = [int(i == j) for j in range(A.n)]
        o = element_order(A, gen)
        if e % o == 0:
            continue
        e, w = _combine_witnesses(e, w, o, gen)
    return e, w


def discrete_log(A: FgGroup, a, b) -> int:
    """Least positive n with n*a = b, or NoSolution."""
    f = GroupMorphism(FgGroup.free(1), A, Mat.column(list(a)))
    n = preimage(f, b)[0]
    o = element_order(A, a)
    if o == INFINITE:
        if n <= 0:
            raise NoSolution("only non-positive multiples reach b")
        return n
    n %= o
    return n if n else o


# -- Hom and tensor ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HomGroup:
    """Hom(A, B) presented as a group H; ``gens`` maps H's ambient
    coordinates to flattened (row-major) b x a matrices."""
    H: FgGroup
    A: FgGroup
    B: FgGroup
    gens: Mat

    def matrix_of(self, h) -> Mat:
        flat = self.gens.apply(list(h))
        a, b = self.A.n, self.B.n
        return Mat([flat[i * a:(i + 1) * a] for i in range(b)], b, a)

    def evaluate(self, h, x):
        return self.matrix_of(h).apply(list(x))

    def element_of(self, phi: Mat):
        """Coordinates in H of a morphism matrix phi: A -> B."""
        morphism_check(self.A, self.B, phi)
        flat = [v for row in phi.rows for v in row]
        zero_part = kron(self.B.rel, Mat.identity(self.A.n))
        sol = solve_preimage(self.gens.hstack(zero_part), flat)
        return sol[:self.gens.ncols]


def hom_group(A: FgGroup, B: FgGroup) -> HomGroup:
    """Hom(A, B) as the kernel of precomposition with A's relations.

    Hom(Z^a, B) is coker(rel_B (x) I_a) on flattened matrices, and a map is
    a morphism from A exactly when it kills im(rel_A).
    """
    a, b, ma = A.n, B.n, A.rel.ncols
    H1 = FgGroup(b * a, kron(B.rel, Mat.identity(a)))
    H0 = FgGroup(b * ma, kron(B.rel, Mat.identity(ma)))
    alpha_star = GroupMorphism(H1, H0, kron(Mat.identity(b), A.rel.T))
    k, _ = kernel_image_of(alpha_star)
    return HomGroup(k.src, A, B, k.phi)


@dataclass(frozen=True, eq=False)
class TensorGroup:
    T: FgGroup
    A: FgGroup
    B: FgGroup

    def bilinear(self, x, y):
        return [u * v for u in x for v in y]


def tensor_group(A: FgGroup, B: FgGroup) -> TensorGroup:
    rel = kron(A.rel, Mat.identity(B.n)).hstack(kron(Mat.identity(A.n), B.rel))
    return TensorGroup(FgGroup(A.n * B.n, rel), A, B)


# -- exact sequences ---------------------------------------------------------

@dataclass(frozen=True)
class SplitResult:
    status: str  # "not_exact", "exact_not_split", "split"
    retraction: GroupMorphism | None = None  # left inverse of f
    section: GroupMorphism | None = None  # right inverse of g
    reason: str = ""


def is_exact(f: GroupMorphism, g: GroupMorphism) -> tuple[bool, str]:
    if not is_injective(f):
        return False, "f is not injective"
    if not is_surjective(g):
        return False, "g is not surjective"
    if not image_subset(g.dst.rel, g.phi * f.phi):
        return False, "g o f is not zero"
    k, _ = kernel_image_of(g)
    if not image_subset(f.phi.hstack(f.dst.rel), k.phi):
        return False, "ker g is larger than im f"
    return True, ""


def split_exact(f: GroupMorphism, g: GroupMorphism) -> SplitResult:
    """Classify 0 -> A -f-> B -g-> C -> 0 and produce splittings if any."""
    if f.dst is not g.src and (f.dst.n != g.src.n or f.dst.rel != g.src.rel):
        raise DimensionMismatch("f and g are not composable")
    ok, why = is_exact(f, g)
    if not ok:
        return SplitResult("not_exact", reason=why)
    A, B, C = f.src, f.dst, g.dst
    c = C.n
    hom = hom_group(C, B)
    # g_* : Hom(C, B) -> Hom(C, C); look for h with g o h = id modulo zero maps
    gstar = kron(g.phi, Mat.identity(c)) * hom.gens
    zero_cc = kron(C.rel, Mat.identity(c))
    target = [int(i == j) for i in range(c) for j in range(c)]
    try:
        sol = solve_preimage(gstar.hstack(zero_cc), target)
    except NoSolution:
        return SplitResult("exact_not_split", reason="identity of C does not lift")
    S = hom.matrix_of(sol[:hom.gens.ncols])
    section = morphism_check(C, B, S)
    # retraction: x -> f^{-1}(x - s(g(x)))
    cols = []
    SG = S * g.phi
    for j in range(B.n):
        e = [int(i == j) for i in range(B.n)]
        y = [u - v for u, v in zip(e, SG.col(j))]
        cols.append(preimage(f, y))
    R = Mat.from_cols(cols, A.n)
    retraction = morphism_check(B, A, R)
    assert morphisms_equal(retraction.compose(f), identity_morphism(A))
    assert morphisms_equal(g.compose(section), identity_morphism(C))
    return SplitResult("split", retraction, section)


# -- torsion and structure ---------------------------------------------------

def torsion_subgroup(A: FgGroup) -> GroupMorphism:
    """Injection T -> A onto the torsion subgroup (saturation of im rel)."""
    perp = kernel_basis(A.rel.T)
    sat = kernel_basis(perp.T)
    T = FgGroup(sat.ncols, _relations_in_basis(sat, A.rel))
    return GroupMorphism(T, A, sat)


@dataclass(frozen=True, eq=False)
class StructureDecomposition:
    r: int
    invariants: tuple  # n_1, ..., n_m with n_m | ... | n_1
    moduli: tuple  # moduli of the cyclic parts (invariants, or refined factors)
    parts: FgGroup
    to_parts: GroupMorphism
    from_parts: GroupMorphism


def _parts_group(r, moduli):
    k = r + len(moduli)
    cols = [[m if i == r + j else 0 for i in range(k)] for j, m in enumerate(moduli)]
    return FgGroup(k, Mat.from_cols(cols, k))


def _decompose_finite(t: int, R: Mat):
    """Cyclic decomposition of the finite group coker(R) on Z^t.

    Returns (invariants, to_rows, from_cols) where to_rows are integer row
    vectors (projections) and from_cols column vectors (inclusions).
    """
    G = FgGroup(t, R)
    if t == 0 or group_order(G) == 1:
        return [], [], []
    e, a = group_exponent(G)
    m = R.ncols
    # h.R = 0 (mod e) and h.a = 1 (mod e): unknowns (h, u, v)
    top = R.T.hstack(Mat.identity(m) * -e, Mat.zeros(m, 1))
    bottom = Mat([a + [0] * m + [-e]], 1, t + m + 1)
    sol = solve_preimage(top.vstack(bottom), [0] * m + [1])
    h = sol[:t]
    quotient_rel = image_basis(R.hstack(Mat.column(a)))
    inv, to_rows, from_cols = _decompose_finite(t, quotient_rel)
    # lift from the quotient: y -> y - a (h.y)
    lifted = []
    for col in from_cols:
        hy = sum(x * y for x, y in zip(h, col))
        lifted.append([y - ai * hy for y, ai in zip(col, a)])
    return [e] + inv, [h] + to_rows, [a] + lifted


def _crt_split(moduli, S):
    """Refine each cyclic modulus over a coprime basis of S and the moduli.

    Returns (new_moduli, to_rows, from_cols) as matrices between
    prod Z/n_i and prod Z/q_j.
    """
    basis = refine([s for s in S if s > 1] + list(moduli))
    new_mod, to_rows, from_cols = [], [], []
    k = len(moduli)
    for i, n in enumerate(moduli):
        for c in basis:
            v = valuation(n, c)
            if v == 0:
                continue
            q = c ** v
            cof = n // q
            inv = pow(cof, -1, q) if q > 1 else 0
            new_mod.append(q)
            to_rows.append([inv if j == i else 0 for j in range(k)])
            from_cols.append([cof if j == i else 0 for j in range(k)])
    return new_mod, to_rows, from_cols


def structure_decompose(A: FgGroup, S=None) -> StructureDecomposition:
    """A = Z^r x prod Z/n_k with explicit projections and inclusions.

    With S given, the cyclic parts are further split into Z/q with the q
    pairwise coprime or powers of a common base, each dividing a power of an
    element of S or coprime to S.
    """
    n = A.n
    perp = kernel_basis(A.rel.T)  # n x r
    r = perp.ncols
    _, sat, comp = kernel_image(perp.T)  # sat: torsion directions, comp: free part
    P = sat.hstack(comp)
    Pinv = P.inverse().to_int()
    t = sat.ncols
    RT = (Pinv * A.rel).take_rows(range(t))
    RT = image_basis(RT) if RT.ncols else RT
    inv, to_rows, from_cols = _decompose_finite(t, RT)
    # torsion coordinates u = Pinv[:t] x, free coordinates v = Pinv[t:] x
    Pt = Pinv.take_rows(range(t))
    Pf = Pinv.take_rows(range(t, n))
    to_T = Mat(to_rows, len(to_rows), t) if to_rows else Mat.zeros(0, t)
    from_T = Mat.from_cols(from_cols, t)
    moduli = list(inv)
    if S is not None and inv:
        moduli, crt_to, crt_from = _crt_split(inv, S)
        to_T = Mat(crt_to, len(crt_to), len(inv)) * to_T
        from_T = from_T * Mat.from_cols(crt_from, len(inv))
    to_mat = Pf.vstack(to_T * Pt)
    from_mat = comp.hstack(sat * from_T)
    parts = _parts_group(r, moduli)
    to_parts = morphism_check(A, parts, to_mat)
    from_parts = morphism_check(parts, A, from_mat)
    return StructureDecomposition(r, tuple(inv), tuple(moduli), parts, to_parts, from_parts)
