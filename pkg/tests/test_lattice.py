import itertools
import random
from fractions import Fraction
from math import gcd, isqrt

import pytest
from sympy import Matrix

from exactnt.errors import DimensionMismatch, NoSolution, NotPositiveDefinite
from exactnt.lattice import (QuadLattice, RelationInstance, gram_schmidt, hnf_full_rank,
                             hnf_modular, hnf_of_span, image_basis, image_subset, is_c_reduced,
                             kernel_basis, kernel_image, lll_reduce, relation_bounds,
                             relation_kernel, solve_preimage, span_basis)
from exactnt.matrix import Mat
from conftest import lattice_equal, to_sympy


def random_gram(rng, n, entry=6, den=None):
    while True:
        B = Matrix(n, n, lambda i, j: rng.randint(-entry, entry))
        if B.det() != 0:
            break
    G = B.T * B
    d = den or rng.randint(1, 5)
    return Mat([[Fraction(int(G[i, j]), d) for j in range(n)] for i in range(n)], n, n)


def test_gram_schmidt_examples():
    gs = gram_schmidt(QuadLattice(Mat.identity(3)))
    assert gs.qstar == [1, 1, 1]
    gs = gram_schmidt(QuadLattice(Mat([[1, 1], [1, 2]])))
    assert gs.mu[1][0] == 1 and gs.qstar == [1, 1]
    gs = gram_schmidt(QuadLattice(Mat([[2, 0], [0, 3]])))
    assert gs.mu[1][0] == 0 and gs.qstar == [2, 3]


def test_gram_schmidt_reconstructs():
    rng = random.Random(0)
    for _ in range(30):
        n = rng.randint(1, 5)
        G = random_gram(rng, n)
        gs = gram_schmidt(QuadLattice(G))
        M = Matrix(n, n, lambda i, j: 1 if i == j else (gs.mu[i][j] if j < i else 0))
        D = Matrix.diag(*gs.qstar)
        assert M * D * M.T == to_sympy(G)
        assert prod_(gs.qstar) == to_sympy(G).det()


def prod_(xs):
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


def test_not_positive_definite():
    with pytest.raises(NotPositiveDefinite):
        gram_schmidt(QuadLattice(Mat([[1, 2], [2, 1]])))


def test_lll_small_examples():
    U, L = lll_reduce(QuadLattice(Mat([[1, 0], [0, 1]])))
    assert abs(U.det()) == 1 and is_c_reduced(L)
    # basis (1, 0), (100, 1) reduces to short vectors
    B = Mat([[1, 100], [0, 1]])
    U, L = lll_reduce(QuadLattice.from_basis(B))
    assert max(L.gram.rows[i][i] for i in range(2)) == 1


def brute_minima(G: Mat):
    """Successive minima of q on Z^n by enumerating a box that provably
    holds every vector with q <= max q(b_i)."""
    n = G.nrows
    Q = max(G.rows[i][i] for i in range(n))
    Ginv = to_sympy(G).inv()
    bounds = [isqrt(int(Q * Ginv[j, j]) + 1) + 1 for j in range(n)]
    vecs = []
    for x in itertools.product(*(range(-b, b + 1) for b in bounds)):
        if any(x):
            q = sum(G.rows[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
            if q <= Q:
                vecs.append((q, x))
    vecs.sort()
    chosen, minima = [], []
    for q, x in vecs:
        if Matrix(chosen + [list(x)]).rank() > len(chosen):
            chosen.append(list(x))
            minima.append(q)
            if len(chosen) == n:
                break
    return minima


def test_lll_sandwich_against_enumeration():
    rng = random.Random(7)
    c = Fraction(2)
    for _ in range(25):
        n = rng.randint(1, 3)
        G = random_gram(rng, n, entry=4)
        U, L = lll_reduce(QuadLattice(G), c)
        assert is_c_reduced(L, c)
        assert abs(U.det()) == 1
        assert to_sympy(L.gram).det() == to_sympy(G).det()
        lam = brute_minima(L.gram)
        for i in range(n):
            qi = L.gram.rows[i][i]
            assert c ** (1 - n) * qi <= lam[i] <= c ** i * qi


def test_lll_rejects_small_c():
    with pytest.raises(ValueError):
        lll_reduce(QuadLattice(Mat.identity(2)), Fraction(4, 3))


def gcd_minors(M: Matrix, r: int) -> int:
    g = 0
    for rows in itertools.combinations(range(M.rows), r):
        for cols in itertools.combinations(range(M.cols), r):
            g = gcd(g, int(M.extract(list(rows), list(cols)).det()))
    return g


def check_kernel_image(phi: Mat):
    r, kappa, iota = kernel_image(phi)
    S = to_sympy(phi)
    rank = S.rank()
    n = phi.ncols
    assert r == rank
    assert (phi * kappa).is_zero()
    both = kappa.hstack(iota)
    assert abs(both.det()) == 1
    img = phi * iota
    if rank:
        assert gcd_minors(to_sympy(img), rank) == gcd_minors(S, rank)


def test_kernel_image_oracle():
    rng = random.Random(11)
    for _ in range(120):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        phi = Mat([[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)], m, n)
        check_kernel_image(phi)


def test_kernel_image_docs_example():
    r, kappa, _ = kernel_image(Mat([[1, 2], [2, 4]]))
    assert r == 1 and kappa.ncols == 1


def test_solve_preimage():
    phi = Mat([[2, 0], [0, 3]])
    assert phi.apply(solve_preimage(phi, [4, 9])) == [4, 9]
    with pytest.raises(NoSolution):
        solve_preimage(phi, [1, 0])
    with pytest.raises(DimensionMismatch):
        solve_preimage(phi, [1])


def test_image_subset():
    assert image_subset(Mat([[1]]), Mat([[5]]))
    assert not image_subset(Mat([[2]]), Mat([[3]]))


def test_hnf_variants_agree_with_sympy_lattice():
    rng = random.Random(5)
    for _ in range(80):
        n = rng.randint(1, 4)
        k = rng.randint(n, n + 4)
        while True:
            gens = Mat([[rng.randint(-9, 9) for _ in range(k)] for _ in range(n)], n, k)
            if to_sympy(gens).rank() == n:
                break
        basis = span_basis(gens)
        H = hnf_full_rank(basis)
        assert hnf_of_span(gens) == H
        # H generates the same lattice as the original generators
        for col in gens.cols():
            sol = to_sympy(H).inv() * Matrix(col)
            assert all(x.is_integer for x in sol)
        d = abs(H.det())
        assert hnf_modular(gens, d, shrink=True) == H
        assert hnf_modular(gens, 3 * d) == H
        for i in range(n):
            assert H.rows[i][i] > 0
            for j in range(i + 1, n):
                assert 0 <= H.rows[i][j] < H.rows[i][i]


def test_relation_kernel_planted():
    # v1 = (1, 0), v2 = (0, sqrt 2), v3 = v1 + v2 in R^2; lambda_1 = 1
    from mpmath import mp, sqrt

    mp.prec = 200
    omega, t = relation_bounds(2, 3, 3, 1)
    r2 = sqrt(2)
    w = [[t, 0], [0, int(mp.nint(r2 * t))], [t, int(mp.nint(r2 * t))]]
    inst = RelationInstance(t, Mat.from_cols(w, 2), omega)
    K = relation_kernel(inst)
    assert K.ncols == 1
    assert K.col(0) in ([1, 1, -1], [-1, -1, 1])
