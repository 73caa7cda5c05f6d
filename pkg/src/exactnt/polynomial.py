"""Dense univariate polynomials as coefficient lists, lowest degree first.

Only what the order code needs: gcds over Q and over F_p, and a
Ben-Or style irreducibility test modulo p.
"""
from __future__ import annotations

from fractions import Fraction


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def derivative(f):
    return [k * f[k] for k in range(1, len(f))]


def divmod_field(a, b, inv, red=lambda v: v):
    """Long division over a field; ``inv`` inverts a nonzero scalar and
    ``red`` brings a scalar to normal form."""
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [0] * max(len(a) - len(b) + 1, 1)
    lead_inv = inv(b[-1])
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = red(a[-1] * lead_inv)
        q[shift] = c
        for i, bi in enumerate(b):
            a[i + shift] = red(a[i + shift] - c * bi)
        a = trim(a)
    return trim(q), a


def gcd_q(a, b):
    a = trim([Fraction(v) for v in a])
    b = trim([Fraction(v) for v in b])
    while b:
        _, r = divmod_field(a, b, lambda x: 1 / x)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [v / lead for v in a]
    return a


def is_squarefree_q(f) -> bool:
    return len(gcd_q(f, derivative(f))) == 1


# -- modulo p ---------------------------------------------------------------

def _norm_mod(f, p):
    return trim([v % p for v in f])


def to_monic_mod(f, p):
    f = _norm_mod(f, p)
    inv = pow(f[-1], -1, p)
    return [v * inv % p for v in f]


def divmod_mod(a, b, p):
    q, r = divmod_field(_norm_mod(a, p), _norm_mod(b, p), lambda x: pow(x, -1, p),
                        lambda v: v % p)
    return _norm_mod(q, p), _norm_mod(r, p)


def gcd_mod(a, b, p):
    a, b = _norm_mod(a, p), _norm_mod(b, p)
    while b:
        _, r = divmod_mod(a, b, p)
        a, b = b, r
    return to_monic_mod(a, p) if a else a


def mulmod(a, b, f, p):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return divmod_mod(prod, f, p)[1]


def powmod(a, e, f, p):
    result = [1]
    base = divmod_mod(a, f, p)[1]
    while e:
        if e & 1:
            result = mulmod(result, base, f, p)
        base = mulmod(base, base, f, p)
        e >>= 1
    return result


def is_squarefree_mod(f, p) -> bool:
    d = _norm_mod(derivative(f), p)
    if not d:
        return False
    return len(gcd_mod(f, d, p)) == 1


def is_irreducible_mod(f, p) -> bool:
    """Ben-Or: monic squarefree f of degree n is irreducible over F_p iff
    gcd(f, X^(p^i) - X) = 1 for i = 1 .. n/2."""
    n = len(f) - 1
    x = [0, 1]
    h = x
    for _ in range(n // 2):
        h = powmod(h, p, f, p)
        m = max(len(h), 2)
        hp, xp = h + [0] * (m - len(h)), x + [0] * (m - 2)
        diff = trim([(a - b) % p for a, b in zip(hp, xp)])
        if len(gcd_mod(f, diff, p)) != 1:
            return False
    return True


def evaluate(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc
