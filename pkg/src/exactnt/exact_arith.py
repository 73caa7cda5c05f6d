"""Integer primitives: Bezout pairs, CRT, remainder chains, and a bounded
factoring oracle.

Everything here works on Python ints and ``fractions.Fraction``.  The
factoring oracle is the only place in the package that factors integers;
callers that depend on it are the deliberately "hard" steps (radicals,
square-free tests) and mark themselves as such.
"""
from __future__ import annotations

import math
import random
from functools import lru_cache

from .errors import NoSolution, OracleBudgetExceeded


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(a, b) >= 0`` and ``a*x + b*y = g``.

    The pair is the one produced by the plain Euclidean recurrence, which
    keeps ``|x| <= max(1, |b|/g)`` and ``|y| <= max(1, |a|/g)``.

    >>> ext_gcd(240, 46)
    (2, -9, 47)
    >>> ext_gcd(0, 0)
    (0, 0, 0)
    """
    if a == 0 and b == 0:
        return 0, 0, 0
    sa = -1 if a < 0 else 1
    sb = -1 if b < 0 else 1
    old_r, r = abs(a), abs(b)
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, sa * old_s, sb * old_t


def crt_combine(a: int, m: int, b: int, n: int) -> int:
    """Least ``c >= 0`` with ``c = a mod m`` and ``c = b mod n``."""
    g, x, _ = ext_gcd(m, n)
    if (b - a) % g:
        raise NoSolution(f"{a} mod {m} and {b} mod {n} are incompatible")
    lcm = m // g * n
    # a + m*k = b (mod n)  <=>  (m/g) k = (b-a)/g (mod n/g)
    k = ((b - a) // g * x) % (n // g)
    return (a + m * k) % lcm


def mod_pow(a: int, e: int, n: int) -> int:
    # Python's three-argument pow is square-and-multiply.
    if e < 0 or n <= 0:
        raise ValueError("mod_pow needs e >= 0 and n > 0")
    return pow(a, e, n)


def gcd_sequence(x0: int, x1: int) -> list[int]:
    """Remainder chain ``x0, x1, x0 mod x1, ...`` ending in 0."""
    if x0 < 0 or x1 < 0 or (x0 == 0 and x1 == 0):
        raise ValueError("gcd_sequence needs non-negative, not both zero")
    seq = [x0, x1]
    while seq[-1]:
        seq.append(seq[-2] % seq[-1])
    return seq


def multi_gcd_coefficients(values):
    """Return ``(g, coeffs)`` with ``sum(c*v) = g = gcd(values)``."""
    g = 0
    coeffs = []
    for v in values:
        g2, x, y = ext_gcd(g, v)
        coeffs = [c * x for c in coeffs] + [y]
        g = g2
    return g, coeffs


def integer_root(n: int, k: int) -> int:
    """Floor of the k-th root of ``n >= 0``."""
    if n < 0 or k < 1:
        raise ValueError("integer_root needs n >= 0, k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def perfect_power(n: int) -> tuple[int, int]:
    """Return ``(b, k)`` with ``b**k == n`` and k as large as possible."""
    if n < 2:
        return n, 1
    for k in range(n.bit_length(), 1, -1):
        b = integer_root(n, k)
        if b > 1 and b ** k == n:
            return b, k
    return n, 1


@lru_cache(maxsize=8)
def primes_upto(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, limit + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n: int, extra_rounds: int = 8, rng: random.Random | None = None) -> bool:
    """Miller-Rabin.  Deterministic below 3.3e24; random extra bases above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def witness(a):
        x = pow(a, d, n)
        if x in (1, n - 1):
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    if any(witness(a) for a in _MR_BASES):
        return False
    if n < 3317044064679887385961981:
        return True
    rng = rng or random.Random(n)
    return not any(witness(rng.randrange(2, n - 1)) for _ in range(extra_rounds))


class FactorOracle:
    """Trial division up to ``trial_limit`` followed by a bounded Pollard rho.

    Stands in for the problems that have no known polynomial-time
    algorithm.  ``OracleBudgetExceeded`` is raised when rho cannot split a
    composite within ``rho_steps`` iterations.
    """

    def __init__(self, trial_limit: int = 1 << 20, rho_steps: int = 1 << 18):
        self.trial_limit = trial_limit
        self.rho_steps = rho_steps
        self.calls = 0

    def factor(self, n: int) -> list[tuple[int, int]]:
        if n <= 0:
            raise ValueError("factor_oracle needs n > 0")
        self.calls += 1
        found: dict[int, int] = {}
        m = n
        bound = min(self.trial_limit, math.isqrt(m))
        for p in primes_upto(self.trial_limit):
            if p > bound:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                found[p] = e
                bound = min(self.trial_limit, math.isqrt(m))
        if m > 1:
            self._split(m, found)
        return sorted(found.items())

    def _split(self, m: int, found: dict[int, int]) -> None:
        stack = [m]
        while stack:
            x = stack.pop()
            if x == 1:
                continue
            if x <= self.trial_limit ** 2 or is_probable_prime(x):
                # after trial division every cofactor below limit^2 is prime
                found[x] = found.get(x, 0) + 1
                continue
            b, k = perfect_power(x)
            if k > 1:
                stack.extend([b] * k)
                continue
            d = self._rho(x)
            stack.extend([d, x // d])

    def _rho(self, n: int) -> int:
        # Brent's variant; spends at most rho_steps multiplications overall
        steps = 0
        for c in range(1, 64):
            y, r, q, g = 2, 1, 1, 1
            x = ys = y
            while g == 1:
                x = y
                for _ in range(r):
                    y = (y * y + c) % n
                k = 0
                while k < r and g == 1:
                    ys = y
                    for _ in range(min(128, r - k)):
                        y = (y * y + c) % n
                        q = q * abs(x - y) % n
                    g = math.gcd(q, n)
                    k += 128
                    steps += 128
                    if steps > self.rho_steps:
                        raise OracleBudgetExceeded(f"could not split {n} within {self.rho_steps} rho steps")
                r *= 2
            if g == n:
                g = 1
                while g == 1:
                    ys = (ys * ys + c) % n
                    g = math.gcd(abs(x - ys), n)
            if g != n:
                return g
        raise OracleBudgetExceeded(f"could not split {n}")


DEFAULT_ORACLE = FactorOracle()


def factor_oracle(n: int, oracle: FactorOracle | None = None) -> list[tuple[int, int]]:
    return (oracle or DEFAULT_ORACLE).factor(n)


def rad(n: int, oracle: FactorOracle | None = None) -> int:
    return math.prod(p for p, _ in factor_oracle(n, oracle))


def is_squarefree(n: int, oracle: FactorOracle | None = None) -> bool:
    return all(e == 1 for _, e in factor_oracle(n, oracle))


def is_prime(n: int) -> bool:
    return is_probable_prime(n)


def prime_power_base(n: int) -> int | None:
    """Return p if ``n = p^k`` for a prime p and k >= 1, else None."""
    if n < 2:
        return None
    b, _ = perfect_power(n)
    return b if is_probable_prime(b) else None
