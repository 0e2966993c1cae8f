"""Exact integer number theory used throughout the package.

Square classes (elements of Q*/Q*^2) are plain ints: the signed squarefree
representative of the class.
"""

from __future__ import annotations

import math
import random
from functools import reduce
from itertools import product

SquareClass = int

# Deterministic Miller-Rabin with the first 13 prime bases is exact below
# this bound (Sorenson & Webster, 2015: psi_13 > 3.3 * 10^24).
PRIMALITY_BOUND = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def integer_sqrt(n: int) -> int:
    """Return floor(sqrt(n)) for n >= 0."""
    if n < 0:
        raise ValueError(f"integer_sqrt of negative number {n}")
    return math.isqrt(n)


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for all n < PRIMALITY_BOUND.

    Larger inputs raise ValueError instead of returning a probabilistic answer.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n >= PRIMALITY_BOUND:
        raise ValueError(f"{n} exceeds the certified primality range (< {PRIMALITY_BOUND})")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by the reciprocity iteration."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    if p <= 2 or not is_prime(p):
        raise ValueError(f"Legendre symbol needs an odd prime modulus, got {p}")
    return jacobi_symbol(a, p)


def _pollard_rho(n: int) -> int:
    # n is odd, composite and not a perfect power of a small prime
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        f = lambda v: (v * v + c) % n  # noqa: E731
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; n must be nonzero."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # wheel-free trial division up to a small cutoff, then rho
    p = 7
    while p * p <= n and p < 10_000:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return dict(sorted(factors.items()))


def squarefree_part(n: int) -> SquareClass:
    """Canonical representative of the square class of a nonzero integer."""
    if n == 0:
        raise ValueError("0 has no square class")
    core = 1
    for p, k in factorize(n).items():
        if k % 2:
            core *= p
    return -core if n < 0 else core


def is_squarefree(n: int) -> bool:
    return n != 0 and all(k == 1 for k in factorize(n).values())


def square_class(n: int) -> SquareClass:
    return squarefree_part(n)


def class_mul(x: SquareClass, y: SquareClass) -> SquareClass:
    """Product in Q*/Q*^2 of two squarefree representatives."""
    g = math.gcd(x, y)
    # x*y = g^2 * (x/g)*(y/g), and x/g, y/g are coprime and squarefree
    return (x // g) * (y // g)


def squarefree_classes(b: int) -> set[SquareClass]:
    """All signed square classes of divisors of b.

    These are the sign times every product of distinct primes dividing b.
    """
    if b == 0:
        raise ValueError("squarefree_classes needs b != 0")
    primes = list(factorize(b))
    out = set()
    for mask in product((0, 1), repeat=len(primes)):
        d = reduce(lambda acc, pk: acc * (pk[0] if pk[1] else 1), zip(primes, mask), 1)
        out.add(d)
        out.add(-d)
    return out


def class_sort_key(c: SquareClass) -> tuple[int, bool]:
    """Ascending |value|, positive before negative."""
    return (abs(c), c < 0)


def divisors(n: int) -> list[int]:
    """Positive divisors of |n|, ascending."""
    divs = [1]
    for p, k in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(k + 1)]
    return sorted(divs)
