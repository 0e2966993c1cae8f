import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epq_descent.arith import (
    PRIMALITY_BOUND,
    class_mul,
    class_sort_key,
    divisors,
    factorize,
    integer_sqrt,
    is_perfect_square,
    is_prime,
    is_squarefree,
    jacobi_symbol,
    legendre_symbol,
    square_class,
    squarefree_classes,
    squarefree_part,
)

from oracles import euler_symbol, jacobi_by_factoring, squarefree_by_trial, trial_prime

ODD_PRIMES = [p for p in range(3, 1000) if trial_prime(p)]


@pytest.mark.parametrize("a,p,expected", [(5, 73, -1), (-1, 7, -1), (1, 101, 1), (73, 73, 0)])
def test_legendre_examples(a, p, expected):
    assert legendre_symbol(a, p) == expected


def test_legendre_rejects_non_prime():
    with pytest.raises(ValueError):
        legendre_symbol(2, 15)
    with pytest.raises(ValueError):
        legendre_symbol(3, 2)


@pytest.mark.parametrize("a,n,expected", [(7, 1, 1), (5, 73, -1), (2, 15, 1), (0, 9, 0)])
def test_jacobi_examples(a, n, expected):
    assert jacobi_symbol(a, n) == expected


def test_jacobi_rejects_even_modulus():
    with pytest.raises(ValueError):
        jacobi_symbol(3, 8)


@given(st.sampled_from(ODD_PRIMES), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_legendre_multiplicative(p, a, b):
    assert legendre_symbol(a * b, p) == legendre_symbol(a, p) * legendre_symbol(b, p)


@given(st.integers(1, 4000).map(lambda k: 2 * k + 1), st.integers(-10**9, 10**9))
def test_jacobi_matches_factored_product(n, a):
    assert jacobi_symbol(a, n) == jacobi_by_factoring(a, n)


@given(st.integers(1, 10**5).map(lambda k: 2 * k + 1), st.integers(1, 10**5).map(lambda k: 2 * k + 1))
def test_quadratic_reciprocity(m, n):
    if math.gcd(m, n) != 1:
        assert jacobi_symbol(m, n) == 0
        return
    sign = -1 if (m % 4 == 3 and n % 4 == 3) else 1
    assert jacobi_symbol(m, n) * jacobi_symbol(n, m) == sign


@pytest.mark.parametrize("n,expected", [(73, True), (1, False), (2555, False), (2, True), (0, False), (-7, False)])
def test_is_prime_examples(n, expected):
    assert is_prime(n) is expected


def test_is_prime_matches_trial_division():
    assert [n for n in range(20000) if is_prime(n)] == [n for n in range(20000) if trial_prime(n)]


@pytest.mark.parametrize("n", [561, 1105, 1729, 2465, 3215031751, 3825123056546413051])
def test_is_prime_rejects_pseudoprimes(n):
    assert not is_prime(n)


def test_is_prime_large_known_values():
    assert is_prime(2**61 - 1)
    assert is_prime(2**31 - 1)
    assert not is_prime(2**67 - 1)  # 193707721 * 761838257287


def test_is_prime_refuses_beyond_bound():
    with pytest.raises(ValueError):
        is_prime(PRIMALITY_BOUND)  # itself a strong pseudoprime to the first 12 bases


@pytest.mark.parametrize("n,r", [(81, 9), (0, 0), (1296, 36), (1295, 35)])
def test_integer_sqrt_examples(n, r):
    assert integer_sqrt(n) == r


@given(st.integers(0, 2**128))
def test_integer_sqrt_brackets(n):
    r = integer_sqrt(n)
    assert r * r <= n < (r + 1) ** 2


def test_integer_sqrt_negative():
    with pytest.raises(ValueError):
        integer_sqrt(-1)


@pytest.mark.parametrize("n,expected", [(81, True), (2, False), (-4, False), (0, True)])
def test_is_perfect_square_examples(n, expected):
    assert is_perfect_square(n) is expected


@given(st.integers(1, 10**24))
def test_factorize_reconstructs(n):
    f = factorize(n)
    assert math.prod(p**k for p, k in f.items()) == n
    assert all(is_prime(p) for p in f)
    assert list(f) == sorted(f)


def test_factorize_semiprime_needs_rho():
    p, q = 1000003, 998244353
    assert factorize(p * q) == {p: 1, q: 1}


@given(st.integers(-10**8, 10**8).filter(bool))
def test_squarefree_part_matches_trial(n):
    s = squarefree_part(n)
    assert s == squarefree_by_trial(n)
    assert is_squarefree(s)
    assert is_perfect_square(n // s) and n % s == 0


@pytest.mark.parametrize("x,y,expected", [(5, 5, 1), (-5, 7, -35), (10, 15, 6), (-1, -1, 1)])
def test_class_mul_examples(x, y, expected):
    assert class_mul(x, y) == expected


@given(st.integers(-10**6, 10**6).filter(bool), st.integers(-10**6, 10**6).filter(bool))
def test_class_mul_is_product_mod_squares(x, y):
    x, y = square_class(x), square_class(y)
    assert class_mul(x, y) == squarefree_by_trial(x * y)


def test_squarefree_classes_examples():
    assert squarefree_classes(-2555) == {
        s * v for s in (1, -1) for v in (1, 5, 7, 73, 35, 365, 511, 2555)
    }
    assert squarefree_classes(1) == {1, -1}
    assert squarefree_classes(4) == {1, -1, 2, -2}


def test_class_group_axioms_exhaustive():
    G = squarefree_classes(-2555)
    assert len(G) == 16
    for x in G:
        assert class_mul(x, 1) == x
        assert class_mul(x, x) == 1
        for y in G:
            assert class_mul(x, y) in G
            assert class_mul(x, y) == class_mul(y, x)
    for x, y, z in itertools.product(G, repeat=3):
        assert class_mul(class_mul(x, y), z) == class_mul(x, class_mul(y, z))


@given(st.integers(-10**7, 10**7).filter(bool))
@settings(max_examples=50)
def test_squarefree_classes_closed(b):
    G = squarefree_classes(b)
    assert all(class_mul(x, y) in G for x in G for y in G)
    assert len(G) & (len(G) - 1) == 0


def test_class_sort_key_order():
    assert sorted([-2, 5, -1, 2, 1], key=class_sort_key) == [1, -1, 2, -2, 5]


@given(st.integers(1, 10**6))
def test_divisors(n):
    ds = divisors(n)
    assert ds == sorted(d for d in set(ds))
    assert all(n % d == 0 for d in ds)
    assert len(ds) == math.prod(k + 1 for k in factorize(n).values())
