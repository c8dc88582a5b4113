import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from brunnian.errors import DomainError, InfeasibleError
from brunnian.ff import (
    Factorization,
    FieldElement,
    check_prime,
    element_order,
    factorize,
    fp_pow,
    is_generator,
    is_prime,
    prime_count,
    primes_up_to,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 31, 97, 101, 7919]
primes_st = st.sampled_from(SMALL_PRIMES)


def F(v, p=5):
    return FieldElement(v, p)


def test_sieve_matches_sympy():
    assert primes_up_to(1000).tolist() == list(sympy.primerange(2, 1001))
    assert primes_up_to(1).tolist() == []
    for n in (2, 10, 100, 1000, 10_000, 65_537):
        assert prime_count(n) == sympy.primepi(n)


@given(st.integers(min_value=-5, max_value=10**13))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@pytest.mark.parametrize("n", [561, 1105, 3215031751, 2**61 - 1, 2**89 - 1, 2**64 + 13, 10**18 + 9])
def test_is_prime_hard_cases(n):
    assert is_prime(n) == sympy.isprime(n)


@pytest.mark.parametrize(
    "n, factors",
    [(124, ((2, 2), (31, 1))), (1, ()), (78124, ((2, 2), (19531, 1))), (2, ((2, 1),))],
)
def test_factorize_examples(n, factors):
    fac = factorize(n)
    assert fac.factors == factors
    assert fac.value() == n


@settings(max_examples=200)
@given(st.integers(min_value=1, max_value=10**15))
def test_factorize_matches_sympy(n):
    assert dict(factorize(n).factors) == sympy.factorint(n)


def test_factorize_beyond_trial_division():
    a, b = sympy.nextprime(10**11), sympy.nextprime(10**12)
    assert factorize(a * b).factors == ((a, 1), (b, 1))
    assert dict(factorize(5**40 - 1).factors) == sympy.factorint(5**40 - 1)


def test_factorize_errors():
    with pytest.raises(DomainError):
        factorize(0)
    a, b = sympy.nextprime(10**15), sympy.nextprime(3 * 10**15)
    with pytest.raises(InfeasibleError, match=str(a * b)):
        factorize(a * b, rho_cap=50)


def test_factorization_str():
    assert str(factorize(124)) == "2^2*31"
    assert Factorization(1, ()).primes == ()


def test_check_prime():
    assert check_prime(7) == 7
    for bad in (0, 1, 4, -3, 91):
        with pytest.raises(DomainError):
            check_prime(bad)


@given(primes_st, st.integers(), st.integers(), st.integers())
def test_field_axioms(p, a, b, c):
    x, y, z = FieldElement(a, p), FieldElement(b, p), FieldElement(c, p)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - y + y == x
    assert x + (-x) == 0
    assert int(x * y) == a * b % p
    if x:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


def test_field_element_int_interop():
    assert F(3) + 4 == 2
    assert 4 - F(3) == 1
    assert 2 * F(3) == 1
    assert F(7) == F(2)
    assert hash(F(7)) == hash(F(2))
    assert F(-1).value == 4


def test_field_element_errors():
    with pytest.raises(DomainError):
        F(1) + FieldElement(1, 7)
    with pytest.raises(DomainError):
        F(0).inverse()
    with pytest.raises(DomainError):
        FieldElement(1, 6)


@pytest.mark.parametrize("base, exp, out", [(3, 7, 2), (2, 4, 1), (0, 0, 1), (4, -1, 4)])
def test_fp_pow_examples(base, exp, out):
    assert fp_pow(F(base), exp) == out


@given(primes_st, st.integers(), st.integers(min_value=0, max_value=300))
def test_fp_pow_matches_repeated_multiplication(p, a, e):
    x = FieldElement(a, p)
    acc = FieldElement(1, p)
    for _ in range(e):
        acc = acc * x
    assert fp_pow(x, e) == acc
    assert fp_pow(x, 1) == x


@pytest.mark.parametrize("x, order", [(2, 4), (1, 1), (4, 2), (3, 4)])
def test_element_order_examples(x, order):
    assert element_order(F(x)) == order


@given(primes_st, st.integers(min_value=1))
def test_element_order_brute(p, a):
    x = FieldElement(a, p)
    if not x:
        return
    k, acc = 1, x
    while acc != 1:
        acc, k = acc * x, k + 1
    assert element_order(x) == k
    assert is_generator(x) == (k == p - 1)
    assert (p - 1) % k == 0


def test_is_generator_examples():
    assert is_generator(F(2))
    assert not is_generator(F(1))
    assert not is_generator(F(4))
    with pytest.raises(DomainError):
        element_order(F(0))
    with pytest.raises(DomainError):
        is_generator(F(0))


def test_generator_count_is_totient():
    for p in (5, 7, 11, 101, 7919):
        assert sum(is_generator(FieldElement(x, p)) for x in range(1, p)) == sympy.totient(p - 1)


def test_element_order_with_multiple_of_group_order():
    x = FieldElement(2, 11)
    assert element_order(x, factorize(11**2 - 1)) == 10
    with pytest.raises(DomainError):
        element_order(x, factorize(7))
    assert math.gcd(element_order(x), 10) == 10
