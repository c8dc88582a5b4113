"""Prime-field arithmetic, multiplicative orders and integer factorization."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, InfeasibleError

TRIAL_DIVISION_BOUND = 10**6
RHO_ITERATION_CAP = 2_000_000

# Deterministic Miller-Rabin witnesses; exact for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def primes_up_to(limit: int) -> np.ndarray:
    """Sieve of Eratosthenes; returns all primes <= limit in increasing order."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve)


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    return tuple(int(q) for q in primes_up_to(TRIAL_DIVISION_BOUND))


def prime_count(limit: int) -> int:
    return int(primes_up_to(limit).size)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < 3_317_044_064_679_887_385_961_981 else _MR_BASES + tuple(
        random.Random(n).randrange(2, n - 1) for _ in range(24)
    )
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    def value(self) -> int:
        return math.prod(q**e for q, e in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{q}^{e}" if e > 1 else str(q) for q, e in self.factors)


def _pollard_brent(n: int, cap: int, seed: int) -> int | None:
    """Return a nontrivial factor of composite odd n, or None if the cap runs out."""
    rng = random.Random(seed)
    spent = 0
    while spent < cap:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1 and spent < cap:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


@lru_cache(maxsize=4096)
def factorize(n: int, rho_cap: int = RHO_ITERATION_CAP) -> Factorization:
    """Complete prime factorization of n >= 1.

    Trial division by primes below ``TRIAL_DIVISION_BOUND``, then Pollard-Brent
    rho on whatever cofactor remains.  Raises InfeasibleError naming the
    cofactor if rho exhausts ``rho_cap`` iterations.
    """
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    counts: dict[int, int] = {}
    m = n
    for q in _small_primes():
        if q * q > m:
            break
        while m % q == 0:
            counts[q] = counts.get(q, 0) + 1
            m //= q
    stack = [m] if m > 1 else []
    while stack:
        c = stack.pop()
        if is_prime(c):
            counts[c] = counts.get(c, 0) + 1
            continue
        r = math.isqrt(c)
        if r * r == c:
            stack += [r, r]
            continue
        d = _pollard_brent(c, rho_cap, seed=c)
        if d is None:
            raise InfeasibleError(f"could not split cofactor {c} of {n} within {rho_cap} rho iterations")
        stack += [d, c // d]
    return Factorization(n, tuple(sorted(counts.items())))


def multiplicative_order(x: int, group_order: Factorization, modulus: int) -> int:
    """Least e >= 1 with x**e == 1 (mod modulus), given the order of an enclosing group."""
    e = group_order.n
    for q, k in group_order.factors:
        for _ in range(k):
            if pow(x, e // q, modulus) == 1:
                e //= q
            else:
                break
    return e


@lru_cache(maxsize=None)
def _validated_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"{p!r} is not a prime")
    return p


def check_prime(p: int) -> int:
    """Validate that p is prime (memoized) and return it."""
    return _validated_prime(p)


@dataclass(frozen=True)
class FieldElement:
    """A residue modulo the prime ``modulus``; always stored in [0, p)."""

    value: int
    modulus: int

    def __post_init__(self):
        check_prime(self.modulus)
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise DomainError(f"mixing F_{self.modulus} and F_{other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def _make(self, v: int) -> FieldElement:
        return FieldElement(v % self.modulus, self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise DomainError("zero has no inverse")
        return self._make(pow(self.value, -1, self.modulus))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * self._make(o).inverse()

    def __pow__(self, exp: int):
        return fp_pow(self, exp)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


def fp_pow(base: FieldElement, exp: int) -> FieldElement:
    """base**exp in F_p; exponent 0 gives 1, including for base 0."""
    if exp < 0:
        return fp_pow(base.inverse(), -exp)
    return FieldElement(pow(base.value, exp, base.modulus), base.modulus)


def element_order(x: FieldElement, group_order_factorization: Factorization | None = None) -> int:
    if x.value == 0:
        raise DomainError("zero has no multiplicative order")
    fac = group_order_factorization or factorize(x.modulus - 1)
    if fac.n % (x.modulus - 1) != 0:
        raise DomainError(f"{fac.n} is not a multiple of p-1 = {x.modulus - 1}")
    return multiplicative_order(x.value, fac, x.modulus)


def is_generator(x: FieldElement) -> bool:
    """True iff x generates the multiplicative group of F_p."""
    return element_order(x, factorize(x.modulus - 1)) == x.modulus - 1
