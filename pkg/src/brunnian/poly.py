"""Univariate polynomials over F_p.

Coefficients are stored constant term first as canonical residues in [0, p).
The text form follows the notation of published primitive-polynomial tables,
e.g. ``x^7+x^6+2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import DomainError, ParseError
from .ff import Factorization, FieldElement, check_prime, factorize, multiplicative_order

MAX_EXPONENT = 100_000


def _strip(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[int, ...]
    p: int
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], p: int, warnings: Sequence[str] = ()) -> Polynomial:
        check_prime(p)
        return cls(tuple(_strip([int(c) % p for c in coeffs])), p, tuple(warnings))

    @classmethod
    def x(cls, p: int) -> Polynomial:
        return cls.from_coeffs([0, 1], p)

    @classmethod
    def constant(cls, c: int, p: int) -> Polynomial:
        return cls.from_coeffs([c], p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def coefficient(self, i: int) -> FieldElement:
        return FieldElement(self[i], self.p)

    def __bool__(self):
        return bool(self.coeffs)

    def _check(self, other: Polynomial):
        if self.p != other.p:
            raise DomainError(f"mixing polynomials over F_{self.p} and F_{other.p}")

    def __add__(self, other: Polynomial) -> Polynomial:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial.from_coeffs([self[i] + other[i] for i in range(n)], self.p)

    def __neg__(self) -> Polynomial:
        return Polynomial.from_coeffs([-c for c in self.coeffs], self.p)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial | int) -> Polynomial:
        if isinstance(other, int):
            return Polynomial.from_coeffs([c * other for c in self.coeffs], self.p)
        self._check(other)
        return Polynomial.from_coeffs(_mul(self.coeffs, other.coeffs), self.p)

    __rmul__ = __mul__

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        self._check(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        inv_lead = pow(other.coeffs[-1], -1, p)
        rem = list(self.coeffs)
        d = other.degree
        quot = [0] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i] * inv_lead % p
            if c:
                quot[i - d] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - d + j] = (rem[i - d + j] - c * b) % p
        return Polynomial.from_coeffs(quot, p), Polynomial.from_coeffs(rem[:d], p)

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def monic(self) -> Polynomial:
        if not self:
            raise DomainError("zero polynomial has no monic associate")
        return self * pow(self.coeffs[-1], -1, self.p)

    def __str__(self) -> str:
        return format_poly(self)


def _mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _reduce(r: list[int], f: Sequence[int], p: int) -> list[int]:
    """Reduce the raw integer coefficient list r modulo the monic f."""
    n = len(f) - 1
    for i in range(len(r) - 1, n - 1, -1):
        c = r[i] % p
        if c:
            base = i - n
            for j in range(n):
                r[base + j] -= c * f[j]
    return [c % p for c in r[:n]] + [0] * max(0, n - len(r))


def _check_modulus(f: Polynomial):
    if f.degree < 1:
        raise DomainError(f"modulus {f} must have degree >= 1")
    if not f.is_monic:
        raise DomainError(f"modulus {f} must be monic")


def mulmod(a: Polynomial, b: Polynomial, f: Polynomial) -> Polynomial:
    _check_modulus(f)
    return Polynomial.from_coeffs(_reduce(_mul(a.coeffs, b.coeffs), f.coeffs, f.p), f.p)


def powmod(base: Polynomial, e: int, f: Polynomial) -> Polynomial:
    """base**e mod f by left-to-right square-and-multiply."""
    _check_modulus(f)
    p, fc = f.p, f.coeffs
    b = _reduce(list(base.coeffs), fc, p)
    acc = [1]
    for bit in bin(e)[2:]:
        acc = _reduce(_mul(acc, acc), fc, p)
        if bit == "1":
            acc = _reduce(_mul(acc, b), fc, p)
    return Polynomial.from_coeffs(acc, p)


def poly_powmod(e: int, f: Polynomial) -> Polynomial:
    """X**e reduced modulo the monic f."""
    _check_modulus(f)
    p, fc = f.p, f.coeffs
    n = f.degree
    acc = [1]
    for bit in bin(e)[2:]:
        acc = _reduce(_mul(acc, acc), fc, p)
        if bit == "1":
            acc = [0] + acc
            if len(acc) > n:
                acc = _reduce(acc, fc, p)
    return Polynomial.from_coeffs(acc, p)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd (zero if both inputs are zero)."""
    while b:
        a, b = b, a % b
    return a.monic() if a else a


def is_irreducible(f: Polynomial) -> bool:
    """Rabin's irreducibility test for monic f of degree >= 1."""
    _check_modulus(f)
    n, p = f.degree, f.p
    x = Polynomial.x(p)
    frob = [x % f]  # frob[k] = X^(p^k) mod f
    for _ in range(n):
        frob.append(powmod(frob[-1], p, f))
    if frob[n] != frob[0]:
        return False
    for q in factorize(n).primes:
        if poly_gcd(frob[n // q] - x, f).degree != 0:
            return False
    return True


def _order_of_x_with(f: Polynomial, fac: Factorization) -> int:
    e = fac.n
    one = Polynomial.constant(1, f.p)
    for q, k in fac.factors:
        for _ in range(k):
            if poly_powmod(e // q, f) == one:
                e //= q
            else:
                break
    return e


def is_primitive(f: Polynomial) -> bool:
    """True iff f is irreducible and X has order p^n - 1 modulo f."""
    _check_modulus(f)
    if f[0] == 0:
        return False
    n, p = f.degree, f.p
    if n == 1:  # X = -a0 in F_p
        return multiplicative_order(-f[0] % p, factorize(p - 1), p) == p - 1
    if not is_irreducible(f):
        return False
    fac = factorize(p**n - 1)
    one = Polynomial.constant(1, p)
    return all(poly_powmod(fac.n // q, f) != one for q in fac.primes)


def _merge(facs: Sequence[Factorization]) -> Factorization:
    """Factorization of the lcm of the given numbers."""
    exps: dict[int, int] = {}
    for fac in facs:
        for q, e in fac.factors:
            exps[q] = max(exps.get(q, 0), e)
    items = tuple(sorted(exps.items()))
    return Factorization(math.prod(q**e for q, e in items), items)


def order_of_x(f: Polynomial) -> int | None:
    """Multiplicative order of X in F_p[X]/(f), or None when X is not a unit.

    Works for reducible f too: the exponent of the unit group divides
    lcm(p^d - 1 : d <= n) * p^t with p^t >= n.
    """
    _check_modulus(f)
    if f[0] == 0:
        return None
    n, p = f.degree, f.p
    if is_irreducible(f):
        return _order_of_x_with(f, factorize(p**n - 1))
    t = 0
    while p**t < n:
        t += 1
    parts = [factorize(p**d - 1) for d in range(1, n + 1)]
    if t:
        parts.append(Factorization(p**t, ((p, t),)))
    return _order_of_x_with(f, _merge(parts))


def iter_monic(p: int, n: int) -> Iterator[Polynomial]:
    """All monic degree-n polynomials, lexicographic with a0 varying fastest."""
    for k in range(p**n):
        digits = []
        for _ in range(n):
            k, d = divmod(k, p)
            digits.append(d)
        yield Polynomial(tuple(digits) + (1,), p)


@lru_cache(maxsize=None)
def search_primitive(p: int, n: int) -> Polynomial:
    """First primitive polynomial of degree n in ``iter_monic`` order."""
    check_prime(p)
    if n < 1:
        raise DomainError("degree must be >= 1")
    for f in iter_monic(p, n):
        if f[0] and is_primitive(f):
            return f
    raise AssertionError(f"no primitive polynomial of degree {n} over F_{p}")


# -- text form -------------------------------------------------------------


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def nat(self) -> int | None:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return int(self.text[start : self.pos]) if self.pos > start else None

    def fail(self, message: str):
        raise ParseError(message, self.text, self.pos)


def _parse_term(sc: _Scanner) -> tuple[int, int]:
    coeff = sc.nat()
    star = coeff is not None and sc.take("*")
    if sc.peek() in ("x", "X"):
        sc.pos += 1
        exp = 1
        if sc.take("^"):
            braced = sc.take("{")
            start = sc.pos
            exp = sc.nat()
            if exp is None:
                sc.fail("expected exponent")
            if exp > MAX_EXPONENT:
                sc.pos = start
                sc.fail(f"exponent exceeds {MAX_EXPONENT}")
            if braced and not sc.take("}"):
                sc.fail("expected '}'")
        return (1 if coeff is None else coeff), exp
    if coeff is None or star:
        sc.fail("expected coefficient or 'x'")
    return coeff, 0


def parse_poly(text: str, p: int) -> Polynomial:
    """Parse ``text`` such as ``x^7+x^6+2`` into a polynomial over F_p.

    Repeated exponents are summed mod p and reported in ``warnings``.
    """
    check_prime(p)
    sc = _Scanner(text)
    if not sc.peek():
        sc.fail("empty polynomial")
    terms: dict[int, list[int]] = {}
    while True:
        c, e = _parse_term(sc)
        terms.setdefault(e, []).append(c)
        if not sc.peek():
            break
        if not sc.take("+"):
            sc.fail("expected '+'")
    warnings = []
    coeffs = [0] * (max(terms) + 1)
    for e, cs in terms.items():
        coeffs[e] = sum(cs) % p
        if len(cs) > 1:
            mono = "1" if e == 0 else ("x" if e == 1 else f"x^{e}")
            warnings.append(
                f"duplicate term {mono}: coefficients {'+'.join(map(str, cs))} summed to {coeffs[e]} mod {p}"
            )
    return Polynomial.from_coeffs(coeffs, p, warnings)


def format_poly(f: Polynomial) -> str:
    if not f:
        return "0"
    parts = []
    for e in range(f.degree, -1, -1):
        c = f[e]
        if not c:
            continue
        if e == 0:
            parts.append(str(c))
        else:
            mono = "x" if e == 1 else f"x^{e}"
            parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(parts)
