"""Brute-force reference computations, deliberately independent of the library."""

from __future__ import annotations

import itertools
import math

import numpy as np
import sympy


def brute_primitive_flags(p: int, n: int) -> np.ndarray:
    """Primitivity of every monic degree-n f over F_p, indexed by sum a_i p^i.

    Walks X, X^2, ... modulo all f at once; f is primitive exactly when the
    first power equal to 1 is X^(p^n - 1).
    """
    assert n >= 2
    m = p**n
    coeffs = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)[:, ::-1]
    # coeffs[k] = (a_0, ..., a_{n-1}) with a_0 varying fastest in k
    flags = np.zeros(m, dtype=bool)
    active = np.flatnonzero(coeffs[:, 0] != 0)  # X is a zero divisor when f(0) = 0
    state = np.zeros((active.size, n), dtype=np.int64)
    state[:, 1] = 1
    one = np.zeros(n, dtype=np.int64)
    one[0] = 1
    for e in range(1, m):
        hit = np.all(state == one, axis=1)
        if e < m - 1:
            keep = ~hit
            active, state = active[keep], state[keep]
        else:
            flags[active[hit]] = True
            break
        top = state[:, -1].copy()
        state[:, 1:] = state[:, :-1]
        state[:, 0] = 0
        state = (state - top[:, None] * coeffs[active]) % p
    return flags


def brute_generator_flags(p: int) -> np.ndarray:
    """flags[x] is True iff x generates F_p^*, found by walking powers of a generator."""
    flags = np.zeros(p, dtype=bool)
    for g in range(1, p):
        log = {}
        x, k = 1, 0
        while x not in log:
            log[x] = k
            x, k = x * g % p, k + 1
        if k == p - 1:
            for y, e in log.items():
                flags[y] = math.gcd(e, p - 1) == 1
            return flags
    raise AssertionError("no generator found")


def brute_order(a: list[list[int]], p: int) -> int:
    """Order of an invertible matrix by repeated multiplication."""
    n = len(a)
    A = np.array(a, dtype=np.int64) % p
    eye = np.eye(n, dtype=np.int64)
    acc, k = A.copy(), 1
    while not np.array_equal(acc, eye):
        acc, k = acc @ A % p, k + 1
    return k


def brute_gl_order(n: int, p: int) -> int:
    """Count invertible n x n matrices by enumerating all of them (tiny cases only)."""
    count = 0
    for entries in itertools.product(range(p), repeat=n * n):
        m = sympy.Matrix(n, n, list(entries))
        count += int(m.det()) % p != 0
    return count
