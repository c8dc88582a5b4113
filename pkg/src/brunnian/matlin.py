"""Dense square matrices and column vectors over F_p.

Basis vectors are numbered 1..n in the public helpers (``basis_vector(k)`` is
E_k); rows, columns and tuple positions are 0-based everywhere else, so E_k
has its single 1 at position k - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, NotCompanionError, SingularMatrixError
from .ff import FieldElement, check_prime
from .poly import Polynomial


@dataclass(frozen=True)
class Vector:
    entries: tuple[int, ...]
    p: int

    @classmethod
    def of(cls, entries: Sequence[int], p: int) -> Vector:
        return cls(tuple(int(x) % p for x in entries), p)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __add__(self, other: Vector) -> Vector:
        return Vector.of([a + b for a, b in zip(self.entries, other.entries)], self.p)

    def __rmul__(self, scalar: int | FieldElement) -> Vector:
        s = int(scalar)
        return Vector.of([s * a for a in self.entries], self.p)


def basis_vector(k: int, n: int, p: int) -> Vector:
    """E_k, 1-based: E_1 = (1, 0, ..., 0)."""
    if not 1 <= k <= n:
        raise DomainError(f"basis index {k} outside 1..{n}")
    return Vector(tuple(int(i == k - 1) for i in range(n)), p)


@dataclass(frozen=True)
class Matrix:
    rows: tuple[tuple[int, ...], ...]
    p: int

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], p: int) -> Matrix:
        check_prime(p)
        rows = tuple(tuple(int(x) % p for x in r) for r in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise DomainError("matrix must be square and non-empty")
        return cls(rows, p)

    @classmethod
    def identity(cls, n: int, p: int) -> Matrix:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), p)

    @classmethod
    def diagonal(cls, diag: Sequence[int], p: int) -> Matrix:
        n = len(diag)
        return cls.of([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], p)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.rows[i][j], self.p)

    def column(self, j: int) -> Vector:
        return Vector(tuple(r[j] for r in self.rows), self.p)

    def _check(self, other):
        if self.p != other.p:
            raise DomainError(f"mixing F_{self.p} and F_{other.p}")
        if self.n != (other.n if isinstance(other, Matrix) else len(other)):
            raise DomainError("dimension mismatch")

    def __matmul__(self, other):
        self._check(other)
        p = self.p
        if isinstance(other, Vector):
            return Vector(tuple(sum(a * b for a, b in zip(r, other.entries)) % p for r in self.rows), p)
        cols = list(zip(*other.rows))
        return Matrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in self.rows), p)

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        return Matrix.of([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.p)

    def __sub__(self, other: Matrix) -> Matrix:
        self._check(other)
        return Matrix.of([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.p)

    def scale(self, c: int) -> Matrix:
        return Matrix.of([[c * a for a in r] for r in self.rows], self.p)

    def transpose(self) -> Matrix:
        return Matrix(tuple(zip(*self.rows)), self.p)

    def inverse(self) -> Matrix:
        return mat_inv(self)

    def __pow__(self, e: int) -> Matrix:
        return mat_pow(self, e)

    def __str__(self):
        w = len(str(self.p - 1))
        return "\n".join("[" + " ".join(str(x).rjust(w) for x in r) + "]" for r in self.rows)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


def _eliminate(a: Matrix, augment: bool) -> tuple[list[list[int]], int, int]:
    """Gauss-Jordan on [A | I] (or A alone); returns (rows, rank, det)."""
    n, p = a.n, a.p
    m = [list(r) + ([int(i == j) for j in range(n)] if augment else []) for i, r in enumerate(a.rows)]
    det, rank = 1, 0
    for col in range(n):
        pivot = next((i for i in range(rank, n) if m[i][col]), None)
        if pivot is None:
            det = 0
            continue
        if pivot != rank:
            m[rank], m[pivot] = m[pivot], m[rank]
            det = -det
        det = det * m[rank][col] % p
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(n):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [(x - c * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return m, rank, det % p


def determinant(a: Matrix) -> int:
    return _eliminate(a, augment=False)[2]


def rank(a: Matrix) -> int:
    return _eliminate(a, augment=False)[1]


def mat_inv(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises SingularMatrixError."""
    m, r, _ = _eliminate(a, augment=True)
    if r < a.n:
        raise SingularMatrixError(f"matrix of rank {r} < {a.n} is singular")
    return Matrix(tuple(tuple(row[a.n :]) for row in m), a.p)


def mat_pow(a: Matrix, e: int) -> Matrix:
    if e < 0:
        return mat_pow(mat_inv(a), -e)
    result = Matrix.identity(a.n, a.p)
    base = a
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def companion(f: Polynomial) -> Matrix:
    """Companion matrix: ones on the subdiagonal, last column -a_0, ..., -a_{n-1}."""
    if not f.is_monic or f.degree < 1:
        raise DomainError(f"companion matrix needs a monic polynomial of degree >= 1, got {f}")
    n, p = f.degree, f.p
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = -f[i] % p
    return Matrix(tuple(map(tuple, rows)), p)


def as_companion_poly(a: Matrix) -> Polynomial:
    """Recover monic g with a == companion(g); exact entry-wise shape test."""
    n = a.n
    if n < 2:
        raise NotCompanionError("companion shape test needs n >= 2")
    for i in range(n):
        for j in range(n - 1):
            if a[i, j] != int(i == j + 1):
                raise NotCompanionError(f"entry ({i + 1},{j + 1}) breaks companion shape")
    return Polynomial.from_coeffs([-a[i, n - 1] for i in range(n)] + [1], a.p)
