"""Permutation groups on the nonzero vectors of F_p^n and Schreier-Sims chains.

An invertible matrix acts faithfully on the p^n - 1 nonzero column vectors.
Vector (v_1, ..., v_n) is the point sum(v_i * p^(i-1)) - 1.  Permutations are
numpy integer arrays ``g`` with ``g[x]`` the image of point ``x``; products
act left to right, so ``(a * b)[x] = b[a[x]]``, written ``b[a]`` in numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, InfeasibleError, SingularMatrixError
from .matlin import Matrix, determinant

DEFAULT_POINT_BUDGET = 200_000
DEFAULT_CACHE_BYTES = 1 << 30


def gl_order(n: int, p: int) -> int:
    """|GL_n(F_p)| = prod_{i<n} (p^n - p^i)."""
    if n < 1:
        raise DomainError("dimension must be >= 1")
    return math.prod(p**n - p**i for i in range(n))


class PointEncoding:
    """Bijection between nonzero vectors of F_p^n and points 0..p^n - 2."""

    def __init__(self, n: int, p: int, point_budget: int = DEFAULT_POINT_BUDGET):
        self.n, self.p = n, p
        self.point_count = p**n - 1
        if self.point_count > point_budget:
            raise InfeasibleError(
                f"p^n - 1 = {self.point_count} points exceeds the point budget {point_budget}"
            )
        self.weights = p ** np.arange(n, dtype=np.int64)
        idx = np.arange(1, self.point_count + 1, dtype=np.int64)
        self.vectors = (idx[:, None] // self.weights[None, :]) % p

    def index(self, v: Sequence[int]) -> int:
        k = sum((int(x) % self.p) * self.p**i for i, x in enumerate(v)) - 1
        if k < 0:
            raise DomainError("the zero vector is not a point")
        return k

    def vector(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.vectors[i])

    def basis_points(self) -> list[int]:
        """Points of E_1, ..., E_n."""
        return [self.p**k - 1 for k in range(self.n)]

    def to_permutation(self, a: Matrix) -> np.ndarray:
        if a.n != self.n or a.p != self.p:
            raise DomainError(f"matrix over F_{a.p} of size {a.n} does not act on F_{self.p}^{self.n}")
        if determinant(a) == 0:
            raise SingularMatrixError("singular matrix does not permute nonzero vectors")
        m = np.array(a.rows, dtype=np.int64)
        images = (self.vectors @ m.T) % self.p
        return (images @ self.weights - 1).astype(np.intp)


def to_permutation(a: Matrix, point_budget: int = DEFAULT_POINT_BUDGET) -> np.ndarray:
    return PointEncoding(a.n, a.p, point_budget).to_permutation(a)


def identity_perm(degree: int) -> np.ndarray:
    return np.arange(degree, dtype=np.intp)


def perm_inverse(g: np.ndarray) -> np.ndarray:
    inv = np.empty_like(g)
    inv[g] = np.arange(g.size, dtype=g.dtype)
    return inv


def perm_order(g: np.ndarray) -> int:
    """Order of g as the lcm of its cycle lengths."""
    seen = np.zeros(g.size, dtype=bool)
    order = 1
    for start in range(g.size):
        if seen[start]:
            continue
        length, x = 0, start
        while not seen[x]:
            seen[x] = True
            x = g[x]
            length += 1
        order = math.lcm(order, length)
    return order


@dataclass
class _Level:
    point: int
    gens: list[int] = field(default_factory=list)  # indices into the strong generator list
    orbit: list[int] = field(default_factory=list)
    # orbit point -> (parent point, strong generator index); the root maps to None
    tree: dict[int, tuple[int, int] | None] = field(default_factory=dict)
    cursor: dict[int, int] = field(default_factory=dict)  # Schreier pairs already sifted


class StabilizerChain:
    """Base and strong generating set built by deterministic Schreier-Sims.

    Coset representatives live implicitly in Schreier trees; their inverses
    are memoized as explicit permutations up to ``cache_bytes``.
    """

    def __init__(self, degree: int, cache_bytes: int = DEFAULT_CACHE_BYTES):
        self.degree = degree
        self.identity = identity_perm(degree)
        self.strong: list[np.ndarray] = []
        self.strong_inv: list[np.ndarray] = []
        self.levels: list[_Level] = []
        self.input_generators: list[np.ndarray] = []
        self._cache: dict[tuple[int, int], np.ndarray] = {}
        self._cache_limit = max(16, cache_bytes // max(1, degree * self.identity.itemsize))

    # -- queries ----------------------------------------------------------

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(lv.orbit) for lv in self.levels]

    def order(self) -> int:
        return math.prod(self.orbit_sizes)

    def _as_perm(self, g) -> np.ndarray:
        g = np.asarray(g, dtype=np.intp)
        if g.shape != (self.degree,):
            raise DomainError(f"permutation on {g.size} points, chain acts on {self.degree}")
        return g

    def sift(self, g, start: int = 0) -> tuple[np.ndarray, int]:
        """Strip g through levels start..; return (residue, level where it stopped)."""
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            beta = int(g[lv.point])
            if beta not in lv.tree:
                return g, i
            if beta != lv.point:
                g = self._uinv(i, beta)[g]
        return g, len(self.levels)

    def contains(self, g) -> bool:
        g = self._as_perm(g)
        residue, level = self.sift(g)
        return level == len(self.levels) and np.array_equal(residue, self.identity)

    # -- transversals -----------------------------------------------------

    def _uinv(self, i: int, beta: int) -> np.ndarray:
        """Inverse of the coset representative u with base_i^u = beta."""
        key = (i, beta)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        tree = self.levels[i].tree
        path = []
        x = beta
        while tree[x] is not None and (i, x) not in self._cache:
            parent, s = tree[x]
            path.append((x, s))
            x = parent
        acc = self._cache.get((i, x), self.identity)
        for x, s in reversed(path):
            acc = acc[self.strong_inv[s]]
            if len(self._cache) < self._cache_limit:
                self._cache[(i, x)] = acc
        return acc

    def _extend_orbit(self, i: int, new_gens: Sequence[int]):
        lv = self.levels[i]
        queue = list(lv.orbit)
        for s in new_gens:
            lv.gens.append(s)
            lv.cursor[s] = 0
        # old points only need the new generators; fresh points need all of them
        gens_for = {x: new_gens for x in queue}
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            for s in gens_for.pop(x, lv.gens):
                y = int(self.strong[s][x])
                if y not in lv.tree:
                    lv.tree[y] = (x, s)
                    lv.orbit.append(y)
                    queue.append(y)

    def _add_level(self, point: int):
        lv = _Level(point)
        lv.tree[point] = None
        lv.orbit.append(point)
        self.levels.append(lv)

    def _add_strong(self, h: np.ndarray, first: int, last: int, base_hint: Sequence[int]):
        idx = len(self.strong)
        self.strong.append(h)
        self.strong_inv.append(perm_inverse(h))
        if last == len(self.levels):
            self._add_level(self._new_base_point(h, base_hint))
        for i in range(first, last + 1):
            self._extend_orbit(i, [idx])

    def _new_base_point(self, h: np.ndarray, base_hint: Sequence[int]) -> int:
        used = set(self.base)
        for b in base_hint:
            if b not in used and h[b] != b:
                return b
        moved = np.flatnonzero(h != self.identity)
        return int(next(x for x in moved if int(x) not in used))

    # -- Schreier-Sims ----------------------------------------------------

    def _schreier_generator(self, i: int, beta: int, s: int) -> np.ndarray | None:
        """u_beta * s * u_{beta^s}^-1, or None when it is trivially the identity."""
        lv = self.levels[i]
        gamma = int(self.strong[s][beta])
        if lv.tree[gamma] == (beta, s):
            return None
        u_beta = perm_inverse(self._uinv(i, beta)) if beta != lv.point else self.identity
        t = self.strong[s][u_beta]
        return self._uinv(i, gamma)[t] if gamma != lv.point else t

    def _first_failure(self, i: int) -> tuple[np.ndarray, int] | None:
        lv = self.levels[i]
        for s in list(lv.gens):
            k = lv.cursor[s]
            while k < len(lv.orbit):
                t = self._schreier_generator(i, lv.orbit[k], s)
                if t is not None:
                    residue, j = self.sift(t, i + 1)
                    if j < len(self.levels) or not np.array_equal(residue, self.identity):
                        lv.cursor[s] = k
                        return residue, j
                k += 1
            lv.cursor[s] = k
        return None

    def _run(self, base_hint: Sequence[int]):
        i = len(self.levels) - 1
        while i >= 0:
            failure = self._first_failure(i)
            if failure is None:
                i -= 1
                continue
            residue, j = failure
            self._add_strong(residue, i + 1, j, base_hint)
            i = j

    def verify(self) -> bool:
        """Independent check: generators sift, and every Schreier generator sifts."""
        for k, lv in enumerate(self.levels):
            for s in lv.gens:
                if any(self.strong[s][b] != b for b in self.base[:k]):
                    return False
        if not all(self.contains(g) for g in self.input_generators):
            return False
        for i, lv in enumerate(self.levels):
            for s in lv.gens:
                for beta in lv.orbit:
                    u_beta = perm_inverse(self._uinv(i, beta)) if beta != lv.point else self.identity
                    gamma = int(self.strong[s][beta])
                    t = self.strong[s][u_beta]
                    if gamma != lv.point:
                        t = self._uinv(i, gamma)[t]
                    residue, j = self.sift(t, i + 1)
                    if j < len(self.levels) or not np.array_equal(residue, self.identity):
                        return False
        return True


def build_chain(
    generators: Iterable,
    degree: int | None = None,
    base: Sequence[int] = (),
    cache_bytes: int = DEFAULT_CACHE_BYTES,
) -> StabilizerChain:
    """Deterministic Schreier-Sims.

    ``base`` lists preferred base points, used first and in order.  Every
    Schreier generator at every level is sifted before the chain is returned.
    """
    gens = [np.asarray(g, dtype=np.intp) for g in generators]
    if degree is None:
        if not gens:
            raise DomainError("degree is required when there are no generators")
        degree = gens[0].size
    if any(g.shape != (degree,) for g in gens):
        raise DomainError("generators act on different point sets")
    chain = StabilizerChain(degree, cache_bytes)
    chain.input_generators = gens
    for g in gens:
        if np.array_equal(g, chain.identity) or any(np.array_equal(g, h) for h in chain.strong):
            continue
        chain.strong.append(g)
        chain.strong_inv.append(perm_inverse(g))
    if not chain.strong:
        return chain
    points = list(dict.fromkeys(base))
    for g in chain.strong:
        if all(g[b] == b for b in points):
            points.append(int(np.flatnonzero(g != chain.identity)[0]))
    for b in points:
        chain._add_level(b)
    for s, g in enumerate(chain.strong):
        fixed = 0
        while fixed < len(points) and g[points[fixed]] == points[fixed]:
            fixed += 1
        for i in range(fixed + 1):
            chain._extend_orbit(i, [s])
    chain._run(points)
    return chain


def group_order(chain: StabilizerChain) -> int:
    return chain.order()


def contains(chain: StabilizerChain, g) -> bool:
    return chain.contains(g)


@dataclass(frozen=True)
class GroupCertificate:
    points: int
    base: tuple[int, ...]
    level_orbit_sizes: tuple[int, ...]
    order: int
    target_order: int

    @property
    def equal(self) -> bool:
        return self.order == self.target_order

    def to_dict(self) -> dict:
        return {
            "points": self.points,
            "base": list(self.base),
            "level_orbit_sizes": list(self.level_orbit_sizes),
            "order": str(self.order),
            "target_order": str(self.target_order),
            "equal": self.equal,
        }

    @classmethod
    def from_dict(cls, d: dict) -> GroupCertificate:
        cert = cls(
            int(d["points"]),
            tuple(d.get("base", ())),
            tuple(d.get("level_orbit_sizes", ())),
            int(d["order"]),
            int(d["target_order"]),
        )
        if "equal" in d and d["equal"] != cert.equal:
            raise DomainError("certificate 'equal' flag disagrees with its orders")
        return cert


def matrix_group_chain(
    matrices: Sequence[Matrix],
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> tuple[StabilizerChain, PointEncoding]:
    """Chain for the group generated by invertible matrices acting on nonzero vectors.

    The base is E_1, ..., E_n, so the chain has exactly n levels.
    """
    if not matrices:
        raise DomainError("need at least one matrix")
    n, p = matrices[0].n, matrices[0].p
    enc = PointEncoding(n, p, point_budget)
    perms = [enc.to_permutation(a) for a in matrices]
    chain = build_chain(perms, enc.point_count, base=enc.basis_points())
    return chain, enc


def certify_generation(matrices: Sequence[Matrix], point_budget: int = DEFAULT_POINT_BUDGET) -> GroupCertificate:
    """Build the chain of <matrices> and compare its order with |GL_n(F_p)|."""
    chain, enc = matrix_group_chain(matrices, point_budget)
    return GroupCertificate(
        enc.point_count,
        tuple(chain.base),
        tuple(chain.orbit_sizes),
        chain.order(),
        gl_order(enc.n, enc.p),
    )
