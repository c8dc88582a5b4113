"""Verdict tables over F_p and the density of undecided (p, n) pairs."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable

import numpy as np

from .construction import Verdict, verdict_for
from .errors import DomainError, InfeasibleError
from .ff import check_prime, prime_count, primes_up_to
from .poly import format_poly, is_irreducible, is_primitive, order_of_x, parse_poly, search_primitive


@dataclass(frozen=True)
class FixtureRow:
    p: int
    n: int
    poly: str
    paper_verdict: str


def load_fixture(path=None) -> list[FixtureRow]:
    """Rows of the bundled tab-separated transcription ``p, n, poly, paper_verdict``."""
    if path is None:
        text = resources.files("brunnian").joinpath("data/tables.tsv").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        p, n, poly, verdict = line.split("\t")
        if p == "p":  # header
            continue
        rows.append(FixtureRow(int(p), int(n), poly, verdict))
    return rows


@dataclass
class TableRow:
    n: int
    p: int
    poly: str
    primitive: bool | None  # None when p^n - 1 could not be factored in budget
    verdict: Verdict
    warnings: list[str] = field(default_factory=list)
    x_order: int | None = None  # filled in for non-primitive rows
    paper_verdict: str | None = None

    @property
    def matches_table(self) -> bool | None:
        if self.paper_verdict is None:
            return None
        return self.verdict.table_label() == self.paper_verdict

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "poly": self.poly,
            "primitive": self.primitive,
            "verdict": self.verdict.value,
            "warnings": list(self.warnings),
            "x_order": None if self.x_order is None else str(self.x_order),
            "paper_verdict": self.paper_verdict,
        }


def _audit(row: tuple[int, int, str, str | None]) -> TableRow:
    p, n, text, paper_verdict = row
    verdict = verdict_for(p, n)
    f = parse_poly(text, p)
    warnings = list(f.warnings)
    if f.degree != n or not f.is_monic:
        warnings.append(f"polynomial has degree {f.degree}, row says n = {n}")
        return TableRow(n, p, text, False, verdict, warnings, None, paper_verdict)
    x_order = None
    try:
        primitive = is_primitive(f)
        if not primitive:
            x_order = order_of_x(f)
            kind = "irreducible" if is_irreducible(f) else "reducible"
            warnings.append(f"not primitive ({kind}): X has order {x_order}, expected {p**n - 1}")
    except InfeasibleError as exc:
        primitive = None
        warnings.append(f"primitivity deferred: {exc}")
    return TableRow(n, p, text, primitive, verdict, warnings, x_order, paper_verdict)


def _searched(row: tuple[int, int]) -> TableRow:
    p, n = row
    f = search_primitive(p, n)
    return TableRow(n, p, format_poly(f), True, verdict_for(p, n))


def _fan_out(fn, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def table_rows(
    p: int,
    n_range: Iterable[int] | None = None,
    source: str = "paper",
    jobs: int = 1,
    fixture: list[FixtureRow] | None = None,
) -> list[TableRow]:
    """One row per n, in increasing n.

    ``source="paper"`` audits the transcribed table polynomials;
    ``source="search"`` uses the first primitive polynomial in search order.
    """
    check_prime(p)
    if p < 5:
        raise DomainError(f"tables start at p = 5, got p = {p}")
    if source == "paper":
        by_n = {r.n: r for r in (fixture if fixture is not None else load_fixture()) if r.p == p}
        ns = sorted(by_n) if n_range is None else list(n_range)
        missing = [n for n in ns if n not in by_n]
        if not ns or missing:
            raise DomainError(f"no table rows for p = {p}, n in {missing or ns}")
        items = [(p, n, by_n[n].poly, by_n[n].paper_verdict) for n in ns]
        return _fan_out(_audit, items, jobs)
    if source == "search":
        if n_range is None:
            raise DomainError("search tables need an explicit n range")
        ns = list(n_range)
        if not ns or min(ns) < 3:
            raise DomainError("n range must be non-empty and start at n >= 3")
        return _fan_out(_searched, [(p, n) for n in ns], jobs)
    raise DomainError(f"unknown table source {source!r}")


@dataclass(frozen=True)
class DensityCount:
    N: int
    e_count: int
    d_count: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.d_count, self.e_count)

    @property
    def bound(self) -> Fraction:
        return Fraction(self.N, 4 * (self.N - 2))

    @property
    def complement(self) -> Fraction:
        return 1 - self.ratio

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "e_count": self.e_count,
            "d_count": self.d_count,
            "ratio": str(self.ratio),
            "ratio_float": float(self.ratio),
            "bound": str(self.bound),
            "bound_float": float(self.bound),
            "complement": str(self.complement),
            "complement_float": float(self.complement),
        }


def density(N: int) -> DensityCount:
    """Count pairs (p, n), p prime in [5, N], n in [3, N], and those with (p - 1) | n."""
    if N < 7:
        raise DomainError(f"density needs N >= 7, got {N}")
    primes = primes_up_to(N)
    primes = primes[primes >= 5]
    ns = np.arange(3, N + 1)
    e_count = int(primes.size * ns.size)
    d_count = sum(int(np.count_nonzero(ns % (int(q) - 1) == 0)) for q in primes)
    if e_count != (prime_count(N) - 2) * (N - 2):
        raise AssertionError("pair count disagrees with (pi(N) - 2)(N - 2)")
    result = DensityCount(N, e_count, d_count)
    if result.ratio > result.bound:
        raise AssertionError(f"density {result.ratio} exceeds N/(4(N-2)) = {result.bound}")
    return result
