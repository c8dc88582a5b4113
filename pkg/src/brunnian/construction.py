"""Conjugated companion matrices, their product K, and the generation verdict.

For a monic f of degree n over F_p with companion matrix C, and the cyclic
shift G = companion(X^n - 1), the conjugates are G_1 = C and
G_{k+1} = G G_k G^-1.  The product G_n ... G_1 collapses to (G^-1 C)^n, and
K = C (G^-1 C)^n = G_1 G_n ... G_1 is again a companion matrix.  With
lam = -a_0 its polynomial g has g(0) = a_0 lam^n and, for 1 <= i < n,
g_i = a_i (1 + lam + ... + lam^n); so K = C exactly when lam^n = 1
(for lam != 1; at lam = 1 the matrix G^-1 C is a Jordan block instead).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import DomainError, InfeasibleError, NonDiagonalizableError, NotCompanionError
from .ff import FieldElement, check_prime, fp_pow
from .matlin import Matrix, as_companion_poly, basis_vector, companion, mat_pow
from .permgroup import DEFAULT_POINT_BUDGET, GroupCertificate, PointEncoding, gl_order, matrix_group_chain
from .poly import Polynomial, format_poly, is_irreducible, is_primitive, order_of_x, parse_poly, search_primitive


class Verdict(str, enum.Enum):
    TRUE = "True"
    NOT_DECIDED = "NotDecided"

    def table_label(self) -> str:
        """Label used in the published tables, where NotDecided reads "(False)"."""
        return "True" if self is Verdict.TRUE else "(False)"


def cyclic_shift(n: int, p: int) -> Matrix:
    """G = companion(X^n - 1); sends E_k to E_{k+1} and E_n to E_1."""
    return companion(Polynomial.from_coeffs([-1] + [0] * (n - 1) + [1], p))


@dataclass(frozen=True)
class ConstructionInstance:
    p: int
    n: int
    f: Polynomial
    C: Matrix
    G: Matrix
    G_inv: Matrix
    conjugates: tuple[Matrix, ...]

    @property
    def minus_a0(self) -> FieldElement:
        return -self.f.coefficient(0)


def primitivity_witness(f: Polynomial) -> str:
    """Human-readable reason why f fails to be primitive."""
    if f[0] == 0:
        return "X divides f, so X is not a unit"
    if not is_irreducible(f):
        return f"f is reducible; X has order {order_of_x(f)}"
    return f"X has order {order_of_x(f)} < p^n - 1 = {f.p ** f.degree - 1}"


def build_instance(p: int, f: Polynomial, require_primitive: bool = True) -> ConstructionInstance:
    check_prime(p)
    if f.p != p:
        raise DomainError(f"polynomial is over F_{f.p}, expected F_{p}")
    if not f.is_monic:
        raise DomainError(f"{f} is not monic")
    n = f.degree
    if n < 3:
        raise DomainError(f"the construction needs n >= 3, got n = {n}")
    if require_primitive and not is_primitive(f):
        raise DomainError(f"{f} is not primitive over F_{p}: {primitivity_witness(f)}")
    C = companion(f)
    G = cyclic_shift(n, p)
    G_inv = G.inverse()
    conj = [C]
    for _ in range(n - 1):
        conj.append(G @ conj[-1] @ G_inv)
    return ConstructionInstance(p, n, f, C, G, G_inv, tuple(conj))


def plain_product(inst: ConstructionInstance) -> Matrix:
    """G_n G_{n-1} ... G_1, which equals (G^-1 C)^n."""
    acc = Matrix.identity(inst.n, inst.p)
    for g in inst.conjugates:
        acc = g @ acc
    return acc


def k_product(inst: ConstructionInstance) -> Matrix:
    """K = G_1 (G_n ... G_1), the companion-shaped element of <G_1, ..., G_n>."""
    return inst.C @ plain_product(inst)


def g_inv_c(inst: ConstructionInstance) -> Matrix:
    return inst.G_inv @ inst.C


def g_inv_c_expected(f: Polynomial) -> Matrix:
    """Identity with last column (-a_1, ..., -a_{n-1}, -a_0)."""
    n, p = f.degree, f.p
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        rows[i][n - 1] = -f[i + 1]
    rows[n - 1][n - 1] = -f[0]
    return Matrix.of(rows, p)


def k_closed_form(inst: ConstructionInstance) -> Matrix:
    """C (G^-1 C)^n by n successive multiplications."""
    m = g_inv_c(inst)
    acc = inst.C
    for _ in range(inst.n):
        acc = acc @ m
    return acc


def k_poly_expected(f: Polynomial) -> Polynomial:
    """Closed form of the polynomial whose companion matrix is K."""
    n, p = f.degree, f.p
    lam = -f[0] % p
    geometric = sum(pow(lam, j, p) for j in range(n + 1))
    coeffs = [f[0] * pow(lam, n, p)] + [f[i] * geometric for i in range(1, n)] + [1]
    return Polynomial.from_coeffs(coeffs, p)


def eigen_QD(inst: ConstructionInstance) -> tuple[Matrix, Matrix]:
    """Q, D with Q^-1 (G^-1 C) Q = D.

    Q is the identity with last column (a_1, ..., a_{n-1}) / (1 + a_0) over a
    trailing 1; D = diag(1, ..., 1, -a_0).
    """
    f, n, p = inst.f, inst.n, inst.p
    one_plus_a0 = (1 + f[0]) % p
    if one_plus_a0 == 0:
        raise NonDiagonalizableError("-a0 = 1: eigenvalue -a0 collides with 1, Q is undefined")
    inv = pow(one_plus_a0, -1, p)
    q_rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        q_rows[i][n - 1] = f[i + 1] * inv
    Q = Matrix.of(q_rows, p)
    D = Matrix.diagonal([1] * (n - 1) + [-f[0]], p)
    if Q.inverse() @ g_inv_c(inst) @ Q != D:
        raise AssertionError("Q^-1 (G^-1 C) Q != D")
    return Q, D


def condition_check(p: int, n: int, f: Polynomial) -> tuple[bool, bool]:
    """(-a_0 != 1, (-a_0)^n != 1) in F_p.

    (-a_0)^n is also evaluated through n = (p-1)q + r as (-a_0)^r, which must
    agree by Fermat whenever a_0 != 0.
    """
    check_prime(p)
    if f.degree != n:
        raise DomainError(f"degree of {f} is not {n}")
    m = -f.coefficient(0)
    power = fp_pow(m, n)
    if m.value:
        q, r = divmod(n, p - 1)
        if fp_pow(m, r) != power:
            raise AssertionError(f"Fermat reduction failed: n = {p - 1}*{q} + {r}")
    return m.value != 1, power.value != 1


def verdict_for(p: int, n: int) -> Verdict:
    """True exactly when p >= 5 and p - 1 does not divide n."""
    if p < 2 or n < 3:
        raise DomainError(f"verdict needs p >= 2 and n >= 3, got p={p}, n={n}")
    check_prime(p)
    return Verdict.TRUE if p >= 5 and n % (p - 1) != 0 else Verdict.NOT_DECIDED


IDENTITY_FAILURE = "identity-failure"


@dataclass
class ConjectureReport:
    p: int
    n: int
    f: str
    primitive: bool
    minus_a0: FieldElement
    minus_a0_pow_n: FieldElement
    cond_a0: bool
    cond_a0n: bool
    k_poly: Polynomial | None
    k_is_companion: bool
    k_ne_c: bool
    k_const_nonzero: bool
    verdict: Verdict
    warnings: list[str] = field(default_factory=list)
    group_certificate: GroupCertificate | None = None

    @property
    def identities_ok(self) -> bool:
        return not any(w.startswith(IDENTITY_FAILURE) for w in self.warnings)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "f": self.f,
            "primitive": self.primitive,
            "minus_a0": self.minus_a0.value,
            "minus_a0_pow_n": self.minus_a0_pow_n.value,
            "cond_a0": self.cond_a0,
            "cond_a0n": self.cond_a0n,
            "k_poly": None if self.k_poly is None else format_poly(self.k_poly),
            "k_is_companion": self.k_is_companion,
            "k_ne_c": self.k_ne_c,
            "k_const_nonzero": self.k_const_nonzero,
            "verdict": self.verdict.value,
            "warnings": list(self.warnings),
            "group_certificate": None if self.group_certificate is None else self.group_certificate.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> ConjectureReport:
        p = int(d["p"])
        cert = d.get("group_certificate")
        return cls(
            p=p,
            n=int(d["n"]),
            f=d["f"],
            primitive=bool(d["primitive"]),
            minus_a0=FieldElement(int(d["minus_a0"]), p),
            minus_a0_pow_n=FieldElement(int(d["minus_a0_pow_n"]), p),
            cond_a0=bool(d["cond_a0"]),
            cond_a0n=bool(d["cond_a0n"]),
            k_poly=None if d["k_poly"] is None else parse_poly(d["k_poly"], p),
            k_is_companion=bool(d["k_is_companion"]),
            k_ne_c=bool(d["k_ne_c"]),
            k_const_nonzero=bool(d["k_const_nonzero"]),
            verdict=Verdict(d["verdict"]),
            warnings=list(d["warnings"]),
            group_certificate=None if cert is None else GroupCertificate.from_dict(cert),
        )


def identity_checks(inst: ConstructionInstance, K: Matrix) -> list[str]:
    """Names of the algebraic identities that fail for this instance (normally none)."""
    failed = []
    n, p = inst.n, inst.p
    m = inst.minus_a0
    m_pow_n = fp_pow(m, n).value
    if K != k_closed_form(inst):
        failed.append("K = C (G^-1 C)^n")
    if plain_product(inst) != mat_pow(g_inv_c(inst), n):
        failed.append("G_n ... G_1 = (G^-1 C)^n")
    if g_inv_c(inst) != g_inv_c_expected(inst.f):
        failed.append("G^-1 C shape")
    if m.value != 1:
        try:
            eigen_QD(inst)
        except AssertionError:
            failed.append("Q^-1 (G^-1 C) Q = D")
    for k in range(1, n):
        if K @ basis_vector(k, n, p) != basis_vector(k + 1, n, p):
            failed.append(f"K E_{k} = E_{k + 1}")
    try:
        if as_companion_poly(K) != k_poly_expected(inst.f):
            failed.append("g = closed-form polynomial of K")
    except NotCompanionError:
        failed.append("K is companion-shaped")
    if m.value != 1 and (m_pow_n == 1) != (K == inst.C):
        failed.append("(-a0)^n = 1 iff K = C")
    return failed


def verify_instance(
    p: int,
    f: Polynomial | str,
    with_group_check: bool = False,
    point_budget: int = DEFAULT_POINT_BUDGET,
) -> ConjectureReport:
    """Run primitivity, conditions, both routes to K, and optionally a group certificate."""
    check_prime(p)
    if isinstance(f, str):
        f = parse_poly(f, p)
    warnings = list(f.warnings)
    n = f.degree
    inst = build_instance(p, f, require_primitive=False)
    primitive = is_primitive(f)
    if not primitive:
        warnings.append(f"not primitive: {primitivity_witness(f)}")
    cond_a0, cond_a0n = condition_check(p, n, f)
    m = inst.minus_a0
    K = k_product(inst)
    try:
        k_poly = as_companion_poly(K)
    except NotCompanionError:
        k_poly = None
    k_ne_c = K != inst.C
    if not k_ne_c:
        warnings.append("K collapses to C because (-a0)^n = 1")
    warnings += [f"{IDENTITY_FAILURE}: {name}" for name in identity_checks(inst, K)]

    cert = None
    if with_group_check:
        try:
            chain, enc = matrix_group_chain(list(inst.conjugates), point_budget)
        except InfeasibleError as exc:
            warnings.append(f"group check skipped: {exc}")
        else:
            cert = GroupCertificate(
                enc.point_count, tuple(chain.base), tuple(chain.orbit_sizes), chain.order(), gl_order(n, p)
            )
            if not chain.contains(enc.to_permutation(K)):
                warnings.append(f"{IDENTITY_FAILURE}: K in <G_1, ..., G_n>")

    theorem = verdict_for(p, n) is Verdict.TRUE
    verdict = Verdict.TRUE if theorem and primitive and cond_a0 and cond_a0n else Verdict.NOT_DECIDED
    return ConjectureReport(
        p=p,
        n=n,
        f=format_poly(f),
        primitive=primitive,
        minus_a0=m,
        minus_a0_pow_n=fp_pow(m, n),
        cond_a0=cond_a0,
        cond_a0n=cond_a0n,
        k_poly=k_poly,
        k_is_companion=k_poly is not None,
        k_ne_c=k_ne_c,
        k_const_nonzero=k_poly is not None and k_poly[0] != 0,
        verdict=verdict,
        warnings=warnings,
        group_certificate=cert,
    )


@dataclass(frozen=True)
class GroupCheck:
    """Certificates for <G_1, ..., G_n> and for <C, G> on one instance."""

    p: int
    n: int
    f: Polynomial
    verdict: Verdict
    conjugates: GroupCertificate
    companion_pair: GroupCertificate

    @property
    def exploratory(self) -> bool:
        return self.verdict is not Verdict.TRUE

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "f": format_poly(self.f),
            "verdict": self.verdict.value,
            "exploratory": self.exploratory,
            "conjugates": self.conjugates.to_dict(),
            "companion_pair": self.companion_pair.to_dict(),
        }


def group_check(
    p: int, n: int, f: Polynomial | None = None, point_budget: int = DEFAULT_POINT_BUDGET
) -> GroupCheck:
    """Certify <G_1, ..., G_n> and <C, G> against |GL_n(F_p)|.

    Without f, the first primitive polynomial in search order is used.
    """
    check_prime(p)
    PointEncoding(n, p, point_budget)  # budget check before any search work
    if f is None:
        f = search_primitive(p, n)
    elif f.degree != n:
        raise DomainError(f"{format_poly(f)} does not have degree {n}")
    inst = build_instance(p, f)
    chain, enc = matrix_group_chain(list(inst.conjugates), point_budget)
    target = gl_order(n, p)
    conj = GroupCertificate(enc.point_count, tuple(chain.base), tuple(chain.orbit_sizes), chain.order(), target)
    pair_chain, _ = matrix_group_chain([inst.C, inst.G], point_budget)
    pair = GroupCertificate(
        enc.point_count, tuple(pair_chain.base), tuple(pair_chain.orbit_sizes), pair_chain.order(), target
    )
    return GroupCheck(p, n, f, verdict_for(p, n), conj, pair)
