import json
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from brunnian.construction import (
    IDENTITY_FAILURE,
    ConjectureReport,
    Verdict,
    build_instance,
    condition_check,
    cyclic_shift,
    eigen_QD,
    g_inv_c,
    g_inv_c_expected,
    group_check,
    identity_checks,
    k_closed_form,
    k_poly_expected,
    k_product,
    plain_product,
    verdict_for,
    verify_instance,
)
from brunnian.errors import DomainError, NonDiagonalizableError
from brunnian.matlin import Matrix, as_companion_poly, basis_vector, mat_pow, rank
from brunnian.poly import Polynomial, is_primitive, iter_monic, parse_poly, search_primitive

GRID_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31]


def random_primitive(rng: random.Random, p: int, n: int) -> Polynomial:
    while True:
        f = Polynomial.from_coeffs([rng.randrange(p) for _ in range(n)] + [1], p)
        if is_primitive(f):
            return f


@st.composite
def primitive_instances(draw):
    p = draw(st.sampled_from(GRID_PRIMES))
    n = draw(st.integers(3, 8))
    seed = draw(st.integers(0, 2**32))
    return build_instance(p, random_primitive(random.Random(seed), p, n))


def sympy_K(f: Polynomial):
    """K = G_1 G_n ... G_1 computed with sympy integer matrices, reduced mod p."""
    n, p = f.degree, f.p
    C = sympy.zeros(n, n)
    for i in range(1, n):
        C[i, i - 1] = 1
    for i in range(n):
        C[i, n - 1] = -f[i]
    G = sympy.zeros(n, n)
    for i in range(n):
        G[(i + 1) % n, i] = 1
    conj = [C]
    for _ in range(n - 1):
        conj.append(G * conj[-1] * G.T)  # G is a permutation matrix, so G^-1 = G^T
    prod = sympy.eye(n)
    for g in conj:
        prod = g * prod
    return (C * prod).applyfunc(lambda x: x % p)


def test_cyclic_shift_is_companion_of_xn_minus_1():
    G = cyclic_shift(4, 5)
    assert as_companion_poly(G) == parse_poly("x^4+4", 5)
    assert mat_pow(G, 4) == Matrix.identity(4, 5)


def test_build_instance_examples():
    inst = build_instance(5, parse_poly("x^7+x^6+2", 5))
    assert inst.conjugates[0] == inst.C
    assert len(inst.conjugates) == 7
    for k in range(1, 7):
        assert inst.conjugates[k] == mat_pow(inst.G, k) @ inst.C @ mat_pow(inst.G, -k)
    with pytest.raises(DomainError, match="n >= 3"):
        build_instance(5, parse_poly("x^2+x+1", 5))
    with pytest.raises(DomainError, match="not primitive"):
        build_instance(5, parse_poly("x^3+x^2+1", 5))
    with pytest.raises(DomainError):
        build_instance(7, parse_poly("x^3+x+2", 5))


def test_k_for_table_example_is_independent_of_library():
    f = parse_poly("x^7+x^6+2", 5)
    inst = build_instance(5, f)
    K = k_product(inst)
    assert [list(r) for r in K.rows] == sympy_K(f).tolist()
    # last column is (1, 0, ..., 0): g = x^7 + 4, and the x^6 term cancels
    assert K.column(6).entries == (1, 0, 0, 0, 0, 0, 0)
    assert as_companion_poly(K) == parse_poly("x^7+4", 5)
    assert k_poly_expected(f) == parse_poly("x^7+4", 5)


def test_k_e_n_is_not_a_multiple_of_c_e_n_in_general():
    # The scaled-column description of K E_n only holds when a_1 = ... = a_{n-1} = 0.
    inst = build_instance(5, parse_poly("x^7+x^6+2", 5))
    K = k_product(inst)
    lam_n = pow(3, 7, 5)
    scaled = (lam_n * (inst.C @ basis_vector(7, 7, 5))).entries
    assert K.column(6).entries != scaled
    sparse = build_instance(5, parse_poly("x^3+3x+2", 5))
    assert k_poly_expected(sparse.f) == parse_poly("x^3+4", 5)


@settings(max_examples=60, deadline=None)
@given(primitive_instances())
def test_closed_forms(inst):
    K = k_product(inst)
    assert K == k_closed_form(inst)
    assert plain_product(inst) == mat_pow(g_inv_c(inst), inst.n)
    assert g_inv_c(inst) == g_inv_c_expected(inst.f)
    assert rank(g_inv_c(inst) - Matrix.identity(inst.n, inst.p)) == 1
    assert as_companion_poly(K) == k_poly_expected(inst.f)
    assert identity_checks(inst, K) == []
    lam_n = pow(inst.minus_a0.value, inst.n, inst.p)
    assert (lam_n == 1) == (K == inst.C)
    assert as_companion_poly(K)[0] != 0


@settings(max_examples=40, deadline=None)
@given(primitive_instances())
def test_eigen_decomposition(inst):
    Q, D = eigen_QD(inst)
    assert Q.inverse() @ g_inv_c(inst) @ Q == D
    assert D[inst.n - 1, inst.n - 1] == inst.minus_a0.value
    v = Q.column(inst.n - 1)
    assert g_inv_c(inst) @ v == inst.minus_a0 * v
    Dn = mat_pow(D, inst.n)
    assert Dn == Matrix.diagonal([1] * (inst.n - 1) + [pow(inst.minus_a0.value, inst.n, inst.p)], inst.p)


def test_eigen_example_p37():
    inst = build_instance(37, parse_poly("x^3+x^2+17", 37))
    assert g_inv_c(inst)[2, 2] == 20
    Q, _ = eigen_QD(inst)
    assert Q.column(2).entries == (0, 35, 1)


def test_non_diagonalizable_branch():
    # a0 = -1 forces -a0 = 1; such f is never primitive for p >= 5
    f = parse_poly("x^3+x+4", 5)
    inst = build_instance(5, f, require_primitive=False)
    with pytest.raises(NonDiagonalizableError):
        eigen_QD(inst)
    report = verify_instance(5, f)
    assert report.verdict is Verdict.NOT_DECIDED
    assert report.identities_ok
    assert k_product(inst) == k_closed_form(inst)


def test_lambda_one_never_primitive_for_p_at_least_5():
    for p in (5, 7):
        for f in iter_monic(p, 3):
            if f[0] == p - 1:
                assert not is_primitive(f)


@pytest.mark.parametrize(
    "p, n, text, expected",
    [(5, 7, "x^7+x^6+2", (True, True)), (5, 8, "x^8+x^5+x^3+3", (True, False)), (7, 6, "x^6+x^5+x^4+3", (True, False))],
)
def test_condition_check_examples(p, n, text, expected):
    assert condition_check(p, n, parse_poly(text, p)) == expected


def test_conditions_hold_whenever_verdict_true():
    rng = random.Random(7)
    for p in GRID_PRIMES:
        for n in range(3, 9):
            f = random_primitive(rng, p, n)
            conds = condition_check(p, n, f)
            if verdict_for(p, n) is Verdict.TRUE:
                assert conds == (True, True)
            else:
                assert conds[1] is False


@pytest.mark.parametrize("p, n, verdict", [(5, 12, "NotDecided"), (11, 5, "True"), (5, 9, "True"), (3, 5, "NotDecided"), (2, 3, "NotDecided")])
def test_verdict_for_examples(p, n, verdict):
    assert verdict_for(p, n).value == verdict


def test_verdict_for_errors():
    for p, n in [(5, 2), (1, 5), (4, 5)]:
        with pytest.raises(DomainError):
            verdict_for(p, n)
    assert Verdict.NOT_DECIDED.table_label() == "(False)"


def test_verify_table_row_true():
    r = verify_instance(5, "x^7+x^6+2")
    assert r.verdict is Verdict.TRUE
    assert r.k_is_companion and r.k_ne_c and r.k_const_nonzero
    assert r.k_poly[0] == 4 == 2 * pow(3, 7, 5) % 5  # g(0) = a0 (-a0)^7
    assert r.warnings == []


def test_verify_collapse():
    r = verify_instance(5, "x^8+x^5+x^3+3")
    assert r.verdict is Verdict.NOT_DECIDED
    assert not r.k_ne_c
    assert any("collapses" in w for w in r.warnings)
    assert r.identities_ok


def test_verify_keeps_parse_and_primitivity_warnings():
    r = verify_instance(5, "x^15+2x^5+4x^5+3x^3+3x^2+4x+3")
    assert not r.primitive
    assert r.verdict is Verdict.NOT_DECIDED
    assert any(w.startswith("duplicate term") for w in r.warnings)
    assert any(w.startswith("not primitive") for w in r.warnings)
    assert not any(w.startswith(IDENTITY_FAILURE) for w in r.warnings)


def test_verify_with_group_check():
    f = search_primitive(5, 3)
    r = verify_instance(5, f, with_group_check=True, point_budget=200)
    assert r.group_certificate.order == 1_488_000 == r.group_certificate.target_order
    assert r.identities_ok
    skipped = verify_instance(5, "x^7+x^6+2", with_group_check=True, point_budget=200)
    assert skipped.group_certificate is None
    assert any(w.startswith("group check skipped") for w in skipped.warnings)


def test_report_json_round_trip():
    for text, gc in [("x^7+x^6+2", False), ("x^8+x^5+x^3+3", False), ("x^3+3x+2", True)]:
        r = verify_instance(5, text, with_group_check=gc)
        d = json.loads(json.dumps(r.to_dict()))
        back = ConjectureReport.from_dict(d)
        assert back == r
        assert back.to_dict() == r.to_dict()


def test_group_check_exploratory():
    gc = group_check(5, 4)
    assert gc.exploratory
    assert gc.conjugates.equal and gc.companion_pair.equal
    assert gc.conjugates.order == 116_064_000_000
    with pytest.raises(DomainError):
        group_check(5, 3, parse_poly("x^4+x+2", 5))
