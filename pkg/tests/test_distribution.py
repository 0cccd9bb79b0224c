
import pytest

from lulu.boolean_function import PBF, pbf_of_cascade, pbf_of_rank
from lulu.distribution import (
    AVector,
    a_vector,
    g_patterns,
    g_term,
    g_terms_c2_closed,
    phi_C_recursive,
    phi_closed,
    phi_compose_naive,
    phi_enum,
    phi_incl_excl,
    phi_of,
    phi_rank,
    reference_data,
)
from lulu.errors import DEFAULT_INCL_EXCL_CAP, CapacityError, ParameterError
from lulu.event_calculus import x_support
from lulu.filter_algebra import build_basic
from lulu.polynomial import P, Q, Polynomial

import corpus
from oracles import phi_by_apply

C2_PHI = Polynomial([0, 0, 0, 3, 3, -9, 4, 4, -10, 4, 8, -8, 2])


def test_three_stage_a_vector_and_phi():
    f = pbf_of_cascade(corpus.three_stage())
    assert a_vector(f) == [0, 0, 0, 0, 2, 1]
    assert phi_enum(f) == 2 * P**4 - P**5
    assert phi_incl_excl(f) == 2 * P**4 - P**5
    assert phi_enum(PBF([[0], [1], [2], [-1, 3]])) == 2 * P**4 - P**5


def test_opening_2x2():
    expect = Polynomial.from_q_coeffs([1, 0, 0, 0, -4, 0, 4, 2, -4, 1])
    f = pbf_of_cascade(corpus.opening_2x2())
    assert phi_enum(f) == expect
    assert phi_incl_excl(f) == expect
    assert phi_by_apply(corpus.opening_2x2()) == expect


def test_a_vector_normalization():
    av = a_vector(pbf_of_rank(5, 3))
    assert av == AVector(tuple([0, 0, 0, 10, 5, 1]))
    assert av.normalized() == [0, 0, 0, 1, 1, 1]
    assert av.w == 5


def test_phi_rank_matches_enumeration():
    for w in (1, 3, 5, 7):
        for k in range(1, w + 1):
            assert phi_rank(w, k) == phi_enum(pbf_of_rank(w, k))
    with pytest.raises(ParameterError):
        phi_rank(3, 0)


@pytest.mark.parametrize("name", ["L", "U", "LU", "UL"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_closed_forms_match_enumeration(name, n):
    c = build_basic(name, n)
    assert phi_closed(name, n) == phi_enum(pbf_of_cascade(c))


def test_closed_forms_match_apply_oracle():
    for name in ("L", "U", "LU", "UL"):
        assert phi_closed(name, 2) == phi_by_apply(build_basic(name, 2))


def test_median_closed_form():
    for n in (1, 2, 3, 4):
        assert phi_closed("Median", n) == phi_enum(build_basic("Median", n))
    assert phi_closed("M", 1) == 3 * P**2 - 2 * P**3
    assert phi_closed("Rank", 2, 1) == 1 - Q**5
    with pytest.raises(ParameterError):
        phi_closed("Rank", 2)
    with pytest.raises(ParameterError):
        phi_closed("C", 2)


def test_lu_ul_duality_to_n10():
    for n in range(1, 11):
        assert phi_closed("UL", n) == 1 - phi_closed("LU", n).reflect()
        assert phi_closed("L", n) == 1 - phi_closed("U", n).reflect()


def test_transfer_polynomials_are_cdf_maps():
    for name in ("L", "U", "LU", "UL", "M"):
        for n in (1, 2, 3):
            phi = phi_closed(name, n)
            assert phi(0) == 0 and phi(1) == 1
            b = phi.bernstein()
            assert all(x <= y for x, y in zip(b, b[1:]))


def test_enum_equals_incl_excl_on_corpus():
    checked = 0
    for name, _, f in corpus.build():
        if len(f.value_dnf) <= DEFAULT_INCL_EXCL_CAP:
            assert phi_enum(f) == phi_incl_excl(f), name
            checked += 1
    assert checked >= 40


def test_incl_excl_over_62_variables():
    # a wide window exercises the pure-Python union path
    f = PBF([list(range(0, 40)), list(range(30, 70))])
    assert phi_incl_excl(f) == 1 - 2 * Q**40 + Q**70


def test_c2_three_ways_and_reference():
    assert phi_enum(pbf_of_cascade(build_basic("C", 2))) == C2_PHI
    assert phi_C_recursive(2) == C2_PHI
    assert phi_C_recursive(2, gsource="closed") == C2_PHI
    assert reference_data()["phi_C2"] == C2_PHI


def test_c2_g_terms():
    g4_closed, g3_closed = g_terms_c2_closed()
    assert g_term(2, "even") == g4_closed
    assert g_term(2, "odd") == g3_closed
    even, odd = g_patterns(2)
    assert len(x_support(even)) == 12
    assert len(x_support(odd)) == 8


def test_recursion_argument_checks():
    with pytest.raises(ParameterError):
        phi_C_recursive(3, gsource="closed")
    with pytest.raises(ParameterError):
        phi_C_recursive(2, gsource="guess")
    with pytest.raises(ParameterError):
        g_term(1, "even")
    with pytest.raises(ParameterError):
        g_term(2, "middle")
    assert phi_C_recursive(1) == phi_closed("LU", 1)


def test_f_by_duality_matches_enumeration():
    for n in (1, 2):
        f_enum = phi_enum(pbf_of_cascade(build_basic("F", n)))
        assert f_enum == 1 - phi_C_recursive(n).reflect()


def test_naive_composition_fails_for_cascades():
    u1, l1 = phi_closed("U", 1), phi_closed("L", 1)
    assert phi_compose_naive(u1, l1) != phi_closed("UL", 1)
    assert phi_compose_naive(u1, l1).coeffs != phi_closed("UL", 1).coeffs


def test_phi_of_dispatch():
    c = build_basic("LU", 1)
    assert phi_of(c, "enum") == phi_of(c, "ie") == phi_closed("LU", 1)
    with pytest.raises(ParameterError):
        phi_of(c, "magic")


def test_capacity_errors(monkeypatch):
    with pytest.raises(CapacityError):
        phi_enum(pbf_of_cascade(build_basic("C", 2)), cap=12)
    with pytest.raises(CapacityError):
        phi_incl_excl(pbf_of_rank(7, 4))
    monkeypatch.setenv("LULU_ENUM_CAP", "10")
    with pytest.raises(CapacityError):
        phi_enum(pbf_of_cascade(build_basic("C", 2)))


def test_reference_data_consistency():
    ref = reference_data()
    c5 = ref["phi_C5"]
    assert c5(1) == 1 and c5(0) == 0
    assert c5.low_order() == 5
    assert (1 - c5.reflect()).low_order() == 4
    rows = ref["C_robustness"]
    assert [r["n"] for r in rows] == [1, 2, 3, 4, 5, 6]
    assert (rows[4]["lower"], rows[4]["upper"]) == (5, 4)


def test_workers_give_identical_counts():
    f = pbf_of_cascade(build_basic("C", 2))
    assert a_vector(f, workers=1) == a_vector(f, workers=3)


@pytest.mark.slow
def test_c3_against_apply_oracle(monkeypatch):
    import oracles

    monkeypatch.setattr(oracles, "CHUNK", 1 << 18)
    assert phi_by_apply(build_basic("C", 3)) == phi_C_recursive(3)
