import pytest
from hypothesis import given, settings, strategies as st

from lulu.boolean_function import pbf_of_cascade
from lulu.distribution import phi_enum
from lulu.errors import ParameterError
from lulu.event_calculus import (
    X,
    DerivedPipeline,
    IdentityNotApplicable,
    Pattern,
    Rel,
    check_identity,
    identity_cases,
    identity_sides,
    parse_pattern,
    pattern_prob,
    x_support,
)
from lulu.filter_algebra import Cascade, build_basic, dilation, erosion
from lulu.polynomial import P, Q, Polynomial

from oracles import pattern_prob_by_apply

A1 = DerivedPipeline(Cascade([dilation(1)]), "A")
pipelines = st.sampled_from([
    X,
    A1,
    DerivedPipeline(build_basic("L", 1), "L1"),
    DerivedPipeline(build_basic("LU", 1), "LU1"),
])
offs = st.lists(st.integers(-3, 3), min_size=1, max_size=4, unique=True)


def test_input_patterns_are_products():
    assert pattern_prob(Pattern.of(le=[0, 2], gt=[1])) == P**2 * Q
    assert pattern_prob(parse_pattern("(0,~1,~2,3)_X")) == P**2 * Q**2


def test_single_le_pattern_is_phi():
    for name in ("L", "U", "LU", "C"):
        c = build_basic(name, 1)
        pipe = DerivedPipeline(c, name)
        assert pattern_prob(Pattern.of(pipe, le=[0])) == phi_enum(pbf_of_cascade(c))


def test_dilated_gap_n5_r1():
    B = A1.then(Cascade([dilation(1)]), "B")
    lhs = pattern_prob(parse_pattern("(0,~1,~2,~3,~4,5)_B", {"B": B.cascade}))
    rhs = pattern_prob(parse_pattern("(0,1,~2,~4,5,6)_A", {"A": A1.cascade}))
    assert lhs == rhs
    assert identity_sides("L9", n=5, r=1, base=A1) == (lhs, rhs)


def test_dilated_gap_zero_cases():
    for r in (0, 1, 2):
        for n in range(2, r + 2):
            lhs, rhs = identity_sides("L9", n=n, r=r)
            assert lhs == rhs == Polynomial()


def test_identity_range_is_enforced():
    with pytest.raises(IdentityNotApplicable):
        identity_sides("L9", n=4, r=0)
    with pytest.raises(IdentityNotApplicable):
        identity_sides("L10", n=6, r=1)
    with pytest.raises(ParameterError):
        identity_sides("L99", n=1)


def test_dilated_gap_rhs_wrong_outside_range():
    # the short-gap formula stops being true once the gap is long enough
    n = 4
    lhs = pattern_prob(Pattern.of(X, le=[0, n], gt=range(1, n)))
    naive = pattern_prob(Pattern.of(X, le=[0, n], gt=[1, n - 1]))
    assert lhs != naive


def test_identity_suite_holds():
    cases = identity_cases()
    names = {name for name, _ in cases}
    assert names == {"L7", "L8", "L9", "L10"}
    for name, params in cases:
        assert check_identity(name, **params), (name, params)


@settings(max_examples=30, deadline=None)
@given(pipelines, offs, st.data())
def test_pattern_complementarity(pipe, os, data):
    # splitting on the relation at a fresh offset partitions the event
    pat = Pattern.of(pipe, le=os)
    o = data.draw(st.integers(-5, 5).filter(lambda v: v not in os))
    total = pattern_prob(pat.with_constraint((o,), Rel.LE)) + pattern_prob(
        pat.with_constraint((o,), Rel.GT)
    )
    assert total == pattern_prob(pat)


@settings(max_examples=30, deadline=None)
@given(pipelines, offs, offs, st.integers(-4, 4))
def test_pattern_translation_invariance(pipe, le, gt, s):
    gt = [o for o in gt if o not in le]
    pat = Pattern.of(pipe, le=le, gt=gt)
    assert pattern_prob(pat.shifted(s)) == pattern_prob(pat)


@settings(max_examples=25, deadline=None)
@given(pipelines, offs, offs)
def test_pattern_prob_matches_brute_force(pipe, le, gt):
    gt = [o for o in gt if o not in le]
    pat = Pattern.of(pipe, le=le, gt=gt)
    assert pattern_prob(pat) == pattern_prob_by_apply(pipe.cascade, le, gt)


def test_pattern_construction():
    pat = parse_pattern("(0,~1,~2,3)_X")
    assert str(pat) == "(0,~1,~2,3)_X"
    assert str(pat.without(1)) == "(0,~2,3)_X"
    with pytest.raises(ParameterError):
        Pattern.of(X, le=[0], gt=[0])
    with pytest.raises(ParameterError):
        Pattern([], X)
    with pytest.raises(ParameterError):
        parse_pattern("(0,1)_Z")
    with pytest.raises(ParameterError):
        parse_pattern("0,1_X")
    with pytest.raises(ParameterError):
        parse_pattern("(0,a)_X")


def test_two_dimensional_pattern():
    sq = [(0, 0), (0, 1), (1, 0), (1, 1)]
    c = Cascade([erosion(sq)])
    pat = parse_pattern("([0,0],~[0,1])_S", {"S": c})
    assert len(x_support(pat)) == 6
    # P(S_00 low) - P(S_00 and S_01 low); the two squares share two cells
    assert pattern_prob(pat) == (1 - Q**4) - (1 - 2 * Q**4 + Q**6)
