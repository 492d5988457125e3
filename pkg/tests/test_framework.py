import dataclasses
import json

import pytest
from hypothesis import given, settings, strategies as st

from treeramsey.framework import (
    BOTTOM,
    Family,
    FamilyPair,
    act_on_set,
    check_background_axioms,
    check_condition,
    check_P,
    check_Pplus,
    check_pointwise,
    check_R,
    coloring_problem,
    extenders,
    fiber,
    lift_P_to_Pplus,
    truncate_set,
    truncation_depth,
)
from treeramsey.instances.classical import binom, classical_background, classical_p_witness, classical_pair


@pytest.fixture(scope="module")
def pair4():
    return classical_pair(4)


@pytest.fixture(scope="module")
def pair6():
    return classical_pair(6)


def test_classical_axioms_pass(pair4):
    assert check_background_axioms(pair4.background).passed


def test_corrupted_truncation_fails():
    bg = classical_background(3)
    swap = {(1, 2): (2,), (2, 3): (1,)}
    bad = dataclasses.replace(bg, trunc=lambda x: swap.get(x, x[:-1]))
    v = check_background_axioms(bad)
    assert v.status == "FAIL" and v.certificate["rule"] in ("ii", "iii")
    assert "a" in v.certificate or "x" in v.certificate


def test_corrupted_norm_fails():
    bg = classical_background(3)
    bad = dataclasses.replace(bg, norm=lambda x: -len(x))
    assert check_background_axioms(bad).status == "FAIL"


def test_corrupted_action_fails():
    bg = classical_background(3)

    def act(a, x):
        y = bg.act(a, x)
        return y if y != (1, 2) else (1, 3)

    v = check_background_axioms(dataclasses.replace(bg, act=act))
    assert v.status == "FAIL"


def test_bottom_is_least():
    assert BOTTOM < 0 and BOTTOM < -(10**9)
    assert not (BOTTOM > 0)


def test_fiber_examples(pair4):
    bg = pair4.background
    P = binom(3, 2).members
    assert fiber(bg, P, (3,)) == frozenset()
    assert fiber(bg, P, (1,)) == {(1, 2), (1, 3)}
    assert fiber(bg, {(2, 3)}, (2,)) == {(2, 3)}


def test_extenders_example(pair4):
    bg = pair4.background
    assert extenders(bg, binom(3, 2).members, (1,)) == {(1, 2), (1, 3)}
    assert extenders(bg, binom(3, 2).members, ()) == binom(3, 2).members


@settings(max_examples=50)
@given(st.integers(1, 5).flatmap(lambda l: st.tuples(st.just(l), st.integers(1, l))))
def test_fibers_partition(lk):
    l, k = lk
    bg = classical_background(5)
    P = binom(l, k).members
    parts = [fiber(bg, P, y) for y in truncate_set(bg, P)]
    assert frozenset().union(*parts) == P
    assert sum(len(p) for p in parts) == len(P)


def test_truncation_depth_classical():
    bg = classical_background(5)
    for l in range(1, 6):
        for k in range(1, l + 1):
            assert truncation_depth(bg, binom(l, k).members) == k
    assert truncation_depth(bg, {()}) == 0
    assert truncation_depth(bg, {(2,)}) == 1
    with pytest.raises(ValueError):
        truncation_depth(bg, set())


def test_truncation_depth_detects_cycle():
    bg = dataclasses.replace(classical_background(2), trunc=lambda x: (2,) if x == (1,) else (1,))
    with pytest.raises(ValueError):
        truncation_depth(bg, {(1,), (2,)})


def test_check_R_triangle(pair6):
    v = check_R(pair6, binom(6, 3), binom(3, 2), 2)
    assert v.passed and v.certificate["points"] == 15 and v.certificate["lines"] == 20
    pair5 = classical_pair(5)
    v = check_R(pair5, binom(5, 3), binom(3, 2), 2)
    assert v.status == "FAIL" and v.recheck()
    data = json.loads(json.dumps(v.to_json()))
    assert data["certificate"]["coloring"] == list(v.coloring)


def test_check_R_rejects_undefined(pair4):
    with pytest.raises(ValueError):
        check_R(pair4, binom(4, 3), binom(4, 2), 2)
    with pytest.raises(ValueError):
        check_R(pair4, binom(4, 2), binom(2, 1), 0)


def test_check_P_pigeonhole(pair6):
    P, y, a = binom(3, 2), (1,), (1,)
    assert check_P(pair6, P, y, [(binom(4, 3), a)], 2).passed
    v = check_P(pair6, P, y, [(binom(3, 3), a)], 2)
    assert v.status == "FAIL" and v.recheck()
    v = check_P(pair6, P, y, [(binom(3, 3), a), (binom(4, 3), a)], 2)
    assert v.passed and v.witness[0].key == ("binom", 4, 3)
    assert v.certificate["rejected"][0]["error"] == "avoiding coloring found"


def test_check_P_invalid_candidate(pair4):
    v = check_P(pair4, binom(3, 2), (1,), [(binom(4, 2), (1,))], 2)
    assert v.status == "FAIL" and v.certificate["reason"] == "no valid candidate"


def test_classical_p_witness_finds_bound(pair6):
    w = classical_p_witness(pair6, 2)
    F, a = w(binom(3, 2), (1,))
    assert F.key == ("binom", 4, 3) and a == (1,)


def test_pointwise_and_conditions_pass(pair4):
    assert check_pointwise(pair4).passed
    for c in ("A", "B", "STAR"):
        assert check_condition(pair4, c).passed, c


def test_pointwise_mutation_fails(pair4):
    def bad_dot(F, P):
        r = pair4.dot(F, P)
        if r is None or len(r.members) < 2:
            return r
        return Family(r.key, frozenset(list(r.members)[1:]))

    bad = FamilyPair(pair4.background, pair4.f_families, pair4.p_families, bad_dot, pair4.bullet)
    assert check_pointwise(bad).status == "FAIL"


def test_condition_A_mutation_fails(pair4):
    ps = [P for P in pair4.p_families if P.key != ("binom", 3, 1)]
    bad = FamilyPair(pair4.background, pair4.f_families, ps, pair4.dot, pair4.bullet)
    v = check_condition(bad, "A")
    assert v.status == "FAIL"


def test_condition_B_without_witnesses_fails(pair4):
    bad = FamilyPair(pair4.background, pair4.f_families, pair4.p_families, pair4.dot, pair4.bullet)
    assert check_condition(bad, "B").status == "FAIL"


def test_condition_star_mutation_fails(pair4):
    bad = FamilyPair(pair4.background, pair4.f_families, pair4.p_families, pair4.dot, lambda F, G: None)
    assert check_condition(bad, "STAR").status == "FAIL"


def test_unknown_condition(pair4):
    with pytest.raises(ValueError):
        check_condition(pair4, "Z")


@pytest.mark.parametrize("t", [0, 1])
def test_lift_passes_direct_check(t):
    pair = classical_pair(6)
    w = classical_p_witness(pair, 2)
    P = binom(3, 3) if t == 1 else binom(3, 2)
    x = (1,)
    res = lift_P_to_Pplus(pair, t, P, x, w, 2)
    assert res.verdict.passed
    direct = check_Pplus(pair, t, P, x, res.F, res.a, 2)
    assert direct.passed
    assert res.chain[0][0] == "P"


def test_lift_rejects_bad_point():
    pair = classical_pair(4)
    with pytest.raises(ValueError):
        lift_P_to_Pplus(pair, 0, binom(3, 2), (3,), classical_p_witness(pair, 2), 2)
    with pytest.raises(ValueError):
        lift_P_to_Pplus(pair, -1, binom(3, 2), (1,), classical_p_witness(pair, 2), 2)


def test_coloring_problem_shape(pair4):
    bg = pair4.background
    prob = coloring_problem(bg, binom(4, 3).members, binom(3, 2).members, 2)
    assert prob.n_points == 6 and len(prob.lines) == 4
    assert act_on_set(bg, binom(4, 3).members, binom(3, 2).members) == binom(4, 2).members
    assert act_on_set(bg, binom(2, 2).members, binom(3, 2).members) is None
