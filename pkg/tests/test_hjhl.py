import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from oracles import avoiding_count
from treeramsey.adversary import brute_force_avoiding, verify_avoiding
from treeramsey.embeddings import classify
from treeramsey.hjhl import (
    HJVariant,
    HLVariant,
    ParameterWord,
    extend_to_tree,
    hj_problem,
    hj_search,
    hl_check,
    hl_problem,
    hl_translated_n,
    induced_embedding,
    is_strong_sequence,
    meet_level,
    split_word,
    translate_hj_to_hl,
    valid_words,
)
from treeramsey.trees import regular_tree, regular_words


def stirling2(n, k):
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def L(a):
    return ("L", a)


def P(j):
    return ("P", j)


def test_parameter_word_validation():
    ParameterWord(2, (0, 1), (L(0), P(1), P(2), P(1)))
    with pytest.raises(ValueError):
        ParameterWord(2, (0, 1), (P(2), P(1)))
    with pytest.raises(ValueError):
        ParameterWord(2, (0, 1), (P(1), L(0)))
    with pytest.raises(ValueError):
        ParameterWord(1, (0, 1), (L(5), P(1)))
    with pytest.raises(ValueError):
        ParameterWord(1, (0, 1), (("Q", 1),))


def test_parameter_word_json_round_trip():
    w = ParameterWord(2, (0, 1), (L(1), P(1), L(0), P(2)))
    assert ParameterWord.from_json(w.to_json(), (0, 1)) == w
    assert w.substitute((0, 1)) == (1, 0, 0, 1)


@pytest.mark.parametrize("a,n,m", [(2, 3, 1), (2, 4, 2), (3, 3, 2), (1, 4, 3), (2, 2, 0)])
def test_valid_word_count(a, n, m):
    # choose parameter slots, fill the rest with letters, order the parameters
    expected = sum(comb(n, j) * a ** (n - j) * stirling2(j, m) for j in range(n + 1))
    words = list(valid_words(range(a), n, m))
    assert len(words) == expected
    assert len({w.letters for w in words}) == expected


def test_meet_level_example():
    w = ParameterWord(1, (0, 1), (L(0), P(1), P(1)))
    assert meet_level(w, 0, ()) == (1, (0,))
    assert meet_level(w, 1, (1,)) == (3, (0, 1, 1))
    with pytest.raises(ValueError):
        meet_level(w, 2, (0, 0))


def test_extension_is_strong_leaf_preserving():
    for w in valid_words((0, 1), 3, 2):
        f = extend_to_tree(w)
        c = classify(f)
        assert c.embedding and c.strong and c.leaf_preserving
        g = induced_embedding(w)
        words_n = regular_words(2, 4)
        for x, y in g.items():
            src = regular_words(2, 3).index(x)
            assert words_n[f.image[src]] == y


def test_split_word_and_strong_sequence():
    B = tuple(itertools.product((0, 1), repeat=2))
    w = ParameterWord(1, B, (L((0, 1)), P(1), L((1, 1))))
    parts = split_word(w)
    assert [p.substitute(((0,), (1,))[0]) for p in parts] == [(0, 0, 1), (1, 0, 1)]
    assert is_strong_sequence([induced_embedding(p) for p in parts])
    with pytest.raises(ValueError):
        split_word(ParameterWord(1, (0, 1), (P(1),)))


def test_hj_desk_value():
    res = hj_search(2, 1, 2)
    assert res.status == "FOUND" and res.n == 2
    assert set(res.refutations) == {0, 1}
    assert verify_avoiding(res.problems[1], res.refutations[1])
    # all 16 colorings of A^2 fail to avoid every line
    assert avoiding_count(4, hj_problem((0, 1), 1, 2, 2).lines, 2) == 0
    assert avoiding_count(2, hj_problem((0, 1), 1, 1, 2).lines, 2) == 2


def test_hj_b_statement():
    assert hj_search(2, 1, 2, HJVariant.B_STMT).n == 3


def test_hj_undecided_and_errors():
    assert hj_search(3, 1, 2).status == "UNDECIDED-AT-SCALE"
    with pytest.raises(ValueError):
        hj_search(0, 1, 2)


@pytest.mark.parametrize("t,m,n", [(1, 1, 1), (1, 2, 3), (2, 1, 1)])
def test_hl_translated_values(t, m, n):
    got, res = hl_translated_n(2, t, m, 2)
    assert got == n
    assert hl_check(2, t, m, 2, n).passed
    v = hl_check(2, t, m, 2, n - 1)
    assert v.status == "FAIL" and v.recheck()


def test_hl2_value():
    assert hl_check(2, 1, 2, 2, 4, HLVariant.HL2).passed
    assert hl_check(2, 1, 2, 2, 3, HLVariant.HL2).status == "FAIL"


def test_hl_problem_against_enumeration():
    prob = hl_problem(2, 1, 2, 2, 2)
    assert len(brute_force_avoiding(prob)) > 0
    prob = hl_problem(2, 1, 2, 2, 3)
    assert brute_force_avoiding(prob) == []


def _leaf_tuples(k, t, n):
    leaves = list(itertools.product(range(k), repeat=n - 1))
    return list(itertools.product(leaves, repeat=t))


def test_translation_exhaustive_t1_m2():
    keys = _leaf_tuples(2, 1, 3)
    prob = hl_problem(2, 1, 2, 2, 3)
    lines = {frozenset(prob.labels[p] for p in line) for line in prob.lines}
    leaves = [v for v in regular_tree(2, 3).leaves]
    words = regular_words(2, 3)
    for colors in itertools.product(range(2), repeat=len(keys)):
        tr = translate_hj_to_hl(2, 1, 2, 3, dict(zip(keys, colors)))
        assert tr.verified
        f = tr.sequence[0]
        line = frozenset((f.image[v],) for v in f.domain.leaves)
        assert line in lines
        assert all(words[f.image[v]] in [words[u] for u in leaves] for v in f.domain.leaves)


def test_translation_refuted_below():
    keys = _leaf_tuples(2, 1, 2)
    with pytest.raises(LookupError):
        translate_hj_to_hl(2, 1, 2, 2, {keys[0]: 0, keys[1]: 1})


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=16, max_size=16))
def test_translation_t2_always_reverifies(colors):
    # t = 2, m = 2 at n = 3: 16 leaf pairs; a monochromatic line may not exist
    keys = _leaf_tuples(2, 2, 3)
    try:
        tr = translate_hj_to_hl(2, 2, 2, 3, dict(zip(keys, colors)))
    except LookupError:
        return
    assert tr.verified
    assert is_strong_sequence([induced_embedding(p) for p in tr.parts])


@pytest.mark.parametrize("t", [1, 2])
def test_translation_m1(t):
    keys = _leaf_tuples(2, t, 1)
    tr = translate_hj_to_hl(2, t, 1, 1, {keys[0]: 0})
    assert tr.verified and len(tr.sequence) == t
