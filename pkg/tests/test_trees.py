import itertools

import pytest
from hypothesis import given, settings, strategies as st

from treeramsey.embeddings import Flavor, TreeMap, classify, iota
from treeramsey.trees import (
    OrderedTree,
    Ordering,
    all_ordered_trees,
    canonical_code,
    chain,
    dec,
    derive_prime,
    derive_star,
    derive_star_with_map,
    lex_compare,
    minus,
    plus,
    regular_tree,
    regular_words,
    subtree,
    tree_from_json,
    tree_to_json,
    wedge,
)

SMALL = [t for n in range(8) for t in all_ordered_trees(n)]


@st.composite
def trees(draw, max_nodes=9):
    n = draw(st.integers(0, max_nodes))
    if n == 0:
        return OrderedTree(())
    parent = [-1] + [draw(st.integers(0, i - 1)) for i in range(1, n)]
    return OrderedTree.from_parents(parent)


def catalan(n):
    from math import comb

    return comb(2 * n, n) // (n + 1)


def test_counts_of_all_ordered_trees():
    # ordered trees on n nodes are counted by Catalan(n-1)
    for n in range(1, 9):
        assert sum(1 for _ in all_ordered_trees(n)) == catalan(n - 1)


def test_regular_tree_examples():
    assert regular_tree(2, 0).is_empty()
    assert regular_tree(0, 5).size == 1
    t = regular_tree(2, 2)
    assert t.parent == (-1, 0, 0)
    assert regular_tree(3, 3).size == 13
    assert all(regular_tree(2, 4).depth[v] == 4 for v in regular_tree(2, 4).leaves)
    with pytest.raises(ValueError):
        regular_tree(-1, 2)


def test_regular_words_order_is_dfs():
    words = regular_words(2, 3)
    assert words == [(), (0,), (0, 0), (0, 1), (1,), (1, 0), (1, 1)]


def test_dec_saturates():
    assert dec(0) == 0
    assert dec(5) == 4


def test_parent_array_validation():
    with pytest.raises(ValueError):
        OrderedTree((0,))
    with pytest.raises(ValueError):
        OrderedTree((-1, 1))
    with pytest.raises(ValueError):
        # node 3 hangs below node 1 after node 2 closed that branch
        OrderedTree((-1, 0, 0, 1))


def test_wedge_examples():
    c = chain(3)
    assert wedge(c, 1, 2) == 1
    assert wedge(c, 2, 2) == 2
    t = regular_tree(2, 2)
    assert wedge(t, 1, 2) == 0
    with pytest.raises(IndexError):
        wedge(t, 0, 3)


def _wedge_oracle(t, v, w):
    common = set(t.ancestors(v)) & set(t.ancestors(w))
    return max(common, key=lambda u: t.depth[u])


def test_wedge_matches_predecessor_intersection():
    for t in SMALL:
        for v, w in itertools.product(t.nodes(), repeat=2):
            assert wedge(t, v, w) == _wedge_oracle(t, v, w)


def test_lex_compare_examples():
    t = regular_tree(2, 2)
    assert lex_compare(t, 1, 1) == Ordering.EQ
    assert lex_compare(t, 0, 2) == Ordering.LT
    assert lex_compare(t, 1, 2) == Ordering.LT
    assert lex_compare(t, 2, 1) == Ordering.GT


def test_lex_order_is_index_order_up_to_seven_nodes():
    for t in SMALL:
        for v, w in itertools.product(t.nodes(), repeat=2):
            expected = Ordering.EQ if v == w else (Ordering.LT if v < w else Ordering.GT)
            assert lex_compare(t, v, w) == expected


def test_predecessor_sets_are_chains():
    for t in SMALL:
        for v in t.nodes():
            anc = t.ancestors(v)
            assert anc[0] == 0
            assert all(t.parent[b] == a for a, b in zip(anc, anc[1:]))


def test_derive_star_examples():
    assert derive_star(OrderedTree(())).is_empty()
    assert derive_star(regular_tree(2, 2)).size == 1
    assert canonical_code(derive_star(chain(3))) == canonical_code(chain(2))


def test_derive_prime_examples():
    r = derive_prime(chain(3))
    assert r.derived.is_empty() and r.removed_segment_length == 3 and r.splitting_node is None
    r = derive_prime(regular_tree(2, 2))
    assert canonical_code(r.derived) == canonical_code(chain(2))
    assert r.removed_segment_length == 1 and r.splitting_node == 0
    r = derive_prime(chain(1))
    assert r.derived.is_empty() and r.removed_segment_length == 1
    r = derive_prime(OrderedTree(()))
    assert r == derive_prime(OrderedTree(())) and r.removed_segment_length == 0


def test_derive_prime_structure():
    for t in SMALL:
        if t.is_empty():
            continue
        r = derive_prime(t)
        assert len(r.derived.leaves) == len(t.leaves) - 1
        # removed nodes form a chain ordered by height
        assert all(t.parent[b] == a for a, b in zip(r.removed, r.removed[1:]))
        assert r.removed[-1] == t.leaves[-1]
        if not r.derived.is_empty():
            sp = r.inclusion[r.splitting_node]
            assert t.parent[r.removed[0]] == sp


def test_inclusions_classify():
    for t in SMALL:
        if t.is_empty():
            continue
        ds, inc = derive_star_with_map(t)
        assert classify(TreeMap(ds, t, inc)).strong
        r = derive_prime(t)
        c = classify(TreeMap(r.derived, t, r.inclusion))
        assert c.embedding and c.leaf_preserving


def test_subtree_examples():
    t = regular_tree(2, 3)
    s, nodes = subtree(t, 0)
    assert s == t and nodes == tuple(t.nodes())
    s, _ = subtree(t, 1)
    assert canonical_code(s) == canonical_code(regular_tree(2, 2))
    s, _ = subtree(t, t.leaves[0])
    assert s.size == 1


def test_plus_minus_examples():
    assert plus(OrderedTree(())).is_empty()
    assert minus(chain(1)).is_empty()
    assert plus(regular_tree(2, 2)).size == 5
    for t in SMALL:
        assert canonical_code(minus(plus(t))) == canonical_code(t)


def test_canonical_code_examples():
    assert canonical_code(OrderedTree(())) == ""
    assert canonical_code(chain(1)) == "()"
    assert canonical_code(regular_tree(2, 2)) == "(()())"


def test_canonical_code_injective_up_to_six_nodes():
    codes = [canonical_code(t) for n in range(7) for t in all_ordered_trees(n)]
    assert len(codes) == len(set(codes))


def test_iota_properties():
    for k, n in [(1, 3), (2, 1), (2, 2), (2, 3), (3, 2)]:
        s = iota(k, n, "STAR")
        assert all(s.domain.depth[v] == s.codomain.depth[s.image[v]] for v in s.domain.nodes())
        p = iota(k, n, "PRIME")
        leaf_images = sorted(p.image[v] for v in p.domain.leaves)
        assert leaf_images == list(p.codomain.leaves[: len(leaf_images)])
    assert iota(2, 0, "STAR").image == ()
    assert iota(2, 1, "STAR").image == (0,)
    assert iota(2, 1, "PRIME").image == (1,)


@given(trees())
def test_json_round_trip(t):
    assert tree_from_json(tree_to_json(t)) == t


def test_json_rejects_bad_parents():
    with pytest.raises(ValueError):
        tree_from_json({"parent": [-1, 1]})
    with pytest.raises(ValueError):
        tree_from_json({"nodes": []})


@settings(max_examples=60)
@given(trees())
def test_from_parents_renumbering_keeps_code(t):
    # reversing sibling lists and renumbering back recovers the same shape
    assert canonical_code(OrderedTree.from_parents(list(t.parent))) == canonical_code(t)


@settings(max_examples=60)
@given(trees())
def test_star_drops_exactly_the_top_level(t):
    ds = derive_star(t)
    assert ds.height == max(t.height - 1, 0)
    assert ds.size == sum(1 for v in t.nodes() if t.depth[v] < t.height)
