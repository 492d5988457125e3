"""Instances built on strong embeddings between regular trees.

STAR: ``X`` holds embeddings ``[m] -> T^n``, ``A`` strong embeddings
``T^m -> T^n``, truncation drops the top point.  MILLIKEN: ``X`` holds strong
embeddings ``S -> T_inf`` for arbitrary ordered ``S``, truncation is
restriction to ``S*``.

Every ``T^n`` sits inside ``T^{n+1}`` with a node written as the same word
(root kept), so nodes are words and maps are tuples of words.  An element of
``A`` is ``(m, images)`` with ``images`` listing the image of each word of
``T^m`` in depth-first order.
"""

from __future__ import annotations

from functools import lru_cache

from ..adversary import DEFAULT_GUARD, Guard, GuardExceeded, find_avoiding_coloring, problem_from_sets
from ..embeddings import Flavor, enumerate_maps
from ..trees import OrderedTree, all_ordered_trees, chain, derive_star_with_map, regular_tree, regular_words
from ..framework import Family, FamilyPair, NormedBackground, Verdict, check_P, truncate_set
from .common import Instance, check_tree_guard

__all__ = [
    "word_index",
    "strong_family",
    "chain_family",
    "shape_family",
    "apply_strong",
    "compose_strong",
    "build_star",
    "build_milliken",
    "strong_from_treemap",
    "identity_strong",
    "reduced_star_problem",
    "check_P_star_instance",
    "check_P_milliken",
]


@lru_cache(maxsize=None)
def word_index(k: int, m: int) -> dict:
    return {w: i for i, w in enumerate(regular_words(k, m))}


def apply_strong(k: int, g: tuple, w: tuple):
    m, img = g
    idx = word_index(k, m).get(w)
    return None if idx is None else img[idx]


def compose_strong(k: int, g2: tuple, g1: tuple):
    m1, img1 = g1
    out = []
    for w in img1:
        v = apply_strong(k, g2, w)
        if v is None:
            return None
        out.append(v)
    return (m1, tuple(out))


def strong_from_treemap(k: int, f) -> tuple:
    """``(m, images)`` for a TreeMap from ``T^{k,m}`` to ``T^{k,n}``."""
    m = f.domain.height
    dst = regular_words(k, f.codomain.height)
    return (m, tuple(dst[i] for i in f.image))


@lru_cache(maxsize=None)
def strong_family(k: int, n: int, m: int, leaf: bool) -> Family:
    """``binom(T^n, T^m)^s`` (or the leaf preserving version) as ``A`` elements."""
    flavor = Flavor.STRONG_LEAF if leaf else Flavor.STRONG
    maps = enumerate_maps(regular_tree(k, m), regular_tree(k, n), flavor)
    members = frozenset(strong_from_treemap(k, f) if m else (0, ()) for f in maps)
    return Family(("strong_leaf" if leaf else "strong", n, m), members)


def _words_of(k: int, n: int, f) -> tuple:
    dst = regular_words(k, n)
    return tuple(dst[i] for i in f.image)


@lru_cache(maxsize=None)
def chain_family(k: int, n: int, m: int, leaf: bool) -> Family:
    """``binom(T^n, m)``: embeddings ``[m] -> T^n`` as tuples of words."""
    flavor = Flavor.LEAF if leaf else Flavor.EMB
    maps = enumerate_maps(chain(m), regular_tree(k, n), flavor)
    return Family(("leaf" if leaf else "emb", n, m), frozenset(_words_of(k, n, f) for f in maps))


@lru_cache(maxsize=None)
def shape_family(k: int, n: int, shape: tuple, leaf: bool) -> Family:
    """``binom(T^n, S)^s`` with ``S`` given by its parent array, as ``(parent, words)``."""
    flavor = Flavor.STRONG_LEAF if leaf else Flavor.STRONG
    maps = enumerate_maps(OrderedTree(shape), regular_tree(k, n), flavor)
    return Family(("leaf" if leaf else "emb", n, shape), frozenset((shape, _words_of(k, n, f)) for f in maps))


def _valid(n: int, m: int) -> bool:
    return 0 < m <= n or m == n == 0


_MATCH = {"strong": "emb", "strong_leaf": "leaf"}


def _strong_bullet(k: int):
    def bullet(F: Family, G: Family):
        kind, n, m = F.key
        kind2, l, j = G.key
        if kind != kind2 or m != l:
            return None
        return strong_family(k, n, j, kind == "strong_leaf")

    return bullet


def _strong_norm(words) -> int:
    return max((len(w) + 1 for w in words), default=0)


def _f_families(k: int, max_n: int) -> list[Family]:
    return [
        strong_family(k, n, m, leaf)
        for leaf in (False, True)
        for n in range(max_n + 1)
        for m in range(n + 1)
        if _valid(n, m)
    ]


def _witnesses(k: int, max_n: int) -> list[Family]:
    return [strong_family(k, max_n + 1, m, leaf) for leaf in (False, True) for m in range(1, max_n + 2)]


def build_star(k: int, max_n: int, guard: Guard = DEFAULT_GUARD) -> Instance:
    if k < 1:
        raise ValueError("tree instances need k >= 1")
    check_tree_guard(k, max_n + 1, guard)
    f_fams = _f_families(k, max_n)
    p_fams = [
        chain_family(k, n, m, leaf)
        for leaf in (False, True)
        for n in range(max_n + 1)
        for m in range(n + 1)
        if _valid(n, m)
    ]
    a_elems = tuple(sorted(set().union(*(F.members for F in f_fams))))
    x_elems = tuple(sorted(set().union(*(P.members for P in p_fams))))

    def act(g, f):
        out = []
        for w in f:
            v = apply_strong(k, g, w)
            if v is None:
                return None
            out.append(v)
        return tuple(out)

    bg = NormedBackground(
        name=f"star(k={k}, maxN={max_n})",
        a_elems=a_elems,
        x_elems=x_elems,
        mult=lambda g2, g1: compose_strong(k, g2, g1),
        act=act,
        trunc=lambda f: f[:-1],
        norm=lambda f: len(f[-1]) + 1 if f else 0,
    )

    def dot(F: Family, P: Family):
        kind, n, m = F.key
        pkind, l, j = P.key
        if _MATCH[kind] != pkind or m != l:
            return None
        return chain_family(k, n, j, pkind == "leaf")

    pair = FamilyPair(bg, f_fams, p_fams, dot=dot, bullet=_strong_bullet(k), witness_families=_witnesses(k, max_n))
    return Instance("STAR", k, max_n, bg, pair)


def build_milliken(k: int, max_n: int, max_domain: int = 4, guard: Guard = DEFAULT_GUARD) -> Instance:
    if k < 1:
        raise ValueError("tree instances need k >= 1")
    check_tree_guard(k, max_n + 1, guard)
    f_fams = _f_families(k, max_n)
    shapes = [t.parent for size in range(max_domain + 1) for t in all_ordered_trees(size)]
    p_fams = []
    for leaf in (False, True):
        for n in range(max_n + 1):
            for shape in shapes:
                if not shape and n:
                    # {empty map} is listed once, as with binom(T^0, 0)
                    continue
                fam = shape_family(k, n, shape, leaf)
                if fam.members:
                    p_fams.append(fam)
    a_elems = tuple(sorted(set().union(*(F.members for F in f_fams))))
    x_elems = tuple(sorted(set().union(*(P.members for P in p_fams))))

    def act(g, f):
        shape, words = f
        out = []
        for w in words:
            v = apply_strong(k, g, w)
            if v is None:
                return None
            out.append(v)
        return (shape, tuple(out))

    @lru_cache(maxsize=None)
    def star_of(shape):
        sub, inc = derive_star_with_map(OrderedTree(shape))
        return sub.parent, inc

    def trunc(f):
        shape, words = f
        sub, inc = star_of(shape)
        return (sub, tuple(words[i] for i in inc))

    bg = NormedBackground(
        name=f"milliken(k={k}, maxN={max_n})",
        a_elems=a_elems,
        x_elems=x_elems,
        mult=lambda g2, g1: compose_strong(k, g2, g1),
        act=act,
        trunc=trunc,
        norm=lambda f: _strong_norm(f[1]),
    )

    def dot(F: Family, P: Family):
        kind, n, m = F.key
        pkind, l, shape = P.key
        if _MATCH[kind] != pkind or m != l:
            return None
        return shape_family(k, n, shape, pkind == "leaf")

    pair = FamilyPair(bg, f_fams, p_fams, dot=dot, bullet=_strong_bullet(k), witness_families=_witnesses(k, max_n))
    return Instance("MILLIKEN", k, max_n, bg, pair, {"max_domain": max_domain})


def identity_strong(k: int, h: int) -> tuple:
    """The identity of ``T^h`` as an element of ``A``."""
    return (h, tuple(regular_words(k, h)))


def reduced_star_problem(k: int, q: int, r: int, h0: int, d: int, leaf: bool):
    """Color the nodes (leaves) of ``T^{r-h0}``; one line per strong (leaf preserving)
    image of ``T^{q-h0}``.  This is the subtree problem a (P) instance reduces to."""
    m, n = q - h0, r - h0
    fam = strong_family(k, n, m, leaf)
    src = regular_words(k, m)
    dst = regular_words(k, n)
    if leaf:
        src_pts = [i for i, w in enumerate(src) if len(w) == m - 1]
        points = [w for w in dst if len(w) == n - 1]
    else:
        src_pts = list(range(len(src)))
        points = dst
    lines = [[img[i] for i in src_pts] for _, img in sorted(fam.members)]
    return problem_from_sets(points, lines, d)


def _search_r(inst, P, y, g0, d, q, r_max, leaf, guard, prune, reduced=None):
    k = inst.k
    refuted = {}
    last = None
    r = q
    while r_max is None or r <= r_max:
        try:
            check_tree_guard(k, r, guard)
            F = strong_family(k, r, q, leaf)
            v = check_P(inst.pair, P, y, [(F, g0)], d, prune=prune, guard=guard)
            agree = None
            if reduced is not None:
                red = reduced(r)
                agree = (find_avoiding_coloring(red, prune=prune, guard=guard) is None) == v.passed
        except GuardExceeded as exc:
            return Verdict("UNDECIDED-AT-SCALE", {"reason": str(exc), "refuted_r": refuted, "g0": g0})
        if agree is not None:
            v.certificate["reduced_agrees"] = agree
        if v.passed:
            v.certificate.update({"r": r, "g0": g0, "refuted_r": refuted})
            return v
        refuted[r] = {"points": v.certificate.get("points"), "coloring": v.coloring}
        last = v
        r += 1
    out = Verdict("FAIL", {"reason": f"every r up to {r_max} refuted", "g0": g0, "refuted_r": refuted})
    if last is not None:
        out.problem, out.coloring = last.problem, last.coloring
    return out


def check_P_star_instance(
    q: int,
    p: int,
    f0: tuple,
    d: int,
    k: int = 2,
    leaf: bool = False,
    g0: tuple | None = None,
    r_max: int | None = None,
    guard: Guard = DEFAULT_GUARD,
    prune: str = "colors",
) -> Verdict:
    """Condition (P) for ``P = binom(T^q, p)`` (or its leaf version) at ``f0``.

    ``g0`` defaults to the identity on ``T^{|f0|}``.  Heights ``r = q, q+1, ...``
    are tried until the fiber problem ``F_{g0} . P_{f0}`` has no avoiding
    coloring.  Each direct verdict is compared with the reduced subtree
    problem (``reduced_agrees`` in the certificate) when ``g0`` is the default.
    """
    if not 0 < p <= q:
        raise ValueError("need 0 < p <= q")
    f0 = tuple(tuple(w) for w in f0)
    inst = build_star(k, q, guard=guard)
    P = chain_family(k, q, p, leaf)
    if f0 not in truncate_set(inst.background, P.members):
        raise ValueError("f0 is not a truncation of a member of P")
    h0 = len(f0[-1]) + 1 if f0 else 0
    reduced = None
    if g0 is None:
        g0 = identity_strong(k, h0)
        reduced = lambda r: reduced_star_problem(k, q, r, h0, d, leaf)
    return _search_r(inst, P, f0, g0, d, q, r_max, leaf, guard, prune, reduced)


def check_P_milliken(
    shape: tuple,
    q: int,
    y: tuple,
    d: int,
    k: int = 2,
    leaf: bool = False,
    r_max: int | None = None,
    guard: Guard = DEFAULT_GUARD,
    prune: str = "colors",
) -> Verdict:
    """Condition (P) for ``binom(T^q, S)^s`` at ``y``, through the generic checker.

    The candidate at height ``r`` is ``(binom(T^r, T^q)^s, id on T^{|y|})``.
    """
    shape = tuple(shape)
    inst = build_milliken(k, q, max_domain=len(shape), guard=guard)
    P = shape_family(k, q, shape, leaf)
    if not P.members:
        raise ValueError("empty family")
    if y not in truncate_set(inst.background, P.members):
        raise ValueError("y is not a truncation of a member of P")
    g0 = identity_strong(k, _strong_norm(y[1]))
    return _search_r(inst, P, y, g0, d, q, r_max, leaf, guard, prune)
