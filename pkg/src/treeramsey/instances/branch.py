"""The instance built on leaf preserving embeddings into ``T^inf``.

``T^n`` sits in ``T^{n+1}`` by prefixing a ``0`` to every word, so a node of
``T^inf`` is stored as ``(n, u)``: the least level ``n`` it lives in and its
word there, which never starts with ``0``.  ``B`` elements are stored through
their finite part (:class:`BMap`); on the roots above that part they follow
the rule ``v_{q+j} -> v_{r+j}``.
"""

from __future__ import annotations

import functools
import hashlib
from dataclasses import dataclass
from functools import cached_property, lru_cache

from ..adversary import DEFAULT_GUARD, Guard, GuardExceeded, find_avoiding_coloring, problem_from_sets
from ..embeddings import Flavor, enumerate_maps
from ..framework import (
    BOTTOM,
    Family,
    FamilyPair,
    NormedBackground,
    Verdict,
    truncate_set,
)
from ..trees import OrderedTree, all_ordered_trees, derive_prime, regular_tree, regular_words
from .common import Instance, check_tree_guard

__all__ = [
    "node_from_word",
    "word_in",
    "le_inf",
    "InfNode",
    "BMap",
    "EMPTY",
    "leaf_node",
    "root_node",
    "rightmost_leaf",
    "nodes_upto",
    "apply_b",
    "compose_b",
    "act_b",
    "trunc_y",
    "norm_y",
    "g_family",
    "q_level",
    "lp_maps",
    "based_on",
    "successors_beyond",
    "build_branch",
    "branch_g0",
    "check_P_branch_instance",
]


def node_from_word(n: int, w: tuple) -> tuple:
    """The ``T^inf`` node written ``w`` in ``T^n``."""
    w = tuple(w)
    j = 0
    while j < len(w) and w[j] == 0:
        j += 1
    return (n - j, w[j:])


def word_in(node: tuple, n: int) -> tuple:
    level, u = node
    if n < level:
        raise ValueError(f"node {node} does not lie in T^{n}")
    return (0,) * (n - level) + u


def le_inf(a: tuple, b: tuple) -> bool:
    n = max(a[0], b[0])
    return word_in(a, n) <= word_in(b, n)


def leaf_node(node: tuple) -> bool:
    return len(node[1]) == node[0] - 1


def root_node(n: int) -> tuple:
    """``v_n``."""
    return (n, ())


def rightmost_leaf(k: int, n: int) -> tuple:
    """``x_n``."""
    return node_from_word(n, (k - 1,) * (n - 1))


@functools.total_ordering
@dataclass(frozen=True)
class InfNode:
    """A node ordered by ``<=^inf`` (used as a norm value)."""

    node: tuple

    def __lt__(self, other) -> bool:
        if other is BOTTOM:
            return False
        return self.node != other.node and le_inf(self.node, other.node)

    def __repr__(self) -> str:
        return f"{self.node[1]}@{self.node[0]}"


@lru_cache(maxsize=None)
def nodes_upto(k: int, n: int, x: tuple | None = None) -> tuple:
    """Nodes of ``T^n`` (those ``<=^inf x`` when ``x`` is given), in order."""
    out = [node_from_word(n, w) for w in regular_words(k, n)]
    if x is not None:
        out = [v for v in out if le_inf(v, x)]
    return tuple(out)


@dataclass(frozen=True, order=True)
class BMap:
    """A leaf preserving embedding ``T_x -> T^inf``.

    ``core`` lists ``(v, g(v))`` for the nodes of ``T_x`` inside ``T^q``;
    above them ``g(v_{q+j}) = v_{r+j}``.  ``q == 0`` is the empty function.
    """

    x: tuple
    q: int
    r: int
    core: tuple

    @cached_property
    def table(self) -> dict:
        return dict(self.core)

    def is_empty(self) -> bool:
        return self.q == 0

    def __repr__(self) -> str:
        if self.is_empty():
            return "BMap(empty)"
        return f"BMap(x={self.x}, q={self.q}, r={self.r}, {len(self.core)} nodes)"


EMPTY = BMap((0, ()), 0, 0, ())


def _canonical(x: tuple, q: int, r: int, table: dict) -> BMap:
    table = dict(table)
    while q - 1 >= x[0] and r - 1 >= 1 and table.get(root_node(q)) == root_node(r):
        del table[root_node(q)]
        q -= 1
        r -= 1
    n = max(q, x[0])
    core = tuple(sorted(table.items(), key=lambda kv: word_in(kv[0], n)))
    return BMap(x, q, r, core)


def make_bmap(x: tuple, q: int, r: int, table: dict) -> BMap:
    return _canonical(x, q, r, table)


def apply_b(g: BMap, v: tuple):
    if g.is_empty() or not le_inf(v, g.x):
        return None
    if v[0] <= g.q:
        return g.table.get(v)
    if v[1]:
        return None
    return root_node(g.r + v[0] - g.q)


def compose_b(k: int, g2: BMap, g1: BMap):
    """``g2 . g1`` (apply ``g1`` first), or ``None`` when undefined."""
    if g1.is_empty():
        return EMPTY
    if g2.is_empty():
        return None
    for _, w in g1.core:
        if not le_inf(w, g2.x):
            return None
    j = max(0, g2.q - g1.r)
    q = g1.q + j
    table = {}
    for v in nodes_upto(k, q, g1.x):
        w = apply_b(g2, apply_b(g1, v))
        if w is None:
            return None
        table[v] = w
    return _canonical(g1.x, q, g2.r + g1.r + j - g2.q, table)


def act_b(g: BMap, f: tuple):
    shape, nodes = f
    if not nodes:
        return f
    out = []
    for v in nodes:
        w = apply_b(g, v)
        if w is None:
            return None
        out.append(w)
    return (shape, tuple(out))


@lru_cache(maxsize=None)
def _prime(shape: tuple):
    res = derive_prime(OrderedTree(shape))
    return res.derived.parent, res.inclusion


def trunc_y(f: tuple) -> tuple:
    shape, nodes = f
    sub, inc = _prime(shape)
    return (sub, tuple(nodes[i] for i in inc))


def norm_y(f: tuple):
    nodes = f[1]
    if not nodes:
        return BOTTOM
    best = nodes[0]
    for v in nodes[1:]:
        if le_inf(best, v):
            best = v
    return InfNode(best)


def q_level(members) -> int:
    """Least ``m`` with every image inside ``T^m`` (0 for the empty function)."""
    return max((v[0] for _, nodes in members for v in nodes), default=0)


def based_on(members) -> OrderedTree:
    """The common domain tree of a set of ``Y`` elements."""
    shapes = {shape for shape, _ in members}
    if not shapes:
        raise ValueError("an empty set is not based on any tree")
    if len(shapes) > 1:
        raise ValueError("elements have different domains")
    return OrderedTree(shapes.pop())


@lru_cache(maxsize=None)
def g_family(k: int, n: int, m: int) -> Family:
    """``binomsq(T^n, T^m)^inf`` through the bijection with leaf preserving ``T^m -> T^n``."""
    if m == n == 0:
        return Family(("G", 0, 0), frozenset([EMPTY]))
    if not 0 < m <= n:
        raise ValueError("need 0 < m <= n or m = n = 0")
    src = regular_words(k, m)
    dst = regular_words(k, n)
    x = rightmost_leaf(k, m)
    members = set()
    for f in enumerate_maps(regular_tree(k, m), regular_tree(k, n), Flavor.LEAF):
        table = {node_from_word(m, src[i]): node_from_word(n, dst[j]) for i, j in enumerate(f.image)}
        members.add(_canonical(x, m, n, table))
    return Family(("G", n, m), frozenset(members))


@lru_cache(maxsize=None)
def lp_maps(k: int, shape: tuple, m: int) -> frozenset:
    dst = regular_words(k, m)
    maps = enumerate_maps(OrderedTree(shape), regular_tree(k, m), Flavor.LEAF)
    return frozenset((shape, tuple(node_from_word(m, dst[j]) for j in f.image)) for f in maps)


def _adhoc_key(members: frozenset) -> tuple:
    shape = next(iter(members))[0]
    digest = hashlib.sha1(repr(sorted(members)).encode()).hexdigest()[:12]
    return ("Q", shape, q_level(members), len(members), digest)


def build_branch(k: int, L: int, max_domain: int = 5, guard: Guard = DEFAULT_GUARD) -> Instance:
    """Sample with ``G`` families up to level ``L`` and ``Q`` families of all leaf
    preserving maps ``S -> T^m`` (``m <= L``, ``|S| <= max_domain``)."""
    if k < 1:
        raise ValueError("tree instances need k >= 1")
    check_tree_guard(k, L, guard)
    f_fams = [g_family(k, n, m) for n in range(L + 1) for m in range(n + 1) if 0 < m <= n or m == n == 0]
    p_fams = [Family(("Q", (), 0), frozenset([((), ())]))]
    seen = {p_fams[0].members}
    for size in range(1, max_domain + 1):
        for s in all_ordered_trees(size):
            if s.br() > max(k, 1) or s.height > L:
                continue
            for m in range(1, L + 1):
                members = lp_maps(k, s.parent, m)
                if members and members not in seen and q_level(members) == m:
                    seen.add(members)
                    p_fams.append(Family(("Q", s.parent, m), members))
    index = {P.members: P for P in p_fams}

    def p_aliases(members: frozenset) -> list[Family]:
        members = frozenset(members)
        if members in index:
            return [index[members]]
        if not members or len({shape for shape, _ in members}) != 1:
            return []
        return [Family(_adhoc_key(members), members)]

    def dot(F: Family, P: Family):
        _, n, m = F.key
        if q_level(P.members) != m:
            return None
        out = set()
        for g in F.members:
            for f in P.members:
                y = act_b(g, f)
                if y is None:
                    return None
                out.add(y)
        return p_aliases(frozenset(out))[0]

    def bullet(F: Family, G: Family):
        _, n, m = F.key
        _, l, j = G.key
        if m != l:
            return None
        return g_family(k, n, j)

    def witnesses(F: Family, P: Family):
        _, n, m = F.key
        top = q_level(P.members)
        if top < m:
            return []
        check_tree_guard(k, n + top - m, guard)
        return [g_family(k, n + top - m, top)]

    a_elems = tuple(sorted(set().union(*(F.members for F in f_fams))))
    x_elems = tuple(sorted(set().union(*(P.members for P in p_fams))))
    bg = NormedBackground(
        name=f"branch(k={k}, L={L})",
        a_elems=a_elems,
        x_elems=x_elems,
        mult=lambda g2, g1: compose_b(k, g2, g1),
        act=act_b,
        trunc=trunc_y,
        norm=norm_y,
    )
    pair = FamilyPair(bg, f_fams, p_fams, dot=dot, bullet=bullet, p_aliases=p_aliases, witness_families=witnesses)
    return Instance("BRANCH", k, L, bg, pair, {"max_domain": max_domain})


def successors_beyond(k: int, x_word: tuple) -> list[tuple]:
    """``E``: immediate successors of predecessors of ``x`` lying after ``x``."""
    return [x_word[:i] + (a,) for i in range(len(x_word)) for a in range(x_word[i] + 1, k)]


def branch_g0(k: int, q: int, r: int, x: tuple) -> BMap:
    """Identity on the inner nodes of ``T_x`` inside ``T^q`` (read in ``T^r``),
    leaves pushed up by zeros, ``v_{q+j} -> v_{r+j}``."""
    table = {}
    for v in nodes_upto(k, q, x):
        w = word_in(v, q)
        if len(w) == q - 1:
            w = w + (0,) * (r - q)
        table[v] = node_from_word(r, w)
    return make_bmap(x, q, r, table)


def _fiber_problem(k, lines_from, Qf0, d):
    points = set()
    lines = []
    for g in lines_from:
        line = []
        for f in sorted(Qf0):
            y = act_b(g, f)
            if y is None:
                raise ValueError("g . f undefined on the fiber")
            line.append(y)
        lines.append(line)
        points.update(line)
    return problem_from_sets(sorted(points), lines, d)


def check_P_branch_instance(
    Q,
    f0: tuple,
    d: int,
    k: int = 2,
    r_max: int | None = None,
    guard: Guard = DEFAULT_GUARD,
    prune: str = "colors",
    g0: BMap | None = None,
) -> Verdict:
    """Condition (P) for a set ``Q`` of leaf preserving maps at ``f0``.

    For ``r = q, q+1, ...`` the fiber ``Q_{f0}`` is colored through every
    ``g`` in ``binomsq(T^r, T^q)^inf`` extending ``g0``; PASS at the first
    ``r`` with no avoiding coloring.  When the derived domain is non-empty the
    verdict is compared with the reduced problem on ``T^r(w0)``.
    """
    members = frozenset(Q.members if isinstance(Q, Family) else Q)
    S = based_on(members)
    if f0 not in {trunc_y(f) for f in members}:
        raise ValueError("f0 is not a truncation of a member of Q")
    q = q_level(members)
    Qf0 = frozenset(f for f in members if trunc_y(f) == f0)
    dp = derive_prime(S)
    cert = {"q": q, "S": list(S.parent), "fiber": len(Qf0)}
    reduced = None
    if dp.derived.is_empty():
        cert["derived_empty"] = True
        if g0 is None:
            g0 = EMPTY
    else:
        x = max(f0[1], key=functools.cmp_to_key(lambda a, b: 0 if a == b else (-1 if le_inf(a, b) else 1)))
        if g0 is None:
            reduced = _reduction(k, q, f0, dp, x, Qf0, d)
        cert["x"] = x
    refuted = {}
    last = None
    r = q
    while r_max is None or r <= r_max:
        try:
            check_tree_guard(k, r, guard)
            g = g0 if g0 is not None else branch_g0(k, q, r, x)
            F = g_family(k, r, q)
            Fg = [h for h in sorted(F.members) if _extends_b(h, g, k)]
            prob = _fiber_problem(k, Fg, Qf0, d)
            col = find_avoiding_coloring(prob, prune=prune, guard=guard)
            agree = None
            if reduced is not None:
                red = reduced(r)
                agree = (find_avoiding_coloring(red, prune=prune, guard=guard) is None) == (col is None)
        except GuardExceeded as exc:
            return Verdict("UNDECIDED-AT-SCALE", {**cert, "reason": str(exc), "refuted_r": refuted})
        if col is None:
            cert.update({"r": r, "g0": repr(g), "extenders": len(Fg), "points": prob.n_points, "lines": len(prob.lines), "refuted_r": refuted})
            if agree is not None:
                cert["reduced_agrees"] = agree
            return Verdict("PASS", cert, witness=(F, g))
        refuted[r] = {"points": prob.n_points, "coloring": col}
        last = (prob, col)
        r += 1
    out = Verdict("FAIL", {**cert, "reason": f"every r up to {r_max} refuted", "refuted_r": refuted})
    if last is not None:
        out.problem, out.coloring = last
    return out


def _extends_b(h: BMap, g: BMap, k: int) -> bool:
    """``h`` agrees with ``g`` wherever ``g`` is defined."""
    if g.is_empty():
        return True
    if not le_inf(g.x, h.x):
        return False
    top = max(g.q, h.q) + 1
    for v in nodes_upto(k, top, g.x):
        if apply_b(h, v) != apply_b(g, v):
            return False
    return True


def _reduction(k, q, f0, dp, x, Qf0, d):
    """The subtree problem on ``T^r(w0)`` that the fiber problem reduces to."""
    x_word = word_in(x, q)
    E = successors_beyond(k, x_word)
    v0 = word_in(f0[1][dp.splitting_node], q)
    kids = [w for w in E if len(w) == len(v0) + 1 and w[: len(v0)] == v0]
    if not kids:
        return None
    w0 = min(kids)
    depth = len(w0)
    tails = set()
    for f in Qf0:
        words = tuple(word_in(f[1][i], q) for i in dp.removed)
        if any(w[:depth] != w0 for w in words):
            return None
        tails.add(tuple(w[depth:] for w in words))
    m = q - depth
    src = regular_words(k, m)
    idx = {w: i for i, w in enumerate(src)}

    def build(r: int):
        n = r - depth
        dst = regular_words(k, n)
        lines = []
        for g in enumerate_maps(regular_tree(k, m), regular_tree(k, n), Flavor.LEAF):
            lines.append([tuple(dst[g.image[idx[w]]] for w in tail) for tail in sorted(tails)])
        points = sorted({p for line in lines for p in line})
        return problem_from_sets(points, lines, d)

    return build
