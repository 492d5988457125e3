"""Finite ordered rooted trees.

Nodes are integers ``0..size-1`` numbered depth-first with siblings visited in
their fixed order, so the index order is the lexicographic order of the tree.
Heights follow the convention ``ht(root) == 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterator, Sequence

__all__ = [
    "OrderedTree",
    "DerivePrimeResult",
    "Ordering",
    "dec",
    "regular_tree",
    "regular_words",
    "chain",
    "wedge",
    "lex_compare",
    "derive_star",
    "derive_prime",
    "subtree",
    "plus",
    "minus",
    "canonical_code",
    "all_ordered_trees",
    "tree_to_json",
    "tree_from_json",
]


def dec(k: int) -> int:
    """Saturating decrement: ``0 - 1 == 0``."""
    return k - 1 if k > 0 else 0


class Ordering(Enum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class OrderedTree:
    """Immutable ordered tree given by a depth-first parent array (root slot -1)."""

    parent: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        parent = tuple(int(p) for p in self.parent)
        object.__setattr__(self, "parent", parent)
        if not parent:
            return
        if parent[0] != -1:
            raise ValueError("parent[0] must be -1 (the root)")
        # the rightmost path of the prefix; a DFS numbering attaches each new
        # node to some node on that path
        path = [0]
        for i in range(1, len(parent)):
            p = parent[i]
            if not 0 <= p < i:
                raise ValueError(f"parent[{i}] = {p} violates parent[i] < i")
            while path and path[-1] != p:
                path.pop()
            if not path:
                raise ValueError(f"node {i} breaks depth-first numbering")
            path.append(i)

    # -- construction ---------------------------------------------------

    @classmethod
    def from_parents(cls, parent: Sequence[int]) -> OrderedTree:
        """Build from any topological parent array, renumbering depth-first.

        Siblings keep the relative order of their original indices.
        """
        n = len(parent)
        if n == 0:
            return cls(())
        if parent[0] != -1:
            raise ValueError("parent[0] must be -1 (the root)")
        children: list[list[int]] = [[] for _ in range(n)]
        for i in range(1, n):
            p = parent[i]
            if not 0 <= p < i:
                raise ValueError(f"parent[{i}] = {p} violates parent[i] < i")
            children[p].append(i)
        return cls._from_children(children)

    @classmethod
    def from_nested(cls, nested) -> OrderedTree:
        """Build from nested sequences: a node is the sequence of its children.

        ``None`` gives the empty tree; ``()`` is a single node.
        """
        if nested is None:
            return cls(())
        parent: list[int] = []

        def walk(node, p: int) -> None:
            me = len(parent)
            parent.append(p)
            for child in node:
                walk(child, me)

        walk(nested, -1)
        return cls(tuple(parent))

    @classmethod
    def _from_children(cls, children: list[list[int]], root: int = 0) -> OrderedTree:
        parent: list[int] = []
        stack = [(root, -1)]
        while stack:
            node, p = stack.pop()
            me = len(parent)
            parent.append(p)
            for child in reversed(children[node]):
                stack.append((child, me))
        return cls(tuple(parent))

    # -- basic structure -----------------------------------------------

    @property
    def size(self) -> int:
        return len(self.parent)

    def __len__(self) -> int:
        return len(self.parent)

    def is_empty(self) -> bool:
        return not self.parent

    def nodes(self) -> range:
        return range(len(self.parent))

    def check(self, v: int) -> int:
        if not isinstance(v, int) or not 0 <= v < len(self.parent):
            raise IndexError(f"node {v!r} is not a node of a tree with {len(self.parent)} nodes")
        return v

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in self.parent]
        for i, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(i)
        return tuple(tuple(c) for c in ch)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        """``ht_T(v)`` for every node."""
        d: list[int] = []
        for p in self.parent:
            d.append(1 if p < 0 else d[p] + 1)
        return tuple(d)

    def ht(self, v: int | None = None) -> int:
        if v is None:
            return max(self.depth, default=0)
        return self.depth[self.check(v)]

    @property
    def height(self) -> int:
        return max(self.depth, default=0)

    def br(self) -> int:
        return max((len(c) for c in self.children), default=0)

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in self.nodes() if not self.children[v])

    def is_leaf(self, v: int) -> bool:
        return not self.children[self.check(v)]

    @cached_property
    def subtree_end(self) -> tuple[int, ...]:
        """One past the last index of the subtree rooted at each node."""
        end = list(range(1, len(self.parent) + 1))
        for v in reversed(self.nodes()):
            p = self.parent[v]
            if p >= 0:
                end[p] = max(end[p], end[v])
        return tuple(end)

    def is_ancestor(self, v: int, w: int) -> bool:
        """True iff ``v`` is a predecessor of ``w`` (every node is its own)."""
        return v <= w < self.subtree_end[v]

    def ancestors(self, v: int) -> list[int]:
        """Predecessors of ``v`` from the root down to ``v`` itself."""
        chain_: list[int] = []
        while v >= 0:
            chain_.append(v)
            v = self.parent[v]
        return chain_[::-1]

    def sibling_index(self, v: int) -> int:
        p = self.parent[v]
        return 0 if p < 0 else self.children[p].index(v)

    def induced(self, keep: Sequence[int]) -> tuple[OrderedTree, tuple[int, ...]]:
        """Restrict to a predecessor-closed node set; return tree and inclusion."""
        keep = sorted(set(keep))
        pos = {v: i for i, v in enumerate(keep)}
        parent = []
        for v in keep:
            p = self.parent[v]
            if p >= 0 and p not in pos:
                raise ValueError("node set is not closed under predecessors")
            parent.append(-1 if p < 0 else pos[p])
        return OrderedTree(tuple(parent)), tuple(keep)

    def __repr__(self) -> str:
        return f"OrderedTree({canonical_code(self)!r})"


def regular_words(k: int, n: int) -> list[tuple[int, ...]]:
    """Nodes of ``T^{k,n}`` as words over ``range(k)``, in depth-first order.

    The root is ``()``; a node of height ``h`` is a word of length ``h - 1``.
    """
    if n <= 0:
        return []
    if k == 0:
        return [()]
    out: list[tuple[int, ...]] = []

    def walk(w: tuple[int, ...]) -> None:
        out.append(w)
        if len(w) < n - 1:
            for a in range(k):
                walk(w + (a,))

    walk(())
    return out


def regular_tree(k: int, n: int) -> OrderedTree:
    """``T^{k,n}``: empty for n=0, one node for n=1 or k=0, else k-regular of height n."""
    if k < 0 or n < 0:
        raise ValueError("k and n must be non-negative")
    words = regular_words(k, n)
    index = {w: i for i, w in enumerate(words)}
    return OrderedTree(tuple(-1 if not w else index[w[:-1]] for w in words))


def chain(n: int) -> OrderedTree:
    """The ordered tree ``[n]``."""
    return OrderedTree(tuple(range(-1, n - 1)))


def wedge(t: OrderedTree, v: int, w: int) -> int:
    """Deepest common predecessor of ``v`` and ``w``."""
    t.check(v)
    t.check(w)
    if v > w:
        v, w = w, v
    while not t.is_ancestor(v, w):
        v = t.parent[v]
    return v


def lex_compare(t: OrderedTree, v: int, w: int) -> Ordering:
    """Compare two nodes in the lexicographic order, from its definition."""
    t.check(v)
    t.check(w)
    if v == w:
        return Ordering.EQ
    pv = t.ancestors(v)
    pw = t.ancestors(w)
    if v in pw:
        return Ordering.LT
    if w in pv:
        return Ordering.GT
    u = wedge(t, v, w)
    cv = pv[pv.index(u) + 1]
    cw = pw[pw.index(u) + 1]
    sv, sw = t.sibling_index(cv), t.sibling_index(cw)
    return Ordering.LT if sv < sw else Ordering.GT


def derive_star(t: OrderedTree) -> OrderedTree:
    """``T*``: remove every node of maximal height."""
    return derive_star_with_map(t)[0]


def derive_star_with_map(t: OrderedTree) -> tuple[OrderedTree, tuple[int, ...]]:
    h = t.height
    return t.induced([v for v in t.nodes() if t.depth[v] < h])


@dataclass(frozen=True)
class DerivePrimeResult:
    derived: OrderedTree
    removed_segment_length: int
    splitting_node: int | None
    inclusion: tuple[int, ...] = field(default=())
    removed: tuple[int, ...] = field(default=())


def derive_prime(t: OrderedTree) -> DerivePrimeResult:
    """``T'``: cut the final segment of the rightmost branch.

    ``removed`` lists the cut nodes of ``t`` by increasing height, which
    identifies them with ``[p]``.
    """
    if t.is_empty():
        return DerivePrimeResult(OrderedTree(()), 0, None)
    x = t.size - 1
    removed = [x]
    v = x
    while t.parent[v] >= 0 and len(t.children[t.parent[v]]) == 1:
        v = t.parent[v]
        removed.append(v)
    removed.reverse()
    gone = set(removed)
    derived, inclusion = t.induced([u for u in t.nodes() if u not in gone])
    split = None
    top_parent = t.parent[removed[0]]
    if top_parent >= 0:
        split = inclusion.index(top_parent)
    return DerivePrimeResult(derived, len(removed), split, inclusion, tuple(removed))


def subtree(t: OrderedTree, v: int) -> tuple[OrderedTree, tuple[int, ...]]:
    """``T(v)`` together with its node injection into ``t``."""
    t.check(v)
    nodes = tuple(range(v, t.subtree_end[v]))
    parent = tuple(-1 if u == v else t.parent[u] - v for u in nodes)
    return OrderedTree(parent), nodes


def plus(t: OrderedTree) -> OrderedTree:
    """``S_+``: put one new node on top of each leaf."""
    if t.is_empty():
        return t
    children = [list(c) for c in t.children]
    for leaf in t.leaves:
        children[leaf].append(len(children))
        children.append([])
    return OrderedTree._from_children(children)


def minus(t: OrderedTree) -> OrderedTree:
    """``V_-``: delete every leaf."""
    return t.induced([v for v in t.nodes() if t.children[v]])[0]


def canonical_code(t: OrderedTree) -> str:
    """Balanced-parenthesis code; equal iff ordered-isomorphic."""
    if t.is_empty():
        return ""
    out: list[str] = []
    stack: list[int] = []
    for v in t.nodes():
        while stack and not t.is_ancestor(stack[-1], v):
            stack.pop()
            out.append(")")
        out.append("(")
        stack.append(v)
    out.append(")" * len(stack))
    return "".join(out)


def all_ordered_trees(n: int) -> Iterator[OrderedTree]:
    """Every ordered tree with exactly ``n`` nodes, each once."""
    if n == 0:
        yield OrderedTree(())
        return

    def extend(parent: list[int], path: list[int]) -> Iterator[OrderedTree]:
        if len(parent) == n:
            yield OrderedTree(tuple(parent))
            return
        for cut in range(len(path)):
            p = path[cut]
            i = len(parent)
            parent.append(p)
            yield from extend(parent, path[: cut + 1] + [i])
            parent.pop()

    yield from extend([-1], [0])


def tree_to_json(t: OrderedTree) -> dict:
    return {"parent": list(t.parent)}


def tree_from_json(data) -> OrderedTree:
    """Read ``{"parent": [...]}`` (or a bare list); rejects ``parent[i] >= i``."""
    if isinstance(data, str):
        data = json.loads(data)
    if isinstance(data, dict):
        if "parent" not in data:
            raise ValueError("tree JSON needs a 'parent' array")
        data = data["parent"]
    if not isinstance(data, list) or not all(isinstance(p, int) for p in data):
        raise ValueError("'parent' must be an array of integers")
    return OrderedTree.from_parents(data)
