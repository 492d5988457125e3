"""Maps between ordered trees and the four embedding flavors."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

from .trees import (
    Ordering,
    OrderedTree,
    derive_prime,
    derive_star_with_map,
    lex_compare,
    regular_tree,
    regular_words,
    tree_from_json,
    tree_to_json,
    wedge,
)

__all__ = [
    "TreeMap",
    "EmbeddingClass",
    "Flavor",
    "classify",
    "order_preserving_by_successors",
    "enumerate_maps",
    "brute_force_maps",
    "compose",
    "restrict",
    "identity",
    "iota",
    "factor_strong",
    "map_to_json",
    "map_from_json",
]


@dataclass(frozen=True)
class TreeMap:
    domain: OrderedTree
    codomain: OrderedTree
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        if len(image) != self.domain.size:
            raise ValueError(f"image has {len(image)} entries for a domain of {self.domain.size} nodes")
        for v in image:
            if not 0 <= v < self.codomain.size:
                raise ValueError(f"image entry {v} is not a node of the codomain")

    def __call__(self, v: int) -> int:
        return self.image[v]


@dataclass(frozen=True)
class EmbeddingClass:
    morphism: bool
    embedding: bool
    leaf_preserving: bool
    strong: bool


class Flavor(str, Enum):
    EMB = "EMB"
    LEAF = "LEAF"
    STRONG = "STRONG"
    STRONG_LEAF = "STRONG_LEAF"

    def accepts(self, c: EmbeddingClass) -> bool:
        if not c.embedding:
            return False
        if self in (Flavor.LEAF, Flavor.STRONG_LEAF) and not c.leaf_preserving:
            return False
        if self in (Flavor.STRONG, Flavor.STRONG_LEAF) and not c.strong:
            return False
        return True


def _is_morphism(f: TreeMap) -> bool:
    s, t, img = f.domain, f.codomain, f.image
    for v in s.nodes():
        for w in range(v + 1, s.size):
            if img[wedge(s, v, w)] != wedge(t, img[v], img[w]):
                return False
    return True


def _order_preserving(f: TreeMap) -> bool:
    s, t, img = f.domain, f.codomain, f.image
    for v in s.nodes():
        for w in range(v + 1, s.size):
            if lex_compare(s, v, w) != lex_compare(t, img[v], img[w]):
                return False
    return True


def _step_toward(t: OrderedTree, u: int, target: int) -> int:
    """The immediate successor of ``u`` that is a predecessor of ``target``."""
    for c in t.children[u]:
        if t.is_ancestor(c, target):
            return c
    raise ValueError("target is not a strict successor")


def order_preserving_by_successors(f: TreeMap) -> bool:
    """Order preservation via immediate successors (valid for embeddings' morphism part)."""
    s, t, img = f.domain, f.codomain, f.image
    for v in s.nodes():
        kids = s.children[v]
        for w1, w2 in itertools.combinations(kids, 2):
            if not (t.is_ancestor(img[v], img[w1]) and img[v] != img[w1]):
                return False
            if not (t.is_ancestor(img[v], img[w2]) and img[v] != img[w2]):
                return False
            a = _step_toward(t, img[v], img[w1])
            b = _step_toward(t, img[v], img[w2])
            if lex_compare(t, a, b) == Ordering.GT:
                return False
    return True


def _initial_segments(f: TreeMap) -> bool:
    s, t, img = f.domain, f.codomain, f.image
    for v in s.nodes():
        fv = img[v]
        kids = t.children[fv]
        used = {c for c in kids if any(t.is_ancestor(c, img[w]) for w in s.children[v])}
        if set(kids[: len(used)]) != used:
            return False
    return True


def classify(f: TreeMap) -> EmbeddingClass:
    s, t, img = f.domain, f.codomain, f.image
    morphism = _is_morphism(f)
    embedding = (
        morphism
        and len(set(img)) == len(img)
        and _order_preserving(f)
        and _initial_segments(f)
    )
    leaf = embedding and all(t.is_leaf(img[v]) for v in s.leaves)
    strong = embedding
    if strong:
        level: dict[int, int] = {}
        for v in s.nodes():
            h = t.depth[img[v]]
            if level.setdefault(s.depth[v], h) != h:
                strong = False
                break
    return EmbeddingClass(morphism, embedding, leaf, strong)


def _candidates(s: OrderedTree, t: OrderedTree, flavor: Flavor) -> Iterator[tuple[int, ...]]:
    """Backtracking over partial maps in depth-first order with exact pruning."""
    n = s.size
    image = [0] * n
    used: set[int] = set()
    levels: dict[int, int] = {}
    leafy = flavor in (Flavor.LEAF, Flavor.STRONG_LEAF)
    strong = flavor in (Flavor.STRONG, Flavor.STRONG_LEAF)

    def place(i: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(image)
            return
        p = s.parent[i]
        if p < 0:
            lo, hi = 0, t.size
        else:
            # strict successors of the parent's image, after the previous image
            lo, hi = max(image[p] + 1, image[i - 1] + 1), t.subtree_end[image[p]]
        want_leaf = leafy and not s.children[i]
        h_needed = levels.get(s.depth[i]) if strong else None
        for c in range(lo, hi):
            if c in used:
                continue
            if want_leaf and t.children[c]:
                continue
            if h_needed is not None and t.depth[c] != h_needed:
                continue
            ok = True
            for j in range(i):
                if image[wedge(s, i, j)] != wedge(t, c, image[j]):
                    ok = False
                    break
            if not ok:
                continue
            image[i] = c
            used.add(c)
            fresh = strong and s.depth[i] not in levels
            if fresh:
                levels[s.depth[i]] = t.depth[c]
            yield from place(i + 1)
            if fresh:
                del levels[s.depth[i]]
            used.discard(c)

    yield from place(0)


def enumerate_maps(s: OrderedTree, t: OrderedTree, flavor: Flavor | str = Flavor.EMB) -> list[TreeMap]:
    """All embeddings ``s -> t`` of the given flavor, sorted by image sequence."""
    flavor = Flavor(flavor)
    out = []
    for img in _candidates(s, t, flavor):
        f = TreeMap(s, t, img)
        if flavor.accepts(classify(f)):
            out.append(f)
    out.sort(key=lambda m: m.image)
    return out


def brute_force_maps(s: OrderedTree, t: OrderedTree, flavor: Flavor | str) -> list[TreeMap]:
    """Reference enumeration: every function ``s -> t`` filtered by ``classify``."""
    flavor = Flavor(flavor)
    out = []
    for img in itertools.product(range(t.size), repeat=s.size):
        f = TreeMap(s, t, img)
        if flavor.accepts(classify(f)):
            out.append(f)
    return out


def identity(t: OrderedTree) -> TreeMap:
    return TreeMap(t, t, tuple(t.nodes()))


def compose(g: TreeMap, f: TreeMap) -> TreeMap:
    """``g ∘ f``."""
    if f.codomain != g.domain:
        raise ValueError("codomain of f does not match domain of g")
    return TreeMap(f.domain, g.codomain, tuple(g.image[v] for v in f.image))


def restrict(f: TreeMap, mode: str) -> TreeMap:
    """Restrict ``f`` to ``domain*`` (mode STAR) or ``domain'`` (mode PRIME)."""
    mode = mode.upper()
    if mode == "STAR":
        sub, inc = derive_star_with_map(f.domain)
    elif mode == "PRIME":
        res = derive_prime(f.domain)
        sub, inc = res.derived, res.inclusion
    else:
        raise ValueError(f"unknown restriction mode {mode!r}")
    return TreeMap(sub, f.codomain, tuple(f.image[v] for v in inc))


def _word_map(k: int, m: int, n: int, fn) -> TreeMap:
    src = regular_words(k, m)
    dst = {w: i for i, w in enumerate(regular_words(k, n))}
    return TreeMap(regular_tree(k, m), regular_tree(k, n), tuple(dst[fn(w)] for w in src))


def iota(k: int, n: int, variant: str) -> TreeMap:
    """Canonical inclusion ``T^{k,n} -> T^{k,n+1}`` (STAR keeps the root, PRIME the first leaf)."""
    variant = variant.upper()
    if variant not in ("STAR", "PRIME"):
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "STAR" or k == 0:
        return _word_map(k, n, n + 1, lambda w: w)
    return _word_map(k, n, n + 1, lambda w: (0,) + w)


def _regular_params(t: OrderedTree) -> tuple[int, int]:
    """Return ``(k, n)`` if ``t`` is some ``T^{k,n}`` in canonical numbering."""
    n = t.height
    k = t.br()
    if t != regular_tree(k, n):
        raise ValueError("tree is not a regular tree T^{k,n}")
    return k, n


def factor_strong(g: TreeMap, flavor: Flavor | str = Flavor.STRONG) -> list[TreeMap]:
    """Factor a strong embedding ``T^l -> T^n`` into ``n - l`` one-level strong embeddings.

    Returns ``[g_1, ..., g_{n-l}]`` with ``g == g_{n-l} ∘ ... ∘ g_1``.  The
    missing level is always the smallest one not hit by ``g``.
    """
    flavor = Flavor(flavor)
    if flavor not in (Flavor.STRONG, Flavor.STRONG_LEAF):
        raise ValueError("factor_strong handles STRONG and STRONG_LEAF only")
    if not flavor.accepts(classify(g)):
        raise ValueError(f"map is not a {flavor.value} embedding")
    k_dom, l = _regular_params(g.domain) if g.domain.size else (0, 0)
    k, n = _regular_params(g.codomain) if g.codomain.size else (0, 0)
    if g.domain.size and g.codomain.size > 1 and k_dom not in (0, k) and g.domain.size > 1:
        raise ValueError("domain and codomain have different branching")
    if l > n:
        raise ValueError("domain is higher than codomain")
    factors: list[TreeMap] = []
    while l < n:
        if l + 1 == n:
            factors.append(g)
            break
        g1, g2 = _split_one(g, k, l, n, flavor)
        factors.append(g1)
        g, l = g2, l + 1
    return factors


def _split_one(g: TreeMap, k: int, l: int, n: int, flavor: Flavor) -> tuple[TreeMap, TreeMap]:
    if l == 0:
        g1 = TreeMap(g.domain, regular_tree(k, 1), ())
        g2 = enumerate_maps(regular_tree(k, 1), g.codomain, flavor)[0]
        return g1, g2
    if k == 0:
        g1 = TreeMap(g.domain, regular_tree(0, l + 1), (0,))
        return g1, TreeMap(regular_tree(0, l + 1), g.codomain, (0,))
    src = regular_words(k, l)
    dst = regular_words(k, n)
    gw = {w: dst[g.image[i]] for i, w in enumerate(src)}
    lam = {len(w) + 1: len(gw[w]) + 1 for w in src}
    j = min(h for h in range(1, n + 1) if h not in lam.values())
    i = max((h for h in range(1, l + 1) if lam[h] < j), default=0)
    if i < l:
        def up(w):
            if len(w) < i:
                return w
            return w[:i] + (gw[w[:i]][j - 1],) + w[i:]

        def down(u):
            if len(u) < i:
                return gw[u]
            if len(u) == i:
                return gw[u][: j - 1]
            base = gw[u[:i] + u[i + 1:]]
            return base[: j - 1] + (u[i],) + base[j:]
    else:
        pad = (0,) * (j - lam[l] - 1)

        def up(w):
            return w

        def down(u):
            if len(u) < l:
                return gw[u]
            return gw[u[:-1]] + (u[-1],) + pad

    return _word_map(k, l, l + 1, up), _word_map(k, l + 1, n, down)


def map_to_json(f: TreeMap) -> dict:
    return {"domain": tree_to_json(f.domain), "codomain": tree_to_json(f.codomain), "image": list(f.image)}


def map_from_json(data) -> TreeMap:
    if isinstance(data, str):
        data = json.loads(data)
    return TreeMap(tree_from_json(data["domain"]), tree_from_json(data["codomain"]), tuple(data["image"]))


def maps_between(s: OrderedTree, t: OrderedTree, flavors: Sequence[Flavor]) -> dict[Flavor, list[TreeMap]]:
    return {fl: enumerate_maps(s, t, fl) for fl in flavors}
