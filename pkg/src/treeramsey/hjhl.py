"""Parameter words, the strong embeddings they induce, and the Hales-Jewett and
Halpern-Lauchli searches.

Words use lengths: ``A^n`` is the set of words of length ``n`` and the tree
``A^{<=n}`` has height ``n + 1``, so it is ``T^{|A|, n+1}``.  Tree arguments
(``hl_check``) use tree heights.  A parameter word is a tuple of entries
``("L", a)`` (a letter) or ``("P", j)`` (parameter ``j`` in ``1..m``); since
``"L" < "P"`` the natural tuple order puts letters before parameters.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .adversary import (
    DEFAULT_GUARD,
    ColoringProblem,
    Guard,
    GuardExceeded,
    MinimalResult,
    find_avoiding_coloring,
    minimal_parameter,
    problem_from_sets,
    verify_avoiding,
)
from .embeddings import Flavor, TreeMap, classify, enumerate_maps
from .framework import Verdict
from .trees import regular_tree, regular_words

__all__ = [
    "HJVariant",
    "HLVariant",
    "ParameterWord",
    "valid_words",
    "induced_embedding",
    "meet_level",
    "extend_to_tree",
    "split_word",
    "is_strong_sequence",
    "hj_problem",
    "hj_search",
    "hl_problem",
    "hl_check",
    "hl_translated_n",
    "Translation",
    "translate_hj_to_hl",
]


class HJVariant(str, Enum):
    A_STMT = "A_STMT"
    B_STMT = "B_STMT"


class HLVariant(str, Enum):
    HL1 = "HL1"
    HL2 = "HL2"


@dataclass(frozen=True)
class ParameterWord:
    """``w: [n] -> A ∪ [m]`` satisfying (i) all parameters occur and (ii) their
    first occurrences come in the order ``1, 2, ..., m``."""

    m: int
    alphabet: tuple
    letters: tuple

    def __post_init__(self) -> None:
        letters = tuple((kind, _freeze(v)) for kind, v in self.letters)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "alphabet", tuple(_freeze(a) for a in self.alphabet))
        alpha = set(self.alphabet)
        top = 0
        for kind, v in letters:
            if kind == "L":
                if v not in alpha:
                    raise ValueError(f"letter {v!r} is not in the alphabet")
            elif kind == "P":
                if not isinstance(v, int) or not 1 <= v <= self.m:
                    raise ValueError(f"parameter {v!r} outside 1..{self.m}")
                if v > top + 1:
                    raise ValueError(f"parameter {v} appears before parameter {top + 1}")
                top = max(top, v)
            else:
                raise ValueError(f"unknown entry kind {kind!r}")
        if top != self.m:
            raise ValueError(f"parameters 1..{self.m} must all occur")

    @property
    def n(self) -> int:
        return len(self.letters)

    def substitute(self, values: Sequence) -> tuple:
        """``v o w`` for ``v`` the identity on ``A`` and ``j -> values[j-1]``."""
        return tuple(values[v - 1] if kind == "P" else v for kind, v in self.letters)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "letters": [{"kind": "letter" if k == "L" else "param", "value": _thaw(v)} for k, v in self.letters],
        }

    @classmethod
    def from_json(cls, data, alphabet: Sequence) -> ParameterWord:
        if isinstance(data, str):
            data = json.loads(data)
        letters = tuple(("L" if e["kind"] == "letter" else "P", _freeze(e["value"])) for e in data["letters"])
        if len(letters) != data["n"]:
            raise ValueError("word length does not match n")
        return cls(int(data["m"]), tuple(alphabet), letters)


def _freeze(v):
    return tuple(_freeze(x) for x in v) if isinstance(v, list) else v


def _thaw(v):
    return [_thaw(x) for x in v] if isinstance(v, tuple) else v


def valid_words(alphabet: Sequence, n: int, m: int):
    """Every parameter word of length ``n`` with ``m`` parameters, in canonical order."""
    alphabet = tuple(alphabet)
    entries_l = [("L", a) for a in alphabet]

    def rec(prefix: list, top: int):
        left = n - len(prefix)
        if left < m - top:
            return
        if left == 0:
            yield ParameterWord(m, alphabet, tuple(prefix))
            return
        for e in entries_l + [("P", j) for j in range(1, min(top + 1, m) + 1)]:
            prefix.append(e)
            yield from rec(prefix, max(top, e[1]) if e[0] == "P" else top)
            prefix.pop()

    yield from rec([], 0)


def induced_embedding(w: ParameterWord) -> dict:
    """``g_w``: ``x -> x' o w`` on words of length ``m``."""
    return {x: w.substitute(x) for x in itertools.product(w.alphabet, repeat=w.m)}


def meet_level(w: ParameterWord, i0: int, v0: Sequence) -> tuple[int, tuple]:
    """Length ``i1`` and value ``v1`` of ``g_w(x) ∧ g_w(y)`` when ``x ∧ y = v0``
    has length ``i0``."""
    if not 0 <= i0 <= w.m or len(v0) != i0:
        raise ValueError("need a meet word v0 of length i0 <= m")
    i1 = 0
    for kind, v in w.letters:
        if kind == "P" and v > i0:
            break
        i1 += 1
    return i1, tuple(v0[v - 1] if kind == "P" else v for kind, v in w.letters[:i1])


def extend_to_tree(w: ParameterWord) -> TreeMap:
    """The strong embedding ``T^{|A|, m+1} -> T^{|A|, n+1}`` extending ``g_w``.

    A node of length ``l`` goes to the meet value given by :func:`meet_level`;
    letters are read as child indices, so the alphabet must be ``range(k)``.
    """
    k = len(w.alphabet)
    if tuple(w.alphabet) != tuple(range(k)):
        raise ValueError("tree extension needs the alphabet range(k)")
    src = regular_words(k, w.m + 1)
    dst = regular_words(k, w.n + 1)
    index = {v: i for i, v in enumerate(dst)}
    image = []
    for v in src:
        if len(v) == w.m:
            image.append(index[w.substitute(v)])
        else:
            image.append(index[meet_level(w, len(v), v)[1]])
    return TreeMap(regular_tree(k, w.m + 1), regular_tree(k, w.n + 1), tuple(image))


def split_word(w: ParameterWord) -> list[ParameterWord]:
    """``w_i = pi_i o w`` for a word over tuples of letters."""
    if not w.alphabet:
        raise ValueError("empty alphabet")
    arity = {len(a) if isinstance(a, tuple) else None for a in w.alphabet}
    if len(arity) != 1 or None in arity:
        raise ValueError("split_word needs an alphabet of equal-length tuples")
    (r,) = arity
    out = []
    for i in range(r):
        alpha = tuple(sorted({a[i] for a in w.alphabet}))
        letters = tuple(("L", v[i]) if kind == "L" else (kind, v) for kind, v in w.letters)
        out.append(ParameterWord(w.m, alpha, letters))
    return out


def _lcp(a: tuple, b: tuple) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def is_strong_sequence(maps: Sequence[dict]) -> bool:
    """Leaf maps (words to words) whose meet heights agree on every leaf pair."""
    if not maps:
        return True
    keys = sorted(maps[0])
    for x, y in itertools.combinations(keys, 2):
        if len({_lcp(g[x], g[y]) for g in maps}) != 1:
            return False
    return True


# -- Hales-Jewett --------------------------------------------------------------


def hj_problem(alphabet: Sequence, m: int, n: int, d: int, variant: HJVariant = HJVariant.A_STMT) -> ColoringProblem:
    """Points are words (of length ``n``, or ``<= n`` for (b)); one line per valid word."""
    variant = HJVariant(variant)
    alphabet = tuple(alphabet)
    if variant == HJVariant.A_STMT:
        points = list(itertools.product(alphabet, repeat=n))
        lines = []
        for w in valid_words(alphabet, n, m):
            lines.append({w.substitute(v) for v in itertools.product(alphabet, repeat=m)})
        return problem_from_sets(points, lines, d)
    points = [p for q in range(n + 1) for p in itertools.product(alphabet, repeat=q)]
    lines = []
    for n0 in range(n + 1):
        for w in valid_words(alphabet, n0, m):
            line = set()
            for p in range(m + 1):
                i1, _ = meet_level(w, p, (None,) * p)
                prefix = ParameterWord(p, alphabet, w.letters[:i1]) if p else None
                for v in itertools.product(alphabet, repeat=p):
                    line.add(prefix.substitute(v) if prefix else tuple(x for _, x in w.letters[:i1]))
            lines.append(line)
    return problem_from_sets(points, lines, d)


def hj_search(
    a_size: int,
    m: int,
    d: int,
    variant: HJVariant = HJVariant.A_STMT,
    guard: Guard = DEFAULT_GUARD,
    max_n: int | None = None,
    alphabet: Sequence | None = None,
) -> MinimalResult:
    """Least ``n`` for the Hales-Jewett statement (a) or (b).

    Starts at ``max(m - 1, 0)`` so that the result carries a refutation one
    below the answer whenever one exists.
    """
    if alphabet is None:
        alphabet = tuple(range(a_size))
    if len(alphabet) != a_size or a_size < 1 or m < 0 or d < 1:
        raise ValueError("need |A| >= 1, m >= 0, d >= 1")
    return minimal_parameter(lambda n: hj_problem(alphabet, m, n, d, variant), max(m - 1, 0), max_n, guard=guard)


# -- Halpern-Lauchli -----------------------------------------------------------


def _meet_signature(T, f: TreeMap) -> tuple:
    leaves = [f.image[v] for v in f.domain.leaves]
    words = regular_words(T[0], T[1])
    return tuple(_lcp(words[a], words[b]) for a, b in itertools.combinations(leaves, 2))


def _level_map(f: TreeMap) -> tuple:
    out = {}
    for v in f.domain.nodes():
        out.setdefault(f.domain.depth[v], f.codomain.depth[f.image[v]])
    return tuple(out[h] for h in sorted(out))


def hl_problem(k: int, t: int, m: int, d: int, n: int, variant: HLVariant = HLVariant.HL1) -> ColoringProblem:
    """HL1: points are ``t``-tuples of leaves of ``T^n``; lines are products of
    leaf images of strong sequences.  HL2: points are equal-height ``t``-tuples of
    nodes; a sequence's line is the set of its equal-height image tuples."""
    variant = HLVariant(variant)
    S, T = regular_tree(k, m), regular_tree(k, n)
    if variant == HLVariant.HL1:
        maps = enumerate_maps(S, T, Flavor.STRONG_LEAF)
        groups: dict = {}
        for f in maps:
            groups.setdefault(_meet_signature((k, n), f), []).append(f)
        points = list(itertools.product(T.leaves, repeat=t))
        lines = []
        for group in groups.values():
            for seq in itertools.product(group, repeat=t):
                lines.append(set(itertools.product(*[[f.image[v] for v in S.leaves] for f in seq])))
        return problem_from_sets(points, lines, d)
    maps = enumerate_maps(S, T, Flavor.STRONG)
    groups = {}
    for f in maps:
        groups.setdefault(_level_map(f), []).append(f)
    points = [p for h in range(1, n + 1) for p in itertools.product([v for v in T.nodes() if T.depth[v] == h], repeat=t)]
    lines = []
    for group in groups.values():
        for seq in itertools.product(group, repeat=t):
            line = set()
            for h in range(1, m + 1):
                level = [v for v in S.nodes() if S.depth[v] == h]
                line.update(itertools.product(*[[f.image[v] for v in level] for f in seq]))
            lines.append(line)
    return problem_from_sets(points, lines, d)


def hl_check(
    k: int,
    t: int,
    m: int,
    d: int,
    n: int,
    variant: HLVariant = HLVariant.HL1,
    guard: Guard = DEFAULT_GUARD,
    prune: str = "colors",
) -> Verdict:
    """PASS iff every ``d``-coloring has a monochromatic strong sequence line."""
    if min(k, t, d) < 1 or m < 0 or n < 0:
        raise ValueError("need k, t, d >= 1 and m, n >= 0")
    prob = hl_problem(k, t, m, d, n, variant)
    col = find_avoiding_coloring(prob, prune=prune, guard=guard)
    cert = {"k": k, "t": t, "m": m, "d": d, "n": n, "variant": HLVariant(variant).value, "points": prob.n_points, "lines": len(prob.lines)}
    if col is None:
        return Verdict("PASS", cert)
    return Verdict("FAIL", cert, problem=prob, coloring=col)


def hl_translated_n(k: int, t: int, m: int, d: int, variant: HLVariant = HLVariant.HL1, guard: Guard = DEFAULT_GUARD) -> tuple[int | None, MinimalResult]:
    """Tree height ``n`` read off the Hales-Jewett search over ``B = A^t``."""
    hj_var = HJVariant.A_STMT if HLVariant(variant) == HLVariant.HL1 else HJVariant.B_STMT
    B = tuple(itertools.product(range(k), repeat=t))
    res = hj_search(len(B), max(m - 1, 0), d, hj_var, guard=guard, alphabet=B)
    return (None if res.n is None else res.n + 1), res


@dataclass
class Translation:
    word: ParameterWord
    parts: list
    sequence: list  # TreeMaps T^m -> T^n
    verified: bool


def translate_hj_to_hl(k: int, t: int, m: int, n: int, coloring: dict) -> Translation:
    """Turn an HL1 coloring into an HJ coloring over ``B = A^t`` and back.

    ``coloring`` maps ``t``-tuples of leaf words of ``T^n`` to colors.  The first
    valid word (canonical order) with a monochromatic line is split into ``t``
    words; their tree extensions form the returned strong sequence, which is
    re-verified against the coloring.
    """
    if m < 1 or n < 1:
        raise ValueError("tree heights must be positive")
    B = tuple(itertools.product(range(k), repeat=t))
    for key in coloring:
        if len(key) != t:
            raise ValueError(f"coloring keys must be {t}-tuples of leaf words")
    mh, nh = m - 1, n - 1
    for w in valid_words(B, nh, mh):
        colors = set()
        for v in itertools.product(B, repeat=mh):
            word = w.substitute(v)
            colors.add(coloring[tuple(tuple(b[i] for b in word) for i in range(t))])
            if len(colors) > 1:
                break
        if len(colors) == 1:
            parts = split_word(w)
            seq = [extend_to_tree(p) for p in parts]
            return Translation(w, parts, seq, _verify_translation(k, t, mh, parts, seq, coloring))
    raise LookupError("no monochromatic line: the coloring refutes the statement at this n")


def _verify_translation(k, t, mh, parts, seq, coloring) -> bool:
    for f in seq:
        c = classify(f)
        if not (c.embedding and c.strong and c.leaf_preserving):
            return False
    leaf_maps = [induced_embedding(p) for p in parts]
    if not is_strong_sequence(leaf_maps):
        return False
    leaves = list(itertools.product(range(k), repeat=mh))
    colors = {coloring[tuple(g[x] for g, x in zip(leaf_maps, combo))] for combo in itertools.product(leaves, repeat=t)}
    return len(colors) == 1
