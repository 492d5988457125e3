"""Witness searches for the tree Ramsey statements.

Given ``S``, ``T`` and ``d``, look for ``V`` such that every ``d``-coloring of
the embeddings ``S -> V`` admits an embedding ``g0: T -> V`` with
``{g0 . f : f: S -> T}`` monochromatic.  Candidates are ``T^{br(T), h}`` for
increasing ``h``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..adversary import (
    DEFAULT_GUARD,
    Guard,
    GuardExceeded,
    brute_force_avoiding,
    find_avoiding_coloring,
    problem_from_sets,
    verify_avoiding,
)
from ..embeddings import Flavor, enumerate_maps
from ..trees import OrderedTree, minus, plus, regular_tree
from .common import check_tree_guard

__all__ = ["SearchReport", "ramsey_problem", "gen_ramsey_search", "milliken_search"]


@dataclass
class SearchReport:
    status: str  # FOUND or UNDECIDED-AT-SCALE
    V: OrderedTree | None
    height: int | None
    minimal: bool
    per_height: list = field(default_factory=list)
    reduction: str = ""
    reason: str = ""

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "V": None if self.V is None else list(self.V.parent),
            "height": self.height,
            "minimal": self.minimal,
            "reduction": self.reduction,
            "per_height": [],
        }
        if self.reason:
            out["reason"] = self.reason
        for row in self.per_height:
            r = {k: v for k, v in row.items() if k != "problem"}
            if row.get("problem") is not None:
                r["problem"] = row["problem"].to_json()
            if r.get("coloring") is not None:
                r["coloring"] = list(r["coloring"])
            out["per_height"].append(r)
        return out


def ramsey_problem(S: OrderedTree, T: OrderedTree, V: OrderedTree, d: int, flavor: Flavor):
    """Points: ``S -> V`` maps; one line ``{g0 . f}`` per ``g0: T -> V``.

    Returns ``(problem, n_g0)``; ``problem`` is ``None`` when no ``g0`` exists.
    """
    s_to_t = enumerate_maps(S, T, flavor)
    t_to_v = enumerate_maps(T, V, flavor)
    if not t_to_v:
        return None, 0
    points = [f.image for f in enumerate_maps(S, V, flavor)]
    lines = []
    for g in t_to_v:
        line = [tuple(g.image[i] for i in f.image) for f in s_to_t]
        if line:
            lines.append(line)
    return problem_from_sets(points, lines, d), len(t_to_v)


def _confirm(prob, passed: bool) -> bool | None:
    """Cross-check with full enumeration when the problem is small."""
    if prob.n_points > 16 or prob.d ** prob.n_points > 1 << 16:
        return None
    return (not brute_force_avoiding(prob, limit=16)) == passed


def _search(S, T, d, flavor, guard, max_h, start_h):
    k = T.br()
    per = []
    h = start_h
    minimal = True
    while max_h is None or h <= max_h:
        try:
            check_tree_guard(k, h, guard)
            V = regular_tree(k, h)
            prob, n_g0 = ramsey_problem(S, T, V, d, flavor)
            if prob is None:
                per.append({"h": h, "status": "NO-EMBEDDING"})
                h += 1
                continue
            col = find_avoiding_coloring(prob, guard=guard)
        except GuardExceeded as exc:
            return SearchReport("UNDECIDED-AT-SCALE", None, None, False, per, reason=str(exc))
        row = {"h": h, "points": prob.n_points, "lines": len(prob.lines), "g0_count": n_g0}
        if col is None:
            row.update(status="PASS", exhaustive=_confirm(prob, True))
            per.append(row)
            return SearchReport("FOUND", V, h, minimal, per)
        if not verify_avoiding(prob, col):
            raise AssertionError("adversary returned a coloring that does not avoid every line")
        row.update(status="FAIL", coloring=col, problem=prob, exhaustive=_confirm(prob, False))
        per.append(row)
        h += 1
    return SearchReport("UNDECIDED-AT-SCALE", None, None, False, per, reason=f"no success up to height {max_h}")


def _trivial(T, d):
    return SearchReport("FOUND", T, T.height, True, [{"h": T.height, "status": "PASS", "note": "one color"}])


def gen_ramsey_search(
    S: OrderedTree,
    T: OrderedTree,
    d: int,
    flavor: Flavor = Flavor.LEAF,
    guard: Guard = DEFAULT_GUARD,
    max_h: int | None = None,
) -> SearchReport:
    """Least ``h`` such that ``V = T^{br(T), h}`` works for leaf preserving maps.

    ``Flavor.EMB`` runs the leaf preserving search on ``S_+`` and ``T_+`` and
    returns ``V_-``.
    """
    flavor = Flavor(flavor)
    if S.is_empty() or T.is_empty():
        raise ValueError("S and T must be non-empty")
    if d < 1:
        raise ValueError("need d >= 1")
    if d == 1:
        return _trivial(T, d)
    if flavor == Flavor.LEAF:
        return _search(S, T, d, Flavor.LEAF, guard, max_h, T.height)
    if flavor == Flavor.EMB:
        Tp = plus(T)
        rep = _search(plus(S), Tp, d, Flavor.LEAF, guard, None if max_h is None else max_h + 1, Tp.height)
        return _reduced(rep)
    raise ValueError("flavor must be LEAF or EMB")


def _reduced(rep: SearchReport) -> SearchReport:
    rep.reduction = "S+/T+ -> V-"
    if rep.V is not None:
        rep.V = minus(rep.V)
        rep.height = rep.V.height
    return rep


def _leaves_level(T: OrderedTree) -> bool:
    return len({T.depth[v] for v in T.leaves}) == 1


def milliken_search(
    S: OrderedTree,
    T: OrderedTree,
    d: int,
    flavor: Flavor = Flavor.STRONG_LEAF,
    guard: Guard = DEFAULT_GUARD,
    max_h: int | None = None,
) -> SearchReport:
    """The same scheme for strong (leaf preserving) embeddings."""
    flavor = Flavor(flavor)
    if S.is_empty() or T.is_empty():
        raise ValueError("S and T must be non-empty")
    if not _leaves_level(T):
        raise ValueError("all leaves of T must have the same height")
    if d < 1:
        raise ValueError("need d >= 1")
    if d == 1:
        return _trivial(T, d)
    if flavor == Flavor.STRONG_LEAF:
        return _search(S, T, d, Flavor.STRONG_LEAF, guard, max_h, T.height)
    if flavor == Flavor.STRONG:
        Tp = plus(T)
        rep = _search(plus(S), Tp, d, Flavor.STRONG_LEAF, guard, None if max_h is None else max_h + 1, Tp.height)
        return _reduced(rep)
    raise ValueError("flavor must be STRONG_LEAF or STRONG")
