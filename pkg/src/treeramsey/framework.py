"""Normed backgrounds, pairs of families, and exhaustive condition checkers.

Elements of ``A`` and ``X`` are hashable Python values (nested tuples of
ints).  Partial operations return ``None`` where undefined.  Norm values
must support ``<=``; :data:`BOTTOM` is below every other norm value.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

from .adversary import (
    UNGUARDED,
    ColoringProblem,
    Guard,
    find_avoiding_coloring,
    problem_from_sets,
    verify_avoiding,
)

__all__ = [
    "BOTTOM",
    "NormedBackground",
    "Family",
    "FamilyPair",
    "Verdict",
    "check_background_axioms",
    "check_pointwise",
    "check_condition",
    "check_R",
    "check_P",
    "lift_P_to_Pplus",
    "check_Pplus",
    "LiftResult",
    "fiber",
    "extenders",
    "truncate_set",
    "truncation_depth",
    "coloring_problem",
]


@functools.total_ordering
class _Bottom:
    """The norm value below everything (``-inf``)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return other is not self

    def __gt__(self, other) -> bool:
        return False

    def __hash__(self) -> int:
        return hash("BOTTOM")

    def __repr__(self) -> str:
        return "-inf"


BOTTOM = _Bottom()


def _le(a, b) -> bool:
    if a is BOTTOM:
        return True
    if b is BOTTOM:
        return False
    return a <= b


@dataclass
class NormedBackground:
    """A finite sample of ``(A, X, ·, ., ∂, |·|)``."""

    name: str
    a_elems: tuple
    x_elems: tuple
    mult: Callable[[Any, Any], Any]
    act: Callable[[Any, Any], Any]
    trunc: Callable[[Any], Any]
    norm: Callable[[Any], Any]
    render: Callable[[Any], Any] = field(default=lambda e: e)

    def __post_init__(self) -> None:
        self._act_cache: dict = {}
        self._profile_cache: dict = {}

    def act_cached(self, a, x):
        key = (a, x)
        try:
            return self._act_cache[key]
        except KeyError:
            val = self.act(a, x)
            self._act_cache[key] = val
            return val

    def profile(self, a) -> dict:
        """``{x: a.x}`` over every sampled ``x`` where ``a.x`` is defined."""
        try:
            return self._profile_cache[a]
        except KeyError:
            prof = {}
            for x in self.x_elems:
                y = self.act_cached(a, x)
                if y is not None:
                    prof[x] = y
            self._profile_cache[a] = prof
            return prof

    def extends(self, b, a) -> bool:
        """``b`` extends ``a`` on the sample."""
        pa = self.profile(a)
        pb = self.profile(b)
        return pa.items() <= pb.items()


@dataclass(frozen=True)
class Family:
    key: Hashable
    members: frozenset

    def __repr__(self) -> str:
        return f"Family({self.key!r}, {len(self.members)} members)"


@dataclass
class FamilyPair:
    """Families ``F`` (subsets of A) and ``P`` (subsets of X) with ⊙ and •.

    ``dot(F, P)`` and ``bullet(F, G)`` return the result family or ``None``.
    ``p_aliases(members)`` returns the listed ``P`` families with exactly
    that member set (for instances where ``P`` is given by a predicate it
    may build the family on the fly).  ``witness_families`` are further
    members of ``F`` (beyond the sampled bound) used only as candidates in
    condition (B); a callable receives the ``(F, P)`` being checked.
    """

    background: NormedBackground
    f_families: list[Family]
    p_families: list[Family]
    dot: Callable[[Family, Family], Family | None]
    bullet: Callable[[Family, Family], Family | None]
    p_aliases: Callable[[frozenset], list[Family]] | None = None
    witness_families: Callable[[Family, Family], Iterable[Family]] | list[Family] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.p_aliases is None:
            index: dict[frozenset, list[Family]] = {}
            for P in self.p_families:
                index.setdefault(P.members, []).append(P)
            self.p_aliases = lambda members: list(index.get(members, []))
        self._f_index: dict[frozenset, list[Family]] = {}
        for F in self.f_families:
            self._f_index.setdefault(F.members, []).append(F)

    def f_aliases(self, members: frozenset) -> list[Family]:
        return list(self._f_index.get(members, []))

    def _f_candidates(self, F: Family) -> list[Family]:
        return [F] + [G for G in self.f_aliases(F.members) if G.key != F.key]

    def dot_on_set(self, F: Family, members: frozenset) -> Family | None:
        """``F ⊙ P`` for the set ``members``, trying every listed alias of both sets."""
        for F1 in self._f_candidates(F):
            for P in self.p_aliases(members):
                out = self.dot(F1, P)
                if out is not None:
                    return out
        return None

    def bullet_on_sets(self, F: Family, G: Family) -> Family | None:
        """``F • G`` as sets: equal sets listed under different keys are one family."""
        for F1 in self._f_candidates(F):
            for G1 in self._f_candidates(G):
                out = self.bullet(F1, G1)
                if out is not None:
                    return out
        return None

    def witnesses(self, F: Family, P: Family) -> Iterable[Family]:
        """Extra (B) candidates for ``F`` and ``P`` beyond the listed families."""
        w = self.witness_families
        return w(F, P) if callable(w) else w


@dataclass
class Verdict:
    status: str  # PASS or FAIL
    certificate: dict = field(default_factory=dict)
    witness: Any = None
    problem: ColoringProblem | None = None
    coloring: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_json(self) -> dict:
        out = {"status": self.status, "certificate": _jsonable(self.certificate)}
        if self.problem is not None and self.coloring is not None:
            out["certificate"]["problem"] = self.problem.to_json()
            out["certificate"]["coloring"] = list(self.coloring)
        return out

    def recheck(self) -> bool:
        """A FAIL carrying a coloring must still avoid every line."""
        if self.problem is None or self.coloring is None:
            return True
        return verify_avoiding(self.problem, self.coloring)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (tuple, list, frozenset, set)):
        seq = sorted(x, key=repr) if isinstance(x, (frozenset, set)) else x
        return [_jsonable(v) for v in seq]
    if x is BOTTOM:
        return "-inf"
    if isinstance(x, (int, str, float, bool)) or x is None:
        return x
    return repr(x)


# -- background axioms ------------------------------------------------------


def check_background_axioms(bg: NormedBackground) -> Verdict:
    """Exhaustive check of axioms (i)-(v) and the truncation law on the sample."""
    A, X = bg.a_elems, bg.x_elems
    act, mult, trunc, norm = bg.act_cached, bg.mult, bg.trunc, bg.norm

    def fail(rule, **inst):
        return Verdict("FAIL", {"rule": rule, **{k: bg.render(v) for k, v in inst.items()}})

    norms = {x: norm(x) for x in X}
    truncs = {x: trunc(x) for x in X}
    for x in X:
        if not _le(norm(truncs[x]), norms[x]):
            return fail("iii", x=x)
    for a in A:
        for x in X:
            ax = act(a, x)
            adx = act(a, truncs[x])
            if ax is not None:
                if adx is None:
                    return fail("truncation-defined", a=a, x=x)
                if trunc(ax) != adx:
                    return fail("ii", a=a, x=x)
    for a in A:
        for b in A:
            ab = mult(a, b)
            for x in X:
                bx = act(b, x)
                lhs = act(a, bx) if bx is not None else None
                rhs = act(ab, x) if ab is not None else None
                if lhs is not None and rhs is not None and lhs != rhs:
                    return fail("i", a=a, b=b, x=x)
    # (iv) and (v) along the norm order: group X by equal norm once, then a
    # single sweep per a replaces the comparison of all pairs
    by_norm = sorted(X, key=functools.cmp_to_key(lambda p, q: _cmp_norm(norms[p], norms[q])))
    groups: list[list] = []
    for x in by_norm:
        if groups and _cmp_norm(norms[groups[-1][0]], norms[x]) == 0:
            groups[-1].append(x)
        else:
            groups.append([x])
    for a in A:
        defined = {x: act(a, x) for x in X}
        last = max((j for j, g in enumerate(groups) if any(defined[x] is not None for x in g)), default=-1)
        if last >= 0:
            y = next(x for x in groups[last] if defined[x] is not None)
            for g in groups[: last + 1]:
                for x in g:
                    if defined[x] is None:
                        return fail("v", a=a, x=x, y=y)
        top = None
        for g in groups[: last + 1]:
            vals = [(norm(defined[x]), x) for x in g]
            v0, x0 = vals[0]
            for v, x in vals[1:]:
                if _cmp_norm(v, v0) != 0:
                    big, small = (x, x0) if _le(v0, v) else (x0, x)
                    return fail("iv", a=a, x=big, y=small)
            if top is not None and not _le(top[0], v0):
                return fail("iv", a=a, x=top[1], y=x0)
            top = (v0, x0)
    return Verdict("PASS", {"a_count": len(A), "x_count": len(X)})


def _cmp_norm(p, q) -> int:
    if _le(p, q) and _le(q, p):
        return 0
    return -1 if _le(p, q) else 1


# -- sets, fibers, extenders -------------------------------------------------


def act_on_set(bg: NormedBackground, F: Iterable, P: Iterable) -> frozenset | None:
    """``F . P`` or ``None`` if some ``a . x`` is undefined."""
    out = set()
    for a in F:
        for x in P:
            y = bg.act_cached(a, x)
            if y is None:
                return None
            out.add(y)
    return frozenset(out)


def mult_on_set(bg: NormedBackground, F: Iterable, G: Iterable) -> frozenset | None:
    out = set()
    for a in F:
        for b in G:
            c = bg.mult(a, b)
            if c is None:
                return None
            out.add(c)
    return frozenset(out)


def truncate_set(bg: NormedBackground, P: Iterable) -> frozenset:
    return frozenset(bg.trunc(x) for x in P)


def fiber(bg: NormedBackground, P: Iterable, y) -> frozenset:
    """``P_y``: the members of ``P`` truncating to ``y``."""
    return frozenset(x for x in P if bg.trunc(x) == y)


def extenders(bg: NormedBackground, F: Iterable, a) -> frozenset:
    """``F_a``: the members of ``F`` extending ``a`` (over the sampled X)."""
    return frozenset(f for f in F if bg.extends(f, a))


def truncation_depth(bg: NormedBackground, P: Iterable) -> int:
    """Least ``t`` with ``∂^t P`` a single point fixed by ``∂``.

    Raises ``ValueError`` when the iteration cycles without reaching one.
    """
    cur = frozenset(P)
    if not cur:
        raise ValueError("truncation depth of an empty set")
    seen = set()
    t = 0
    while True:
        if len(cur) == 1:
            (x,) = cur
            if bg.trunc(x) == x:
                return t
        if cur in seen:
            raise ValueError("truncation never reaches a single fixed point")
        seen.add(cur)
        cur = truncate_set(bg, cur)
        t += 1


# -- the coloring problem behind (R), (P), (P+) ------------------------------


def coloring_problem(bg: NormedBackground, F: Iterable, P: Iterable, d: int) -> ColoringProblem:
    """Points ``F . P``; one line ``f . P`` per ``f`` in ``F``."""
    F = sorted(F)
    P = sorted(P)
    lines = []
    points = set()
    for f in F:
        line = []
        for x in P:
            y = bg.act_cached(f, x)
            if y is None:
                raise ValueError(f"action undefined for {bg.render(f)} on {bg.render(x)}")
            line.append(y)
        lines.append(line)
        points.update(line)
    return problem_from_sets(sorted(points), lines, d)


def _solve(prob: ColoringProblem, prune: str, guard: Guard, witness=None, extra=None) -> Verdict:
    col = find_avoiding_coloring(prob, prune=prune, guard=guard)
    cert = dict(extra or {})
    cert["points"] = prob.n_points
    cert["lines"] = len(prob.lines)
    if col is None:
        return Verdict("PASS", cert, witness=witness)
    return Verdict("FAIL", cert, witness=witness, problem=prob, coloring=col)


def check_R(pair: FamilyPair, F: Family, P: Family, d: int, prune: str = "colors", guard: Guard = UNGUARDED) -> Verdict:
    """Condition (R) for one ``F ⊙ P``: no d-coloring avoids every ``f . P``."""
    if pair.dot(F, P) is None:
        raise ValueError(f"F ⊙ P is undefined for {F.key!r}, {P.key!r}")
    if d < 1:
        raise ValueError("d must be positive")
    prob = coloring_problem(pair.background, F.members, P.members, d)
    return _solve(prob, prune, guard, extra={"F": F.key, "P": P.key, "d": d})


def check_P(
    pair: FamilyPair,
    P: Family,
    y,
    candidates: Sequence[tuple[Family, Any]],
    d: int,
    prune: str = "colors",
    guard: Guard = UNGUARDED,
) -> Verdict:
    """Condition (P) at ``(P, y)``: PASS as soon as one candidate ``(F, a)`` works."""
    bg = pair.background
    Py = fiber(bg, P.members, y)
    notes = []
    last_fail = None
    for F, a in candidates:
        if pair.dot(F, P) is None:
            notes.append({"F": F.key, "error": "F ⊙ P undefined"})
            continue
        if bg.act_cached(a, y) is None:
            notes.append({"F": F.key, "error": "a . y undefined"})
            continue
        Fa = extenders(bg, F.members, a)
        prob = coloring_problem(bg, Fa, Py, d)
        v = _solve(prob, prune, guard, witness=(F, a), extra={"F": F.key, "a": bg.render(a), "y": bg.render(y), "d": d})
        if v.passed:
            v.certificate["rejected"] = notes
            return v
        notes.append({"F": F.key, "error": "avoiding coloring found"})
        last_fail = v
    if last_fail is None:
        return Verdict("FAIL", {"rejected": notes, "reason": "no valid candidate"})
    last_fail.certificate["rejected"] = notes
    return last_fail


def check_Pplus(
    pair: FamilyPair, t: int, P: Family, x, F: Family, a, d: int, prune: str = "colors", guard: Guard = UNGUARDED
) -> Verdict:
    """Direct check of (P+) at depth ``t`` for the pair ``(F, a)``."""
    bg = pair.background
    if pair.dot(F, P) is None:
        return Verdict("FAIL", {"reason": "F ⊙ P undefined", "F": F.key})
    if bg.act_cached(a, x) is None:
        return Verdict("FAIL", {"reason": "a . x undefined"})
    level = frozenset(P.members)
    for _ in range(t):
        level = truncate_set(bg, level)
    fib = fiber(bg, level, x)
    Fa = extenders(bg, F.members, a)
    prob = coloring_problem(bg, Fa, fib, d)
    return _solve(prob, prune, guard, witness=(F, a), extra={"t": t, "F": F.key, "d": d})


# -- pair conditions ---------------------------------------------------------


def check_pointwise(pair: FamilyPair) -> Verdict:
    """Every defined ``F ⊙ P`` and ``F • G`` equals the pointwise result."""
    bg = pair.background
    for F in pair.f_families:
        for P in pair.p_families:
            R = pair.dot(F, P)
            if R is None:
                continue
            got = act_on_set(bg, F.members, P.members)
            if got is None or got != R.members:
                return Verdict("FAIL", {"rule": "pointwise-dot", "F": F.key, "P": P.key})
        for G in pair.f_families:
            R = pair.bullet(F, G)
            if R is None:
                continue
            got = mult_on_set(bg, F.members, G.members)
            if got is None or got != R.members:
                return Verdict("FAIL", {"rule": "pointwise-bullet", "F": F.key, "G": G.key})
    return Verdict("PASS")


def find_B_witness(pair: FamilyPair, F: Family, P: Family) -> Family | None:
    """A family ``G`` with ``G ⊙ P`` defined whose members extend every member of ``F``."""
    bg = pair.background
    for G in itertools.chain(pair.f_families, pair.witnesses(F, P)):
        if pair.dot_on_set(G, P.members) is None:
            continue
        if all(any(bg.extends(g, f) for g in G.members) for f in F.members):
            return G
    return None


def check_condition(pair: FamilyPair, which: str) -> Verdict:
    """Condition (A), (B) or (*) (``which`` in ``A``, ``B``, ``STAR``) on the listed families."""
    which = which.upper()
    bg = pair.background
    if which == "A":
        for P in pair.p_families:
            if not pair.p_aliases(truncate_set(bg, P.members)):
                return Verdict("FAIL", {"condition": "A", "P": P.key})
        return Verdict("PASS", {"condition": "A", "checked": len(pair.p_families)})
    if which == "B":
        witnesses = {}
        for P in pair.p_families:
            dP = truncate_set(bg, P.members)
            for F in pair.f_families:
                if pair.dot_on_set(F, dP) is None:
                    continue
                G = find_B_witness(pair, F, P)
                if G is None:
                    return Verdict("FAIL", {"condition": "B", "F": F.key, "P": P.key})
                witnesses[(F.key, P.key)] = G.key
        return Verdict("PASS", {"condition": "B", "checked": len(witnesses)}, witness=witnesses)
    if which in ("STAR", "*"):
        checked = 0
        for P in pair.p_families:
            for G in pair.f_families:
                GP = pair.dot(G, P)
                if GP is None:
                    continue
                for F in pair.f_families:
                    FGP = pair.dot_on_set(F, GP.members)
                    if FGP is None:
                        continue
                    checked += 1
                    FG = pair.bullet_on_sets(F, G)
                    if FG is None:
                        return Verdict("FAIL", {"condition": "*", "F": F.key, "G": G.key, "P": P.key, "reason": "F • G undefined"})
                    FG_P = pair.dot_on_set(FG, P.members)
                    if FG_P is None:
                        return Verdict("FAIL", {"condition": "*", "F": F.key, "G": G.key, "P": P.key, "reason": "(F • G) ⊙ P undefined"})
                    if FG_P.members != FGP.members:
                        return Verdict("FAIL", {"condition": "*", "F": F.key, "G": G.key, "P": P.key, "reason": "results differ"})
        return Verdict("PASS", {"condition": "*", "checked": checked})
    raise ValueError(f"unknown condition {which!r}")


# -- lifting (P) to (P+) ------------------------------------------------------


@dataclass
class LiftResult:
    F: Family
    a: Any
    verdict: Verdict
    chain: list = field(default_factory=list)


def lift_P_to_Pplus(
    pair: FamilyPair,
    t: int,
    P: Family,
    x,
    p_witness: Callable[[Family, Any], tuple[Family, Any]],
    d: int,
    prune: str = "colors",
    guard: Guard = UNGUARDED,
) -> LiftResult:
    """Witness for (P+) at depth ``t`` built from (P) witnesses and (B) witnesses.

    ``p_witness(P, y)`` must return ``(F, a)`` witnessing (P) for ``P`` and
    ``y``.  The returned pair is re-checked directly.
    """
    bg = pair.background
    if t < 0:
        raise ValueError("t must be non-negative")
    level = frozenset(P.members)
    for _ in range(t + 1):
        level = truncate_set(bg, level)
    if x not in level:
        raise ValueError("x is not in the (t+1)-fold truncation of P (empty fiber)")

    chain: list = []

    def lift(Q: Family, s: int) -> tuple[Family, Any]:
        if s == 0:
            F, a = p_witness(Q, x)
            chain.append(("P", Q.key, F.key))
            return F, a
        aliases = pair.p_aliases(truncate_set(bg, Q.members))
        if not aliases:
            raise ValueError(f"condition (A) fails at {Q.key!r}")
        F, a = lift(aliases[0], s - 1)
        G = find_B_witness(pair, F, Q)
        if G is None:
            raise LookupError(f"no (B) witness for {F.key!r}, {Q.key!r} among the listed families")
        chain.append(("B", Q.key, G.key))
        return G, a

    F, a = lift(P, t)
    verdict = check_Pplus(pair, t, P, x, F, a, d, prune=prune, guard=guard)
    return LiftResult(F, a, verdict, chain)
