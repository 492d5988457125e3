"""Search for colorings with no monochromatic line.

A :class:`ColoringProblem` is a hypergraph: ``points`` are colored, each line
is a set of point indices.  A Ramsey-type statement holds for the problem
exactly when :func:`find_avoiding_coloring` returns ``None``.
"""

from __future__ import annotations

import itertools
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

__all__ = [
    "ColoringProblem",
    "Guard",
    "GuardExceeded",
    "DEFAULT_GUARD",
    "UNGUARDED",
    "find_avoiding_coloring",
    "verify_avoiding",
    "monochromatic_lines",
    "brute_force_avoiding",
    "MinimalResult",
    "minimal_parameter",
    "problem_from_sets",
    "coloring_certificate",
]


class GuardExceeded(Exception):
    """A search would exceed the configured size limits."""


@dataclass(frozen=True)
class Guard:
    """Point-count limits per color count; ``unsafe`` disables every limit."""

    max_points: int | None = None
    unsafe: bool = False

    def limit(self, d: int) -> float:
        if self.unsafe:
            return math.inf
        if self.max_points is not None:
            return self.max_points
        if d <= 1:
            return math.inf
        if d == 2:
            return 25
        if d == 3:
            return 16
        return math.floor(25 / math.log2(d))

    def check(self, n_points: int, d: int, what: str = "coloring problem") -> None:
        if n_points > self.limit(d):
            raise GuardExceeded(f"{what} has {n_points} points, over the limit {self.limit(d)} for d={d}")


DEFAULT_GUARD = Guard()
UNGUARDED = Guard(unsafe=True)


@dataclass(frozen=True)
class ColoringProblem:
    n_points: int
    lines: tuple[tuple[int, ...], ...]
    d: int
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("need at least one color")
        lines = tuple(tuple(sorted(set(int(p) for p in line))) for line in self.lines)
        for line in lines:
            if not line:
                raise ValueError("lines must be non-empty")
            if line[0] < 0 or line[-1] >= self.n_points:
                raise ValueError("line refers to a point outside the problem")
        object.__setattr__(self, "lines", lines)
        if self.labels and len(self.labels) != self.n_points:
            raise ValueError("labels must have one entry per point")

    def to_json(self) -> dict:
        out = {"n_points": self.n_points, "d": self.d, "lines": [list(l) for l in self.lines]}
        if self.labels:
            out["labels"] = [_jsonable(x) for x in self.labels]
        return out

    @classmethod
    def from_json(cls, data) -> ColoringProblem:
        if isinstance(data, str):
            data = json.loads(data)
        labels = tuple(_hashable(x) for x in data.get("labels", ()))
        return cls(int(data["n_points"]), tuple(tuple(l) for l in data["lines"]), int(data["d"]), labels)


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _hashable(x):
    if isinstance(x, list):
        return tuple(_hashable(y) for y in x)
    return x


def problem_from_sets(points: Sequence[Hashable], lines: Iterable[Iterable[Hashable]], d: int) -> ColoringProblem:
    """Build a problem from labelled points and lines given as label sets."""
    index = {p: i for i, p in enumerate(points)}
    if len(index) != len(points):
        raise ValueError("duplicate point labels")
    idx_lines = []
    seen = set()
    for line in lines:
        key = tuple(sorted(index[p] for p in set(line)))
        if key not in seen:
            seen.add(key)
            idx_lines.append(key)
    return ColoringProblem(len(points), tuple(idx_lines), d, tuple(points))


def monochromatic_lines(prob: ColoringProblem, coloring: Sequence[int]) -> list[int]:
    return [i for i, line in enumerate(prob.lines) if len({coloring[p] for p in line}) == 1]


def verify_avoiding(prob: ColoringProblem, coloring: Sequence[int]) -> bool:
    """True iff ``coloring`` is a total d-coloring with no monochromatic line."""
    if len(coloring) != prob.n_points:
        return False
    if any(not 0 <= c < prob.d for c in coloring):
        return False
    return not monochromatic_lines(prob, coloring)


def find_avoiding_coloring(
    prob: ColoringProblem,
    prune: str = "colors",
    guard: Guard = UNGUARDED,
) -> tuple[int, ...] | None:
    """Backtracking search for a coloring with no monochromatic line.

    Points are visited by descending line membership (ties by index) and
    colors tried in ascending order, so the answer is the least avoiding
    coloring in that visiting order.  ``prune="colors"`` only lets a point
    take an already used color or the smallest unused one.
    """
    if prune not in ("colors", "none"):
        raise ValueError(f"unknown pruning mode {prune!r}")
    guard.check(prob.n_points, prob.d)
    n, d = prob.n_points, prob.d
    if any(len(line) == 1 for line in prob.lines):
        return None
    if not prob.lines:
        return (0,) * n

    lines = prob.lines
    sizes = [len(l) for l in lines]
    member: list[list[int]] = [[] for _ in range(n)]
    for li, line in enumerate(lines):
        for p in line:
            member[p].append(li)
    order = sorted(range(n), key=lambda p: (-len(member[p]), p))

    color = [-1] * n
    assigned = [0] * len(lines)
    counts = [[0] * d for _ in lines]
    forbid = [[0] * d for _ in range(n)]

    def free_point(li: int) -> int:
        for q in lines[li]:
            if color[q] < 0:
                return q
        return -1

    def assign(p: int, c: int) -> tuple[bool, list[tuple[int, int]]]:
        color[p] = c
        marks: list[tuple[int, int]] = []
        ok = True
        for li in member[p]:
            assigned[li] += 1
            counts[li][c] += 1
            if assigned[li] == sizes[li] - 1 and counts[li][c] == sizes[li] - 1:
                q = free_point(li)
                forbid[q][c] += 1
                marks.append((q, c))
                if all(forbid[q][e] for e in range(d)):
                    ok = False
        return ok, marks

    def unassign(p: int, c: int, marks: list[tuple[int, int]]) -> None:
        for q, e in marks:
            forbid[q][e] -= 1
        for li in member[p]:
            assigned[li] -= 1
            counts[li][c] -= 1
        color[p] = -1

    limit = sys.getrecursionlimit()
    if limit < 4 * n + 100:
        sys.setrecursionlimit(4 * n + 100)

    def search(i: int, used: int) -> bool:
        if i == n:
            return True
        p = order[i]
        top = min(d, used + 1) if prune == "colors" else d
        for c in range(top):
            if forbid[p][c]:
                continue
            ok, marks = assign(p, c)
            if ok and search(i + 1, max(used, c + 1)):
                return True
            unassign(p, c, marks)
        return False

    if search(0, 0):
        return tuple(color)
    return None


def brute_force_avoiding(prob: ColoringProblem, limit: int = 22) -> list[tuple[int, ...]]:
    """Every avoiding coloring by full enumeration (independent reference)."""
    n, d = prob.n_points, prob.d
    if n > limit:
        raise GuardExceeded(f"brute force over {d}^{n} colorings refused")
    if d == 2:
        import numpy as np

        xs = np.arange(1 << n, dtype=np.int64)
        good = np.ones(1 << n, dtype=bool)
        for line in prob.lines:
            mask = 0
            for p in line:
                mask |= 1 << p
            hit = xs & mask
            good &= (hit != 0) & (hit != mask)
        return [tuple((int(x) >> p) & 1 for p in range(n)) for x in np.nonzero(good)[0]]
    out = []
    for col in itertools.product(range(d), repeat=n):
        if verify_avoiding(prob, col):
            out.append(col)
    return out


@dataclass
class MinimalResult:
    status: str  # FOUND or UNDECIDED-AT-SCALE
    n: int | None
    refutations: dict[int, tuple[int, ...]]
    problems: dict[int, ColoringProblem]
    reason: str = ""


def minimal_parameter(
    gen: Callable[[int], ColoringProblem],
    lo: int,
    hi: int | None = None,
    prune: str = "colors",
    guard: Guard = DEFAULT_GUARD,
) -> MinimalResult:
    """Least ``n >= lo`` whose problem has no avoiding coloring.

    Stops with ``UNDECIDED-AT-SCALE`` when a problem breaks the guard or
    ``hi`` is passed.
    """
    refutations: dict[int, tuple[int, ...]] = {}
    problems: dict[int, ColoringProblem] = {}
    n = lo
    while hi is None or n <= hi:
        try:
            prob = gen(n)
            col = find_avoiding_coloring(prob, prune=prune, guard=guard)
        except GuardExceeded as exc:
            return MinimalResult("UNDECIDED-AT-SCALE", None, refutations, problems, str(exc))
        problems[n] = prob
        if col is None:
            return MinimalResult("FOUND", n, refutations, problems)
        refutations[n] = col
        n += 1
    return MinimalResult("UNDECIDED-AT-SCALE", None, refutations, problems, f"no success up to {hi}")


def coloring_certificate(prob: ColoringProblem, coloring: Sequence[int]) -> str:
    """One ``label: color`` line per point."""
    labels = prob.labels or tuple(range(prob.n_points))
    return "\n".join(f"{lab!r}: {c}" for lab, c in zip(labels, coloring))
