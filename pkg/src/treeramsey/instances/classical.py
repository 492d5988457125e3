"""Increasing injections ``[k] -> N`` acting by composition."""

from __future__ import annotations

import itertools
from functools import lru_cache

from ..adversary import DEFAULT_GUARD, Guard, GuardExceeded
from ..framework import Family, FamilyPair, NormedBackground, check_P
from .common import Instance

__all__ = [
    "binom",
    "classical_background",
    "classical_pair",
    "build_classical",
    "classical_p_witness",
    "pigeonhole_problem",
]


def _act(a: tuple, x: tuple):
    if x and x[-1] > len(a):
        return None
    return tuple(a[i - 1] for i in x)


def _trunc(x: tuple) -> tuple:
    return x[:-1]


def _norm(x: tuple) -> int:
    return x[-1] if x else 0


@lru_cache(maxsize=None)
def binom(n: int, m: int) -> Family:
    """All increasing maps ``[m] -> [n]`` as tuples of values."""
    if not (0 < m <= n or m == n == 0):
        raise ValueError(f"binom({n},{m}) is not a family")
    return Family(("binom", n, m), frozenset(itertools.combinations(range(1, n + 1), m)))


def classical_background(max_n: int) -> NormedBackground:
    elems = tuple(c for m in range(max_n + 1) for c in itertools.combinations(range(1, max_n + 1), m))
    return NormedBackground(
        name=f"classical(maxN={max_n})",
        a_elems=elems,
        x_elems=elems,
        mult=_act,
        act=_act,
        trunc=_trunc,
        norm=_norm,
    )


def _valid(n: int, m: int) -> bool:
    return 0 < m <= n or m == n == 0


def _dot(F: Family, P: Family):
    _, n, m = F.key
    _, l, k = P.key
    if m != l:
        return None
    return binom(n, k)


def classical_pair(max_n: int, background: NormedBackground | None = None) -> FamilyPair:
    bg = background or classical_background(max_n)
    fams = [binom(n, m) for n in range(max_n + 1) for m in range(n + 1) if _valid(n, m)]
    witness = [binom(max_n + 1, m) for m in range(1, max_n + 2)]
    return FamilyPair(bg, fams, list(fams), dot=_dot, bullet=_dot, witness_families=witness)


def build_classical(max_n: int, guard: Guard = DEFAULT_GUARD) -> Instance:
    if max_n < 0:
        raise ValueError("maxN must be non-negative")
    if max_n > 10 and not guard.unsafe:
        raise GuardExceeded(f"classical sample with maxN={max_n} is over the limit 10")
    bg = classical_background(max_n)
    return Instance("CLASSICAL", 1, max_n, bg, classical_pair(max_n, bg))


def classical_p_witness(pair: FamilyPair, d: int, max_m: int = 20):
    """``p_witness(P, y)`` scanning ``F = binom(m, l)`` with ``a`` the identity on ``[max y]``."""

    def witness(P: Family, y):
        _, l, _ = P.key
        lp = y[-1] if y else 0
        a = tuple(range(1, lp + 1))
        for m in range(l, max_m + 1):
            v = check_P(pair, P, y, [(binom(m, l), a)], d)
            if v.passed:
                return binom(m, l), a
        raise LookupError(f"no (P) witness up to m={max_m}")

    return witness


def pigeonhole_problem(pair: FamilyPair, d: int, l: int, lp: int):
    """Coloring problem behind (P) for ``binom(l, k)`` and ``y`` with ``max y = lp``.

    ``lp = 0`` uses ``k = 1`` and ``y`` empty; otherwise ``k = 2`` and
    ``y = (lp,)``.  Returns ``gen(m)`` for :func:`minimal_parameter`.
    """
    from ..framework import coloring_problem, extenders, fiber

    if not 0 <= lp < l:
        raise ValueError("need 0 <= l' < l")
    bg = pair.background
    P = binom(l, 1) if lp == 0 else binom(l, 2)
    y = () if lp == 0 else (lp,)
    a = tuple(range(1, lp + 1))
    Py = fiber(bg, P.members, y)

    def gen(m: int):
        F = binom(m, l)
        return coloring_problem(bg, extenders(bg, F.members, a), Py, d)

    return gen
