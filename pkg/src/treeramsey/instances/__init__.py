"""Concrete normed backgrounds, their pairs of families and the witness searches."""

from __future__ import annotations

from ..adversary import DEFAULT_GUARD, Guard
from ..framework import truncation_depth
from .branch import BMap, EMPTY, based_on, build_branch, check_P_branch_instance, g_family, lp_maps
from .classical import binom, build_classical, classical_p_witness, pigeonhole_problem
from .common import Instance
from .searches import SearchReport, gen_ramsey_search, milliken_search
from .strong import (
    build_milliken,
    build_star,
    chain_family,
    check_P_milliken,
    check_P_star_instance,
    shape_family,
    strong_family,
)

__all__ = [
    "Instance",
    "KINDS",
    "build_instance",
    "build_classical",
    "build_star",
    "build_branch",
    "build_milliken",
    "binom",
    "strong_family",
    "chain_family",
    "shape_family",
    "g_family",
    "lp_maps",
    "BMap",
    "EMPTY",
    "based_on",
    "truncation_depth",
    "classical_p_witness",
    "pigeonhole_problem",
    "check_P_star_instance",
    "check_P_milliken",
    "check_P_branch_instance",
    "SearchReport",
    "gen_ramsey_search",
    "milliken_search",
]

KINDS = ("CLASSICAL", "STAR", "BRANCH", "MILLIKEN")


def build_instance(kind: str, k: int = 2, size_bound: int = 3, guard: Guard = DEFAULT_GUARD) -> Instance:
    """``size_bound`` is ``maxN`` for CLASSICAL, STAR and MILLIKEN and ``L`` for BRANCH."""
    kind = kind.upper()
    if kind == "CLASSICAL":
        return build_classical(size_bound, guard=guard)
    if kind == "STAR":
        return build_star(k, size_bound, guard=guard)
    if kind == "BRANCH":
        return build_branch(k, size_bound, guard=guard)
    if kind == "MILLIKEN":
        return build_milliken(k, size_bound, guard=guard)
    raise ValueError(f"unknown instance kind {kind!r}; expected one of {', '.join(KINDS)}")
