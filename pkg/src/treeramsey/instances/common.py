"""Shared pieces for the concrete instances."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..adversary import Guard, GuardExceeded
from ..framework import FamilyPair, NormedBackground, _jsonable


@dataclass
class Instance:
    """A concrete normed background together with its pair of families."""

    kind: str
    k: int
    size_bound: int
    background: NormedBackground
    pair: FamilyPair
    extra: dict = field(default_factory=dict)

    def family(self, key) -> Any:
        for fam in self.pair.f_families + self.pair.p_families:
            if fam.key == key:
                return fam
        raise KeyError(key)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "size_bound": self.size_bound,
            "a_count": len(self.background.a_elems),
            "x_count": len(self.background.x_elems),
            "f_families": [_jsonable(F.key) for F in self.pair.f_families],
            "p_families": [_jsonable(P.key) for P in self.pair.p_families],
        }


def check_tree_guard(k: int, n: int, guard: Guard, limit: int = 64) -> None:
    """Refuse instances whose largest regular tree is too big to enumerate."""
    if guard.unsafe:
        return
    nodes = n if k <= 1 else (k ** n - 1) // (k - 1)
    if nodes > limit:
        raise GuardExceeded(f"T^{{{k},{n}}} has {nodes} nodes, over the instance limit {limit}")
