"""Finite, checkable Ramsey statements for ordered trees.

Modules: :mod:`trees` (ordered trees), :mod:`embeddings` (maps between them),
:mod:`adversary` (coloring search), :mod:`framework` (normed backgrounds and
pairs of families), :mod:`instances` (the concrete instances and witness
searches), :mod:`hjhl` (Hales-Jewett and Halpern-Lauchli), :mod:`cli`.
"""

from .adversary import ColoringProblem, Guard, GuardExceeded, find_avoiding_coloring, verify_avoiding
from .embeddings import Flavor, TreeMap, classify, enumerate_maps
from .trees import OrderedTree, chain, regular_tree

__version__ = "0.1.0"

__all__ = [
    "ColoringProblem",
    "Guard",
    "GuardExceeded",
    "find_avoiding_coloring",
    "verify_avoiding",
    "Flavor",
    "TreeMap",
    "classify",
    "enumerate_maps",
    "OrderedTree",
    "chain",
    "regular_tree",
]
