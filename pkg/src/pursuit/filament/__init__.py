"""Interval filament representations and the two-cop strategy."""

from .rep import (
    Filament,
    FilamentRep,
    TopEntry,
    Violation,
    c4_rep,
    check,
    classify_region,
    clique_rep,
    intersection_graph,
    load_rep,
    nesting,
    random_rep,
    save_rep,
    top_sequence,
    validate,
)
from .strategy import TwoCopPolicy, two_cop_policy

__all__ = [
    "Filament",
    "FilamentRep",
    "TopEntry",
    "TwoCopPolicy",
    "Violation",
    "c4_rep",
    "check",
    "classify_region",
    "clique_rep",
    "intersection_graph",
    "load_rep",
    "nesting",
    "random_rep",
    "save_rep",
    "top_sequence",
    "two_cop_policy",
    "validate",
]
