"""Exact tools for the integer round-up property of unit-demand cutting stock."""

from .core import (
    GapReport,
    Instance,
    InstanceM,
    Pattern,
    PatternClass,
    Rational,
    expand_to_unit_demand,
    make_instance,
)
from .dominance import dominates, downward_closure, maximal_elements, num
from .enumeration import enumerate_classes, histogram_by_zd
from .ilp import big_m, emit_direct_model
from .lp import minimize_unit_sum
from .metrics import bound_flags, gaps, z_c_feasible, z_c_proper, z_d
from .realization import partially_realizable, proper_patterns, realize
from .search import choose_branch_pattern, search_max_gap
from .wsg import count_weighted_games, is_weighted

__version__ = "0.1.0"

__all__ = [
    "GapReport",
    "Instance",
    "InstanceM",
    "Pattern",
    "PatternClass",
    "Rational",
    "big_m",
    "bound_flags",
    "choose_branch_pattern",
    "count_weighted_games",
    "dominates",
    "downward_closure",
    "emit_direct_model",
    "enumerate_classes",
    "expand_to_unit_demand",
    "gaps",
    "histogram_by_zd",
    "is_weighted",
    "make_instance",
    "maximal_elements",
    "minimize_unit_sum",
    "num",
    "partially_realizable",
    "proper_patterns",
    "realize",
    "search_max_gap",
    "z_c_feasible",
    "z_c_proper",
    "z_d",
]
