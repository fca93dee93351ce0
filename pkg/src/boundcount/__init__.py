"""Exact S-wave bound-state counts and rigorous upper/lower limits."""

__version__ = "0.1.0"

from .analytic import Quantity, analytic_limit, analytic_nu
from .counter import NodeCountResult, count_nodes
from .errors import BoundCountError, NoBoundStatesError, PotentialError
from .ladder import check_ladder_sandwich, ladder_lower, ladder_upper
from .limits_classic import Direction, LimitName, LimitValue, classic_limits, sufficient_one_state
from .limits_first import first_limits
from .potentials import BUILTIN_KINDS, KgPotential, Kind, Potential, from_table, kg_reduce, \
    make_builtin, validate
from .report import BoundsReport, compute_bounds, stis_table, sweep
from .rootfind import auxiliary_radii, phase_integral

__all__ = [
    "BUILTIN_KINDS",
    "BoundCountError",
    "BoundsReport",
    "Direction",
    "KgPotential",
    "Kind",
    "LimitName",
    "LimitValue",
    "NoBoundStatesError",
    "NodeCountResult",
    "Potential",
    "PotentialError",
    "Quantity",
    "analytic_limit",
    "analytic_nu",
    "auxiliary_radii",
    "check_ladder_sandwich",
    "classic_limits",
    "compute_bounds",
    "count_nodes",
    "first_limits",
    "from_table",
    "kg_reduce",
    "ladder_lower",
    "ladder_upper",
    "make_builtin",
    "phase_integral",
    "stis_table",
    "sufficient_one_state",
    "sweep",
    "validate",
]
