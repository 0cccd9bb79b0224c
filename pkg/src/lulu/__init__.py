"""Exact output distributions of stack filters built from erosions and dilations."""

from .analysis import dominance_check, phi_from_rsp, robustness_orders, rsp
from .boolean_function import PBF, Antichain, condense, dualize, evaluate, pbf_of_cascade, pbf_of_rank
from .distribution import (
    a_vector,
    phi_C_recursive,
    phi_closed,
    phi_enum,
    phi_incl_excl,
    reference_data,
)
from .errors import CapacityError, DimensionError, ParameterError
from .event_calculus import Pattern, check_identity, parse_pattern, pattern_prob
from .expr import parse
from .filter_algebra import (
    Boundary,
    Cascade,
    apply,
    build_basic,
    compose,
    dilation,
    erosion,
    reach,
    support,
)
from .polynomial import Polynomial

__all__ = [
    "Antichain", "Boundary", "CapacityError", "Cascade", "DimensionError", "PBF",
    "ParameterError", "Pattern", "Polynomial", "a_vector", "apply", "build_basic",
    "check_identity", "compose", "condense", "dilation", "dominance_check", "dualize",
    "erosion", "evaluate", "parse", "parse_pattern", "pattern_prob", "pbf_of_cascade",
    "pbf_of_rank", "phi_C_recursive", "phi_closed", "phi_enum", "phi_from_rsp",
    "phi_incl_excl", "reach", "reference_data", "robustness_orders", "rsp", "support",
]
