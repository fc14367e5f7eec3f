"""Exact Hasse-Schmidt differentials, integral curves and height inequalities on P^2."""

from .arith import BinaryForm, P1Point, Poly, RatFunc, TruncatedSeries
from .branches import local_branches
from .geometry import PlaneDivisor, RationalMap, height, truncated_counting, validate_map, vanishing_orders
from .harness import (
    QuadFamily,
    Witness,
    campana_check,
    dosvar_order_check,
    exceptional_set_quadfamily,
    is_campana,
    main_inequality_report,
    noguchi_wang_check,
    quad_family_scenario,
    sigma,
)
from .hs import HSForm, hs_derive, hs_pullback, hs_reduce, vanishing_order
from .scenario import parse_scenario, print_scenario
from .surface import (
    FormOnP2,
    chart_transport,
    discriminant_locus,
    is_integral_implicit,
    is_integral_parametrized,
    is_reduced,
)

__version__ = "0.1.0"
