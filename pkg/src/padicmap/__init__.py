"""Exact p-adic dynamics of phi(x) = ax + 1/x on the projective line."""

from .decomposition import BallId, decompose_report, induced_map, lift_tree, reduce_point
from .dynamics import (
    MapParams,
    Regime,
    apply,
    classify,
    escape_test,
    fixed_points,
    orbit,
    preimages,
    taylor_coeffs,
)
from .errors import (
    InvalidInput,
    InvalidPrime,
    NotASquare,
    PadicMapError,
    PrecisionExhausted,
    WrongRegime,
)
from .padic_core import PadicScalar, from_rational, sqrt, valuation
from .projective import INFINITY, PDisk, ProjPoint, point, spherical_distance
from .symbolic import cylinder, entropy, itinerary2, itinerary4, transition_matrix4

__version__ = "0.1.0"

__all__ = [
    "BallId", "INFINITY", "InvalidInput", "InvalidPrime", "MapParams", "NotASquare", "PDisk",
    "PadicMapError", "PadicScalar", "PrecisionExhausted", "ProjPoint", "Regime", "WrongRegime",
    "apply", "classify", "cylinder", "decompose_report", "entropy", "escape_test",
    "fixed_points", "from_rational", "induced_map", "itinerary2", "itinerary4", "lift_tree",
    "orbit", "point", "preimages", "reduce_point", "spherical_distance", "sqrt",
    "taylor_coeffs", "transition_matrix4", "valuation",
]
