"""Flag codes over finite fields: counting, bounds, exact search and constructions."""

from .qfield import FieldSpec, make_field
from .linalg import MatrixFq, Subspace, injection_distance, lattice
from .flags import Flag, FlagCode, FlagType, count_flags, enumerate_flags, grassmann_distance, min_distance
from .qcombin import QPolynomial, QRational, gaussian_binomial, gaussian_int
from .reduction import ReductionVector, closure, compute_R, preceq
from .bounds import BoundResult, best_upper_bound, bounds_table
from .search import GroupAction, kramer_mesner, solve, solve_flag_code
from .constructions import (
    cartesian_code_5_2,
    cartesian_code_5_3,
    fixture_155,
    gabidulin_mrd,
    lift,
    partial_spread_flag_code,
    seed_search_singer,
    singer_orbit_code,
    spread_code,
)

__version__ = "0.1.0"
