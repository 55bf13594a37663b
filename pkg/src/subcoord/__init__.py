"""Coordinate-ascent maximization of monotone continuous submodular functions under an l1 budget."""
from ._backend import NAME as BACKEND
from .objectives import (
    ConcaveLinearObjective,
    ConcaveLinearSpec,
    QuadraticObjective,
    QuadraticSpec,
    check_dr,
    check_monotone,
    check_submodular,
    estimate_smoothness,
    make_concave_linear,
    make_submodular_quadratic,
)
from .onedim import build_ratio_grid, find_target_value, maximize_ratio
from .problem import (
    FunctionObjective,
    Objective,
    ProblemInstance,
    SolveResult,
    contract,
    feasible,
    rescale_weights,
    shift_domain,
)
from .solvers import CaConfig, coordinate_ascent, enhanced_ca, fully_enhanced_ca, guess_set

__version__ = "0.1.0"
