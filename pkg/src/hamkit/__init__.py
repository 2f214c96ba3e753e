"""Exact-arithmetic HAM, IFOHAM and Picard series solvers for polynomial IVPs."""

from .diagnostics import (
    ContractionParams,
    ResidualReport,
    c0_sweep,
    compare_reference,
    contraction_constant,
    existence_radius,
    residual_table,
    squared_residual,
)
from .exactmath import Polynomial, Rational, format_rational, parse_rational
from .ham import Method, SolutionSeries, ham_rhs_term, ham_solve
from .ifoham import ifoham_solve, ifoham_step, picard_solve, solve, weighted_step
from .problem import IVP, BivariatePolynomial, ProblemError, apply_N, parse_problem, tan_problem

__version__ = "0.1.0"
