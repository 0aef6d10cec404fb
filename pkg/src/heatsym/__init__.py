"""Exact symmetry computations for the linear heat equation u_t = u_xx and
the Burgers equation, with a binary64 mode where exact arithmetic is not
available."""

from .exact import Poly2, RatFunc, ScalarExt, ScalarSum
from .heatexpr import HeatExpr, SolutionSum, parse_expr, parse_solution, print_expr

__version__ = "0.1.0"

__all__ = ["Poly2", "RatFunc", "ScalarExt", "ScalarSum", "HeatExpr", "SolutionSum",
           "parse_expr", "parse_solution", "print_expr"]
