"""MPS emission, external solver adapters and solution parsing."""

from ccgtuc.milp_io.adapter import HIGHS, SolverAdapter, cbc_adapter, default_adapter, solve
from ccgtuc.milp_io.mps import MpsError, write_mps
from ccgtuc.milp_io.solution import ParsedSolution, Solution, SolutionParseError, SolveStatus, parse_solution

__all__ = [
    "HIGHS",
    "MpsError",
    "ParsedSolution",
    "Solution",
    "SolutionParseError",
    "SolveStatus",
    "SolverAdapter",
    "cbc_adapter",
    "default_adapter",
    "parse_solution",
    "solve",
    "write_mps",
]
