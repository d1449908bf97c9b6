"""Constrained bisubmodular minimization with poly-bimatroid cutting planes."""

from .bisets import (
    Biset,
    FunctionOracle,
    GroundSet,
    ModularOracle,
    TableOracle,
    biset_to_ternary,
    evaluate,
    ternary_to_biset,
)
from .dcg import DcgConfig, SolveStats, dcg_solve, gap
from .entropy import EntropyOracle, discretize, ingest, load_oracle
from .errors import InfeasibleError, ReadingsError
from .master import MasterInstance, MilpSolution, build_master, solve_milp
from .polyhedron import Cut, OrderSignPair, PolyVertex, generalized_greedy, separate, signed_greedy
from .simplex import LpModel, lp_solve

__version__ = "0.1.0"

__all__ = [
    "Biset",
    "Cut",
    "DcgConfig",
    "EntropyOracle",
    "FunctionOracle",
    "GroundSet",
    "InfeasibleError",
    "LpModel",
    "MasterInstance",
    "MilpSolution",
    "ModularOracle",
    "OrderSignPair",
    "PolyVertex",
    "ReadingsError",
    "SolveStats",
    "TableOracle",
    "biset_to_ternary",
    "build_master",
    "dcg_solve",
    "discretize",
    "evaluate",
    "gap",
    "generalized_greedy",
    "ingest",
    "load_oracle",
    "lp_solve",
    "separate",
    "signed_greedy",
    "solve_milp",
    "ternary_to_biset",
]
