"""Finite-dimensional toolkit for edge-colouring models and graph limits."""

from .config import DEFAULT_TOL, Tolerances
from .errors import BudgetExceeded, ParseError, PreconditionError, ShapeError
from .graphon import (StepGraphon, StepKernel, cut_distance_aligned, cut_seminorm,
                      graph_to_graphon, tau)
from .graphs import (SimpleGraph, all_graphs, complete_graph, cycle_graph, empty_graph,
                     named_graph, path_graph, random_graph)
from .hilbert import (CutProducts, FiniteSet, RankOneBall, SeminormValue, SymTensor,
                      hilbert_norm, inner, seminorm, symmetrize)
from .orbit import GroupSpec, act, orbit_distance, pi_invariance_check
from .regularity import Decomposition, greedy_decompose, q_k_membership, verify_energy_identity
from .vertex_model import (EdgeModel, ball_project, cs_bound_check, lipschitz_bound_check,
                           partition_function, pi_F)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "Tolerances",
    "BudgetExceeded",
    "ParseError",
    "PreconditionError",
    "ShapeError",
    "StepGraphon",
    "StepKernel",
    "cut_distance_aligned",
    "cut_seminorm",
    "graph_to_graphon",
    "tau",
    "SimpleGraph",
    "all_graphs",
    "complete_graph",
    "cycle_graph",
    "empty_graph",
    "named_graph",
    "path_graph",
    "random_graph",
    "CutProducts",
    "FiniteSet",
    "RankOneBall",
    "SeminormValue",
    "SymTensor",
    "hilbert_norm",
    "inner",
    "seminorm",
    "symmetrize",
    "GroupSpec",
    "act",
    "orbit_distance",
    "pi_invariance_check",
    "Decomposition",
    "greedy_decompose",
    "q_k_membership",
    "verify_energy_identity",
    "EdgeModel",
    "ball_project",
    "cs_bound_check",
    "lipschitz_bound_check",
    "partition_function",
    "pi_F",
]
