"""Variable population memetic search for the critical node problem."""

from .bench import ComparisonReport, InstanceMeta, load_registry, run_batch, sign_test
from .construction import CrossoverConfig, build_solution, double_backbone_crossover
from .dlas import DlasOutcome, FitnessArray, dlas
from .graph import ComponentDecomposition, Graph, decompose, pairwise_connectivity, parse_edge_list, read_graph
from .population import Population, population_building, population_sizing, population_updating, vpms_solve
from .records import RunConfig, RunRecord, SizingParams, export_results
from .solution import Solution, candidate_set, evaluate_swap_delta, search_space_size, swap

__all__ = [
    "ComparisonReport", "ComponentDecomposition", "CrossoverConfig", "DlasOutcome",
    "FitnessArray", "Graph", "InstanceMeta", "Population", "RunConfig", "RunRecord",
    "SizingParams", "Solution", "build_solution", "candidate_set", "decompose", "dlas",
    "double_backbone_crossover", "evaluate_swap_delta", "export_results", "load_registry",
    "pairwise_connectivity", "parse_edge_list", "population_building", "population_sizing",
    "population_updating", "read_graph", "run_batch", "search_space_size", "sign_test",
    "swap", "vpms_solve",
]
