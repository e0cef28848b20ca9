"""Locality-based first-order model checking on sparse relational structures."""
from .covers import Cover, bfs_layer_cover, kernels, peleg_cover, validate_cover
from .engine import (
    BfsLayers, EngineConfig, EvalReport, Peleg, check_sentence, local_satisfier_set,
    scattered_exists,
)
from .backend import BACKEND
from .logic import (
    BasicLocalSentence, GAnd, GNot, GOr, check_r_local, eval_gnf_naive, eval_local, eval_naive,
    parse_formula, relativize, to_text,
)
from .structures import (
    GaifmanGraph, Structure, Vocabulary, gaifman_graph, induced_substructure, load_structure,
    local_tree_width_profile, neighborhood, neighborhood_of_set, save_structure,
)
from .treewidth import TreeDecomposition, exact_width, heuristic_decomposition, validate_decomposition

__version__ = "0.1.0"
