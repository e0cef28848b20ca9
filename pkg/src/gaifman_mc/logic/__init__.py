"""First-order logic: syntax, parsing, locality and evaluation."""
from .evaluate import EvaluationError, LocalContext, compile_local, eval_compiled, eval_local, eval_naive
from .gnf import (
    BasicLocalSentence, GAnd, GaifmanSentence, GNFError, GNot, GOr, dump_gnf, eval_gnf_naive,
    eval_leaf_naive, fold, leaves, load_gnf, parse_gnf,
)
from .parser import ParseError, parse_formula
from .syntax import (
    And, DistGT, DistLE, Eq, Exists, Forall, Formula, Implies, Not, Or, Rel, conj, disj,
    free_vars, quantifier_depth, to_text,
)
from .transform import (
    LocalityError, check_r_local, expand_distance_atom, relativize, substitute_distance_atoms,
    unrelativize,
)
