"""Revision of incompletely specified probabilistic belief bases."""

from .beliefs import (
    BeliefBase,
    BeliefState,
    ProbFormula,
    bstate_satisfies,
    dump_belief_base,
    entails,
    equivalent,
    parse_belief_base,
    prob_of,
)
from .boundary import boundary_states, induce_bb, max_asap, revise_bb, revise_boundary
from .distance import PseudoDistance, hamming, min_set, min_set_sizes
from .entropy import cross_entropy, max_entropy, shannon_entropy
from .props import Vocabulary, World, models, parse_formula, satisfies
from .revision import bc_revise, gi_revise, mci_revise

__version__ = "0.1.0"

__all__ = [
    "BeliefBase",
    "BeliefState",
    "ProbFormula",
    "PseudoDistance",
    "Vocabulary",
    "World",
    "bc_revise",
    "boundary_states",
    "bstate_satisfies",
    "cross_entropy",
    "dump_belief_base",
    "entails",
    "equivalent",
    "gi_revise",
    "hamming",
    "induce_bb",
    "max_asap",
    "max_entropy",
    "mci_revise",
    "min_set",
    "min_set_sizes",
    "models",
    "parse_belief_base",
    "parse_formula",
    "prob_of",
    "revise_bb",
    "revise_boundary",
    "satisfies",
    "shannon_entropy",
]
