"""Boundary belief states, their revision, and envelope induction.

``max_asap(B, order)`` is the state of ``B`` that lexicographically
maximizes the probabilities of the worlds in ``order``.  The boundary set
is the image of every ordering.  Enumerating all ``|W|!`` orderings repeats
a lot of work, so :func:`boundary_states` searches optimal faces instead:
maximizing world ``w`` over a face ``F`` leaves a face ``F_w`` on which
``p_w`` is constant, so the orderings' results reachable from ``F`` are the
union of those reachable from each ``F_w``, and a face on which every
world is constant is a single boundary state.  Faces are memoized by their
set of free tableau columns.  ``strategy="permutations"`` runs the literal
definition, one lexicographic solve per ordering.
"""

from __future__ import annotations

import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

from . import lp
from .beliefs import BeliefBase, BeliefState, InconsistentBeliefBase, ProbFormula
from .distance import PseudoDistance, UnsatisfiableObservation
from .entropy import max_entropy
from .props import Formula, Vocabulary, VocabularyTooLarge, World, minterm, model_indices
from .revision import gi_revise, mci_revise

log = logging.getLogger(__name__)

MAX_WORLDS = 8
METHODS = ("boundary-gi", "boundary-mci", "maxent-gi")


class EmptyRevision(ValueError):
    """Every boundary state was dropped because its revision is undefined."""


def canonical_order(states: Iterable[BeliefState]) -> tuple[BeliefState, ...]:
    """Deduplicate and sort (descending by probability vector)."""
    unique = {s.probs: s for s in states}
    return tuple(unique[k] for k in sorted(unique, reverse=True))


@dataclass(frozen=True)
class BoundarySet:
    states: tuple[BeliefState, ...]
    source: BeliefBase

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)


def _feasible(B: BeliefBase) -> lp.Tableau:
    try:
        return lp.feasible_tableau(B.to_lp())
    except lp.Infeasible:
        raise InconsistentBeliefBase("belief base is unsatisfiable") from None


def _order_indices(order: Sequence[World | int], n: int) -> list[int]:
    idx = [w.index if isinstance(w, World) else int(w) for w in order]
    if sorted(idx) != list(range(n)):
        raise ValueError(f"ordering must be a permutation of all {n} worlds")
    return idx


def _lex_point(tableau: lp.Tableau, order: list[int], n: int) -> tuple[Fraction, ...]:
    t = tableau.copy()
    return lp.lex_maximize_tableau(t, (lp.unit_vector(n, w) for w in order)).solution()


def max_asap(B: BeliefBase, order: Sequence[World | int]) -> BeliefState:
    """The state of ``B`` maximizing cumulative mass along ``order`` as soon as possible."""
    n = B.vocab.n_worlds
    idx = _order_indices(order, n)
    return BeliefState(B.vocab, _lex_point(_feasible(B), idx, n))


def _check_size(vocab: Vocabulary, max_worlds: int) -> None:
    if vocab.n_worlds > max_worlds:
        raise VocabularyTooLarge(
            f"{vocab.n_worlds} worlds exceeds the boundary limit of {max_worlds} "
            f"({vocab.n_worlds}! orderings); raise max_worlds to proceed"
        )
    if max_worlds > MAX_WORLDS and vocab.n_worlds > MAX_WORLDS:
        warnings.warn(
            f"enumerating boundary states over {vocab.n_worlds} worlds may be very slow",
            stacklevel=3,
        )


def _face_search(root: lp.Tableau, n: int) -> set[tuple[Fraction, ...]]:
    points: set[tuple[Fraction, ...]] = set()
    seen: set[frozenset[int]] = set()
    stack = [root]
    while stack:
        t = stack.pop()
        key = t.face_key()
        if key in seen:
            continue
        seen.add(key)
        point = True
        for w in range(n):
            child = t.copy()
            _, reduced = child.maximize(child.padded(lp.unit_vector(n, w)))
            if child.restrict_to_optimal_face(reduced):
                point = False
                if child.face_key() not in seen:
                    stack.append(child)
        if point:
            points.add(t.solution())
    log.debug("face search visited %d faces, found %d states", len(seen), len(points))
    return points


def _perm_chunk(args) -> set[tuple[Fraction, ...]]:
    tableau, orders, n = args
    return {_lex_point(tableau, list(o), n) for o in orders}


def _permutation_search(root: lp.Tableau, n: int, workers: int | None) -> set:
    orders = list(permutations(range(n)))
    if not workers or workers <= 1:
        return _perm_chunk((root, orders, n))
    size = -(-len(orders) // (workers * 4))
    chunks = [(root, orders[i : i + size], n) for i in range(0, len(orders), size)]
    out: set = set()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_perm_chunk, chunks):
            out |= part
    return out


def boundary_states(
    B: BeliefBase,
    *,
    max_worlds: int = MAX_WORLDS,
    strategy: str = "faces",
    workers: int | None = None,
) -> BoundarySet:
    """All distinct ``max_asap(B, order)`` over orderings of the worlds.

    ``workers`` parallelizes the ``"permutations"`` strategy across
    processes; output order is canonical either way.
    """
    _check_size(B.vocab, max_worlds)
    n = B.vocab.n_worlds
    root = _feasible(B)
    if strategy == "faces":
        points = _face_search(root, n)
    elif strategy == "permutations":
        points = _permutation_search(root, n, workers)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return BoundarySet(canonical_order(BeliefState(B.vocab, p) for p in points), B)


def revise_boundary(
    S: BoundarySet | Iterable[BeliefState],
    alpha: Formula,
    method: str = "gi",
    d: PseudoDistance | None = None,
) -> tuple[BeliefState, ...]:
    """Revise every state; undefined MCI revisions are dropped."""
    states = tuple(S)
    method = method.lower()
    if method == "gi":
        if d is None:
            raise ValueError("GI needs a pseudo-distance")
        return canonical_order(gi_revise(b, alpha, d) for b in states)
    if method == "mci":
        revised = [r for r in (mci_revise(b, alpha) for b in states) if r]
        if not revised:
            raise EmptyRevision(f"MCI is undefined for every boundary state on {alpha}")
        return canonical_order(revised)
    raise ValueError(f"unknown revision method {method!r}")


def envelopes(states: Iterable[BeliefState]) -> list[tuple[Fraction, Fraction]]:
    """Per-world ``(min, max)`` probability over ``states``."""
    states = list(states)
    if not states:
        raise ValueError("no belief states")
    n = len(states[0].probs)
    return [
        (min(s.probs[w] for s in states), max(s.probs[w] for s in states)) for w in range(n)
    ]


def induce_bb(states: Iterable[BeliefState], vocab: Vocabulary) -> BeliefBase:
    """Belief base of the upper/lower per-world envelopes, trivial bounds omitted."""
    states = list(states)
    if not states:
        raise ValueError("cannot induce a belief base from an empty set of states")
    constraints = []
    for w, (lo, hi) in zip(vocab.worlds(), envelopes(states)):
        phi = minterm(w, vocab)
        if hi != 1:
            constraints.append(ProbFormula(phi, "<=", hi))
        if lo != 0:
            constraints.append(ProbFormula(phi, ">=", lo))
    # consistent by construction: every input state satisfies it
    return BeliefBase.unchecked(vocab, constraints)


@dataclass(frozen=True)
class RevisionTrace:
    result: BeliefBase
    before: tuple[BeliefState, ...]
    after: tuple[BeliefState, ...]
    method: str


def revise_bb_traced(
    B: BeliefBase,
    alpha: Formula,
    method: str = "boundary-gi",
    d: PseudoDistance | None = None,
    *,
    max_worlds: int = MAX_WORLDS,
) -> RevisionTrace:
    method = method.lower()
    if d is None:
        d = PseudoDistance.hamming(B.vocab)
    if not model_indices(alpha, B.vocab):
        raise UnsatisfiableObservation(f"observation {alpha} has no models")
    if method in ("boundary-gi", "boundary-mci"):
        before = boundary_states(B, max_worlds=max_worlds).states
        after = revise_boundary(before, alpha, method.split("-")[1], d)
    elif method == "maxent-gi":
        before = (max_entropy(B).state,)
        after = (gi_revise(before[0], alpha, d),)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return RevisionTrace(induce_bb(after, B.vocab), before, after, method)


def revise_bb(
    B: BeliefBase,
    alpha: Formula,
    method: str = "boundary-gi",
    d: PseudoDistance | None = None,
    *,
    max_worlds: int = MAX_WORLDS,
) -> BeliefBase:
    """Revise a belief base by an observation ``alpha``.

    ``boundary-gi``/``boundary-mci`` revise every boundary state;
    ``maxent-gi`` images only the maximum-entropy state.
    """
    return revise_bb_traced(B, alpha, method, d, max_worlds=max_worlds).result
