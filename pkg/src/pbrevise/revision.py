"""Revision of a single belief state: imaging, conditioning, min cross-entropy."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .beliefs import BeliefState, prob_of
from .distance import PseudoDistance, min_sets
from .props import Formula, model_indices


class ZeroProbabilityEvidence(ValueError):
    pass


def gi_revise(b: BeliefState, alpha: Formula, d: PseudoDistance) -> BeliefState:
    """Generalized imaging: each world's mass is split evenly over its
    closest ``alpha``-worlds."""
    if d.vocab != b.vocab:
        raise ValueError("distance and belief state use different vocabularies")
    out = [Fraction(0)] * b.vocab.n_worlds
    for src, targets in enumerate(min_sets(alpha, d)):
        p = b.probs[src]
        if not p:
            continue
        share = p / len(targets)
        for t in targets:
            out[t] += share
    return BeliefState(b.vocab, tuple(out))


def bc_revise(b: BeliefState, alpha: Formula) -> BeliefState:
    """Bayesian conditioning on ``alpha``; needs ``b(alpha) > 0``."""
    mass = prob_of(b, alpha)
    if mass == 0:
        raise ZeroProbabilityEvidence(f"b({alpha}) = 0, conditioning is undefined")
    idx = model_indices(alpha, b.vocab)
    return BeliefState(
        b.vocab, tuple(p / mass if i in idx else Fraction(0) for i, p in enumerate(b.probs))
    )


@dataclass(frozen=True)
class Undefined:
    """Marker for a revision that has no result (e.g. MCI without support)."""

    reason: str

    def __bool__(self) -> bool:
        return False


def mci_revise(b: BeliefState, alpha: Formula) -> BeliefState | Undefined:
    """Minimum cross-entropy revision with evidence ``(alpha) = 1``.

    The I-projection of ``b`` onto ``{c : c(alpha) = 1}`` is ``b``
    conditioned on ``alpha``.  When ``b(alpha) = 0`` no candidate is
    absolutely continuous w.r.t. ``b`` and the result is :class:`Undefined`.
    """
    if prob_of(b, alpha) == 0:
        return Undefined(f"no belief state with ({alpha})=1 is absolutely continuous w.r.t. b")
    return bc_revise(b, alpha)
