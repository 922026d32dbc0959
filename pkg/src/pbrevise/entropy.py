"""Shannon entropy, maximum-entropy selection and directed divergence.

The maximum-entropy state is found through the convex dual.  For the
constraints ``A p <= c`` (``>=`` rows are negated, ``=`` rows get a free
multiplier) the optimum has the Gibbs form ``p ∝ exp(-A^T lam)`` and
``lam`` minimizes ``logsumexp(-A^T lam) + lam . c`` subject to ``lam >= 0``
on inequality rows.  Worlds that every state of the base must leave at zero
are removed first (found exactly by LP); on the remaining worlds the base
has a strictly positive member, so the dual optimum is attained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp, softmax

from . import lp
from .beliefs import BeliefBase, BeliefState, InconsistentBeliefBase, bstate_satisfies
from .revision import Undefined

SNAP_DENOMINATOR = 1000
SNAP_TOLERANCE = 1e-7
FEASIBILITY_TOLERANCE = 1e-9
MAX_ITERATIONS = 100_000


class MaxEntNotConverged(RuntimeError):
    pass


def _probs(b) -> list[float]:
    return [float(p) for p in (b.probs if isinstance(b, BeliefState) else b)]


def shannon_entropy(b: BeliefState | Sequence) -> float:
    """Entropy in nats with ``0 ln 0 = 0``."""
    return -sum(p * math.log(p) for p in _probs(b) if p > 0)


def cross_entropy(c: BeliefState | Sequence, b: BeliefState | Sequence) -> float | Undefined:
    """Directed divergence ``sum c ln(c/b)``; :class:`Undefined` off ``b``'s support."""
    total = 0.0
    for ci, bi in zip(_probs(c), _probs(b)):
        if ci == 0:
            continue
        if bi == 0:
            return Undefined("c puts mass where b has none")
        total += ci * math.log(ci / bi)
    return total


@dataclass(frozen=True)
class MaxEntResult:
    """Outcome of :func:`max_entropy`.

    ``state`` always sums to exactly 1.  ``exact`` is True when it came from
    snapping ``raw`` to small-denominator rationals and satisfies the base
    exactly; otherwise it is a fine rationalization of ``raw`` and may
    violate constraints by float round-off.  ``entropy`` is that of ``state``.
    """

    state: BeliefState
    raw: tuple[float, ...]
    exact: bool
    entropy: float
    iterations: int


def _forced_zero(B: BeliefBase) -> set[int]:
    program = B.to_lp()
    out = set()
    n = B.vocab.n_worlds
    for w in range(n):
        hi, _ = lp.optimize(program, "max", lp.unit_vector(n, w))
        if hi == 0:
            out.add(w)
    return out


def _dual_system(B: BeliefBase, support: list[int]):
    rows, rhs, free = [], [], []
    for c in B.to_lp().constraints:
        a = np.array([float(c.coeffs[w]) for w in support])
        bound = float(c.bound)
        if c.relation == ">=":
            a, bound = -a, -bound
        rows.append(a)
        rhs.append(bound)
        free.append(c.relation == "=")
    if not rows:
        return np.zeros((0, len(support))), np.zeros(0), []
    return np.array(rows), np.array(rhs), free


def _solve_dual(A: np.ndarray, c: np.ndarray, free: list[bool]):
    def f(lam):
        z = -A.T @ lam
        p = softmax(z)
        return logsumexp(z) + lam @ c, c - A @ p

    bounds = [(None, None) if fr else (0.0, None) for fr in free]
    res = minimize(
        f,
        np.zeros(len(c)),
        jac=True,
        method="L-BFGS-B",
        bounds=bounds,
        options={"maxiter": MAX_ITERATIONS, "gtol": 1e-13, "ftol": 1e-16, "maxcor": 30},
    )
    return res.x, res.nit


def _snap(vocab, raw: Sequence[float], B: BeliefBase) -> BeliefState | None:
    snapped = [Fraction(x).limit_denominator(SNAP_DENOMINATOR) for x in raw]
    if max(abs(float(s) - x) for s, x in zip(snapped, raw)) > SNAP_TOLERANCE:
        return None
    if sum(snapped) != 1 or any(s < 0 for s in snapped):
        return None
    b = BeliefState(vocab, tuple(snapped))
    return b if bstate_satisfies(b, B) else None


def _rationalize(vocab, raw: Sequence[float]) -> BeliefState:
    q = [max(Fraction(x).limit_denominator(10**12), Fraction(0)) for x in raw]
    top = max(range(len(q)), key=lambda i: q[i])
    q[top] += 1 - sum(q)
    return BeliefState(vocab, tuple(q))


def max_entropy(B: BeliefBase) -> MaxEntResult:
    """The most entropic belief state satisfying ``B``."""
    if not B.is_consistent():
        raise InconsistentBeliefBase("belief base is unsatisfiable")
    n = B.vocab.n_worlds
    zero = _forced_zero(B)
    support = [w for w in range(n) if w not in zero]
    A, c, free = _dual_system(B, support)

    iterations = 0
    if len(c):
        lam, iterations = _solve_dual(A, c, free)
        p_support = softmax(-A.T @ lam)
        slack = A @ p_support - c
        viol = np.where(free, np.abs(slack), np.maximum(slack, 0.0))
        if viol.max() > 1e-7:
            raise MaxEntNotConverged(f"constraint violation {viol.max():.3g} after solve")
    else:
        p_support = np.full(len(support), 1.0 / len(support))

    raw = [0.0] * n
    for w, p in zip(support, p_support):
        raw[w] = float(p)
    state = _snap(B.vocab, raw, B)
    exact = state is not None
    if state is None:
        state = _rationalize(B.vocab, raw)
    return MaxEntResult(state, tuple(raw), exact, shannon_entropy(state), iterations)
