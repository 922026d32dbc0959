"""Brute-force checks: lattice grids of belief states, envelope checks of
boundary-state revision against all states of a base, and a harness for
the six revision postulates.

The grid code recomputes imaging from the distance table with integer
arithmetic instead of calling :func:`pbrevise.revision.gi_revise`, so it
is an independent route to the same numbers.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Iterator

from . import lp
from .beliefs import (
    BeliefBase,
    BeliefState,
    ProbFormula,
    entails,
    entails_all,
    equivalent,
    format_fraction,
)
from .boundary import EmptyRevision, boundary_states, induce_bb, revise_bb, revise_boundary
from .distance import PseudoDistance
from .props import (
    FALSE,
    TRUE,
    And,
    Atom,
    Formula,
    Not,
    Or,
    Vocabulary,
    VocabularyTooLarge,
    minterm,
    model_indices,
)

GRID_MAX_ATOMS = 3


# --- grids -------------------------------------------------------------------


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` non-negative ints summing to ``total``."""
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def _integer_rows(B: BeliefBase, N: int):
    rows = []
    for c in B.to_lp().constraints:
        members = [i for i, a in enumerate(c.coeffs) if a]
        rows.append((members, c.relation, c.bound * N))
    return rows


def _counts_satisfy(k: tuple[int, ...], rows) -> bool:
    for members, rel, bound in rows:
        s = sum(k[i] for i in members)
        if rel == "<=" and s > bound or rel == ">=" and s < bound or rel == "=" and s != bound:
            return False
    return True


@dataclass(frozen=True)
class Grid:
    """Belief states of ``B`` whose probabilities are multiples of ``1/N``.

    ``counts`` holds the integer numerators.
    """

    N: int
    vocab: Vocabulary
    counts: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def states(self) -> list[BeliefState]:
        return [BeliefState(self.vocab, tuple(Fraction(x, self.N) for x in k)) for k in self.counts]


def grid_states(B: BeliefBase, N: int) -> Grid:
    if N < 1:
        raise ValueError("grid resolution must be >= 1")
    if len(B.vocab) > GRID_MAX_ATOMS:
        raise VocabularyTooLarge(f"grid enumeration is limited to {GRID_MAX_ATOMS} atoms")
    rows = _integer_rows(B, N)
    kept = tuple(k for k in compositions(N, B.vocab.n_worlds) if _counts_satisfy(k, rows))
    return Grid(N, B.vocab, kept)


def composition_count(N: int, parts: int) -> int:
    return comb(N + parts - 1, parts - 1)


# --- imaging, recomputed independently ------------------------------------------


def _closest(alpha_models: frozenset[int], d: PseudoDistance, w: int) -> list[int]:
    return [
        t
        for t in sorted(alpha_models)
        if all(d(t, w) <= d(u, w) for u in alpha_models)
    ]


def imaging_weights(alpha: Formula, d: PseudoDistance) -> list[list[Fraction]]:
    """``weights[target][source]`` = share of source mass imaged onto target."""
    models = model_indices(alpha, d.vocab)
    n = d.vocab.n_worlds
    closest = [_closest(models, d, w) for w in range(n)]
    return [
        [Fraction(1, len(closest[s])) if t in closest[s] else Fraction(0) for s in range(n)]
        for t in range(n)
    ]


# --- envelope check -----------------------------------------------------------


@dataclass
class EnvelopeReport:
    N: int
    grid_size: int
    induced: list[str]
    subset_ok: bool
    subset_violations: int
    grid_gap: Fraction | None
    superset_grid_ok: bool
    attainment_ok: bool
    lp_envelopes_ok: bool
    upper: list[Fraction] = field(default_factory=list)
    lower: list[Fraction] = field(default_factory=list)
    preimage_misses: int | None = None

    @property
    def passed(self) -> bool:
        return self.subset_ok and self.superset_grid_ok and self.attainment_ok and self.lp_envelopes_ok

    def to_dict(self) -> dict:
        out = asdict(self)
        for k, v in out.items():
            if isinstance(v, Fraction):
                out[k] = format_fraction(v)
            elif isinstance(v, list) and v and isinstance(v[0], Fraction):
                out[k] = [format_fraction(x) for x in v]
        out["passed"] = self.passed
        return out

    def to_text(self) -> str:
        gap = "n/a (empty grid)" if self.grid_gap is None else format_fraction(self.grid_gap)
        lines = [
            f"grid N={self.N}: {self.grid_size} states of the prior base",
            f"(subset)   revised grid states satisfy induced base: "
            f"{'PASS' if self.subset_ok else 'FAIL'} ({self.subset_violations} violations)",
            f"(superset) grid envelope gap {gap} <= 1/{self.N}: "
            f"{'PASS' if self.superset_grid_ok else 'FAIL'}",
            f"(superset) induced bounds attained by revised boundary states: "
            f"{'PASS' if self.attainment_ok else 'FAIL'}",
            f"(superset) induced bounds equal exact LP envelopes of all revised states: "
            f"{'PASS' if self.lp_envelopes_ok else 'FAIL'}",
        ]
        if self.preimage_misses is not None:
            lines.append(f"induced-base grid points without an imaging preimage: {self.preimage_misses}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def _world_bounds(induced: BeliefBase) -> tuple[list[Fraction], list[Fraction]]:
    n = induced.vocab.n_worlds
    hi = [Fraction(1)] * n
    lo = [Fraction(0)] * n
    by_body = {minterm(w, induced.vocab): w.index for w in induced.vocab.worlds()}
    for c in induced.constraints:
        w = by_body[c.body]
        if c.relation in ("<=", "="):
            hi[w] = min(hi[w], c.bound)
        if c.relation in (">=", "="):
            lo[w] = max(lo[w], c.bound)
    return lo, hi


def _preimage_misses(B: BeliefBase, weights, lo, hi, N: int) -> int:
    """Grid points of the induced box that no state of ``B`` images onto."""
    n = B.vocab.n_worlds
    base = B.to_lp()
    misses = 0
    for k in compositions(N, n):
        target = [Fraction(x, N) for x in k]
        if any(not lo[w] <= target[w] <= hi[w] for w in range(n)):
            continue
        rows = [lp.Constraint(tuple(weights[t]), "=", target[t]) for t in range(n)]
        if not lp.is_feasible(base.with_constraints(rows)):
            misses += 1
    return misses


def check_envelopes(
    B: BeliefBase,
    alpha: Formula,
    d: PseudoDistance | None = None,
    N: int = 20,
    *,
    preimages: bool = False,
) -> EnvelopeReport:
    """Compare the boundary-GI revised base against imaging every state of ``B``.

    (subset) every imaged grid state of ``B`` satisfies the induced base.
    (superset) per-world envelopes of the imaged grid come within ``1/N`` of
    the induced bounds; the revised boundary states attain each bound; and
    each bound equals the exact LP optimum of the (linear) imaged
    probability over all of ``B``.  ``preimages`` additionally counts
    induced-base grid points with no preimage, which the envelope checks
    alone cannot rule out.
    """
    if d is None:
        d = PseudoDistance.hamming(B.vocab)
    n = B.vocab.n_worlds
    bnd = boundary_states(B)
    revised = revise_boundary(bnd, alpha, "gi", d)
    induced = induce_bb(revised, B.vocab)
    lo, hi = _world_bounds(induced)

    weights = imaging_weights(alpha, d)
    grid = grid_states(B, N)
    L = lcm(*(w.denominator for row in weights for w in row))
    int_weights = [[int(w * L) for w in row] for row in weights]
    scale = N * L
    hi_num = [h * scale for h in hi]
    lo_num = [x * scale for x in lo]

    violations = 0
    gmax = [None] * n
    gmin = [None] * n
    for k in grid.counts:
        for t in range(n):
            v = sum(a * c for a, c in zip(int_weights[t], k))
            if v > hi_num[t] or v < lo_num[t]:
                violations += 1
                break
        for t in range(n):
            v = sum(a * c for a, c in zip(int_weights[t], k))
            if gmax[t] is None or v > gmax[t]:
                gmax[t] = v
            if gmin[t] is None or v < gmin[t]:
                gmin[t] = v

    if grid.counts:
        gap = max(
            max(hi[t] - Fraction(gmax[t], scale), Fraction(gmin[t], scale) - lo[t])
            for t in range(n)
        )
        superset_grid_ok = gap <= Fraction(1, N)
    else:
        gap, superset_grid_ok = None, False

    attained = all(
        any(s.probs[t] == hi[t] for s in revised) and any(s.probs[t] == lo[t] for s in revised)
        for t in range(n)
    )

    program = B.to_lp()
    lp_ok = True
    for t in range(n):
        top, _ = lp.optimize(program, "max", weights[t])
        bottom, _ = lp.optimize(program, "min", weights[t])
        if top != hi[t] or bottom != lo[t]:
            lp_ok = False

    misses = _preimage_misses(B, weights, lo, hi, N) if preimages else None
    return EnvelopeReport(
        N=N,
        grid_size=len(grid),
        induced=[str(c) for c in induced.constraints],
        subset_ok=violations == 0,
        subset_violations=violations,
        grid_gap=gap,
        superset_grid_ok=superset_grid_ok,
        attainment_ok=attained,
        lp_envelopes_ok=lp_ok,
        upper=hi,
        lower=lo,
        preimage_misses=misses,
    )


# --- postulates -----------------------------------------------------------------

POSTULATES = (
    "1 success: B*a |= (a)=1",
    "2 vacuity: B+(a)=1 consistent => B*a == B+(a)=1",
    "3 consistency: (a)=1 satisfiable => B*a consistent",
    "4 syntax irrelevance: a == b => B*a == B*b",
    "5 superexpansion: B*a + (b)=1 |= B*(a&b)",
    "6 subexpansion: B*a + (b)=1 consistent => B*(a&b) |= B*a + (b)=1",
)


@dataclass
class PostulateReport:
    method: str
    results: dict[int, bool | None]
    vacuous: dict[int, bool]
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "results": {str(k): v for k, v in self.results.items()},
            "vacuous": {str(k): v for k, v in self.vacuous.items()},
            "notes": self.notes,
        }


def check_postulates(
    B: BeliefBase,
    alpha: Formula,
    beta: Formula,
    method: str = "boundary-gi",
    d: PseudoDistance | None = None,
) -> PostulateReport:
    """Evaluate the six postulates for one revision method on one instance.

    A postulate whose antecedent fails is reported True with ``vacuous``
    set.  ``None`` means the revision itself was undefined.
    """
    vocab = B.vocab
    if d is None:
        d = PseudoDistance.hamming(vocab)
    results: dict[int, bool | None] = {}
    vacuous = {i: False for i in range(1, 7)}
    notes: list[str] = []

    def revise(f: Formula) -> BeliefBase | None:
        if not model_indices(f, vocab):
            return None
        try:
            return revise_bb(B, f, method, d)
        except EmptyRevision as e:
            notes.append(str(e))
            return None

    certain = lambda f: ProbFormula(f, "=", 1)  # noqa: E731
    Ba = revise(alpha)
    Bb = revise(beta)
    Bab = revise(And(alpha, beta))

    # 1
    results[1] = None if Ba is None else entails(Ba, certain(alpha))
    # 2
    expanded = B.union([certain(alpha)])
    if expanded.is_consistent():
        results[2] = None if Ba is None else equivalent(Ba, expanded)
    else:
        results[2], vacuous[2] = True, True
    # 3: alpha is satisfiable by precondition of the harness
    results[3] = None if Ba is None else Ba.is_consistent()
    # 4
    if model_indices(alpha, vocab) == model_indices(beta, vocab):
        results[4] = None if Ba is None or Bb is None else equivalent(Ba, Bb)
    else:
        results[4], vacuous[4] = True, True
    # 5 and 6
    if Ba is None:
        results[5] = results[6] = None
    else:
        lhs = Ba.union([certain(beta)])
        if not lhs.is_consistent():
            results[5], vacuous[5] = True, True
            results[6], vacuous[6] = True, True
        elif Bab is None:
            results[5] = results[6] = None
        else:
            results[5] = entails_all(lhs, Bab.constraints)
            results[6] = entails_all(Bab, lhs.constraints)
    return PostulateReport(method, results, vacuous, notes)


def postulate_table(reports: list[PostulateReport]) -> dict[int, dict[str, int]]:
    """Per-postulate counts of pass / fail / vacuous / undefined."""
    table = {i: {"pass": 0, "fail": 0, "vacuous": 0, "undefined": 0} for i in range(1, 7)}
    for r in reports:
        for i, v in r.results.items():
            if v is None:
                table[i]["undefined"] += 1
            elif v:
                table[i]["pass"] += 1
                if r.vacuous[i]:
                    table[i]["vacuous"] += 1
            else:
                table[i]["fail"] += 1
    return table


# --- random instances --------------------------------------------------------------


def random_formula(rng: random.Random, vocab: Vocabulary, depth: int = 3) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.04:
            return TRUE
        if r < 0.08:
            return FALSE
        return Atom(rng.choice(vocab.atoms))
    kind = rng.choice(("not", "and", "or"))
    if kind == "not":
        return Not(random_formula(rng, vocab, depth - 1))
    cls = And if kind == "and" else Or
    return cls(random_formula(rng, vocab, depth - 1), random_formula(rng, vocab, depth - 1))


def random_satisfiable(rng: random.Random, vocab: Vocabulary, depth: int = 3) -> Formula:
    while True:
        f = random_formula(rng, vocab, depth)
        if model_indices(f, vocab):
            return f


def random_belief_base(
    rng: random.Random,
    vocab: Vocabulary,
    n_constraints: tuple[int, int] = (1, 3),
    lattice: int = 10,
) -> BeliefBase:
    """A consistent base with bounds on the ``1/lattice`` grid (rejection sampled)."""
    while True:
        k = rng.randint(*n_constraints)
        cs = [
            ProbFormula(
                random_satisfiable(rng, vocab),
                rng.choice(lp.RELATIONS),
                Fraction(rng.randint(0, lattice), lattice),
            )
            for _ in range(k)
        ]
        B = BeliefBase.unchecked(vocab, cs)
        if B.is_consistent():
            return B


def random_belief_state(rng: random.Random, vocab: Vocabulary, denominator: int = 20) -> BeliefState:
    n = vocab.n_worlds
    cuts = sorted(rng.randint(0, denominator) for _ in range(n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
    return BeliefState(vocab, tuple(Fraction(p, denominator) for p in parts))


def report_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
