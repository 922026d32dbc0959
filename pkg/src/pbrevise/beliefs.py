"""Belief states, probabilistic formulas and belief bases.

A belief base denotes the polytope of belief states satisfying all of its
constraints; consistency, entailment and equivalence are decided exactly
with the rational simplex in :mod:`pbrevise.lp`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import lp
from .props import MAX_ATOMS, Formula, Vocabulary, World, model_indices, parse_formula, render


class InconsistentBeliefBase(ValueError):
    pass


class BeliefBaseFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class BeliefState:
    """Exact probability distribution over the worlds of ``vocab``."""

    vocab: Vocabulary
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(lp.as_fraction(p) for p in self.probs)
        if len(probs) != self.vocab.n_worlds:
            raise ValueError(f"expected {self.vocab.n_worlds} probabilities, got {len(probs)}")
        if any(p < 0 or p > 1 for p in probs):
            raise ValueError("probabilities must lie in [0, 1]")
        if sum(probs) != 1:
            raise ValueError(f"probabilities sum to {sum(probs)}, not 1")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def point(cls, vocab: Vocabulary, world: World | int) -> "BeliefState":
        i = world.index if isinstance(world, World) else world
        return cls(vocab, tuple(Fraction(int(k == i)) for k in range(vocab.n_worlds)))

    @classmethod
    def uniform(cls, vocab: Vocabulary) -> "BeliefState":
        n = vocab.n_worlds
        return cls(vocab, (Fraction(1, n),) * n)

    def __getitem__(self, w: World | int) -> Fraction:
        return self.probs[w.index if isinstance(w, World) else w]

    def support(self) -> frozenset[int]:
        return frozenset(i for i, p in enumerate(self.probs) if p)

    def __str__(self) -> str:
        return "<" + ", ".join(format_fraction(p) for p in self.probs) + ">"


def prob_of(b: BeliefState, f: Formula) -> Fraction:
    return sum((b.probs[i] for i in model_indices(f, b.vocab)), Fraction(0))


@dataclass(frozen=True)
class ProbFormula:
    """The constraint ``P(body) relation bound``."""

    body: Formula
    relation: str
    bound: Fraction

    def __post_init__(self):
        if self.relation not in lp.RELATIONS:
            raise ValueError(f"relation must be one of {lp.RELATIONS}")
        bound = lp.as_fraction(self.bound)
        if not 0 <= bound <= 1:
            raise ValueError(f"bound {bound} outside [0, 1]")
        object.__setattr__(self, "bound", bound)

    def holds(self, b: BeliefState) -> bool:
        p = prob_of(b, self.body)
        if self.relation == "<=":
            return p <= self.bound
        if self.relation == ">=":
            return p >= self.bound
        return p == self.bound

    def to_constraint(self, vocab: Vocabulary) -> lp.Constraint:
        idx = model_indices(self.body, vocab)
        coeffs = tuple(Fraction(int(i in idx)) for i in range(vocab.n_worlds))
        return lp.Constraint(coeffs, self.relation, self.bound)

    def __str__(self) -> str:
        return f"P({render(self.body)}) {self.relation} {format_fraction(self.bound)}"


class BeliefBase:
    """A finite set of :class:`ProbFormula` over a vocabulary.

    The default constructor rejects inconsistent sets; pass
    ``check=False`` for intermediate sets such as ``B | {(a)=1}`` whose
    consistency is itself the question.
    """

    def __init__(
        self, vocab: Vocabulary, constraints: Iterable[ProbFormula] = (), *, check: bool = True
    ):
        self.vocab = vocab
        seen: dict[ProbFormula, None] = {}
        for c in constraints:
            unknown = c.body.atoms() - set(vocab.atoms)
            if unknown:
                raise ValueError(f"constraint {c} uses atoms {sorted(unknown)} outside vocabulary")
            seen.setdefault(c, None)
        self.constraints: tuple[ProbFormula, ...] = tuple(seen)
        if check and not self.is_consistent():
            raise InconsistentBeliefBase("belief base is unsatisfiable")

    @classmethod
    def unchecked(cls, vocab: Vocabulary, constraints: Iterable[ProbFormula] = ()) -> "BeliefBase":
        return cls(vocab, constraints, check=False)

    def to_lp(self) -> lp.LinearProgram:
        return lp.LinearProgram(
            self.vocab.n_worlds, tuple(c.to_constraint(self.vocab) for c in self.constraints)
        )

    def is_consistent(self) -> bool:
        return lp.is_feasible(self.to_lp())

    def union(self, extra: Iterable[ProbFormula]) -> "BeliefBase":
        return BeliefBase.unchecked(self.vocab, self.constraints + tuple(extra))

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BeliefBase):
            return NotImplemented
        return self.vocab == other.vocab and set(self.constraints) == set(other.constraints)

    def __hash__(self) -> int:
        return hash((self.vocab, frozenset(self.constraints)))

    def __repr__(self) -> str:
        return f"BeliefBase({list(self.vocab.atoms)}, [{', '.join(map(str, self.constraints))}])"


def bstate_satisfies(b: BeliefState, B: BeliefBase) -> bool:
    return all(c.holds(b) for c in B.constraints)


def prob_range(B: BeliefBase, f: Formula) -> tuple[Fraction, Fraction]:
    """Exact ``(min, max)`` of ``b(f)`` over the belief states of ``B``."""
    program = B.to_lp()
    idx = model_indices(f, B.vocab)
    c = [Fraction(int(i in idx)) for i in range(B.vocab.n_worlds)]
    lo, _ = lp.optimize(program, "min", c)
    hi, _ = lp.optimize(program, "max", c)
    return lo, hi


def entails(B: BeliefBase, phi: ProbFormula) -> bool:
    """Whether every belief state satisfying ``B`` satisfies ``phi``.

    An inconsistent ``B`` entails everything.
    """
    if not B.is_consistent():
        return True
    lo, hi = prob_range(B, phi.body)
    if phi.relation == "<=":
        return hi <= phi.bound
    if phi.relation == ">=":
        return lo >= phi.bound
    return lo == hi == phi.bound


def entails_all(B: BeliefBase, other: Iterable[ProbFormula]) -> bool:
    return all(entails(B, phi) for phi in other)


def equivalent(B: BeliefBase, B2: BeliefBase) -> bool:
    if B.vocab != B2.vocab:
        raise ValueError("belief bases are over different vocabularies")
    return entails_all(B, B2.constraints) and entails_all(B2, B.constraints)


# --- file formats --------------------------------------------------------------

_LINE_RE = re.compile(r"^P\((?P<body>.*)\)\s*(?P<rel><=|>=|=)\s*(?P<bound>\S+)$")


def parse_bound(text: str) -> Fraction:
    if not re.fullmatch(r"\d+(\.\d*)?|\.\d+|\d+/\d+", text):
        raise ValueError(f"bad probability literal {text!r}")
    return Fraction(text)


def parse_prob_formula(text: str, vocab: Vocabulary) -> ProbFormula:
    """Parse a single ``P(<formula>) <rel> <bound>`` item."""
    m = _LINE_RE.match(text.strip())
    if m is None:
        raise ValueError(f"cannot parse {text!r}; expected e.g. 'P(q) >= 0.5'")
    return ProbFormula(parse_formula(m["body"], vocab), m["rel"], parse_bound(m["bound"]))


def _content_lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _parse_atoms_line(line: str, n: int, max_atoms: int) -> Vocabulary:
    if not line.startswith("atoms:"):
        raise BeliefBaseFormatError("first line must be 'atoms: <names>'", n)
    try:
        return Vocabulary(line[len("atoms:"):].split(), max_atoms=max_atoms)
    except ValueError as e:
        raise BeliefBaseFormatError(str(e), n) from None


def parse_belief_base(
    text: str, *, check: bool = True, max_atoms: int | None = None
) -> BeliefBase:
    """Read the line format::

        atoms: q r
        P(q) >= 0.6
        P(!q & !r) = 1/10
    """
    lines = list(_content_lines(text))
    if not lines:
        raise BeliefBaseFormatError("empty belief-base file")
    n, first = lines[0]
    vocab = _parse_atoms_line(first, n, max_atoms or MAX_ATOMS)
    constraints = []
    for n, line in lines[1:]:
        try:
            constraints.append(parse_prob_formula(line, vocab))
        except ValueError as e:
            raise BeliefBaseFormatError(str(e), n) from None
    return BeliefBase(vocab, constraints, check=check)


def dump_belief_base(B: BeliefBase) -> str:
    lines = ["atoms: " + " ".join(B.vocab.atoms)]
    lines += [str(c) for c in B.constraints]
    return "\n".join(lines) + "\n"


def parse_belief_state(text: str, vocab: Vocabulary) -> BeliefState:
    """One line of comma-separated probabilities in canonical world order.

    An optional leading ``atoms:`` line must match ``vocab``.
    """
    lines = list(_content_lines(text))
    if lines and lines[0][1].startswith("atoms:"):
        n, first = lines.pop(0)
        if _parse_atoms_line(first, n, vocab.max_atoms) != vocab:
            raise BeliefBaseFormatError("belief-state vocabulary differs", n)
    if len(lines) != 1:
        raise BeliefBaseFormatError("expected exactly one line of probabilities")
    n, line = lines[0]
    try:
        probs = [parse_bound(p.strip()) for p in line.split(",")]
        return BeliefState(vocab, tuple(probs))
    except ValueError as e:
        raise BeliefBaseFormatError(str(e), n) from None


def dump_belief_state(b: BeliefState) -> str:
    return ", ".join(format_fraction(p) for p in b.probs) + "\n"

