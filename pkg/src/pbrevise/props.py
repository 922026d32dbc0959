"""Propositional vocabulary, formulas and world enumeration.

Worlds are numbered by descending truth vector: with atoms ``q, r`` the
order is ``11, 10, 01, 00``.  The first atom is the most significant bit
of the truth vector, so index 0 is the all-true world and index
``2**n - 1`` the all-false one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

MAX_ATOMS = 10


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownAtomError(ValueError):
    pass


class VocabularyTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    atoms: tuple[str, ...]
    max_atoms: int = MAX_ATOMS

    def __init__(self, atoms, max_atoms: int = MAX_ATOMS):
        atoms = tuple(atoms)
        if not atoms:
            raise ValueError("vocabulary must contain at least one atom")
        if len(set(atoms)) != len(atoms):
            raise ValueError(f"duplicate atom names in {atoms}")
        for a in atoms:
            if not _ATOM_RE.fullmatch(a) or a in _KEYWORDS:
                raise ValueError(f"invalid atom name {a!r}")
        if len(atoms) > max_atoms:
            raise VocabularyTooLarge(
                f"{len(atoms)} atoms exceeds the configured maximum of {max_atoms}"
            )
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "max_atoms", max_atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def n_worlds(self) -> int:
        return 1 << len(self.atoms)

    def worlds(self) -> list["World"]:
        return [World(i, len(self.atoms)) for i in range(self.n_worlds)]

    def world(self, bits: str) -> "World":
        """Look up a world by its truth vector, e.g. ``"101"``."""
        if len(bits) != len(self.atoms) or set(bits) - {"0", "1"}:
            raise ValueError(f"{bits!r} is not a truth vector over {self.atoms}")
        return World.from_bits(bits)

    def index(self, atom: str) -> int:
        try:
            return self.atoms.index(atom)
        except ValueError:
            raise UnknownAtomError(f"unknown atom {atom!r}") from None


@dataclass(frozen=True, order=True)
class World:
    index: int
    n_atoms: int

    @classmethod
    def from_bits(cls, bits: str) -> "World":
        n = len(bits)
        value = int(bits, 2)
        return cls((1 << n) - 1 - value, n)

    @property
    def bits(self) -> str:
        value = (1 << self.n_atoms) - 1 - self.index
        return format(value, f"0{self.n_atoms}b")

    def truth(self, position: int) -> bool:
        """Truth value of the atom at ``position`` in the vocabulary."""
        return not (self.index >> (self.n_atoms - 1 - position)) & 1

    def __str__(self) -> str:
        return self.bits


# --- formula AST -----------------------------------------------------------


class Formula:
    """Base class of the formula AST; nodes are immutable and hashable."""

    def evaluate(self, truth: dict[str, bool]) -> bool:
        raise NotImplementedError

    def atoms(self) -> frozenset[str]:
        raise NotImplementedError

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def evaluate(self, truth):
        return truth[self.name]

    def atoms(self):
        return frozenset({self.name})


@dataclass(frozen=True)
class Const(Formula):
    value: bool

    def evaluate(self, truth):
        return self.value

    def atoms(self):
        return frozenset()


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def evaluate(self, truth):
        return not self.arg.evaluate(truth)

    def atoms(self):
        return self.arg.atoms()


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def evaluate(self, truth):
        return self.left.evaluate(truth) and self.right.evaluate(truth)

    def atoms(self):
        return self.left.atoms() | self.right.atoms()


@dataclass(frozen=True)
class Or(Formula):
    """Disjunction; semantically ``!(!left & !right)``."""

    left: Formula
    right: Formula

    def evaluate(self, truth):
        return self.left.evaluate(truth) or self.right.evaluate(truth)

    def atoms(self):
        return self.left.atoms() | self.right.atoms()


def desugar(f: Formula, vocab: Vocabulary | None = None) -> Formula:
    """Rewrite into NOT/AND over atoms (De Morgan for OR).

    Constants become ``!(a & !a)`` / ``a & !a`` on the first atom of
    ``vocab``, which is then required.
    """
    if isinstance(f, Atom):
        return f
    if isinstance(f, Const):
        if vocab is None:
            raise ValueError("constants need a vocabulary to desugar")
        a = Atom(vocab.atoms[0])
        bottom = And(a, Not(a))
        return Not(bottom) if f.value else bottom
    if isinstance(f, Not):
        return Not(desugar(f.arg, vocab))
    if isinstance(f, And):
        return And(desugar(f.left, vocab), desugar(f.right, vocab))
    if isinstance(f, Or):
        return Not(And(Not(desugar(f.left, vocab)), Not(desugar(f.right, vocab))))
    raise TypeError(f"not a formula: {f!r}")


# --- rendering ---------------------------------------------------------------

_PREC = {Or: 1, And: 2, Not: 3, Atom: 4, Const: 4}


def render(f: Formula) -> str:
    """Canonical ASCII rendering that :func:`parse_formula` reads back."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        inner = render(f.arg)
        return "!" + (inner if _PREC[type(f.arg)] >= 3 else f"({inner})")
    op = " & " if isinstance(f, And) else " | "
    p = _PREC[type(f)]
    left = render(f.left)
    if _PREC[type(f.left)] < p:
        left = f"({left})"
    # parser is left-associative, so a same-precedence right child needs parens
    right = render(f.right)
    if _PREC[type(f.right)] <= p:
        right = f"({right})"
    return left + op + right


# --- parsing ----------------------------------------------------------------

_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_KEYWORDS = {"true", "false"}
_TOKEN_RE = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            word = m.group(1)
            kind = "const" if word in _KEYWORDS else "atom"
            tokens.append((kind, word, m.start(1)))
        else:
            ch = m.group(2)
            if ch not in "!&|()":
                raise FormulaSyntaxError(f"unexpected character {ch!r}", m.start(2))
            tokens.append((ch, ch, m.start(2)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, vocab: Vocabulary | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.vocab = vocab

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str | None = None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.disjunction()
        self.take("eof")
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[0] == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "!":
            self.take()
            return Not(self.unary())
        if kind == "(":
            self.take()
            f = self.disjunction()
            self.take(")")
            return f
        if kind == "const":
            self.take()
            return TRUE if value == "true" else FALSE
        if kind == "atom":
            self.take()
            if self.vocab is not None and value not in self.vocab.atoms:
                raise UnknownAtomError(f"unknown atom {value!r} at position {pos}")
            return Atom(value)
        what = "end of input" if kind == "eof" else repr(value)
        raise FormulaSyntaxError(f"unexpected {what}", pos)


def parse_formula(text: str, vocab: Vocabulary | None = None) -> Formula:
    """Parse ASCII syntax: ``!`` > ``&`` > ``|``, parentheses, ``true``/``false``.

    With a vocabulary, atoms outside it raise :class:`UnknownAtomError`.
    """
    return _Parser(text, vocab).parse()


# --- semantics ---------------------------------------------------------------


def truth_assignment(w: World, vocab: Vocabulary) -> dict[str, bool]:
    return {a: w.truth(i) for i, a in enumerate(vocab.atoms)}


def satisfies(w: World, f: Formula, vocab: Vocabulary) -> bool:
    unknown = f.atoms() - set(vocab.atoms)
    if unknown:
        raise UnknownAtomError(f"atoms {sorted(unknown)} not in vocabulary")
    return f.evaluate(truth_assignment(w, vocab))


def models(f: Formula, vocab: Vocabulary) -> frozenset[World]:
    return frozenset(w for w in vocab.worlds() if satisfies(w, f, vocab))


@lru_cache(maxsize=4096)
def model_indices(f: Formula, vocab: Vocabulary) -> frozenset[int]:
    return frozenset(w.index for w in models(f, vocab))


def minterm(w: World, vocab: Vocabulary) -> Formula:
    """The conjunction of literals true exactly at ``w``."""
    lits: list[Formula] = [
        Atom(a) if w.truth(i) else Not(Atom(a)) for i, a in enumerate(vocab.atoms)
    ]
    f = lits[0]
    for lit in lits[1:]:
        f = And(f, lit)
    return f
