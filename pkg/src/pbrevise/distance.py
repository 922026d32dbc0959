"""Pseudo-distances between worlds and Min-sets of closest models."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import product

from .props import Formula, Vocabulary, World, model_indices

AXIOMS = ("non-negativity", "identity", "symmetry", "triangle", "faithfulness")
VALIDATION_LIMIT = 4  # atoms; exhaustive triangle check is O(8**n)


class UnsatisfiableObservation(ValueError):
    pass


class InvalidDistance(ValueError):
    pass


def hamming(w: World, w2: World) -> int:
    if w.n_atoms != w2.n_atoms:
        raise ValueError("worlds are over different vocabularies")
    return bin(w.index ^ w2.index).count("1")


def axiom_violations(matrix) -> list[tuple[str, tuple[int, ...]]]:
    """Every violated axiom with a witness tuple of world indices."""
    n = len(matrix)
    out = []
    for i, j in product(range(n), repeat=2):
        d = matrix[i][j]
        if d < 0:
            out.append(("non-negativity", (i, j)))
        if i == j and d != 0:
            out.append(("identity", (i,)))
        if d != matrix[j][i]:
            out.append(("symmetry", (i, j)))
        if i != j and d <= 0:
            out.append(("faithfulness", (i, j)))
    for i, j, k in product(range(n), repeat=3):
        if matrix[i][j] + matrix[j][k] < matrix[i][k]:
            out.append(("triangle", (i, j, k)))
    return out


@dataclass(frozen=True)
class PseudoDistance:
    """Integer distance table indexed by world index."""

    vocab: Vocabulary
    matrix: tuple[tuple[int, ...], ...]
    name: str = "custom"

    def __call__(self, w: World | int, w2: World | int) -> int:
        i = w.index if isinstance(w, World) else w
        j = w2.index if isinstance(w2, World) else w2
        return self.matrix[i][j]

    @classmethod
    def hamming(cls, vocab: Vocabulary) -> "PseudoDistance":
        ws = vocab.worlds()
        return cls(vocab, tuple(tuple(hamming(a, b) for b in ws) for a in ws), "hamming")

    @classmethod
    def from_matrix(
        cls, vocab: Vocabulary, matrix, *, validate: bool = True, name: str = "custom"
    ) -> "PseudoDistance":
        """Wrap a user table, checking all five axioms when ``validate``.

        Exhaustive validation is only offered up to ``VALIDATION_LIMIT``
        atoms; larger vocabularies must opt out explicitly.
        """
        n = vocab.n_worlds
        rows = tuple(tuple(int(v) for v in row) for row in matrix)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InvalidDistance(f"distance matrix must be {n}x{n}")
        if any(int(v) != v for row in matrix for v in row):
            raise InvalidDistance("distances must be integers")
        if validate:
            if len(vocab) > VALIDATION_LIMIT:
                raise InvalidDistance(
                    f"cannot validate a distance over {len(vocab)} atoms; pass validate=False"
                )
            bad = axiom_violations(rows)
            if bad:
                axiom, where = bad[0]
                raise InvalidDistance(f"{axiom} fails at worlds {where}")
        return cls(vocab, rows, name)


def parse_distance_matrix(text: str) -> list[list[int]]:
    """Whitespace-separated integer rows; ``#`` starts a comment."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append([int(tok) for tok in line.replace(",", " ").split()])
    return rows


def _models_or_raise(alpha: Formula, vocab: Vocabulary) -> frozenset[int]:
    idx = model_indices(alpha, vocab)
    if not idx:
        raise UnsatisfiableObservation(f"observation {alpha} has no models")
    return idx


def min_set_indices(alpha: Formula, w: int, d: PseudoDistance) -> frozenset[int]:
    targets = _models_or_raise(alpha, d.vocab)
    row = d.matrix[w]
    best = min(row[t] for t in targets)
    return frozenset(t for t in targets if row[t] == best)


def min_set(alpha: Formula, w: World, d: PseudoDistance) -> frozenset[World]:
    """The ``alpha``-worlds closest to ``w``."""
    n = len(d.vocab)
    return frozenset(World(i, n) for i in min_set_indices(alpha, w.index, d))


def min_sets(alpha: Formula, d: PseudoDistance) -> list[frozenset[int]]:
    """Min-set (as world indices) for every world, in world order."""
    targets = _models_or_raise(alpha, d.vocab)
    out = []
    for row in d.matrix:
        best = min(row[t] for t in targets)
        out.append(frozenset(t for t in targets if row[t] == best))
    return out


def min_set_sizes(alpha: Formula, d: PseudoDistance) -> dict[World, int]:
    n = len(d.vocab)
    return {World(i, n): len(s) for i, s in enumerate(min_sets(alpha, d))}


def min_set_partition(alpha: Formula, d: PseudoDistance) -> dict[int, frozenset[World]]:
    """Worlds grouped by the size of their Min-set."""
    groups: dict[int, set[World]] = defaultdict(set)
    for w, size in min_set_sizes(alpha, d).items():
        groups[size].add(w)
    return {k: frozenset(v) for k, v in sorted(groups.items())}
