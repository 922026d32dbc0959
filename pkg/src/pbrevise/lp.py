"""Exact rational linear programming over the probability simplex.

Every program has ``n_vars`` variables with the implicit constraints
``x >= 0`` and ``sum(x) == 1`` plus any number of linear rows
``a . x (<=|=|>=) b``.  Solving is a dense-tableau primal simplex over
:class:`fractions.Fraction` with Bland's rule, so results are exact and
termination is guaranteed under degeneracy.

Lexicographic maximization restricts the tableau to the optimal face after
each objective: nonbasic columns with a strictly negative reduced cost are
pinned at zero and dropped.  This is the same feasible set as adding
``objective == optimum`` as an equality row, without growing the tableau.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

RELATIONS = ("<=", "=", ">=")


class Infeasible(Exception):
    """The constraint polytope is empty."""


def as_fraction(x) -> Fraction:
    """Exact conversion; strings like ``"0.61"`` and ``"3/7"`` are accepted.

    Floats are converted through ``repr`` so ``0.1`` becomes ``1/10``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    bound: Fraction

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}, got {self.relation!r}")
        object.__setattr__(self, "coeffs", tuple(as_fraction(c) for c in self.coeffs))
        object.__setattr__(self, "bound", as_fraction(self.bound))

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = sum((c * v for c, v in zip(self.coeffs, x)), Fraction(0))
        if self.relation == "<=":
            return lhs <= self.bound
        if self.relation == ">=":
            return lhs >= self.bound
        return lhs == self.bound


@dataclass(frozen=True)
class LinearProgram:
    n_vars: int
    constraints: tuple[Constraint, ...] = ()
    objective: tuple[Fraction, ...] | None = field(default=None)

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("need at least one variable")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for c in self.constraints:
            if len(c.coeffs) != self.n_vars:
                raise ValueError(
                    f"constraint has {len(c.coeffs)} coefficients, expected {self.n_vars}"
                )
        if self.objective is not None:
            obj = tuple(as_fraction(c) for c in self.objective)
            if len(obj) != self.n_vars:
                raise ValueError("objective length does not match n_vars")
            object.__setattr__(self, "objective", obj)

    def with_constraints(self, extra: Iterable[Constraint]) -> "LinearProgram":
        return LinearProgram(self.n_vars, self.constraints + tuple(extra), self.objective)

    def contains(self, x: Sequence[Fraction]) -> bool:
        """Exact membership test of a point in the polytope."""
        if len(x) != self.n_vars or any(v < 0 for v in x) or sum(x) != 1:
            return False
        return all(c.holds(x) for c in self.constraints)


class Tableau:
    """A feasible simplex tableau ``A x = b`` with an explicit basis.

    Columns ``0..n_vars-1`` are the structural variables; further columns
    are slack/surplus variables.  ``active`` lists the columns still free
    to enter the basis; dropped columns are fixed at zero.
    """

    def __init__(self, rows, rhs, basis, active, n_vars):
        self.rows: list[list[Fraction]] = rows
        self.rhs: list[Fraction] = rhs
        self.basis: list[int] = basis
        self.active: list[int] = active
        self.n_vars = n_vars

    def copy(self) -> "Tableau":
        return Tableau(
            [r[:] for r in self.rows], self.rhs[:], self.basis[:], self.active[:], self.n_vars
        )

    # -- core operations --

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        p = row[j]
        cols = self.active
        if p != 1:
            for k in cols:
                if row[k]:
                    row[k] /= p
            self.rhs[r] /= p
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[j]
            if not f:
                continue
            for k in cols:
                if row[k]:
                    other[k] -= f * row[k]
            self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = j

    def reduced_costs(self, c: Sequence[Fraction]) -> dict[int, Fraction]:
        """``c_j - c_B . A_j`` for every active nonbasic column."""
        basic = set(self.basis)
        cb = [c[b] for b in self.basis]
        out = {}
        for j in self.active:
            if j in basic:
                continue
            d = c[j]
            for i, row in enumerate(self.rows):
                if cb[i] and row[j]:
                    d -= cb[i] * row[j]
            out[j] = d
        return out

    def maximize(self, c: Sequence[Fraction]) -> tuple[Fraction, dict[int, Fraction]]:
        """Pivot to an optimum of ``c . x``; returns value and final reduced costs.

        ``c`` covers every column of the tableau (zeros for slacks).
        """
        while True:
            d = self.reduced_costs(c)
            entering = min((j for j, v in d.items() if v > 0), default=None)
            if entering is None:
                value = sum((c[b] * v for b, v in zip(self.basis, self.rhs)), Fraction(0))
                return value, d
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:  # cannot happen over the simplex, kept as a guard
                raise ArithmeticError("unbounded objective over a bounded polytope")
            self.pivot(best[1], entering)

    def restrict_to_optimal_face(self, reduced: dict[int, Fraction]) -> bool:
        """Drop columns pinned at zero by the optimum; True if any were dropped."""
        pinned = {j for j, v in reduced.items() if v < 0}
        if pinned:
            self.active = [j for j in self.active if j not in pinned]
        return bool(pinned)

    def solution(self) -> tuple[Fraction, ...]:
        x = [Fraction(0)] * self.n_vars
        for b, v in zip(self.basis, self.rhs):
            if b < self.n_vars:
                x[b] = v
        return tuple(x)

    def face_key(self) -> frozenset[int]:
        return frozenset(self.active)

    def padded(self, objective: Sequence[Fraction]) -> list[Fraction]:
        width = len(self.rows[0]) if self.rows else self.n_vars
        return list(objective) + [Fraction(0)] * (width - self.n_vars)


def feasible_tableau(lp: LinearProgram) -> Tableau:
    """Phase 1: a feasible basis for ``lp`` or :class:`Infeasible`."""
    n = lp.n_vars
    specs = [([Fraction(1)] * n, "=", Fraction(1))]
    specs += [(list(c.coeffs), c.relation, c.bound) for c in lp.constraints]
    n_slack = sum(1 for _, rel, _ in specs if rel != "=")
    n_rows = len(specs)
    width = n + n_slack + n_rows  # structural | slack | artificial
    art0 = n + n_slack

    rows, rhs, basis = [], [], []
    s = n
    for i, (coeffs, rel, bound) in enumerate(specs):
        row = coeffs + [Fraction(0)] * (width - n)
        if rel != "=":
            row[s] = Fraction(1) if rel == "<=" else Fraction(-1)
            s += 1
        if bound < 0:
            row = [-v for v in row]
            bound = -bound
        row[art0 + i] = Fraction(1)
        rows.append(row)
        rhs.append(bound)
        basis.append(art0 + i)

    t = Tableau(rows, rhs, basis, list(range(width)), n)
    phase1 = [Fraction(0)] * art0 + [Fraction(-1)] * n_rows
    value, _ = t.maximize(phase1)
    if value < 0:
        raise Infeasible("constraint polytope is empty")

    # drive zero-valued artificials out of the basis; drop redundant rows
    r = 0
    while r < len(t.rows):
        if t.basis[r] >= art0:
            j = next((k for k in range(art0) if t.rows[r][k]), None)
            if j is None:
                del t.rows[r], t.rhs[r], t.basis[r]
                continue
            t.pivot(r, j)
        r += 1
    t.active = [j for j in t.active if j < art0]
    for row in t.rows:
        del row[art0:]
    return t


def is_feasible(lp: LinearProgram) -> bool:
    try:
        feasible_tableau(lp)
    except Infeasible:
        return False
    return True


def optimize(
    lp: LinearProgram, direction: str = "max", objective: Sequence | None = None
) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Exact optimum of a linear objective and an attaining vertex.

    Uses ``objective`` if given, else ``lp.objective``.  Raises
    :class:`Infeasible` for an empty polytope.
    """
    if direction not in ("max", "min"):
        raise ValueError("direction must be 'max' or 'min'")
    c = objective if objective is not None else lp.objective
    if c is None:
        raise ValueError("no objective given")
    c = [as_fraction(v) for v in c]
    if len(c) != lp.n_vars:
        raise ValueError("objective length does not match n_vars")
    sign = 1 if direction == "max" else -1
    t = feasible_tableau(lp)
    value, _ = t.maximize(t.padded([sign * v for v in c]))
    return sign * value, t.solution()


def lex_maximize_tableau(t: Tableau, objectives: Iterable[Sequence[Fraction]]) -> Tableau:
    """Lexicographic maximization in place on a feasible tableau."""
    for obj in objectives:
        _, d = t.maximize(t.padded(obj))
        t.restrict_to_optimal_face(d)
    return t


def lex_maximize(lp: LinearProgram, objectives: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Maximize each objective in turn, holding earlier optima fixed."""
    objs = [[as_fraction(v) for v in o] for o in objectives]
    for o in objs:
        if len(o) != lp.n_vars:
            raise ValueError("objective length does not match n_vars")
    t = feasible_tableau(lp)
    return lex_maximize_tableau(t, objs).solution()


def unit_vector(n: int, i: int) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


__all__ = [
    "Constraint",
    "Infeasible",
    "LinearProgram",
    "Tableau",
    "as_fraction",
    "feasible_tableau",
    "is_feasible",
    "lex_maximize",
    "lex_maximize_tableau",
    "optimize",
    "unit_vector",
]
