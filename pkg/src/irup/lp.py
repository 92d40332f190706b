"""Exact rational linear programming.

Two simplex engines share this module:

* a fraction-free dense tableau (integer entries plus one common
  denominator, updated with Bareiss-style exact divisions) for the small
  inequality systems that decide realizability, and
* a revised simplex over ``Fraction`` for ``min sum(x) s.t. A x = b, x >= 0``
  with many integer columns, used for the relaxations.

Both use Bland's rule whenever a pivot is degenerate, so they terminate on
the heavily degenerate systems produced by enumeration.  Nothing here ever
touches floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Pattern, as_mask, iter_bits
from .errors import EmptyColumnSet, MalformedSystem

RELATIONS = ("<=", ">=", "=")


class Status(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction

    def satisfied_by(self, values: Sequence[Fraction]) -> bool:
        lhs = sum((c * v for c, v in zip(self.coeffs, values)), Fraction(0))
        if self.rel == "<=":
            return lhs <= self.rhs
        if self.rel == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class LinearSystem:
    """Named nonnegative variables and a list of linear constraints."""

    variables: list[str]
    constraints: list[Constraint] = field(default_factory=list)

    def add(self, coeffs: Iterable, rel: str, rhs) -> None:
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != len(self.variables):
            raise MalformedSystem(
                f"row has {len(coeffs)} coefficients for {len(self.variables)} variables"
            )
        if rel not in RELATIONS:
            raise MalformedSystem(f"unknown relation {rel!r}")
        self.constraints.append(Constraint(coeffs, rel, Fraction(rhs)))

    def add_terms(self, terms: dict[str, object], rel: str, rhs) -> None:
        index = {v: i for i, v in enumerate(self.variables)}
        row = [Fraction(0)] * len(self.variables)
        for name, c in terms.items():
            row[index[name]] += Fraction(c)
        self.add(row, rel, rhs)

    def check(self, values: Sequence[Fraction]) -> bool:
        return all(v >= 0 for v in values) and all(
            c.satisfied_by(values) for c in self.constraints
        )

    def dump(self) -> str:
        """Plain text, one constraint per line: ``coeff ... rel rhs``."""
        lines = ["# " + " ".join(self.variables)]
        for c in self.constraints:
            lines.append(" ".join([*map(str, c.coeffs), c.rel, str(c.rhs)]))
        return "\n".join(lines) + "\n"


@dataclass
class LpSolution:
    status: Status
    values: tuple[Fraction, ...] | dict | None = None
    objective: Fraction | None = None
    pivots: int = 0

    @property
    def ok(self) -> bool:
        return self.status in (Status.FEASIBLE, Status.OPTIMAL)


# -- fraction-free tableau ---------------------------------------------------


def _integer_row(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[list[int], int]:
    den = math.lcm(*(c.denominator for c in coeffs), rhs.denominator)
    return [int(c * den) for c in coeffs], int(rhs * den)


class _Tableau:
    """Dense simplex tableau ``T / d`` with integer ``T`` and ``d > 0``.

    Rows are ``A x <= b`` with ``x >= 0``.  Column layout: structural
    variables, one slack per row, the phase-one auxiliary, then the rhs.
    Row ``m`` is the objective row holding reduced costs and ``-z``.
    """

    def __init__(self, rows: Sequence[Sequence[int]], rhs: Sequence[int], nvars: int):
        m = len(rows)
        self.m = m
        self.nvars = nvars
        self.aux = nvars + m
        width = nvars + m + 2
        self.rhs_col = width - 1
        table = []
        for i, (row, b) in enumerate(zip(rows, rhs)):
            line = list(row) + [0] * (m + 2)
            line[nvars + i] = 1
            line[self.aux] = -1
            line[-1] = b
            table.append(line)
        table.append([0] * width)
        self.T = table
        self.d = 1
        self.basis = [nvars + i for i in range(m)]
        self.pivots = 0
        self.aux_active = True

    def _order(self, j: int) -> int:
        # Bland order with the auxiliary variable first
        return -1 if j == self.aux else j

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        pr = T[r]
        p = pr[c]
        d = self.d
        for i, row in enumerate(T):
            if i == r:
                continue
            f = row[c]
            if f:
                T[i] = [(x * p - f * y) // d for x, y in zip(row, pr)]
            elif p != d:
                T[i] = [x * p // d for x in row]
        self.d = p
        if p < 0:
            self.T = [[-x for x in row] for row in self.T]
            self.d = -p
        self.basis[r] = c
        self.pivots += 1

    def _entering(self) -> int | None:
        obj = self.T[self.m]
        best = None
        for j in range(self.rhs_col):
            if obj[j] < 0 and (j != self.aux or self.aux_active):
                if best is None or self._order(j) < self._order(best):
                    best = j
        return best

    def _leaving(self, c: int) -> int | None:
        T = self.T
        best = None
        for i in range(self.m):
            a = T[i][c]
            if a > 0:
                if best is None:
                    best = i
                    continue
                # compare b_i / a_i with b_best / a_best
                lhs = T[i][-1] * T[best][c]
                rhs = T[best][-1] * a
                if lhs < rhs or (
                    lhs == rhs and self._order(self.basis[i]) < self._order(self.basis[best])
                ):
                    best = i
        return best

    def run(self) -> bool:
        """Primal simplex with Bland's rule; False when unbounded."""
        while True:
            c = self._entering()
            if c is None:
                return True
            r = self._leaving(c)
            if r is None:
                return False
            self.pivot(r, c)

    def phase_one(self) -> bool:
        """Make the basis feasible; returns False if the system is infeasible."""
        T = self.T
        rhs = [row[-1] for row in T[: self.m]]
        if not rhs or min(rhs) >= 0:
            self.aux_active = False
            return True
        r = min(range(self.m), key=lambda i: (rhs[i], i))
        T[self.m][self.aux] = 1
        self.pivot(r, self.aux)
        self.run()
        if self.T[self.m][-1] != 0:
            return False
        if self.aux in self.basis:
            r = self.basis.index(self.aux)
            row = self.T[r]
            c = next((j for j in range(self.aux) if row[j] != 0), None)
            if c is not None:
                self.pivot(r, c)
        self.aux_active = False
        # clear the auxiliary column so it never re-enters
        for row in self.T:
            row[self.aux] = 0
        return True

    def set_objective(self, cost: Sequence[int]) -> None:
        T, d = self.T, self.d
        full = list(cost) + [0] * (self.rhs_col + 1 - len(cost))
        obj = [d * c for c in full]
        for i, b in enumerate(self.basis):
            cb = full[b]
            if cb:
                row = T[i]
                obj = [o - cb * x for o, x in zip(obj, row)]
        T[self.m] = obj

    def values(self) -> list[Fraction]:
        out = [Fraction(0)] * self.nvars
        for i, b in enumerate(self.basis):
            if b < self.nvars:
                out[b] = Fraction(self.T[i][-1], self.d)
        return out

    def objective_value(self) -> Fraction:
        return Fraction(-self.T[self.m][-1], self.d)


def solve_int_rows(
    rows: Sequence[Sequence[int]],
    rhs: Sequence[int],
    nvars: int,
    cost: Sequence[int] | None = None,
) -> LpSolution:
    """Decide ``rows x <= rhs, x >= 0`` over integers; minimize ``cost`` if given."""
    tab = _Tableau(rows, rhs, nvars)
    if not tab.phase_one():
        return LpSolution(Status.INFEASIBLE, pivots=tab.pivots)
    if cost is None:
        return LpSolution(Status.FEASIBLE, tuple(tab.values()), pivots=tab.pivots)
    tab.set_objective(cost)
    if not tab.run():
        return LpSolution(Status.UNBOUNDED, pivots=tab.pivots)
    return LpSolution(
        Status.OPTIMAL, tuple(tab.values()), tab.objective_value(), pivots=tab.pivots
    )


def _to_le_rows(sys: LinearSystem) -> tuple[list[list[int]], list[int]]:
    rows, rhs = [], []
    for con in sys.constraints:
        if len(con.coeffs) != len(sys.variables):
            raise MalformedSystem("constraint width does not match the variable count")
        coeffs, b = _integer_row(con.coeffs, con.rhs)
        if con.rel in ("<=", "="):
            rows.append(coeffs)
            rhs.append(b)
        if con.rel in (">=", "="):
            rows.append([-x for x in coeffs])
            rhs.append(-b)
    return rows, rhs


def feasible(sys: LinearSystem) -> LpSolution:
    """Exact feasibility of a system over nonnegative variables, with a witness."""
    if not sys.variables:
        raise MalformedSystem("system has no variables")
    rows, rhs = _to_le_rows(sys)
    return solve_int_rows(rows, rhs, len(sys.variables))


def minimize(sys: LinearSystem, objective: Sequence) -> LpSolution:
    """Minimize ``objective . x`` over the system."""
    if len(objective) != len(sys.variables):
        raise MalformedSystem("objective width does not match the variable count")
    rows, rhs = _to_le_rows(sys)
    cost = [Fraction(c) for c in objective]
    den = math.lcm(*(c.denominator for c in cost))
    sol = solve_int_rows(rows, rhs, len(sys.variables), [int(c * den) for c in cost])
    if sol.objective is not None:
        sol.objective /= den
    return sol


# -- revised simplex for unit-cost column LPs ---------------------------------

_DEGENERATE_STREAK = 8


def _sparse(col: Sequence[int]) -> tuple[tuple[int, int], ...]:
    return tuple((i, v) for i, v in enumerate(col) if v)


def min_sum_columns(
    columns: Sequence[Sequence[int]], rhs: Sequence[int]
) -> LpSolution:
    """``min sum(x)`` subject to ``sum_j x_j columns[j] = rhs``, ``x >= 0``.

    Columns and rhs are nonnegative integer vectors.  Returns the optimal
    basic solution as a dict ``column index -> value`` (nonzeros only).
    """
    m = len(rhs)
    if not columns:
        raise EmptyColumnSet("no columns given")
    if any(b < 0 for b in rhs):
        raise MalformedSystem("right-hand side must be nonnegative")
    cols = [_sparse(c) for c in columns]
    ncols = len(cols)

    # start from unit columns where available, artificials elsewhere
    basis: list[int] = []
    unit = {}
    for j, c in enumerate(cols):
        if len(c) == 1 and c[0][1] == 1 and c[0][0] not in unit:
            unit[c[0][0]] = j
    for i in range(m):
        basis.append(unit.get(i, ncols + i))
    xb = [Fraction(b) for b in rhs]
    binv = [[Fraction(int(i == k)) for k in range(m)] for i in range(m)]
    pivots = 0

    def column(j: int) -> tuple[tuple[int, int], ...]:
        return cols[j] if j < ncols else ((j - ncols, 1),)

    def simplex(phase: int) -> bool:
        nonlocal pivots
        streak = 0
        while True:
            cb = [
                (1 if b >= ncols else 0) if phase == 1 else (0 if b >= ncols else 1)
                for b in basis
            ]
            y = [sum((cb[r] * binv[r][i] for r in range(m) if cb[r]), Fraction(0)) for i in range(m)]
            den = math.lcm(*(q.denominator for q in y)) if y else 1
            Y = [int(q * den) for q in y]
            inbasis = set(basis)
            bland = streak >= _DEGENERATE_STREAK
            enter, best = None, 0
            cost = 0 if phase == 1 else den
            for j in range(ncols):
                if j in inbasis:
                    continue
                red = cost - sum(Y[i] * v for i, v in cols[j])
                if red < 0:
                    if bland:
                        enter = j
                        break
                    if red < best:
                        enter, best = j, red
            if enter is None:
                return True
            col = column(enter)
            u = [sum((binv[i][k] * v for k, v in col), Fraction(0)) for i in range(m)]
            leave, ratio = None, None
            for i in range(m):
                if u[i] > 0:
                    t = xb[i] / u[i]
                    if (
                        ratio is None
                        or t < ratio
                        or (t == ratio and _bland_key(basis[i], ncols) < _bland_key(basis[leave], ncols))
                    ):
                        leave, ratio = i, t
            if leave is None:
                return False
            streak = streak + 1 if ratio == 0 else 0
            piv = u[leave]
            prow = [v / piv for v in binv[leave]]
            for i in range(m):
                if i == leave:
                    continue
                f = u[i]
                if f:
                    binv[i] = [a - f * b for a, b in zip(binv[i], prow)]
                    xb[i] -= f * ratio
            binv[leave] = prow
            xb[leave] = ratio
            basis[leave] = enter
            pivots += 1

    if any(b >= ncols for b in basis):
        simplex(1)
        if any(basis[i] >= ncols and xb[i] != 0 for i in range(m)):
            return LpSolution(Status.INFEASIBLE, pivots=pivots)
        # drive zero-valued artificials out of the basis where possible
        for r in range(m):
            if basis[r] < ncols:
                continue
            inbasis = set(basis)
            for j in range(ncols):
                if j in inbasis:
                    continue
                w = sum((binv[r][k] * v for k, v in cols[j]), Fraction(0))
                if w:
                    u = [sum((binv[i][k] * v for k, v in cols[j]), Fraction(0)) for i in range(m)]
                    prow = [v / w for v in binv[r]]
                    for i in range(m):
                        if i != r and u[i]:
                            binv[i] = [a - u[i] * b for a, b in zip(binv[i], prow)]
                    binv[r] = prow
                    basis[r] = j
                    pivots += 1
                    break
        # artificials left in the basis belong to redundant rows and stay at zero
    if not simplex(2):
        return LpSolution(Status.UNBOUNDED, pivots=pivots)
    values = {b: v for b, v in zip(basis, xb) if b < ncols and v}
    return LpSolution(Status.OPTIMAL, values, sum(values.values(), Fraction(0)), pivots)


def _bland_key(b: int, ncols: int) -> int:
    # artificials leave first
    return -1 if b >= ncols else b


def minimize_unit_sum(columns: Iterable[Pattern | int], n: int) -> LpSolution:
    """``z_C``: cover every item exactly once by fractional patterns.

    Returns the optimum with ``values`` keyed by pattern mask.
    """
    masks = sorted({as_mask(c, n) for c in columns} - {0})
    if not masks:
        raise EmptyColumnSet("no nonzero columns given")
    vecs = [tuple((a >> i) & 1 for i in range(n)) for a in masks]
    sol = min_sum_columns(vecs, [1] * n)
    if sol.values is not None:
        sol.values = {masks[j]: v for j, v in sol.values.items()}
    return sol


def check_unit_sum(values: dict[int, Fraction], n: int) -> bool:
    """Independent re-check that ``values`` is a fractional exact cover."""
    cover = [Fraction(0)] * n
    for a, x in values.items():
        if x < 0:
            return False
        for i in iter_bits(a):
            cover[i] += x
    return all(c == 1 for c in cover)
