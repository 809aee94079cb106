"""Exact two-phase simplex over rational numbers.

Small and certificate-grade: every pivot is carried out in
fractions.Fraction, so optimal values are exact and safe to use as bounds.
Bland's rule (smallest eligible column enters, smallest basic index leaves
on ratio ties) guarantees termination and makes runs deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

LE, GE, EQ = "<=", ">=", "="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class LpResult:
    status: str
    value: Optional[Fraction]
    x: Optional[list[Fraction]]


class _Tableau:
    """Dense simplex tableau; row 0 holds reduced costs and the objective."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.rows = rows          # m constraint rows, each length ncols + 1
        self.basis = basis        # basic column per constraint row
        self.obj: list[Fraction] = []

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) - 1

    def set_objective(self, costs: dict[int, Fraction]) -> None:
        """Load reduced costs for maximizing costs . x from the current basis."""
        obj = [_ZERO] * (self.ncols + 1)
        for j, c in costs.items():
            obj[j] = -c
        for i, b in enumerate(self.basis):
            cb = costs.get(b, _ZERO)
            if cb != 0:
                row = self.rows[i]
                for k, v in enumerate(row):
                    if v != 0:
                        obj[k] += cb * v
        self.obj = obj

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            inv = _ONE / piv
            self.rows[r] = prow = [v * inv if v != 0 else v for v in prow]
        nz = [k for k, v in enumerate(prow) if v != 0]
        for row in self.rows:
            if row is prow:
                continue
            f = row[c]
            if f != 0:
                for k in nz:
                    row[k] -= f * prow[k]
        f = self.obj[c]
        if f != 0:
            for k in nz:
                self.obj[k] -= f * prow[k]
        self.basis[r] = c

    def optimize(self) -> str:
        """Pivot until no reduced cost is negative.  Bland's rule throughout."""
        rhs = self.ncols
        while True:
            obj = self.obj
            enter = -1
            for j in range(rhs):
                if obj[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return OPTIMAL
            leave = -1
            best: Optional[Fraction] = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[rhs] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leave])
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                return UNBOUNDED
            self.pivot(leave, enter)


def solve_lp(
    num_vars: int,
    rows: Sequence[tuple[dict[int, Fraction | int], str, Fraction | int]],
    objective: dict[int, Fraction | int],
) -> LpResult:
    """Maximize objective . x subject to rows and x >= 0.

    Each row is (coefficients keyed by variable index, sense, rhs) with
    sense one of "<=", ">=", "=".
    """
    senses: list[str] = []
    coeff_rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    for coeffs, sense, b in rows:
        if sense not in (LE, GE, EQ):
            raise ValueError(f"unknown sense {sense!r}")
        row = {j: Fraction(v) for j, v in coeffs.items() if v != 0}
        b = Fraction(b)
        if b < 0:
            row = {j: -v for j, v in row.items()}
            b = -b
            sense = {LE: GE, GE: LE, EQ: EQ}[sense]
        coeff_rows.append(row)
        senses.append(sense)
        rhs.append(b)

    m = len(coeff_rows)
    n_slack = sum(1 for s in senses if s in (LE, GE))
    n_art = sum(1 for s in senses if s in (GE, EQ))
    ncols = num_vars + n_slack + n_art
    first_art = num_vars + n_slack

    trows: list[list[Fraction]] = []
    basis: list[int] = []
    slack_at = num_vars
    art_at = first_art
    for i in range(m):
        row = [_ZERO] * (ncols + 1)
        for j, v in coeff_rows[i].items():
            if not 0 <= j < num_vars:
                raise ValueError(f"variable index {j} out of range")
            row[j] = v
        row[ncols] = rhs[i]
        if senses[i] == LE:
            row[slack_at] = _ONE
            basis.append(slack_at)
            slack_at += 1
        elif senses[i] == GE:
            row[slack_at] = -_ONE
            slack_at += 1
            row[art_at] = _ONE
            basis.append(art_at)
            art_at += 1
        else:
            row[art_at] = _ONE
            basis.append(art_at)
            art_at += 1
        trows.append(row)

    tab = _Tableau(trows, basis)

    if n_art:
        tab.set_objective({j: -_ONE for j in range(first_art, ncols)})
        status = tab.optimize()
        if status != OPTIMAL:
            raise AssertionError("phase 1 cannot be unbounded")
        if tab.obj[ncols] != 0:  # maximized -(sum of artificials) below zero
            return LpResult(INFEASIBLE, None, None)
        # Drive leftover zero-valued artificials out, dropping redundant rows.
        for i in range(len(tab.rows) - 1, -1, -1):
            if tab.basis[i] < first_art:
                continue
            row = tab.rows[i]
            c = next((j for j in range(first_art) if row[j] != 0), -1)
            if c >= 0:
                tab.pivot(i, c)
            else:
                del tab.rows[i]
                del tab.basis[i]
        # Artificial columns are contiguous at the end; slice them off.
        for i, row in enumerate(tab.rows):
            tab.rows[i] = row[:first_art] + [row[ncols]]
        ncols = first_art

    costs: dict[int, Fraction] = {}
    for j, v in objective.items():
        if not 0 <= j < num_vars:
            raise ValueError(f"objective index {j} out of range")
        costs[j] = Fraction(v)
    tab.set_objective(costs)
    status = tab.optimize()
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, None, None)

    x = [_ZERO] * num_vars
    for i, b in enumerate(tab.basis):
        if b < num_vars:
            x[b] = tab.rows[i][ncols]
    value = tab.obj[ncols]
    return LpResult(OPTIMAL, value, x)
