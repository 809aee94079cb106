"""Integer-programming upper bound on maximum Ulam-code sizes.

The model counts, for each symbol a and each split point l, how many
length-(n-d+1) symbol patterns with a in the middle can occur across all
codewords: a code with minimum distance d repeats no such pattern, and
only (n-1)!/(d-1)! patterns exist, which caps a weighted sum of the
position counts X[b][a].  Maximizing the number of codewords subject to
those caps yields an upper bound on the code size.

The solver is exact end to end: rational simplex relaxations drive a
deterministic best-bound branch-and-bound, so returned bounds are
certificates, never float artifacts.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .bounds import CodeParams, singleton_upper
from .budget import SearchBudget
from .simplex import EQ, GE, INFEASIBLE, LE, LpResult, solve_lp

Var = tuple[int, int]  # (b, a): position b holds symbol a
Row = tuple[dict[Var, int], int]

OPTIMAL = "optimal"
BOUND_ONLY = "bound_only"


@dataclass
class IlpModel:
    """The position-count program for one (n, d) pair.

    ``extra_rows`` is an extension hook: callers may append additional
    valid inequality rows (e.g. joint position-pair counts) before solving;
    nothing in this package generates them.
    """

    n: int
    d: int
    variables: tuple[Var, ...]
    inequality_rows: list[Row]
    equality_rows: list[Row]
    objective: dict[Var, int]
    var_upper: dict[Var, int]
    row_meta: list[tuple[int, int]]  # (a, l) behind each inequality row


@dataclass
class IlpSolution:
    status: str  # "optimal" | "bound_only" | "infeasible"
    objective_value: int
    assignment: Optional[dict[Var, int]]
    lp_relaxation_value: Fraction
    nodes_explored: int = 0
    elapsed: float = 0.0


def build_model(
    params: CodeParams, extra_rows: Optional[Iterable[Row]] = None
) -> IlpModel:
    """Build the program: for every symbol a and split l in 0..n-d,

        sum_b C(b-1, l) C(n-b, n-d-l) X[b][a]  <=  (n-1)!/(d-1)!

    plus equal column sums across positions and max sum_a X[1][a].
    Requires d >= 2 (at d = 1 every pattern is a whole permutation and the
    program is vacuous; ip_upper_bound short-circuits to n!).
    """
    n, d = params.n, params.d
    if d < 2:
        raise ValueError("model is only defined for d >= 2; use n! for d = 1")
    rhs = math.factorial(n - 1) // math.factorial(d - 1)

    variables = tuple((b, a) for b in range(1, n + 1) for a in range(1, n + 1))
    ineq: list[Row] = []
    meta: list[tuple[int, int]] = []
    for a in range(1, n + 1):
        for l in range(0, n - d + 1):
            coeffs: dict[Var, int] = {}
            for b in range(1, n + 1):
                c = math.comb(b - 1, l) * math.comb(n - b, n - d - l)
                if c:
                    coeffs[(b, a)] = c
            ineq.append((coeffs, rhs))
            meta.append((a, l))
    if extra_rows is not None:
        for coeffs, b in extra_rows:
            ineq.append((dict(coeffs), b))
            meta.append((-1, -1))

    eq: list[Row] = []
    for b in range(1, n):
        coeffs = {(b, a): 1 for a in range(1, n + 1)}
        coeffs.update({(b + 1, a): -1 for a in range(1, n + 1)})
        eq.append((coeffs, 0))

    objective = {(1, a): 1 for a in range(1, n + 1)}

    var_upper: dict[Var, int] = {}
    for v in variables:
        caps = [r // coeffs[v] for coeffs, r in ineq if v in coeffs]
        if not caps:
            raise AssertionError(f"variable {v} missing from every covering row")
        var_upper[v] = min(caps)

    return IlpModel(
        n=n,
        d=d,
        variables=variables,
        inequality_rows=ineq,
        equality_rows=eq,
        objective=objective,
        var_upper=var_upper,
        row_meta=meta,
    )


def _lp_result(
    model: IlpModel, var_bounds: Optional[dict[Var, tuple[int, Optional[int]]]] = None
) -> LpResult:
    index = {v: k for k, v in enumerate(model.variables)}
    rows: list[tuple[dict[int, int], str, int]] = []
    for coeffs, rhs in model.inequality_rows:
        rows.append(({index[v]: c for v, c in coeffs.items()}, LE, rhs))
    for coeffs, rhs in model.equality_rows:
        rows.append(({index[v]: c for v, c in coeffs.items()}, EQ, rhs))
    if var_bounds:
        for v in sorted(var_bounds):
            lo, hi = var_bounds[v]
            if lo > 0:
                rows.append(({index[v]: 1}, GE, lo))
            if hi is not None:
                rows.append(({index[v]: 1}, LE, hi))
    objective = {index[v]: c for v, c in model.objective.items()}
    return solve_lp(len(model.variables), rows, objective)


def solve_lp_relaxation(model: IlpModel) -> Fraction:
    """Exact optimal value of the continuous relaxation."""
    res = _lp_result(model)
    if res.status != "optimal":
        raise AssertionError(f"relaxation should be solvable, got {res.status}")
    return res.value


def _is_integral(x: Sequence[Fraction]) -> bool:
    return all(v.denominator == 1 for v in x)


def solve_ilp(model: IlpModel, budget: Optional[SearchBudget] = None) -> IlpSolution:
    """Exact integer optimum by best-bound branch-and-bound.

    Branches on the most-fractional variable (ties to the smallest (b, a)),
    explores nodes best-bound-first with FIFO tie-break, and prunes with
    exact rational relaxation values.  With an exhausted budget the result
    is a proven upper bound (status "bound_only"), never a silent guess.
    """
    budget = budget or SearchBudget()
    clock = budget.start()

    root = _lp_result(model)
    nodes = 1
    if root.status == INFEASIBLE:
        return IlpSolution(
            status="infeasible",
            objective_value=0,
            assignment=None,
            lp_relaxation_value=Fraction(0),
            nodes_explored=nodes,
            elapsed=clock.elapsed(),
        )
    root_value = root.value

    # Feasible warm start: the constant matrix X[b][a] = m with the largest
    # m every covering row allows.
    mstar = min(rhs // sum(coeffs.values()) for coeffs, rhs in model.inequality_rows)
    best_value = model.n * mstar
    best_x: dict[Var, int] = {v: mstar for v in model.variables}

    def floor_of(value: Fraction) -> int:
        return value.numerator // value.denominator

    counter = 0
    heap: list[tuple[Fraction, int, dict, list[Fraction]]] = []

    def consider(value: Fraction, x: list[Fraction], bounds: dict) -> None:
        nonlocal best_value, best_x, counter
        if _is_integral(x):
            iv = floor_of(value)
            if iv > best_value:
                best_value = iv
                best_x = {v: int(x[k]) for k, v in enumerate(model.variables)}
            return
        if floor_of(value) > best_value:
            counter += 1
            heapq.heappush(heap, (-value, counter, bounds, x))

    consider(root_value, root.x, {})

    status = OPTIMAL
    while heap:
        if clock.exhausted(nodes):
            status = BOUND_ONLY
            break
        neg, _, bounds, x = heapq.heappop(heap)
        lp_value = -neg
        if floor_of(lp_value) <= best_value:
            # Best-bound order: nothing left can beat the incumbent.
            heap.clear()
            break
        branch_var = None
        branch_frac = Fraction(-1)
        branch_val = Fraction(0)
        for k, v in enumerate(model.variables):
            f = x[k] - (x[k].numerator // x[k].denominator)
            if f == 0:
                continue
            score = min(f, 1 - f)
            if score > branch_frac:
                branch_frac = score
                branch_var = v
                branch_val = x[k]
        if branch_var is None:
            raise AssertionError("non-integral node without fractional variable")
        lo0, hi0 = bounds.get(branch_var, (0, None))
        fl = branch_val.numerator // branch_val.denominator
        for new in ((lo0, fl), (fl + 1, hi0)):
            child = dict(bounds)
            child[branch_var] = new
            res = _lp_result(model, child)
            nodes += 1
            if res.status == INFEASIBLE:
                continue
            consider(res.value, res.x, child)

    if status == BOUND_ONLY:
        open_bounds = [floor_of(-neg) for neg, _, _, _ in heap]
        proven = max([best_value] + open_bounds)
        return IlpSolution(
            status=BOUND_ONLY,
            objective_value=proven,
            assignment=best_x,
            lp_relaxation_value=root_value,
            nodes_explored=nodes,
            elapsed=clock.elapsed(),
        )
    return IlpSolution(
        status=OPTIMAL,
        objective_value=best_value,
        assignment=best_x,
        lp_relaxation_value=root_value,
        nodes_explored=nodes,
        elapsed=clock.elapsed(),
    )


def ip_upper_bound(params: CodeParams, budget: Optional[SearchBudget] = None) -> int:
    """min(Singleton, proven integer-program bound); valid for any budget."""
    cap = singleton_upper(params)
    if params.d == 1:
        return math.factorial(params.n)
    sol = solve_ilp(build_model(params), budget)
    return min(cap, sol.objective_value)


def export_lp(model: IlpModel) -> str:
    """Render the model in LP text format (deterministic output).

    Variables are named x_<b>_<a> with 1-based indices; constraint names
    carry the (a, l) pair behind each covering row.
    """

    def term(coeff: int, var: Var, first: bool) -> str:
        b, a = var
        name = f"x_{b}_{a}"
        mag = abs(coeff)
        body = name if mag == 1 else f"{mag} {name}"
        if first:
            return body if coeff > 0 else f"- {body}"
        return f"+ {body}" if coeff > 0 else f"- {body}"

    def linear(coeffs: dict[Var, int]) -> str:
        parts = []
        for v in sorted(coeffs):
            if coeffs[v] == 0:
                continue
            parts.append(term(coeffs[v], v, first=not parts))
        return " ".join(parts)

    lines = [f"\\ maximum-codewords bound model, n={model.n} d={model.d}"]
    lines.append("Maximize")
    lines.append(f" obj: {linear(model.objective)}")
    lines.append("Subject To")
    for (coeffs, rhs), (a, l) in zip(model.inequality_rows, model.row_meta):
        name = f"cover_a{a}_l{l}" if a > 0 else "extra"
        lines.append(f" {name}: {linear(coeffs)} <= {rhs}")
    for b, (coeffs, rhs) in enumerate(model.equality_rows, start=1):
        lines.append(f" link_b{b}: {linear(coeffs)} = {rhs}")
    lines.append("Bounds")
    for v in model.variables:
        lines.append(f" 0 <= x_{v[0]}_{v[1]} <= {model.var_upper[v]}")
    lines.append("General")
    for v in model.variables:
        lines.append(f" x_{v[0]}_{v[1]}")
    lines.append("End")
    return "\n".join(lines) + "\n"
