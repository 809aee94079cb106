"""Exact maximum-code search in the Ulam metric.

Vertices are permutations, adjacency means distance >= d, and codes are
cliques.  The search space collapses through color classes: the class of a
permutation is the relative order of the symbols 1..n-d+1 in its one-line
word, any valid code uses each class at most once, and a Singleton-optimal
code uses every class exactly once.  Left-invariance lets the identity be
fixed as the representative of its own class without losing generality.

Candidate sets are bitmasks over S_n in lexicographic order.  The
distance-at-least-d row of a permutation is computed on demand (one
vectorized LIS sweep over all of S_n) and memoized, so the full pairwise
graph is never materialized.

Everything returned is certified: codes re-verify by exact pairwise
distance, "proven maximum" means the tree was exhausted or the supplied
upper bound was met, and budget exhaustion is always an explicit status.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .ball import DEFAULT_ENUM_LIMIT, _lis_lengths_batch, sphere_packing_bounds
from .bounds import CodeParams, gv_lower, singleton_upper
from .budget import SearchBudget
from .errors import CapacityError, DistanceViolation
from .perm import (
    Perm,
    format_permutation,
    identity,
    iter_symmetric_group,
    parse_permutation,
    ulam_distance,
)

DEFAULT_SEARCH_LIMIT = 9
# Default node cap for the cells the search cannot settle at desk scale
# (n = 7 below d = 5, and all of n >= 8); lifted by long_runs or any
# explicit budget.
HARD_CELL_NODE_CAP = 200_000

FOUND = "found"
NONE_EXISTS = "none_exists"
BUDGET_EXHAUSTED = "budget_exhausted"
PROVEN_MAXIMUM = "proven_maximum"
LOWER_BOUND_ONLY = "lower_bound_only"


@dataclass(frozen=True)
class ColorClass:
    """Relative order of the symbols 1..n-d+1 inside a one-line word."""

    pattern: Perm


@dataclass(frozen=True)
class Code:
    params: CodeParams
    words: frozenset[Perm]
    min_distance: int


@dataclass
class SearchResult:
    code: Code
    optimality: str  # "proven_maximum" | "lower_bound_only"
    upper_bound_used: int
    nodes_explored: int
    elapsed: float


@dataclass
class SingletonSearchResult:
    status: str  # "found" | "none_exists" | "budget_exhausted"
    code: Optional[Code]
    nodes_explored: int
    elapsed: float


def color_class(sigma: Perm, params: CodeParams) -> ColorClass:
    """Class of sigma: its symbols <= n-d+1 in order of appearance."""
    if params.d < 2:
        raise ValueError("color classes need d >= 2 (at d = 1 every class is trivial)")
    if len(sigma) != params.n:
        raise ValueError(f"permutation has length {len(sigma)}, expected {params.n}")
    m = params.n - params.d + 1
    return ColorClass(pattern=tuple(v for v in sigma if v <= m))


def verify_code(words: Sequence[Perm] | frozenset[Perm], params: CodeParams) -> Code:
    """Check all pairwise distances and return a certified Code.

    Raises DistanceViolation naming a closest offending pair when some pair
    sits at distance < d.  min_distance is n for codes with <= 1 word.
    """
    wordlist = sorted(set(words))
    if not wordlist:
        raise ValueError("a code needs at least one word")
    for w in wordlist:
        if len(w) != params.n:
            raise ValueError(f"word of length {len(w)} in a length-{params.n} code")
    min_d = params.n
    closest: Optional[tuple[Perm, Perm]] = None
    for i, u in enumerate(wordlist):
        for w in wordlist[i + 1 :]:
            dist = ulam_distance(u, w)
            if dist < min_d:
                min_d = dist
                closest = (u, w)
    if min_d < params.d:
        assert closest is not None
        raise DistanceViolation(closest[0], closest[1], min_d, params.d)
    return Code(params=params, words=frozenset(wordlist), min_distance=min_d)


def class_partition(params: CodeParams) -> dict[Perm, list[Perm]]:
    """All of S_n grouped by class pattern; patterns and members in lex order."""
    m = params.n - params.d + 1
    groups: dict[Perm, list[Perm]] = {}
    for sigma in iter_symmetric_group(params.n):
        pattern = tuple(v for v in sigma if v <= m)
        groups.setdefault(pattern, []).append(sigma)
    return dict(sorted(groups.items()))


class _SearchSpace:
    """S_n indexed lexicographically, with memoized distance->=d bit rows."""

    def __init__(self, params: CodeParams):
        self.params = params
        self.perms: list[Perm] = list(iter_symmetric_group(params.n))
        self.index: dict[Perm, int] = {p: i for i, p in enumerate(self.perms)}
        self._arr = np.array(self.perms, dtype=np.int64)
        self._pos = np.argsort(self._arr, axis=1)
        self._rows: dict[int, int] = {}

    def far_row(self, gi: int) -> int:
        """Bitmask of every permutation at distance >= d from perms[gi]."""
        row = self._rows.get(gi)
        if row is None:
            mapped = self._pos[gi][self._arr - 1]
            lengths = _lis_lengths_batch(mapped)
            bits = lengths <= (self.params.n - self.params.d)
            row = int.from_bytes(
                np.packbits(bits, bitorder="little").tobytes(), "little"
            )
            self._rows[gi] = row
        return row

    def mask_of(self, words: Sequence[Perm]) -> int:
        mask = 0
        for w in words:
            mask |= 1 << self.index[w]
        return mask

    def bits(self, mask: int):
        """Yield set-bit indices in ascending (lexicographic) order."""
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low


def _check_limits(params: CodeParams, search_limit: int) -> None:
    if params.d < 2:
        raise ValueError("search needs d >= 2; A(n, 1) = n! holds trivially")
    if params.n > search_limit:
        raise CapacityError(
            f"search over S_{params.n} exceeds the limit {search_limit}; "
            f"raise it explicitly to proceed"
        )


class _BudgetStop(Exception):
    pass


def _is_hard_cell(n: int, d: int) -> bool:
    # Everything outside "n <= 6 any d" and "n = 7 with d >= 5" lacks a
    # desk-scale proof; d = 2 at those sizes is settled by construction,
    # so searching it is equally unbounded work.
    return (n == 7 and d <= 4) or n >= 8


def _effective_budget(
    params: CodeParams, budget: Optional[SearchBudget]
) -> SearchBudget:
    """Unbudgeted runs on the known-hard cells default to bound-only mode."""
    if budget is not None:
        return budget
    if _is_hard_cell(params.n, params.d):
        return SearchBudget(max_nodes=HARD_CELL_NODE_CAP)
    return SearchBudget()


def find_singleton_optimal(
    params: CodeParams,
    budget: Optional[SearchBudget] = None,
    search_limit: int = DEFAULT_SEARCH_LIMIT,
) -> SingletonSearchResult:
    """Search for a code meeting the Singleton bound: one word per class.

    Exhausting the tree proves non-existence; running out of budget is the
    distinct status "budget_exhausted".  Without an explicit budget, the
    cells with no desk-scale proof get a default node cap.
    """
    _check_limits(params, search_limit)
    budget = _effective_budget(params, budget)
    clock = budget.start()
    space = _SearchSpace(params)
    groups = class_partition(params)
    patterns = list(groups)
    if len(patterns) > 900:
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 2 * len(patterns) + 100))

    e = identity(params.n)
    id_pattern = tuple(range(1, params.n - params.d + 2))
    rest = [p for p in patterns if p != id_pattern]
    e_row = space.far_row(space.index[e])
    candidates: dict[Perm, int] = {p: space.mask_of(groups[p]) & e_row for p in rest}
    nodes = 0
    chosen: list[int] = [space.index[e]]
    solution: Optional[list[int]] = None

    def dfs(level: int) -> bool:
        nonlocal nodes, solution
        if level == len(rest):
            solution = list(chosen)
            return True
        for gi in space.bits(candidates[rest[level]]):
            nodes += 1
            if clock.exhausted(nodes):
                raise _BudgetStop
            row = space.far_row(gi)
            saved = []
            dead = False
            for q in rest[level + 1 :]:
                filtered = candidates[q] & row
                saved.append((q, candidates[q]))
                candidates[q] = filtered
                if not filtered:
                    dead = True
                    break
            if not dead:
                chosen.append(gi)
                if dfs(level + 1):
                    return True
                chosen.pop()
            for q, old in saved:
                candidates[q] = old
        return False

    try:
        found = dfs(0)
    except _BudgetStop:
        return SingletonSearchResult(
            status=BUDGET_EXHAUSTED, code=None, nodes_explored=nodes,
            elapsed=clock.elapsed(),
        )
    if not found:
        return SingletonSearchResult(
            status=NONE_EXISTS, code=None, nodes_explored=nodes,
            elapsed=clock.elapsed(),
        )
    code = verify_code([space.perms[gi] for gi in solution], params)
    if len(code.words) != singleton_upper(params):
        raise AssertionError("singleton search returned a wrong-sized code")
    return SingletonSearchResult(
        status=FOUND, code=code, nodes_explored=nodes, elapsed=clock.elapsed()
    )


def max_code_search(
    params: CodeParams,
    budget: Optional[SearchBudget] = None,
    upper_bound: Optional[int] = None,
    fix_identity: bool = True,
    class_order: Optional[Sequence[Perm]] = None,
    search_limit: int = DEFAULT_SEARCH_LIMIT,
) -> SearchResult:
    """Best code found by branch-and-bound over classes (at most one each).

    Prunes on the remaining-class count and on ``upper_bound`` (pass the
    best precomputed analytic/IP bound; defaults to the Singleton bound).
    Optimality is "proven_maximum" when the tree is exhausted or the bound
    is met, else "lower_bound_only".  Without an explicit budget, the cells
    with no desk-scale proof get a default node cap.
    """
    _check_limits(params, search_limit)
    budget = _effective_budget(params, budget)
    clock = budget.start()
    space = _SearchSpace(params)
    groups = class_partition(params)
    patterns = list(groups)
    if class_order is not None:
        if sorted(class_order) != sorted(patterns):
            raise ValueError("class_order must be a permutation of the patterns")
        patterns = list(class_order)
    if len(patterns) > 900:
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 2 * len(patterns) + 100))
    ceiling = upper_bound if upper_bound is not None else singleton_upper(params)

    e = identity(params.n)
    id_pattern = tuple(range(1, params.n - params.d + 2))
    if fix_identity:
        rest = [p for p in patterns if p != id_pattern]
        chosen: list[int] = [space.index[e]]
        e_row = space.far_row(space.index[e])
        candidates = {p: space.mask_of(groups[p]) & e_row for p in rest}
    else:
        rest = patterns
        chosen = []
        candidates = {p: space.mask_of(groups[p]) for p in rest}

    best: list[int] = list(chosen)
    nodes = 0
    done = False

    def dfs(level: int, live: list[Perm]) -> None:
        # ``live`` holds the patterns at index >= level that still have
        # candidates; its length bounds what this subtree can add.
        nonlocal nodes, best, done
        if len(chosen) > len(best):
            best = list(chosen)
            if len(best) >= ceiling:
                done = True
                return
        if level == len(live) or len(chosen) + (len(live) - level) <= len(best):
            return
        for gi in space.bits(candidates[live[level]]):
            nodes += 1
            if clock.exhausted(nodes):
                raise _BudgetStop
            row = space.far_row(gi)
            saved = []
            sub_live = []
            for q in live[level + 1 :]:
                filtered = candidates[q] & row
                saved.append((q, candidates[q]))
                candidates[q] = filtered
                if filtered:
                    sub_live.append(q)
            if len(chosen) + 1 + len(sub_live) > len(best):
                chosen.append(gi)
                dfs(0, sub_live)
                chosen.pop()
            for q, old in saved:
                candidates[q] = old
            if done:
                return
        dfs(level + 1, live)

    exhausted = False
    try:
        dfs(0, [p for p in rest if candidates[p]])
    except _BudgetStop:
        exhausted = True

    code = verify_code([space.perms[gi] for gi in best], params)
    optimality = LOWER_BOUND_ONLY if (exhausted and not done) else PROVEN_MAXIMUM
    return SearchResult(
        code=code,
        optimality=optimality,
        upper_bound_used=ceiling,
        nodes_explored=nodes,
        elapsed=clock.elapsed(),
    )


def write_code_file(code: Code, path: str | Path) -> None:
    """Write the canonical code file: "n d" then one word per line."""
    lines = [f"{code.params.n} {code.params.d}"]
    lines += [format_permutation(w) for w in sorted(code.words)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_code_file(path: str | Path) -> tuple[CodeParams, list[Perm]]:
    """Read the code file format; verification is the caller's job."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"empty code file {path}")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f'{path}: first line must be "n d"')
    params = CodeParams(int(head[0]), int(head[1]))
    return params, [parse_permutation(ln) for ln in lines[1:]]


@dataclass
class TableCell:
    """One (n, d) entry of the size / Singleton-optimality tables."""

    n: int
    d: int
    lower: int
    upper: int
    status: str  # "proven" | "bounded" | "skipped"
    singleton_optimal: str  # "yes" | "no" | "unknown"
    method: str  # "construction" | "search" | "bounds"
    nodes: int = 0
    elapsed: float = 0.0


def _cap_budget(budget: Optional[SearchBudget], cap: int) -> SearchBudget:
    if budget is None:
        return SearchBudget(max_nodes=cap)
    nodes = cap if budget.max_nodes is None else min(cap, budget.max_nodes)
    return SearchBudget(max_nodes=nodes, max_seconds=budget.max_seconds)


def reproduce_tables(
    n_values: Sequence[int],
    d_values: Optional[Sequence[int]] = None,
    cell_budget: Optional[SearchBudget] = None,
    with_ip: bool = False,
    enum_limit: int = DEFAULT_ENUM_LIMIT,
    search_limit: int = DEFAULT_SEARCH_LIMIT,
    long_runs: bool = False,
) -> list[TableCell]:
    """Computed A(n, d) values (or bounds) and Singleton-optimality verdicts.

    d = 2 cells come from the known construction (size (n-1)!, always
    Singleton-optimal).  Other cells run the Singleton-existence search and,
    when that fails, the maximum-code search.  Cells whose budget runs out
    are explicitly "bounded" or "skipped", never silently wrong.
    """
    cells: list[TableCell] = []
    for n in sorted(n_values):
        ds = sorted(d_values) if d_values is not None else range(2, n)
        for d in ds:
            if not 2 <= d <= n - 1:
                continue
            params = CodeParams(n, d)
            if d == 2:
                size = math.factorial(n - 1)
                cells.append(
                    TableCell(n=n, d=d, lower=size, upper=size, status="proven",
                              singleton_optimal="yes", method="construction")
                )
                continue

            budget = cell_budget
            if _is_hard_cell(n, d) and not long_runs:
                budget = _cap_budget(cell_budget, HARD_CELL_NODE_CAP)

            ceiling = singleton_upper(params)
            if n <= enum_limit:
                ceiling = min(ceiling, sphere_packing_bounds(params, limit=enum_limit)[1])
            if with_ip:
                from .ilp import ip_upper_bound

                # Integer-program nodes cost orders of magnitude more than
                # clique nodes; unbudgeted table runs get a tight cap.
                ip_budget = budget if budget is not None else SearchBudget(max_nodes=500)
                ceiling = min(ceiling, ip_upper_bound(params, ip_budget))

            try:
                sres = find_singleton_optimal(params, budget, search_limit=search_limit)
            except CapacityError:
                cells.append(
                    TableCell(n=n, d=d, lower=max(gv_lower(params), 2), upper=ceiling,
                              status="skipped", singleton_optimal="unknown",
                              method="bounds")
                )
                continue
            nodes = sres.nodes_explored
            elapsed = sres.elapsed
            if sres.status == FOUND:
                size = len(sres.code.words)
                cells.append(
                    TableCell(n=n, d=d, lower=size, upper=size, status="proven",
                              singleton_optimal="yes", method="search",
                              nodes=nodes, elapsed=elapsed)
                )
                continue
            verdict = "no" if sres.status == NONE_EXISTS else "unknown"

            mres = max_code_search(
                params, budget, upper_bound=ceiling, search_limit=search_limit
            )
            nodes += mres.nodes_explored
            elapsed += mres.elapsed
            size = len(mres.code.words)
            if mres.optimality == PROVEN_MAXIMUM:
                # A proven maximum settles the existence question too.
                verdict = "yes" if size == singleton_upper(params) else "no"
                cells.append(
                    TableCell(n=n, d=d, lower=size, upper=size, status="proven",
                              singleton_optimal=verdict, method="search",
                              nodes=nodes, elapsed=elapsed)
                )
            else:
                cells.append(
                    TableCell(n=n, d=d, lower=size, upper=ceiling, status="bounded",
                              singleton_optimal=verdict, method="search",
                              nodes=nodes, elapsed=elapsed)
                )
    return cells
