"""Independent test oracles: brute force, dynamic programming, and BFS.

Everything here is deliberately dumb and separate from the library's
algorithms so the two sides can disagree when one is wrong.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations, permutations

from ulamcode.perm import Perm


def brute_lis(sigma) -> int:
    """LIS by trying every subsequence, longest first (tiny inputs only)."""
    n = len(sigma)
    for length in range(n, 0, -1):
        for picks in combinations(range(n), length):
            vals = [sigma[i] for i in picks]
            if all(a < b for a, b in zip(vals, vals[1:])):
                return length
    return 0


def dp_lcs(a, b) -> int:
    """Textbook O(n^2) longest-common-subsequence table."""
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[n][m]


def move_neighbors(sigma: Perm) -> set[Perm]:
    """All permutations one symbol-move away from sigma."""
    n = len(sigma)
    out: set[Perm] = set()
    for i in range(n):
        rest = list(sigma[:i]) + list(sigma[i + 1 :])
        for j in range(n):
            if j == i:
                continue
            cand = rest[:j] + [sigma[i]] + rest[j:]
            out.add(tuple(cand))
    out.discard(sigma)
    return out


def bfs_distances(source: Perm) -> dict[Perm, int]:
    """Graph distance from source to all of S_n under single symbol moves."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        cur = queue.popleft()
        for nxt in move_neighbors(cur):
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    return dist


def bfs_ball_sizes(n: int) -> dict[int, int]:
    """|B(r)| for all r, straight from BFS around the identity."""
    e = tuple(range(1, n + 1))
    dist = bfs_distances(e)
    sizes: dict[int, int] = {}
    for r in range(n):
        sizes[r] = sum(1 for v in dist.values() if v <= r)
    return sizes


def right_move_one_line(n: int, i: int, j: int) -> Perm:
    """One-line word [1..i-1, i+1..j, i, j+1..n] for 1 <= i < j <= n."""
    assert 1 <= i < j <= n
    word = list(range(1, i)) + list(range(i + 1, j + 1)) + [i] + list(range(j + 1, n + 1))
    return tuple(word)


def left_move_one_line(n: int, i: int, j: int) -> Perm:
    """One-line word [1..i-1, j, i..j-1, j+1..n] for 1 <= i < j <= n.

    This is the printed left-move form read with the moved symbol at the
    later position: symbol j jumps left to position i.
    """
    assert 1 <= i < j <= n
    word = list(range(1, i)) + [j] + list(range(i, j)) + list(range(j + 1, n + 1))
    return tuple(word)


def all_perms(n: int) -> list[Perm]:
    return [tuple(p) for p in permutations(range(1, n + 1))]
