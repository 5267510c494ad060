"""Independent reference implementations used only by tests.

Each oracle is a direct recursive transcription of the defining
recurrence, kept deliberately separate from the iterative DP code under
test (including its own copy of the phonetic letter groups). The *_memo
variants evaluate the identical recurrence with memoization so larger
strings stay affordable.
"""

from __future__ import annotations

from functools import lru_cache


def levenshtein_naive(a: str, b: str) -> int:
    def rec(i, j):
        if min(i, j) == 0:
            return max(i, j)
        return min(
            rec(i - 1, j) + 1,
            rec(i, j - 1) + 1,
            rec(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return rec(len(a), len(b))


def levenshtein_memo(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def rec(i, j):
        if min(i, j) == 0:
            return max(i, j)
        return min(
            rec(i - 1, j) + 1,
            rec(i, j - 1) + 1,
            rec(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
        )

    return rec(len(a), len(b))


def osa_naive(a: str, b: str) -> int:
    def rec(i, j):
        if i == 0 and j == 0:
            return 0
        options = []
        if i > 0:
            options.append(rec(i - 1, j) + 1)
        if j > 0:
            options.append(rec(i, j - 1) + 1)
        if i > 0 and j > 0:
            options.append(rec(i - 1, j - 1) + (a[i - 1] != b[j - 1]))
        if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
            options.append(rec(i - 2, j - 2) + 1)
        return min(options)

    return rec(len(a), len(b))


def osa_memo(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == 0 and j == 0:
            return 0
        options = []
        if i > 0:
            options.append(rec(i - 1, j) + 1)
        if j > 0:
            options.append(rec(i, j - 1) + 1)
        if i > 0 and j > 0:
            options.append(rec(i - 1, j - 1) + (a[i - 1] != b[j - 1]))
        if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
            options.append(rec(i - 2, j - 2) + 1)
        return min(options)

    return rec(len(a), len(b))


# independent transcription of the phonetic letter groups
_GROUPS = ("aeiouy", "bp", "ckq", "dt", "lr", "mn", "gj", "fpv", "sxz", "csz")


def _r(x, y):
    if x == y:
        return 0
    if x is None or y is None:
        return 2
    if any(x in g and y in g for g in _GROUPS):
        return 1
    return 2


def _d(x, y):
    if x in ("h", "w") and x != y:
        return 1
    return _r(x, y)


def _editex_rec(a: str, b: str, memo: bool) -> int:
    def s_prev(i):
        return a[i - 2] if i >= 2 else None

    def t_prev(j):
        return b[j - 2] if j >= 2 else None

    def rec(i, j):
        if i == 0 and j == 0:
            return 0
        if j == 0:
            return rec(i - 1, 0) + _d(s_prev(i), a[i - 1])
        if i == 0:
            return rec(0, j - 1) + _d(t_prev(j), b[j - 1])
        return min(
            rec(i - 1, j) + _d(s_prev(i), a[i - 1]),
            rec(i, j - 1) + _d(t_prev(j), b[j - 1]),
            rec(i - 1, j - 1) + _r(a[i - 1], b[j - 1]),
        )

    if memo:
        rec = lru_cache(maxsize=None)(rec)
    return rec(len(a), len(b))


def editex_naive(a: str, b: str) -> int:
    return _editex_rec(a, b, memo=False)


def editex_memo(a: str, b: str) -> int:
    return _editex_rec(a, b, memo=True)


def lcs_naive(a: str, b: str) -> int:
    def rec(i, j):
        if i == 0 or j == 0:
            return 0
        if a[i - 1] == b[j - 1]:
            return rec(i - 1, j - 1) + 1
        return max(rec(i, j - 1), rec(i - 1, j))

    return rec(len(a), len(b))


def lcs_memo(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == 0 or j == 0:
            return 0
        if a[i - 1] == b[j - 1]:
            return rec(i - 1, j - 1) + 1
        return max(rec(i, j - 1), rec(i - 1, j))

    return rec(len(a), len(b))


def smith_waterman_full_matrix(
    a: str, b: str, match: int = 1, mismatch: int = -1, gap: int = -1
) -> int:
    """Full scoring-matrix construction; returns the maximum cell."""
    rows, cols = len(a) + 1, len(b) + 1
    h = [[0] * cols for _ in range(rows)]
    best = 0
    for i in range(1, rows):
        for j in range(1, cols):
            diag = h[i - 1][j - 1] + (match if a[i - 1] == b[j - 1] else mismatch)
            h[i][j] = max(0, diag, h[i - 1][j] + gap, h[i][j - 1] + gap)
            best = max(best, h[i][j])
    return best


def all_strings(alphabet: str, max_len: int):
    """Every string over ``alphabet`` with length <= max_len."""
    out = [""]
    frontier = [""]
    for _ in range(max_len):
        frontier = [s + c for s in frontier for c in alphabet]
        out.extend(frontier)
    return out
