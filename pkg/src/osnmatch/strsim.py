"""Nine character-level string similarity measures, plus a common [0, 1] scale.

All measures compare lowercase-folded text at the level of Unicode code
points. Distance-like measures (Levenshtein, Damerau-Levenshtein, Editex)
return raw nonnegative integers; ``normalized_similarity`` maps every
measure onto [0, 1] with 1.0 meaning identical.
"""

from __future__ import annotations

import bz2
import math
from collections import Counter
from enum import Enum


class Measure(str, Enum):
    """The available similarity measures."""

    LEVENSHTEIN = "levenshtein"
    DAMERAU_LEVENSHTEIN = "damerau-levenshtein"
    EDITEX = "editex"
    JARO_WINKLER = "jaro-winkler"
    JACCARD_2GRAM = "jaccard"
    NCD_BZIP2 = "ncd-bzip2"
    LCS = "lcs"
    SMITH_WATERMAN = "smith-waterman"
    COSINE_2GRAM = "cosine"


def _fold(text: str) -> str:
    return text.lower()


def levenshtein(a: str, b: str) -> int:
    """Minimum number of single-character insertions, deletions or
    substitutions turning one string into the other."""
    s, t = _fold(a), _fold(b)
    if len(s) < len(t):
        s, t = t, s
    if not t:
        return len(s)
    prev = list(range(len(t) + 1))
    for i, cs in enumerate(s, 1):
        cur = [i]
        for j, ct in enumerate(t, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (cs != ct)))
        prev = cur
    return prev[-1]


def damerau_levenshtein(a: str, b: str) -> int:
    """Edit distance that additionally allows transposing two adjacent
    characters (optimal string alignment: a transposed block is not
    edited again), so never exceeds plain Levenshtein."""
    s, t = _fold(a), _fold(b)
    m, n = len(s), len(t)
    if m == 0 or n == 0:
        return max(m, n)
    prev2 = [0] * (n + 1)
    prev = list(range(n + 1))
    for i in range(1, m + 1):
        cur = [i] + [0] * n
        for j in range(1, n + 1):
            cost = s[i - 1] != t[j - 1]
            d = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
            if i > 1 and j > 1 and s[i - 1] == t[j - 2] and s[i - 2] == t[j - 1]:
                d = min(d, prev2[j - 2] + 1)
            cur[j] = d
        prev2, prev = prev, cur
    return prev[n]


# Phonetic letter groups: a substitution inside one group costs 1 instead
# of 2. Letters may belong to more than one group (c, p, s, z do).
_EDITEX_GROUPS = (
    "aeiouy", "bp", "ckq", "dt", "lr", "mn", "gj", "fpv", "sxz", "csz",
)

_GROUPS_BY_CHAR: dict[str, frozenset[int]] = {}
for _gi, _letters in enumerate(_EDITEX_GROUPS):
    for _ch in _letters:
        _GROUPS_BY_CHAR.setdefault(_ch, frozenset())
        _GROUPS_BY_CHAR[_ch] = _GROUPS_BY_CHAR[_ch] | {_gi}


def _editex_r(x: str | None, y: str | None) -> int:
    if x == y:
        return 0
    if x is None or y is None:
        return 2
    if _GROUPS_BY_CHAR.get(x, frozenset()) & _GROUPS_BY_CHAR.get(y, frozenset()):
        return 1
    return 2


def _editex_d(x: str | None, y: str | None) -> int:
    # h and w are often silent: skipping over them costs 1, not 2.
    if x in ("h", "w") and x != y:
        return 1
    return _editex_r(x, y)


def editex(a: str, b: str) -> int:
    """Phonetic edit distance: substitution cost is 0 for equal characters,
    1 within a shared letter group, 2 otherwise; deleting a silent h/w
    costs 1. Characters outside every group (digits etc.) only ever match
    themselves.

    Boundary rows accumulate the deletion cost of each character against
    its predecessor; the first character's predecessor is a sentinel that
    matches nothing (cost 2).
    """
    s, t = _fold(a), _fold(b)
    m, n = len(s), len(t)
    if m == 0 and n == 0:
        return 0

    def s_prev(i: int) -> str | None:  # predecessor of s_i, 1-based
        return s[i - 2] if i >= 2 else None

    def t_prev(j: int) -> str | None:
        return t[j - 2] if j >= 2 else None

    prev = [0] * (n + 1)
    for j in range(1, n + 1):
        prev[j] = prev[j - 1] + _editex_d(t_prev(j), t[j - 1])
    for i in range(1, m + 1):
        del_cost = _editex_d(s_prev(i), s[i - 1])
        cur = [prev[0] + del_cost] + [0] * n
        for j in range(1, n + 1):
            cur[j] = min(
                prev[j] + del_cost,
                cur[j - 1] + _editex_d(t_prev(j), t[j - 1]),
                prev[j - 1] + _editex_r(s[i - 1], t[j - 1]),
            )
        prev = cur
    return prev[n]


def _jaro(s: str, t: str) -> float:
    if s == t:
        return 1.0
    len_s, len_t = len(s), len(t)
    if len_s == 0 or len_t == 0:
        return 0.0
    window = max(max(len_s, len_t) // 2 - 1, 0)
    s_hit = [False] * len_s
    t_hit = [False] * len_t
    matches = 0
    for i in range(len_s):
        lo = max(0, i - window)
        hi = min(i + window + 1, len_t)
        for j in range(lo, hi):
            if not t_hit[j] and s[i] == t[j]:
                s_hit[i] = t_hit[j] = True
                matches += 1
                break
    if matches == 0:
        return 0.0
    transpositions = 0
    k = 0
    for i in range(len_s):
        if not s_hit[i]:
            continue
        while not t_hit[k]:
            k += 1
        if s[i] != t[k]:
            transpositions += 1
        k += 1
    transpositions //= 2
    return (
        matches / len_s + matches / len_t + (matches - transpositions) / matches
    ) / 3.0


def jaro_winkler(a: str, b: str) -> float:
    """Jaro similarity boosted by a shared-prefix bonus (prefix capped at
    4 characters, scaling factor 0.1). Result lies in [0, 1]."""
    s, t = _fold(a), _fold(b)
    jaro = _jaro(s, t)
    prefix = 0
    for cs, ct in zip(s[:4], t[:4]):
        if cs != ct:
            break
        prefix += 1
    return jaro + prefix * 0.1 * (1.0 - jaro)


def _bigrams(s: str) -> set[str]:
    return {s[i : i + 2] for i in range(len(s) - 1)}


def jaccard_2gram(a: str, b: str) -> float:
    """Jaccard coefficient |A∩B| / |A∪B| over the sets of character
    2-grams. Strings too short to form a 2-gram count as identical only
    when equal."""
    s, t = _fold(a), _fold(b)
    ga, gb = _bigrams(s), _bigrams(t)
    if not ga or not gb:
        return 1.0 if (not ga and not gb and s == t) else 0.0
    return len(ga & gb) / len(ga | gb)


def _compressed_len(data: bytes) -> int:
    return len(bz2.compress(data))


def ncd_bzip2(a: str, b: str) -> float:
    """Normalized compression distance under bzip2:
    (C(ab) - min(C(a), C(b))) / max(C(a), C(b)) over UTF-8 bytes.
    A distance, not a similarity: 0 means alike, values can slightly
    exceed 1 due to compressor overhead."""
    xa, xb = _fold(a).encode("utf-8"), _fold(b).encode("utf-8")
    ca, cb = _compressed_len(xa), _compressed_len(xb)
    cab = _compressed_len(xa + xb)
    assert max(ca, cb) > 0  # bzip2 headers are never empty
    return (cab - min(ca, cb)) / max(ca, cb)


def lcs_length(a: str, b: str) -> int:
    """Length of the longest common subsequence."""
    s, t = _fold(a), _fold(b)
    if not s or not t:
        return 0
    prev = [0] * (len(t) + 1)
    for cs in s:
        cur = [0]
        for j, ct in enumerate(t, 1):
            if cs == ct:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def smith_waterman(a: str, b: str) -> int:
    """Best local alignment score with match=+1, mismatch=-1, gap=-1.
    Cells never drop below zero; the returned score is the maximum cell
    of the scoring matrix (the value a traceback would start from)."""
    s, t = _fold(a), _fold(b)
    if not s or not t:
        return 0
    best = 0
    prev = [0] * (len(t) + 1)
    for cs in s:
        cur = [0]
        for j, ct in enumerate(t, 1):
            score = max(
                0,
                prev[j - 1] + (1 if cs == ct else -1),
                prev[j] - 1,
                cur[j - 1] - 1,
            )
            cur.append(score)
            if score > best:
                best = score
        prev = cur
    return best


def _bigram_counts(s: str) -> Counter[str]:
    return Counter(s[i : i + 2] for i in range(len(s) - 1))


def cosine_2gram(a: str, b: str) -> float:
    """Cosine of the angle between character 2-gram count vectors."""
    s, t = _fold(a), _fold(b)
    if s == t:
        return 1.0
    ca, cb = _bigram_counts(s), _bigram_counts(t)
    if not ca or not cb:
        return 0.0
    dot = sum(n * cb[g] for g, n in ca.items())
    norm = math.sqrt(sum(n * n for n in ca.values())) * math.sqrt(
        sum(n * n for n in cb.values())
    )
    return dot / norm


def normalized_similarity(measure: Measure, a: str, b: str) -> float:
    """Map a raw measure onto [0, 1], higher meaning more similar.

    Equal strings (after folding) always score 1.0. Distances are scaled
    by the worst case on strings of these lengths; Editex substitutions
    cost up to 2 per character, hence the factor of 2.
    """
    s, t = _fold(a), _fold(b)
    if s == t:
        return 1.0
    longest = max(len(s), len(t))
    if measure is Measure.LEVENSHTEIN:
        return 1.0 - levenshtein(s, t) / longest
    if measure is Measure.DAMERAU_LEVENSHTEIN:
        return 1.0 - damerau_levenshtein(s, t) / longest
    if measure is Measure.EDITEX:
        return 1.0 - editex(s, t) / (2 * longest)
    if measure is Measure.JARO_WINKLER:
        return jaro_winkler(s, t)
    if measure is Measure.JACCARD_2GRAM:
        return jaccard_2gram(s, t)
    if measure is Measure.NCD_BZIP2:
        return min(max(1.0 - ncd_bzip2(s, t), 0.0), 1.0)
    if measure is Measure.LCS:
        return lcs_length(s, t) / longest
    if measure is Measure.SMITH_WATERMAN:
        shortest = min(len(s), len(t))
        if shortest == 0:
            return 0.0
        return smith_waterman(s, t) / shortest
    if measure is Measure.COSINE_2GRAM:
        return cosine_2gram(s, t)
    raise ValueError(f"unknown measure: {measure!r}")
