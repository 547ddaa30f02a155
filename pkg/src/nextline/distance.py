"""Distance functions between utterances.

Levenshtein works on lowercased raw strings; bag-of-words distance works
on raw-count term vectors and normalizes internally.
"""

from __future__ import annotations

import math

from nextline.textprep import TermVector


def levenshtein(a: str, b: str) -> int:
    """Minimum single-character edits turning a into b, case-insensitive.

    Two-row dynamic programming; memory is proportional to the shorter
    string.
    """
    a = a.lower()
    b = b.lower()
    if a == b:
        return 0
    if len(b) > len(a):
        a, b = b, a
    if not b:
        return len(a)

    prev = list(range(len(b) + 1))
    cur = [0] * (len(b) + 1)
    for i, ca in enumerate(a, start=1):
        cur[0] = i
        for j, cb in enumerate(b, start=1):
            cost = prev[j - 1] if ca == cb else prev[j - 1] + 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, cost)
        prev, cur = cur, prev
    return prev[-1]


def bow_distance(u: TermVector, v: TermVector, norm: str = "l1") -> float:
    """Distance between two raw-count vectors after normalization.

    L1 is the absolute difference summed over the token union of the
    L1-normalized vectors; L2 is the Euclidean distance between the
    L2-normalized vectors.  Two empty vectors are at distance 0; one
    empty vector is at distance 1 from any non-empty one (its own norm).

    Raw counts are integers, so both distances are evaluated with
    cross-multiplied integer arithmetic and a single final division (and
    square root for L2).  Every intermediate value is exact, which makes
    the result independent of summation order — the batch search kernels
    reproduce these values bit-for-bit.
    """
    if not u and not v:
        return 0.0
    if not u or not v:
        return 1.0
    if norm == "l1":
        su = sum(u.values())
        sv = sum(v.values())
        num = 0.0
        for term, uw in u.items():
            num += abs(uw * sv - v.get(term, 0.0) * su)
        for term, vw in v.items():
            if term not in u:
                num += vw * su
        return num / (su * sv)
    if norm == "l2":
        u2 = sum(w * w for w in u.values())
        v2 = sum(w * w for w in v.values())
        dot = sum(uw * v[term] for term, uw in u.items() if term in v)
        return math.sqrt(max(0.0, 2.0 - 2.0 * dot / math.sqrt(u2 * v2)))
    raise ValueError(f"unknown norm: {norm!r}")
