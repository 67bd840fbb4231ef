"""Slow, independent reference implementations used only by the tests.

None of these import from the library's counting or search code.
"""

from __future__ import annotations

import itertools
from collections import Counter

import numpy as np


def naive_pair_counts(v: int, blocks, ordered: bool = True) -> list[list[int]]:
    """Count coverage of every pair with a plain triple loop over blocks and positions."""
    counts = [[0] * v for _ in range(v)]
    for block in blocks:
        n = len(block)
        for i in range(n):
            for j in range(i + 1, n):
                x, y = block[i], block[j]
                if not ordered and x > y:
                    x, y = y, x
                counts[x][y] += 1
    return counts


def _pairs(block) -> Counter:
    return Counter((block[i], block[j]) for i in range(len(block)) for j in range(i + 1, len(block)))


def _order_from_pairs(points, pairs: Counter):
    """The unique ordering of ``points`` whose pair multiset is ``pairs``, if any."""
    if any(c != 1 for c in pairs.values()):
        return None
    # in a transitive tournament the i-th point beats exactly n-1-i others
    wins = {p: sum(1 for (x, _) in pairs if x == p) for p in points}
    perm = tuple(sorted(points, key=lambda p: -wins[p]))
    return perm if _pairs(perm) == pairs else None


def brute_trade(b1, b2) -> bool:
    """Does some other pair of ordered 5-blocks cover exactly the pairs of ``b1, b2``?

    Tries every split of the 10 point slots into two halves and every
    ordering of the first half; the second half is then forced.
    """
    b1, b2 = tuple(b1), tuple(b2)
    total = _pairs(b1) + _pairs(b2)
    slots = list(b1) + list(b2)
    seen = set()
    for half in itertools.combinations(range(10), 5):
        first = tuple(sorted(slots[i] for i in half))
        if first in seen or len(set(first)) < 5:
            continue
        seen.add(first)
        second = sorted(slots[i] for i in range(10) if i not in half)
        if len(set(second)) < 5:
            continue
        for c1 in itertools.permutations(first):
            rest = total.copy()
            rest.subtract(_pairs(c1))
            if any(c < 0 for c in rest.values()):
                continue
            rest = +rest
            c2 = _order_from_pairs(second, rest)
            if c2 is None:
                continue
            if c1 not in (b1, b2) and c2 not in (b1, b2):
                return True
    return False


def milp_vertex_cover(n: int, edges) -> int:
    """Minimum vertex cover size through scipy's MILP solver."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    if not edges:
        return 0
    A = np.zeros((len(edges), n))
    for r, (a, b) in enumerate(edges):
        A[r, a] = A[r, b] = 1
    res = milp(c=np.ones(n), constraints=LinearConstraint(A, lb=1, ub=np.inf),
               integrality=np.ones(n), bounds=Bounds(0, 1))
    assert res.success
    return int(round(res.fun))
