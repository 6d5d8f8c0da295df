"""Brute-force levelwise Apriori used as ground truth.

Deliberately slow and simple: itemsets are frozensets, supports are counted by
scanning every transaction. Shares no set representation with the miners.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .errors import UniverseTooLargeError

MAX_ORACLE_ITEMS = 25


def _baskets(window) -> list[frozenset]:
    transactions = getattr(window, "transactions", window)
    return [frozenset(getattr(t, "items", t)) for t in transactions]


def apriori_mine(window, cov: int) -> dict[tuple[int, ...], int]:
    """Every itemset (size >= 1) contained in at least ``cov`` transactions.

    ``window`` may be a FinalizedWindow, a sequence of Transactions, or a
    sequence of plain item collections.
    """
    if cov < 1:
        raise ValueError("cov must be >= 1")
    baskets = _baskets(window)
    universe = sorted(set().union(*baskets)) if baskets else []
    if len(universe) > MAX_ORACLE_ITEMS:
        raise UniverseTooLargeError(
            f"{len(universe)} distinct items exceeds the oracle limit of {MAX_ORACLE_ITEMS}"
        )

    def support(candidate: frozenset) -> int:
        return sum(1 for b in baskets if candidate <= b)

    result: dict[frozenset, int] = {}
    level = []
    for item in universe:
        c = frozenset([item])
        s = support(c)
        if s >= cov:
            result[c] = s
            level.append(c)
    k = 2
    while level:
        prev = set(level)
        candidates = set()
        for a, b in combinations(level, 2):
            u = a | b
            if len(u) == k and all(u - {x} in prev for x in u):
                candidates.add(u)
        level = []
        for c in candidates:
            s = support(c)
            if s >= cov:
                result[c] = s
                level.append(c)
        k += 1
    return {tuple(sorted(s)): c for s, c in sorted(result.items(), key=lambda kv: sorted(kv[0]))}


def enumerate_all_subsets(baskets: Iterable[Iterable[int]], cov: int) -> dict[tuple[int, ...], int]:
    """Count every subset of the item universe directly; for tiny universes only."""
    baskets = [frozenset(b) for b in baskets]
    universe = sorted(set().union(*baskets)) if baskets else []
    if len(universe) > 12:
        raise UniverseTooLargeError("exhaustive enumeration limited to 12 items")
    out = {}
    for k in range(1, len(universe) + 1):
        for combo in combinations(universe, k):
            s = sum(1 for b in baskets if set(combo) <= b)
            if s >= cov:
                out[combo] = s
    return out
