"""Bush-based frequent itemset mining over one finalized window.

A bush pairs a root itemset with the set of window transactions that contain
it. Both are stored as Python ints used as bitsets: bit ``i`` of ``root`` is
item ``i``, bit ``j`` of ``nodes`` is the ``j``-th transaction of the window.
Root union is ``|``, node intersection is ``&``, coverage is a popcount.

Pipeline: ``cache_bushes`` builds one bush per co-occurring item pair,
``fif_expand`` grows bushes to a fixpoint by union/intersection,
``prune`` drops bushes subsumed by a superset of equal coverage, and
``mine`` expands the surviving (closed) roots back into every frequent itemset.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .errors import ConfigError
from .window import FinalizedWindow

# Per-element sizes for the logical memory estimate.
ITEM_BYTES = 4


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def items_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


@dataclass(slots=True)
class Bush:
    root: int
    nodes: int

    @property
    def coverage(self) -> int:
        return self.nodes.bit_count()

    @property
    def items(self) -> tuple[int, ...]:
        return items_of(self.root)

    @property
    def positions(self) -> tuple[int, ...]:
        """Window-local indices of the supporting transactions."""
        return items_of(self.nodes)

    def node_seqs(self, window: FinalizedWindow) -> tuple[int, ...]:
        return tuple(window.transactions[p].seq for p in self.positions)


BushSet = dict[int, Bush]


@dataclass(frozen=True)
class MinerConfig:
    min_coverage_fraction: float = 0.1
    report_singletons: bool = True
    prune: bool = True

    def __post_init__(self):
        if not 0.0 < self.min_coverage_fraction <= 1.0:
            raise ConfigError(
                f"min_coverage_fraction must lie in (0, 1], got {self.min_coverage_fraction}"
            )


@dataclass
class MinerStats:
    rounds: list[int] = field(default_factory=list)
    bushes_cached: int = 0
    bushes_closed: int = 0
    peak_nodes: int = 0
    peak_bytes: int = 0

    def observe(self, bushes: Iterable[Bush], window_size: int) -> None:
        bitmap = (window_size + 7) // 8
        nodes = 0
        size = 0
        for b in bushes:
            nodes += b.nodes.bit_count()
            size += ITEM_BYTES * b.root.bit_count() + bitmap
        self.peak_nodes = max(self.peak_nodes, nodes)
        self.peak_bytes = max(self.peak_bytes, size)


@dataclass
class MiningResult:
    window_index: int
    cov_threshold: int
    itemsets: dict[tuple[int, ...], int]
    stats: MinerStats = field(default_factory=MinerStats)


def coverage_threshold(fraction: float, window_size: int) -> int:
    # Round before ceil so that e.g. 0.1 * 30 does not become 4.
    return max(1, math.ceil(round(fraction * window_size, 9)))


def _cache(window: FinalizedWindow) -> tuple[dict[int, int], dict[int, int]]:
    pair_nodes: dict[int, int] = {}
    item_counts: dict[int, int] = {}
    for pos, t in enumerate(window.transactions):
        bit = 1 << pos
        for a in t.items:
            item_counts[a] = item_counts.get(a, 0) + 1
        for a, b in combinations(t.items, 2):
            root = (1 << a) | (1 << b)
            pair_nodes[root] = pair_nodes.get(root, 0) | bit
    return pair_nodes, item_counts


def cache_bushes(window: FinalizedWindow) -> BushSet:
    """One bush per item pair that co-occurs in some transaction of the window."""
    pair_nodes, _ = _cache(window)
    return {root: Bush(root, nodes) for root, nodes in pair_nodes.items()}


def fif_expand(bushes: BushSet, cov: int, stats: MinerStats | None = None,
               window_size: int = 0) -> BushSet:
    """Grow bushes by root union and node intersection until nothing new appears.

    Seeds are the input bushes with coverage >= cov. Each round pairs every
    bush found in the previous round with every retained bush; pairs of two
    older bushes were already tried and would reproduce known roots.
    """
    if cov < 1:
        raise ValueError("cov must be >= 1")
    retained: BushSet = {r: b for r, b in bushes.items() if b.coverage >= cov}
    seen = set(bushes)
    frontier = list(retained.values())
    if stats is not None:
        stats.rounds.append(len(retained))
    while frontier:
        pool = list(retained.values())
        fresh: list[Bush] = []
        frontier_roots = {b.root for b in frontier}
        for f in frontier:
            f_root, f_nodes = f.root, f.nodes
            for r in pool:
                # skip the mirrored frontier-frontier pair
                if r.root in frontier_roots and r.root <= f_root:
                    continue
                root = f_root | r.root
                if root in seen:
                    continue
                seen.add(root)
                nodes = f_nodes & r.nodes
                if nodes.bit_count() >= cov:
                    fresh.append(Bush(root, nodes))
        for b in fresh:
            retained[b.root] = b
        if stats is not None:
            stats.rounds.append(len(fresh))
            stats.observe(retained.values(), window_size)
        frontier = fresh
    return retained


def prune(bushes: BushSet) -> BushSet:
    """Drop every bush whose root is a strict subset of another root with coverage >= its own."""
    order = list(bushes.values())
    by_item: dict[int, int] = {}
    for idx, b in enumerate(order):
        bit = 1 << idx
        for item in items_of(b.root):
            by_item[item] = by_item.get(item, 0) | bit
    kept: BushSet = {}
    for idx, b in enumerate(order):
        supersets = -1
        for item in items_of(b.root):
            supersets &= by_item[item]
        supersets &= ~(1 << idx)
        cov = b.coverage
        subsumed = False
        while supersets:
            low = supersets & -supersets
            if order[low.bit_length() - 1].coverage >= cov:
                subsumed = True
                break
            supersets ^= low
        if not subsumed:
            kept[b.root] = b
    return kept


def coverage_of(itemset: Iterable[int], bushes: BushSet) -> int | None:
    """Coverage of ``itemset`` from a (possibly pruned) bush set.

    Exact root hit returns its own coverage; otherwise the largest coverage
    among bushes whose root contains the itemset; None if there is none.
    """
    query = mask_of(itemset)
    if query in bushes:
        return bushes[query].coverage
    best = None
    for root, b in bushes.items():
        if root & query == query:
            c = b.coverage
            if best is None or c > best:
                best = c
    return best


def expand_closed(bushes: BushSet) -> dict[int, int]:
    """Every root subset of size >= 2 mapped to its max-superset coverage."""
    out: dict[int, int] = {}
    for b in sorted(bushes.values(), key=lambda b: -b.coverage):
        cov = b.coverage
        root = b.root
        sub = root
        while sub:
            if sub not in out and sub.bit_count() >= 2:
                out[sub] = cov
            sub = (sub - 1) & root
    return out


def mine(window: FinalizedWindow, cfg: MinerConfig = MinerConfig()) -> MiningResult:
    n = len(window)
    if n == 0:
        raise ValueError("cannot mine an empty window")
    cov = coverage_threshold(cfg.min_coverage_fraction, n)
    stats = MinerStats()
    pair_nodes, item_counts = _cache(window)
    bushes = {root: Bush(root, nodes) for root, nodes in pair_nodes.items()}
    stats.bushes_cached = len(bushes)
    stats.observe(bushes.values(), n)
    expanded = fif_expand(bushes, cov, stats, n)
    del bushes
    closed = prune(expanded) if cfg.prune else expanded
    stats.bushes_closed = len(closed)

    found: dict[tuple[int, ...], int] = {
        items_of(m): c for m, c in expand_closed(closed).items() if c >= cov
    }
    if cfg.report_singletons:
        for item, c in item_counts.items():
            if c >= cov:
                found[(item,)] = c
    itemsets = {k: found[k] for k in sorted(found)}
    return MiningResult(window.window_index, cov, itemsets, stats)
