"""Matrix-based baseline: tumbling windows mined through a 0/1 bit matrix.

Rows are transactions, columns are the window's distinct items. Support of an
itemset is the popcount of the AND of its columns. Candidates are generated
levelwise (prefix join plus subset pruning), so this is Apriori with
vertical counting. It is a performance comparator only and must agree
exactly with the brute-force oracle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .streamio import Transaction
from .tifim import ITEM_BYTES, MinerConfig, MinerStats, MiningResult, coverage_threshold
from .window import FinalizedWindow, Reason


@dataclass
class BitMatrix:
    items: tuple[int, ...]
    bits: np.ndarray  # shape (rows, cols), C order, dtype bool

    @classmethod
    def from_transactions(cls, transactions: Sequence[Transaction]) -> "BitMatrix":
        items = tuple(sorted({i for t in transactions for i in t.items}))
        col = {item: c for c, item in enumerate(items)}
        bits = np.zeros((len(transactions), len(items)), dtype=bool)
        for r, t in enumerate(transactions):
            bits[r, [col[i] for i in t.items]] = True
        return cls(items, bits)

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    def bit(self, row: int, item: int) -> bool:
        if item not in self.items:
            return False
        return bool(self.bits[row, self.items.index(item)])


@dataclass
class MfimStats:
    candidates_per_level: list[int] = field(default_factory=list)
    peak_live_bits: int = 0
    peak_bytes: int = 0


def mfim_mine(window, cov: int, *, report_singletons: bool = True,
              stats: MfimStats | None = None) -> dict[tuple[int, ...], int]:
    transactions = list(getattr(window, "transactions", window))
    if cov < 1:
        raise ValueError("cov must be >= 1")
    if not transactions:
        return {}
    matrix = BitMatrix.from_transactions(transactions)
    rows = matrix.rows
    columns = np.ascontiguousarray(matrix.bits.T)
    matrix_bits = matrix.bits.size
    vec_bytes = (rows + 7) // 8
    stats = stats if stats is not None else MfimStats()

    def account(live_vectors: int, live_items: int) -> None:
        live_bits = matrix_bits + live_vectors * rows
        stats.peak_live_bits = max(stats.peak_live_bits, live_bits)
        stats.peak_bytes = max(
            stats.peak_bytes,
            (matrix_bits + 7) // 8 + live_vectors * vec_bytes + live_items * ITEM_BYTES,
        )

    supports = columns.sum(axis=1)
    stats.candidates_per_level.append(len(matrix.items))
    result: dict[tuple[int, ...], int] = {}
    # frequent itemsets of the current level, as column-index tuples -> row vector
    level: dict[tuple[int, ...], np.ndarray] = {}
    for c, s in enumerate(supports):
        if s >= cov:
            level[(c,)] = columns[c]
            if report_singletons:
                result[(matrix.items[c],)] = int(s)
    result_items = len(level)
    account(len(level), result_items)

    k = 1
    while len(level) > 1:
        keys = sorted(level)
        known = set(keys)
        candidates = []
        for i, a in enumerate(keys):
            for b in keys[i + 1:]:
                if a[:-1] != b[:-1]:
                    break
                cand = a + (b[-1],)
                if all(cand[:j] + cand[j + 1:] in known for j in range(k - 1)):
                    candidates.append((cand, a))
        stats.candidates_per_level.append(len(candidates))
        nxt: dict[tuple[int, ...], np.ndarray] = {}
        for cand, parent in candidates:
            vec = level[parent] & columns[cand[-1]]
            s = int(np.count_nonzero(vec))
            if s >= cov:
                nxt[cand] = vec
                result[tuple(matrix.items[c] for c in cand)] = s
        k += 1
        result_items += len(nxt) * k
        account(len(level) + len(nxt), result_items + len(candidates) * k)
        level = nxt
    return {key: result[key] for key in sorted(result)}


def tumbling_windows(transactions: Iterable[Transaction], size: int) -> Iterator[FinalizedWindow]:
    """Fixed-size disjoint windows; a trailing partial window is tagged end-of-stream."""
    if size < 1:
        raise ValueError("window size must be >= 1")
    buf: list[Transaction] = []
    index = 0
    for t in transactions:
        buf.append(t)
        if len(buf) == size:
            yield FinalizedWindow(index, tuple(buf), Reason.MAX_SIZE)
            index += 1
            buf = []
    if buf:
        yield FinalizedWindow(index, tuple(buf), Reason.END_OF_STREAM)


def mine_mfim(window: FinalizedWindow, cfg: MinerConfig = MinerConfig()) -> MiningResult:
    cov = coverage_threshold(cfg.min_coverage_fraction, len(window))
    raw = MfimStats()
    itemsets = mfim_mine(window, cov, report_singletons=cfg.report_singletons, stats=raw)
    stats = MinerStats(
        rounds=raw.candidates_per_level,
        peak_nodes=raw.peak_live_bits,
        peak_bytes=raw.peak_bytes,
    )
    return MiningResult(window.window_index, cov, itemsets, stats)
