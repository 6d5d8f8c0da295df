"""Variable-size transaction windows fixed by context variation analysis.

A window ``w_tran`` first takes ``ws_min`` transactions. Later transactions
are buffered in a look-ahead ``w_cca`` of ``cca_size`` transactions; once it is
full, the Jaccard similarity of the two windows' item universes decides whether
the buffer is merged into ``w_tran`` or whether ``w_tran`` is closed as a
context break and the buffer starts the next window.
"""
from __future__ import annotations

import enum
from collections import deque
import warnings
from dataclasses import dataclass, field
from typing import AbstractSet, Iterable, Iterator

from .errors import ConfigError, EngineClosedError, UndefinedSimilarityError
from .streamio import Transaction


class Reason(str, enum.Enum):
    MAX_SIZE = "max-size"
    CONTEXT_BREAK = "context-break"
    END_OF_STREAM = "end-of-stream"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class WindowConfig:
    ws_min: int = 200
    ws_max: int = 1000
    cca_size: int = 50
    ss_tau: float = 0.5
    min_coverage_fraction: float = 0.1

    def __post_init__(self):
        if not 1 <= self.ws_min <= self.ws_max:
            raise ConfigError(f"need 1 <= ws_min <= ws_max, got {self.ws_min}, {self.ws_max}")
        if self.cca_size < 1:
            raise ConfigError(f"cca_size must be >= 1, got {self.cca_size}")
        if not 0.0 <= self.ss_tau <= 1.0:
            raise ConfigError(f"ss_tau must lie in [0, 1], got {self.ss_tau}")
        if not 0.0 < self.min_coverage_fraction <= 1.0:
            raise ConfigError(
                f"min_coverage_fraction must lie in (0, 1], got {self.min_coverage_fraction}"
            )
        # The size check only runs after a merge, so a window that reaches ws_max
        # without one (filled to ws_min, or seeded from the buffer) overshoots.
        if self.cca_size >= self.ws_max:
            warnings.warn(
                f"cca_size ({self.cca_size}) >= ws_max ({self.ws_max}): window size bounds "
                "no longer hold",
                stacklevel=3,
            )
        elif self.ws_min == self.ws_max:
            warnings.warn(
                f"ws_min == ws_max ({self.ws_max}): windows close at ws_max + cca_size",
                stacklevel=3,
            )


def cva_similarity(a: AbstractSet[int], b: AbstractSet[int]) -> float:
    """Jaccard similarity ``|a & b| / |a | b|``."""
    union = len(a | b)
    if union == 0:
        raise UndefinedSimilarityError("similarity of two empty attribute sets is undefined")
    return len(a & b) / union


def attribute_set(transactions: Iterable[Transaction]) -> set[int]:
    out: set[int] = set()
    for t in transactions:
        out.update(t.items)
    return out


@dataclass
class TransactionWindow:
    """Ordered transactions plus the running union of their items."""

    transactions: list[Transaction] = field(default_factory=list)
    attribute_set: set[int] = field(default_factory=set)

    def __len__(self) -> int:
        return len(self.transactions)

    def append(self, t: Transaction) -> None:
        self.transactions.append(t)
        self.attribute_set.update(t.items)

    def absorb(self, other: "TransactionWindow") -> None:
        self.transactions.extend(other.transactions)
        self.attribute_set |= other.attribute_set


class CcaBuffer(TransactionWindow):
    def __init__(self, capacity: int):
        super().__init__()
        self.capacity = capacity

    @property
    def full(self) -> bool:
        return len(self.transactions) >= self.capacity


@dataclass(frozen=True)
class FinalizedWindow:
    window_index: int
    transactions: tuple[Transaction, ...]
    reason: Reason

    @property
    def first_seq(self) -> int:
        return self.transactions[0].seq

    @property
    def last_seq(self) -> int:
        return self.transactions[-1].seq

    def __len__(self) -> int:
        return len(self.transactions)


class CvaWindowEngine:
    """Single-owner state machine; feed it with push() and close it with flush()."""

    def __init__(self, config: WindowConfig):
        self.config = config
        self._tran = TransactionWindow()
        self._cca = CcaBuffer(config.cca_size)
        self._next_index = 0
        self._closed = False
        # recent similarity scores, for diagnostics
        self.scores: deque[float] = deque(maxlen=4096)

    @property
    def closed(self) -> bool:
        return self._closed

    @property
    def active_window(self) -> TransactionWindow:
        return self._tran

    @property
    def cca_buffer(self) -> CcaBuffer:
        return self._cca

    def _finalize(self, window: TransactionWindow, reason: Reason) -> FinalizedWindow:
        fw = FinalizedWindow(self._next_index, tuple(window.transactions), reason)
        self._next_index += 1
        return fw

    def push(self, t: Transaction) -> list[FinalizedWindow]:
        if self._closed:
            raise EngineClosedError("engine already flushed")
        cfg = self.config
        if len(self._tran) < cfg.ws_min:
            self._tran.append(t)
            return []
        self._cca.append(t)
        if not self._cca.full:
            return []
        ss = cva_similarity(self._tran.attribute_set, self._cca.attribute_set)
        self.scores.append(ss)
        if ss >= cfg.ss_tau:
            self._tran.absorb(self._cca)
            self._cca = CcaBuffer(cfg.cca_size)
            if len(self._tran) >= cfg.ws_max:
                out = self._finalize(self._tran, Reason.MAX_SIZE)
                self._tran = TransactionWindow()
                return [out]
            return []
        out = self._finalize(self._tran, Reason.CONTEXT_BREAK)
        self._tran = TransactionWindow(self._cca.transactions, self._cca.attribute_set)
        self._cca = CcaBuffer(cfg.cca_size)
        return [out]

    def flush(self) -> list[FinalizedWindow]:
        if self._closed:
            raise EngineClosedError("engine already flushed")
        self._closed = True
        self._tran.absorb(self._cca)
        if not self._tran.transactions:
            return []
        out = self._finalize(self._tran, Reason.END_OF_STREAM)
        self._tran = TransactionWindow()
        self._cca = CcaBuffer(self.config.cca_size)
        return [out]


def cva_windows(transactions: Iterable[Transaction], config: WindowConfig) -> Iterator[FinalizedWindow]:
    engine = CvaWindowEngine(config)
    for t in transactions:
        yield from engine.push(t)
    yield from engine.flush()
