"""Wire a transaction source through windowing into a miner.

Windows are mined in order by default. With ``workers > 1`` they are mined in a
process pool through a bounded in-flight queue, and results are still yielded
in window_index order.
"""
from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Iterator

from .mfim import mine_mfim, tumbling_windows
from .streamio import Transaction
from .tifim import MinerConfig, MiningResult, mine
from .window import FinalizedWindow, WindowConfig, cva_windows

ENGINES = ("tifim", "mfim")

Miner = Callable[[FinalizedWindow, MinerConfig], MiningResult]


def windows_for(engine: str, transactions: Iterable[Transaction],
                wcfg: WindowConfig, ws_fixed: int | None = None) -> Iterator[FinalizedWindow]:
    if engine == "tifim":
        return cva_windows(transactions, wcfg)
    if engine == "mfim":
        return tumbling_windows(transactions, ws_fixed or wcfg.ws_max)
    raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")


def miner_for(engine: str) -> Miner:
    if engine == "tifim":
        return mine
    if engine == "mfim":
        return mine_mfim
    raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")


def run_pipeline(
    transactions: Iterable[Transaction],
    wcfg: WindowConfig,
    mcfg: MinerConfig | None = None,
    engine: str = "tifim",
    workers: int = 1,
    ws_fixed: int | None = None,
) -> Iterator[tuple[FinalizedWindow, MiningResult]]:
    if mcfg is None:
        mcfg = MinerConfig(wcfg.min_coverage_fraction)
    miner = miner_for(engine)
    windows = windows_for(engine, transactions, wcfg, ws_fixed)
    if workers <= 1:
        for w in windows:
            yield w, miner(w, mcfg)
        return

    with ProcessPoolExecutor(max_workers=workers) as pool:
        inflight: deque = deque()
        for w in windows:
            inflight.append((w, pool.submit(miner, w, mcfg)))
            if len(inflight) >= 2 * workers:
                head, fut = inflight.popleft()
                yield head, fut.result()
        while inflight:
            head, fut = inflight.popleft()
            yield head, fut.result()
