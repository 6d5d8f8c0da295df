"""Benchmark sweeps over coverage fractions, stream sizes and engines.

Memory is reported as the peak live logical structure size of the miner
(bush roots and node bitmaps for tifim; bit matrix, row vectors and
candidate itemsets for mfim), not process RSS, so that numbers are
comparable across machines. Timing covers the windowing + mining pipeline
only; stream generation happens before the clock starts.
"""
from __future__ import annotations

import csv
import gc
import statistics
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import IO, Iterable, Sequence

from .errors import ConfigError, InsufficientDataError
from .pipeline import ENGINES, run_pipeline
from .streamio import CountingIterator, GeneratorConfig, Transaction, generate_stream
from .tifim import MinerConfig
from .window import WindowConfig

CSV_HEADER = (
    "engine", "coverage_fraction", "stream_size", "repetition",
    "wall_time_s", "peak_bytes", "windows", "itemsets",
)


class BenchCellError(RuntimeError):
    def __init__(self, engine: str, coverage: float, size: int, repetition: int, cause: Exception):
        self.cell = (engine, coverage, size, repetition)
        super().__init__(
            f"engine={engine} coverage={coverage} size={size} repetition={repetition}: {cause}"
        )


@dataclass(frozen=True)
class BenchSpec:
    generator: GeneratorConfig
    window: WindowConfig = WindowConfig()
    coverage_sweep: Sequence[float] = (0.1, 0.2, 0.3, 0.4)
    size_sweep: Sequence[int] = (1000,)
    engines: Sequence[str] = ENGINES
    repetitions: int = 1
    # Each cell is timed this many times on the same data; the minimum is kept.
    timing_repeats: int = 1
    workers: int = 1

    def __post_init__(self):
        if not self.coverage_sweep or not self.size_sweep or not self.engines:
            raise ConfigError("coverage, size and engine sweeps must be non-empty")
        if self.repetitions < 1 or self.timing_repeats < 1:
            raise ConfigError("repetitions and timing_repeats must be >= 1")
        for f in self.coverage_sweep:
            if not 0.0 < f <= 1.0:
                raise ConfigError(f"coverage fraction {f} outside (0, 1]")
        for n in self.size_sweep:
            if n < 1:
                raise ConfigError(f"stream size {n} must be >= 1")
        for e in self.engines:
            if e not in ENGINES:
                raise ConfigError(f"unknown engine {e!r}")


@dataclass(frozen=True)
class BenchRecord:
    engine: str
    coverage_fraction: float
    stream_size: int
    repetition: int
    wall_time_s: float
    peak_bytes: int
    windows: int
    itemsets: int


def run_cell(transactions: Sequence[Transaction], engine: str, coverage: float,
             wcfg: WindowConfig, repetition: int = 0, timing_repeats: int = 1) -> BenchRecord:
    mcfg = MinerConfig(coverage)
    best = float("inf")
    for _ in range(timing_repeats):
        source = CountingIterator(transactions)
        windows = itemsets = peak = 0
        # collector pauses triggered by earlier allocations must not land in the timed region
        gc.collect()
        gc_was_enabled = gc.isenabled()
        gc.disable()
        try:
            start = time.perf_counter()
            for _w, result in run_pipeline(source, wcfg, mcfg, engine):
                windows += 1
                itemsets += len(result.itemsets)
                peak = max(peak, result.stats.peak_bytes)
            elapsed = time.perf_counter() - start
        finally:
            if gc_was_enabled:
                gc.enable()
        if source.count != len(transactions):
            raise RuntimeError(f"stream consumed {source.count} of {len(transactions)} transactions")
        best = min(best, elapsed)
    return BenchRecord(engine, coverage, len(transactions), repetition, best, peak, windows, itemsets)


def _run_cell_safe(args) -> BenchRecord:
    transactions, engine, coverage, wcfg, rep, timing_repeats = args
    try:
        return run_cell(transactions, engine, coverage, wcfg, rep, timing_repeats)
    except Exception as exc:
        raise BenchCellError(engine, coverage, len(transactions), rep, exc) from exc


def run_bench(spec: BenchSpec) -> list[BenchRecord]:
    cells = []
    for rep in range(spec.repetitions):
        for size in spec.size_sweep:
            gen = replace(spec.generator, n_transactions=size, seed=spec.generator.seed + rep)
            data = list(generate_stream(gen))
            for engine in spec.engines:
                for coverage in spec.coverage_sweep:
                    cells.append((data, engine, coverage, spec.window, rep, spec.timing_repeats))
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            records = list(pool.map(_run_cell_safe, cells))
    else:
        records = [_run_cell_safe(c) for c in cells]
    records.sort(key=lambda r: (r.engine, r.coverage_fraction, r.stream_size, r.repetition))
    return records


def write_csv(records: Iterable[BenchRecord], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([
            r.engine, r.coverage_fraction, r.stream_size, r.repetition,
            f"{r.wall_time_s:.6f}", r.peak_bytes, r.windows, r.itemsets,
        ])


def average_increment(series: Sequence[float]) -> float:
    """Mean of consecutive differences ``series[i] - series[i-1]``."""
    if len(series) < 2:
        raise InsufficientDataError("need at least two points for an increment")
    return (series[-1] - series[0]) / (len(series) - 1)


def marginal_percentages(times: Sequence[float]) -> list[float]:
    """Per step, the share of the new total time that the step added, in percent."""
    if len(times) < 2:
        raise InsufficientDataError("need at least two sizes for marginal percentages")
    return [100.0 * (cur - prev) / cur if cur > 0 else 0.0 for prev, cur in zip(times, times[1:])]


@dataclass
class Summary:
    coverage_sweep: list[dict] = field(default_factory=list)
    size_sweep: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def summarize(records: Sequence[BenchRecord]) -> Summary:
    """Average increments over the coverage sweep and marginal times over the size sweep.

    Repetitions of a cell are combined by median. Coverage series run from
    the highest fraction to the lowest, so positive increments mean growth as
    the threshold is relaxed.
    """
    cells: dict[tuple[str, float, int], list[BenchRecord]] = defaultdict(list)
    for r in records:
        cells[(r.engine, r.coverage_fraction, r.stream_size)].append(r)
    agg = {
        key: (statistics.median(r.wall_time_s for r in rs), statistics.median(r.peak_bytes for r in rs))
        for key, rs in cells.items()
    }
    engines = sorted({k[0] for k in agg})
    coverages = sorted({k[1] for k in agg}, reverse=True)
    sizes = sorted({k[2] for k in agg})

    out = Summary()
    for engine in engines:
        for size in sizes:
            covs = [c for c in coverages if (engine, c, size) in agg]
            if len(covs) < 2:
                continue
            times = [agg[(engine, c, size)][0] for c in covs]
            mem = [agg[(engine, c, size)][1] for c in covs]
            out.coverage_sweep.append({
                "engine": engine, "stream_size": size, "coverages": covs,
                "wall_time_s": times, "peak_bytes": mem,
                "avg_time_increment_s": average_increment(times),
                "avg_memory_increment_bytes": average_increment(mem),
            })
        for cov in sorted(coverages):
            ns = [n for n in sizes if (engine, cov, n) in agg]
            if len(ns) < 2:
                continue
            times = [agg[(engine, cov, n)][0] for n in ns]
            pct = marginal_percentages(times)
            out.size_sweep.append({
                "engine": engine, "coverage_fraction": cov, "sizes": ns,
                "wall_time_s": times,
                "time_ratios": [b / a if a > 0 else None for a, b in zip(times, times[1:])],
                "marginal_pct": pct,
                "avg_marginal_pct": statistics.fmean(pct),
            })
    if not out.coverage_sweep and not out.size_sweep:
        raise InsufficientDataError("need >= 2 coverage points or >= 2 sizes for some engine")
    return out
