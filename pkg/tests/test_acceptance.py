"""Exit criteria for the build, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""
import contextlib
import random
import time
import warnings
from fractions import Fraction

import pytest

from cvafim.bench import BenchSpec, run_bench, summarize
from cvafim.cli import main
from cvafim.mfim import mfim_mine
from cvafim.oracle import apriori_mine
from cvafim.streamio import GeneratorConfig, Segment, generate_stream
from cvafim.tifim import MinerConfig, coverage_threshold, mine
from cvafim.window import Reason, WindowConfig, cva_similarity, cva_windows

from conftest import ACCEPTANCE_LINES, oracle_corpus

pytestmark = pytest.mark.acceptance

# Relative slack allowed when comparing wall times of cells that do the same
# amount of work (e.g. 40% and 30% coverage where nothing beyond singletons is
# frequent); structure sizes are compared exactly.
TIME_NOISE_SLACK = 0.10
SCALABILITY_MAX_MARGINAL = 0.60


@contextlib.contextmanager
def criterion(name):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE_LINES.append(f"FAIL  {name}: {exc}".splitlines()[0])
        print(ACCEPTANCE_LINES[-1])
        raise
    line = f"PASS  {name} ({time.perf_counter() - start:.1f}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="module")
def corpus():
    cases = oracle_corpus(200)
    return [(w, frac, coverage_threshold(frac, len(w)), apriori_mine(w, coverage_threshold(frac, len(w))))
            for w, frac in cases]


def test_oracle_equivalence(corpus):
    with criterion("oracle equivalence: tifim == apriori on 200 random windows"):
        start = time.perf_counter()
        mismatches = [i for i, (w, frac, cov, expected) in enumerate(corpus)
                      if mine(w, MinerConfig(frac)).itemsets != expected]
        elapsed = time.perf_counter() - start
        assert len(corpus) >= 200
        assert max(len({i for t in w.transactions for i in t.items}) for w, *_ in corpus) <= 20
        assert max(len(w) for w, *_ in corpus) <= 300
        assert mismatches == [], f"mismatching cases {mismatches[:5]}"
        assert elapsed < 60, f"took {elapsed:.1f}s"


def test_baseline_equivalence(corpus):
    with criterion("baseline equivalence: mfim == apriori on the same corpus"):
        mismatches = [i for i, (w, _frac, cov, expected) in enumerate(corpus)
                      if mfim_mine(w, cov) != expected]
        assert mismatches == [], f"mismatching cases {mismatches[:5]}"


def test_pruning_losslessness(corpus):
    with criterion("pruning losslessness: identical output with prune on/off"):
        diffs = [i for i, (w, frac, _cov, _e) in enumerate(corpus)
                 if mine(w, MinerConfig(frac, prune=True)).itemsets
                 != mine(w, MinerConfig(frac, prune=False)).itemsets]
        assert diffs == []


def test_window_partition():
    with criterion("window partition + size bounds over 150 random streams/configs"):
        rng = random.Random(31)
        violations = []
        for case in range(150):
            ws_min = rng.randint(1, 40)
            ws_max = rng.randint(ws_min + 1, 120)
            cca = rng.randint(1, ws_max - 1)
            cfg = WindowConfig(ws_min, ws_max, cca, rng.choice([0.0, 0.3, 0.5, 0.7, 1.0]))
            universe = rng.randint(4, 40)
            n = rng.randint(0, 600)
            segs = tuple(sorted({Segment(s, 0, universe // 2 - 1) if k % 2 else
                                 Segment(s, universe // 2, universe - 1)
                                 for k, s in enumerate(sorted(rng.sample(range(600), 3)))},
                                key=lambda s: s.start_seq))
            txns = list(generate_stream(GeneratorConfig(
                universe, 1, min(4, universe // 2), max(n, 1), case, segs)))[:n]
            windows = list(cva_windows(txns, cfg))
            if [t for w in windows for t in w.transactions] != txns:
                violations.append((case, "partition"))
            for w in windows:
                if w.reason is Reason.MAX_SIZE and not ws_max <= len(w) < ws_max + cca:
                    violations.append((case, "max-size", len(w)))
                if w.reason is Reason.CONTEXT_BREAK and not ws_min <= len(w) < ws_max:
                    violations.append((case, "context-break", len(w)))
        assert violations == []


def test_drift_detection():
    with criterion("drift detection: break within cca_size of the segment boundary in >=95/100 runs"):
        start = time.perf_counter()
        cca = 10
        cfg = WindowConfig(ws_min=50, ws_max=1000, cca_size=cca, ss_tau=0.5)
        hits = 0
        for seed in range(100):
            boundary = random.Random(seed).randint(100, 199)
            gen = GeneratorConfig(40, 5, 10, 400, seed,
                                  (Segment(0, 0, 19), Segment(boundary, 20, 39)))
            breaks = [w.last_seq + 1 for w in cva_windows(generate_stream(gen), cfg)
                      if w.reason is Reason.CONTEXT_BREAK]
            hits += any(abs(b - boundary) <= cca for b in breaks)
        elapsed = time.perf_counter() - start
        assert hits >= 95, f"{hits}/100 runs detected the boundary"
        assert elapsed < 10


def test_cva_unit_suite():
    with criterion("CVA similarity: exact 1/0/0.5 and 10,000 fuzzed pairs"):
        assert cva_similarity({1, 2, 3}, {1, 2, 3}) == 1.0
        assert cva_similarity({1, 2}, {3, 4}) == 0.0
        assert cva_similarity({1, 2, 3}, {2, 3, 4}) == 0.5
        rng = random.Random(41)
        for _ in range(10_000):
            a = set(rng.sample(range(60), rng.randint(0, 30)))
            b = set(rng.sample(range(60), rng.randint(1, 30)))
            s = cva_similarity(a, b)
            exact = Fraction(len(a & b), len(a | b))
            assert s == cva_similarity(b, a)
            assert 0.0 <= s <= 1.0
            assert abs(s - float(exact)) <= 1e-12


GOLDEN_FLAGS = ["--ws-min", "2", "--ws-max", "4", "--cca-size", "1", "--ss-tau", "0.5",
                "--min-coverage", "0.5"]


def test_golden_traces(capsys, tmp_path):
    with criterion("golden traces: CLI JSON for max-size and context-break traces"):
        p1 = tmp_path / "t1.txt"
        p1.write_text("1 2\n2 3\n1 3\n2 3\n")
        assert main(["mine", "--input", str(p1), *GOLDEN_FLAGS]) == 0
        out1 = capsys.readouterr().out
        assert out1 == (
            '{"window_index": 0, "reason": "max-size", "first_seq": 0, "last_seq": 3, '
            '"size": 4, "cov_threshold": 2, "itemsets": ['
            '{"items": [1], "coverage": 2}, {"items": [2], "coverage": 3}, '
            '{"items": [2, 3], "coverage": 2}, {"items": [3], "coverage": 3}]}\n'
        )
        p2 = tmp_path / "t2.txt"
        p2.write_text("1 2\n1 2\n8 9\n")
        assert main(["mine", "--input", str(p2), *GOLDEN_FLAGS]) == 0
        out2 = capsys.readouterr().out
        first = out2.splitlines()[0]
        assert first == (
            '{"window_index": 0, "reason": "context-break", "first_seq": 0, "last_seq": 1, '
            '"size": 2, "cov_threshold": 1, "itemsets": ['
            '{"items": [1], "coverage": 2}, {"items": [1, 2], "coverage": 2}, '
            '{"items": [2], "coverage": 2}]}'
        )
        assert '"reason": "end-of-stream", "first_seq": 2, "last_seq": 2' in out2.splitlines()[1]


DENSE_30 = GeneratorConfig(universe_size=30, min_len=5, max_len=15, n_transactions=10_000, seed=0)


def _non_decreasing(values, slack=0.0):
    return all(b >= a * (1 - slack) for a, b in zip(values, values[1:]))


@pytest.mark.slow
def test_coverage_sweep_trend():
    with criterion("coverage sweep 40%->10% on dense 30-item x 10,000 stream: monotone per engine"):
        spec = BenchSpec(
            generator=DENSE_30,
            window=WindowConfig(),
            coverage_sweep=(0.4, 0.3, 0.2, 0.1),
            size_sweep=(10_000,),
            timing_repeats=5,
        )
        summary = {e["engine"]: e for e in summarize(run_bench(spec)).coverage_sweep}
        for engine, entry in summary.items():
            assert entry["coverages"] == [0.4, 0.3, 0.2, 0.1]
            assert _non_decreasing(entry["peak_bytes"]), (engine, entry["peak_bytes"])
            assert _non_decreasing(entry["wall_time_s"], TIME_NOISE_SLACK), (engine, entry["wall_time_s"])
        tifim, mfim = summary["tifim"], summary["mfim"]
        for key in ("avg_memory_increment_bytes", "avg_time_increment_s"):
            line = f"      {key}: tifim={tifim[key]:.4g} mfim={mfim[key]:.4g}"
            if tifim[key] < mfim[key]:
                ACCEPTANCE_LINES.append(line + " (tifim lower, as expected)")
            else:
                ACCEPTANCE_LINES.append(line + " (WARNING: tifim not lower)")
                warnings.warn(f"comparative ordering not met for {key}: {line.strip()}")


@pytest.mark.slow
def test_scalability():
    with criterion("scalability 1500..9000 step 1500: each marginal step <= 60% of cell time"):
        spec = BenchSpec(
            generator=DENSE_30,
            window=WindowConfig(),
            coverage_sweep=(0.1,),
            size_sweep=tuple(range(1500, 9001, 1500)),
            engines=("tifim",),
            timing_repeats=3,
        )
        (entry,) = summarize(run_bench(spec)).size_sweep
        ratios = ", ".join(f"{r:.2f}" for r in entry["time_ratios"])
        ACCEPTANCE_LINES.append(
            f"      time ratios [{ratios}], avg marginal {entry['avg_marginal_pct']:.1f}%"
        )
        assert all(p <= 100 * SCALABILITY_MAX_MARGINAL for p in entry["marginal_pct"]), entry["marginal_pct"]
