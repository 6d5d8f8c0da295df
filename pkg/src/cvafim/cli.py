"""Command-line entry point: ``cvafim {mine,generate,bench}``.

Exit codes: 0 ok, 2 I/O error, 3 parse error, 4 invalid configuration,
5 oracle size limit exceeded, 6 benchmark cell failure.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import IO, Iterator, Sequence

from .bench import BenchCellError, BenchSpec, run_bench, summarize, write_csv
from .errors import ConfigError, InsufficientDataError, ParseError, UniverseTooLargeError
from .oracle import apriori_mine
from .pipeline import ENGINES, run_pipeline
from .streamio import (
    GeneratorConfig, PRESETS, Segment, TransactionReader, generate_stream, preset_config,
    write_transactions,
)
from .tifim import MinerConfig, MiningResult, coverage_threshold
from .window import FinalizedWindow, WindowConfig

EXIT_OK, EXIT_IO, EXIT_PARSE, EXIT_CONFIG, EXIT_ORACLE, EXIT_BENCH = 0, 2, 3, 4, 5, 6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


@contextlib.contextmanager
def _open(path: str, mode: str) -> Iterator[IO[str]]:
    if path == "-":
        yield sys.stdin if "r" in mode else sys.stdout
    else:
        with open(path, mode, encoding="utf-8", newline="" if "w" in mode else None) as fh:
            yield fh


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _segments(text: str) -> list[Segment]:
    """``START:LO-HI[,START:LO-HI...]`` with inclusive item bounds."""
    out = []
    try:
        for part in text.split(","):
            start, rng = part.split(":")
            lo, hi = rng.split("-")
            out.append(Segment(int(start), int(lo), int(hi)))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad segment list {text!r}; use START:LO-HI,...")
    return out


def _add_window_flags(p: argparse.ArgumentParser) -> None:
    d = WindowConfig()
    p.add_argument("--ws-min", type=int, default=d.ws_min)
    p.add_argument("--ws-max", type=int, default=d.ws_max)
    p.add_argument("--cca-size", type=int, default=d.cca_size)
    p.add_argument("--ss-tau", type=float, default=d.ss_tau)
    p.add_argument("--min-coverage", type=float, default=d.min_coverage_fraction,
                   help="coverage threshold as a fraction of window size")
    p.add_argument("--no-singletons", action="store_true", help="omit 1-itemsets")


def _window_config(args) -> WindowConfig:
    return WindowConfig(args.ws_min, args.ws_max, args.cca_size, args.ss_tau, args.min_coverage)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvafim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser,
                                metavar="{mine,generate,bench}")

    p = sub.add_parser("mine", help="mine a transaction stream, one JSON line per window")
    p.add_argument("--input", default="-")
    p.add_argument("--output", default="-")
    p.add_argument("--engine", choices=ENGINES, default="tifim")
    p.add_argument("--workers", type=int, default=1)
    _add_window_flags(p)

    p = sub.add_parser("generate", help="write a synthetic transaction stream")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--universe", type=int)
    p.add_argument("--min-len", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("-n", "--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--segments", type=_segments, help="drift segments START:LO-HI,...")
    p.add_argument("--output", default="-")

    p = sub.add_parser("bench", help="run the coverage/size benchmark sweep")
    p.add_argument("--preset", choices=sorted(PRESETS), default="dense")
    p.add_argument("--universe", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sweep", type=_floats, default=[0.1, 0.2, 0.3, 0.4])
    p.add_argument("--sizes", type=_ints, default=[1500])
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--timing-repeats", type=int, default=1)
    p.add_argument("--engine", choices=ENGINES, help="restrict to one engine (default: both)")
    p.add_argument("--output", default="-", help="CSV destination")
    p.add_argument("--summary", help="JSON summary destination")
    _add_window_flags(p)

    # Not listed in help: exact itemsets of a whole file treated as one window.
    p = sub.add_parser("oracle")
    p.add_argument("--input", default="-")
    p.add_argument("--output", default="-")
    p.add_argument("--min-coverage", type=float, default=0.1)
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "oracle"]
    return parser


def window_record(window: FinalizedWindow, result: MiningResult) -> dict:
    return {
        "window_index": window.window_index,
        "reason": str(window.reason),
        "first_seq": window.first_seq,
        "last_seq": window.last_seq,
        "size": len(window),
        "cov_threshold": result.cov_threshold,
        "itemsets": [{"items": list(k), "coverage": v} for k, v in result.itemsets.items()],
    }


def mine_command(args) -> int:
    wcfg = _window_config(args)
    mcfg = MinerConfig(wcfg.min_coverage_fraction, report_singletons=not args.no_singletons)
    with _open(args.input, "r") as src, _open(args.output, "w") as out:
        reader = TransactionReader(src)
        for window, result in run_pipeline(reader, wcfg, mcfg, args.engine, args.workers):
            out.write(json.dumps(window_record(window, result)))
            out.write("\n")
    return EXIT_OK


def generate_command(args) -> int:
    if args.preset:
        cfg = preset_config(args.preset, args.count, args.seed, args.universe, args.max_len)
        if args.min_len is not None:
            cfg = GeneratorConfig(cfg.universe_size, args.min_len, cfg.max_len, args.count, args.seed)
    else:
        if args.universe is None or args.max_len is None:
            raise ConfigError("without --preset, --universe and --max-len are required")
        min_len = 1 if args.min_len is None else args.min_len
        cfg = GeneratorConfig(args.universe, min_len, args.max_len, args.count, args.seed)
    if args.segments:
        cfg = GeneratorConfig(cfg.universe_size, cfg.min_len, cfg.max_len, cfg.n_transactions,
                              cfg.seed, tuple(args.segments))
    with _open(args.output, "w") as out:
        write_transactions(generate_stream(cfg), out)
    return EXIT_OK


def bench_command(args) -> int:
    gen = preset_config(args.preset, max(args.sizes, default=1), args.seed, args.universe, args.max_len)
    spec = BenchSpec(
        generator=gen,
        window=_window_config(args),
        coverage_sweep=tuple(args.sweep),
        size_sweep=tuple(args.sizes),
        engines=(args.engine,) if args.engine else ENGINES,
        repetitions=args.reps,
        timing_repeats=args.timing_repeats,
    )
    records = run_bench(spec)
    with _open(args.output, "w") as out:
        write_csv(records, out)
    if args.summary:
        try:
            summary = summarize(records).to_dict()
        except InsufficientDataError as exc:
            summary = {"error": str(exc)}
        with _open(args.summary, "w") as out:
            json.dump(summary, out, indent=2)
            out.write("\n")
    return EXIT_OK


def oracle_command(args) -> int:
    with _open(args.input, "r") as src:
        transactions = list(TransactionReader(src))
    if not 0.0 < args.min_coverage <= 1.0:
        raise ConfigError(f"--min-coverage must lie in (0, 1], got {args.min_coverage}")
    cov = coverage_threshold(args.min_coverage, len(transactions)) if transactions else 1
    itemsets = apriori_mine(transactions, cov)
    with _open(args.output, "w") as out:
        out.write(json.dumps({
            "size": len(transactions),
            "cov_threshold": cov,
            "itemsets": [{"items": list(k), "coverage": v} for k, v in itemsets.items()],
        }))
        out.write("\n")
    return EXIT_OK


COMMANDS = {
    "mine": mine_command,
    "generate": generate_command,
    "bench": bench_command,
    "oracle": oracle_command,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"cvafim: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigError as exc:
        print(f"cvafim: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UniverseTooLargeError as exc:
        print(f"cvafim: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except BenchCellError as exc:
        print(f"cvafim: benchmark failed: {exc}", file=sys.stderr)
        return EXIT_BENCH
    except OSError as exc:
        print(f"cvafim: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
