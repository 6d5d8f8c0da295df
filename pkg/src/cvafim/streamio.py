"""Transaction streams: the text wire format and a seeded synthetic generator.

Wire format: one transaction per line, items as base-10 non-negative integers
separated by spaces or tabs. Blank lines are skipped and counted.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Sequence, TypeVar

from .errors import ConfigError, ParseError

T = TypeVar("T")


@dataclass(frozen=True, slots=True)
class Transaction:
    seq: int
    items: tuple[int, ...]

    def __post_init__(self):
        if not self.items:
            raise ValueError("transaction must contain at least one item")
        prev = -1
        for item in self.items:
            if item <= prev:
                raise ValueError(f"items must be strictly ascending and >= 0: {self.items}")
            prev = item

    def __len__(self) -> int:
        return len(self.items)

    @classmethod
    def of(cls, seq: int, items: Iterable[int]) -> "Transaction":
        return cls(seq, tuple(sorted(set(items))))


def parse_transaction(line: str, seq: int = 0, lineno: int | None = None) -> Transaction | None:
    """Parse one line of the wire format.

    Returns None for a blank line (the caller skips it). Raises ParseError
    naming the first token that is not a non-negative integer.
    """
    tokens = line.split()
    if not tokens:
        return None
    items = set()
    for token in tokens:
        if not token.isdigit() or not token.isascii():
            raise ParseError(token, lineno)
        items.add(int(token))
    return Transaction(seq, tuple(sorted(items)))


class TransactionReader:
    """Iterate transactions from lines of text, numbering them from 0.

    ``skipped`` counts blank lines, ``consumed`` counts emitted transactions.
    """

    def __init__(self, lines: Iterable[str]):
        self._lines = lines
        self.skipped = 0
        self.consumed = 0

    def __iter__(self) -> Iterator[Transaction]:
        for lineno, line in enumerate(self._lines, start=1):
            t = parse_transaction(line, self.consumed, lineno)
            if t is None:
                self.skipped += 1
                continue
            self.consumed += 1
            yield t


def read_transactions(fh: IO[str]) -> list[Transaction]:
    return list(TransactionReader(fh))


def format_transaction(t: Transaction) -> str:
    return " ".join(map(str, t.items))


def write_transactions(transactions: Iterable[Transaction], fh: IO[str]) -> int:
    n = 0
    for t in transactions:
        fh.write(format_transaction(t))
        fh.write("\n")
        n += 1
    return n


class CountingIterator(Iterator[T]):
    """Wraps an iterable and counts how many elements were pulled from it."""

    def __init__(self, source: Iterable[T]):
        self._it = iter(source)
        self.count = 0

    def __iter__(self) -> "CountingIterator[T]":
        return self

    def __next__(self) -> T:
        value = next(self._it)
        self.count += 1
        return value


@dataclass(frozen=True)
class Segment:
    """From ``start_seq`` on, draw items only from ``first_item..last_item`` (inclusive)."""

    start_seq: int
    first_item: int
    last_item: int

    @property
    def width(self) -> int:
        return self.last_item - self.first_item + 1


@dataclass(frozen=True)
class GeneratorConfig:
    universe_size: int
    min_len: int
    max_len: int
    n_transactions: int
    seed: int = 0
    segments: tuple[Segment, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not 1 <= self.min_len <= self.max_len <= self.universe_size:
            raise ConfigError(
                f"need 1 <= min_len <= max_len <= universe_size, got "
                f"{self.min_len}, {self.max_len}, {self.universe_size}"
            )
        if self.n_transactions < 1:
            raise ConfigError(f"n_transactions must be >= 1, got {self.n_transactions}")
        object.__setattr__(self, "segments", tuple(self.segments))
        last_start = -1
        for seg in self.segments:
            if seg.start_seq <= last_start:
                raise ConfigError("segment start_seq values must be strictly increasing")
            last_start = seg.start_seq
            if seg.width < 1:
                raise ConfigError(f"empty item subrange in {seg}")
            if seg.first_item < 0 or seg.last_item >= self.universe_size:
                raise ConfigError(f"{seg} falls outside the item universe")
            if self.max_len > seg.width:
                raise ConfigError(f"max_len {self.max_len} exceeds subrange width of {seg}")


# Field counts and length bounds used for the sparse and dense synthetic profiles.
PRESETS = {
    "sparse": {"universe": (75, 150), "max_len": (12, 18), "min_len": 5},
    "dense": {"universe": (20, 50), "max_len": (10, 15), "min_len": 5},
}


def preset_config(
    name: str,
    n_transactions: int = 1000,
    seed: int = 0,
    universe_size: int | None = None,
    max_len: int | None = None,
) -> GeneratorConfig:
    try:
        p = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}") from None
    lo_u, hi_u = p["universe"]
    lo_l, hi_l = p["max_len"]
    universe_size = lo_u if universe_size is None else universe_size
    max_len = lo_l if max_len is None else max_len
    if not lo_u <= universe_size <= hi_u:
        raise ConfigError(f"{name} preset needs universe in [{lo_u}, {hi_u}], got {universe_size}")
    if not lo_l <= max_len <= hi_l:
        raise ConfigError(f"{name} preset needs max_len in [{lo_l}, {hi_l}], got {max_len}")
    return GeneratorConfig(universe_size, p["min_len"], max_len, n_transactions, seed)


def _active_range(cfg: GeneratorConfig, seq: int) -> Sequence[int]:
    active = range(cfg.universe_size)
    for seg in cfg.segments:
        if seg.start_seq > seq:
            break
        active = range(seg.first_item, seg.last_item + 1)
    return active


def generate_stream(cfg: GeneratorConfig) -> Iterator[Transaction]:
    """Yield ``cfg.n_transactions`` transactions.

    Lengths are uniform on [min_len, max_len]; items are sampled uniformly
    without replacement from the segment active at each position.
    """
    rng = random.Random(cfg.seed)
    for seq in range(cfg.n_transactions):
        pool = _active_range(cfg, seq)
        k = rng.randint(cfg.min_len, cfg.max_len)
        yield Transaction(seq, tuple(sorted(rng.sample(pool, k))))
