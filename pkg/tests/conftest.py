import random

import pytest

from cvafim.streamio import Transaction
from cvafim.window import FinalizedWindow, Reason

ACCEPTANCE_LINES: list[str] = []


def make_window(*itemsets, index=0, reason=Reason.MAX_SIZE) -> FinalizedWindow:
    return FinalizedWindow(
        index, tuple(Transaction.of(i, items) for i, items in enumerate(itemsets)), reason
    )


def random_window(rng: random.Random, max_items=20, max_txns=300, max_len=8) -> FinalizedWindow:
    universe = rng.randint(2, max_items)
    n = rng.randint(1, max_txns)
    longest = rng.randint(1, min(universe, max_len))
    txns = tuple(
        Transaction.of(i, rng.sample(range(universe), rng.randint(1, longest))) for i in range(n)
    )
    return FinalizedWindow(0, txns, Reason.MAX_SIZE)


def oracle_corpus(n_cases=200, seed=20140701):
    """(window, coverage fraction) pairs shared by the equivalence tests."""
    rng = random.Random(seed)
    fractions = [round(0.1 * k, 1) for k in range(1, 10)]
    return [(random_window(rng), rng.choice(fractions)) for _ in range(n_cases)]


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
