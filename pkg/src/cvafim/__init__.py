"""Streaming frequent-itemset mining with windows sized by context variation."""
from .errors import (
    ConfigError, EngineClosedError, InsufficientDataError, ParseError,
    UndefinedSimilarityError, UniverseTooLargeError,
)
from .mfim import BitMatrix, mfim_mine, mine_mfim, tumbling_windows
from .oracle import apriori_mine
from .pipeline import run_pipeline
from .streamio import (
    GeneratorConfig, Segment, Transaction, TransactionReader, generate_stream,
    parse_transaction, preset_config,
)
from .tifim import (
    Bush, MinerConfig, MiningResult, cache_bushes, coverage_of, fif_expand, mine, prune,
)
from .window import (
    CvaWindowEngine, FinalizedWindow, Reason, WindowConfig, cva_similarity, cva_windows,
)

__all__ = [
    "BitMatrix", "Bush", "ConfigError", "CvaWindowEngine", "EngineClosedError",
    "FinalizedWindow", "GeneratorConfig", "InsufficientDataError", "MinerConfig",
    "MiningResult", "ParseError", "Reason", "Segment", "Transaction", "TransactionReader",
    "UndefinedSimilarityError", "UniverseTooLargeError", "WindowConfig", "apriori_mine",
    "cache_bushes", "coverage_of", "cva_similarity", "cva_windows", "fif_expand",
    "generate_stream", "mfim_mine", "mine", "mine_mfim", "parse_transaction",
    "preset_config", "prune", "run_pipeline", "tumbling_windows",
]
