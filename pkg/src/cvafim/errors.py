"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A configuration violates its invariants."""


class ParseError(ValueError):
    def __init__(self, token: str, lineno: int | None):
        self.token = token
        self.lineno = lineno
        where = f"line {lineno}" if lineno is not None else "input"
        super().__init__(f"{where}: invalid item token {token!r}")


class UndefinedSimilarityError(ValueError):
    """Jaccard similarity of two empty sets."""


class EngineClosedError(RuntimeError):
    """push/flush called on a window engine that was already flushed."""


class UniverseTooLargeError(ValueError):
    """The brute-force oracle refuses windows with too many distinct items."""


class InsufficientDataError(ValueError):
    """Not enough benchmark points to compute a summary statistic."""
