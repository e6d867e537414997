"""Exception types shared across the package."""


class EdgeListError(ValueError):
    """Raised for a malformed edge-list line."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class CapExceededError(RuntimeError):
    """An exhaustive routine refused an input above its configured size cap."""


class EmptyGraphError(ValueError):
    """The graph has no non-empty core to work with."""
