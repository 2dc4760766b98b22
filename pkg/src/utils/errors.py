"""Exception hierarchy shared by every mkv-census module."""

from typing import Any, Optional


class MkvError(Exception):
    """Base class for all errors raised by the toolkit."""


class ConfigurationError(MkvError, ValueError):
    """A parameter is outside its admissible range.

    Attributes:
        key: Dotted configuration key that caused the error, if known
    """

    def __init__(self, message: str, key: Optional[str] = None) -> None:
        self.key = key
        if key:
            message = f"{key}: {message}"
        super().__init__(message)


class ResolutionError(ConfigurationError):
    """A real-space grid is too coarse for the number of resolved modes."""


class ShapeError(MkvError, ValueError):
    """An array has the wrong length or parity."""


class DivergenceError(MkvError, ArithmeticError):
    """The SPDE state became non-finite.

    Attributes:
        step: Index of the step that produced the non-finite state
        partial: Whatever was recorded before the blow-up (last finite
            snapshot or partial trajectory)
    """

    def __init__(self, step: int, partial: Any = None) -> None:
        self.step = step
        self.partial = partial
        super().__init__(f"Non-finite state at step {step}")


class EigensolverError(MkvError):
    """Dense eigendecomposition failed."""

    def __init__(self, message: str, condition_number: float) -> None:
        self.condition_number = condition_number
        super().__init__(f"{message} (condition number {condition_number:.3e})")


class RootFileError(MkvError, ValueError):
    """A roots CSV file is missing columns or has unparsable rows."""
