"""Exception types shared across the solver stack."""


class OptLpError(Exception):
    """Base class for all package errors."""


class InvalidInputError(OptLpError, ValueError):
    """Malformed or non-finite numerical input."""


class RankDeficientError(OptLpError):
    """A matrix required to have full row rank does not.

    Carries the numerically detected rank so callers can decide whether to
    reduce the system or abort.
    """

    def __init__(self, message: str, rank: int):
        super().__init__(message)
        self.rank = rank


class IllConditionedError(OptLpError):
    """An iterate produced scaling ratios too extreme to factor reliably.

    ``index`` is the offending component of the iterate.
    """

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class NoFeasibleStepError(OptLpError):
    """Step selection or the step safeguard could not produce an acceptable
    step; signals numerical breakdown of the current solve."""


class DegenerateInputError(OptLpError, ValueError):
    """An input is degenerate beyond recovery (e.g. the zero polynomial)."""


class MpsParseError(OptLpError, ValueError):
    """MPS input could not be parsed. ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedMpsFeatureError(MpsParseError):
    """Valid MPS, but uses a feature this reader deliberately rejects."""
