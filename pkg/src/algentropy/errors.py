"""Exception types shared across the engine."""


class AlgentropyError(Exception):
    """Base class for all engine errors."""


class MappingSyntaxError(AlgentropyError):
    """Raised when a mapping file fails to parse.

    Carries the 1-based line and column of the offending token.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, col {column}: {message}"
        super().__init__(message)


class MappingValidationError(AlgentropyError):
    """A mapping parsed but violates a structural requirement
    (update independent of x0, inverse round-trip failure, ...)."""


class DivisionByZeroError(AlgentropyError):
    """Zero denominator handed to an exact-field constructor."""


class BadSpecializationError(AlgentropyError):
    """A finite-field assignment made some denominator vanish.

    The caller is expected to re-draw the assignment.
    """

    def __init__(self, message, assignment=None):
        super().__init__(message)
        self.assignment = assignment


class IndeterminacySignal(AlgentropyError):
    """Projective evaluation hit 0/0.  Not a failure: the caller switches
    to Laurent-series tracing at this point."""


class InsufficientDepthSignal(AlgentropyError):
    """Laurent arithmetic ran out of known terms before the leading term
    of a result could be determined.  Carries the extra depth wanted."""

    def __init__(self, extra=8):
        super().__init__(f"series truncation too shallow, need ~{extra} more terms")
        self.extra = extra


class CannotInvertError(AlgentropyError):
    """The update is not Moebius in x0 and no explicit inverse was given."""


class UnresolvedPatternError(AlgentropyError):
    """A singularity trace hit its length bound without a classification.

    ``prefix`` holds the entries computed so far.
    """

    def __init__(self, message, prefix=None):
        super().__init__(message)
        self.prefix = prefix or []


class EmptyCensusError(AlgentropyError):
    """The requested value occurs in no pattern."""


class NotComparableError(AlgentropyError):
    """Two censuses count occurrences over unrelated sequence families."""


class InconsistentBalanceError(AlgentropyError):
    """Forward substitution of a balance produced a non-integer or negative
    count, or the reconstructed degrees contradict a reference sequence.
    Signals a wrong or missing singularity pattern."""


class UnsupportedTailError(AlgentropyError):
    """An unconfined census tail is not an arithmetic progression of lags."""


class UnstableSpecializationError(AlgentropyError):
    """Finite-field degree votes kept disagreeing after the retry cap."""


class DegenerateSequenceError(AlgentropyError):
    """A degree sequence too short or too flat to estimate growth from."""


class ResourceCapExceeded(AlgentropyError):
    """An exact computation outgrew its degree/size/time budget.

    ``partial`` carries whatever was computed before the cap hit.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
