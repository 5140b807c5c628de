"""
Exception hierarchy for the frame toolkit.

Verification operations report negative verdicts through their certificates;
the exceptions below are reserved for violated preconditions and malformed
input.
"""

from typing import Optional, Tuple


class FrameError(Exception):
    """Root of every error raised by the library."""


class NonFiniteError(FrameError, ValueError):
    """An operator or vector contains NaN or Inf entries."""


class NonSquareError(FrameError, ValueError):
    pass


class NotHermitianError(FrameError, ValueError):
    def __init__(self, asymmetry: float, limit: float):
        super().__init__(f"matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds {limit:.3e}")
        self.asymmetry = asymmetry


class NotPSDError(FrameError, ValueError):
    def __init__(self, min_eigenvalue: float, limit: float):
        super().__init__(f"matrix is not positive semidefinite: eigenvalue {min_eigenvalue:.3e} below {-limit:.3e}")
        self.min_eigenvalue = min_eigenvalue


class DimensionMismatchError(FrameError, ValueError):
    pass


class SpaceMismatchError(FrameError, ValueError):
    """Two objects live on different discretized measure spaces."""


class RangeNotIncludedError(FrameError):
    def __init__(self, residual: float, limit: float):
        super().__init__(
            f"ran(L1) is not contained in ran(L2): projection residual {residual:.3e} exceeds {limit:.3e}"
        )
        self.residual = residual


class NotKGFrameError(FrameError):
    pass


class UnconstrainedError(FrameError):
    """The requested quantity is vacuous because K = 0."""

    def __init__(self, message: str, value: float = 0.0):
        super().__init__(message)
        self.value = value


class HypothesisFailedError(FrameError):
    def __init__(self, item: str, detail: str):
        super().__init__(f"hypothesis {item} failed: {detail}")
        self.item = item
        self.detail = detail


class NotAtomicError(FrameError):
    pass


class NotADualError(FrameError):
    pass


class ZeroOperatorError(FrameError):
    pass


class UnknownProfileError(FrameError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class UnknownSuiteError(FrameError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


# --- Instance files ---

class InstanceError(FrameError):
    """Root for malformed instance files and in-memory instance data."""


class ParseError(InstanceError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class SchemaError(InstanceError):
    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


class ShapeError(InstanceError):
    def __init__(self, obj: str, expected: Tuple[int, ...], actual: Tuple[int, ...]):
        super().__init__(f"{obj}: expected shape {expected}, got {actual}")
        self.obj = obj
        self.expected = expected
        self.actual = actual


class NonPositiveWeightError(InstanceError):
    def __init__(self, index: int, value: float):
        super().__init__(f"quadrature weight {index} must be strictly positive, got {value!r}")
        self.index = index
        self.value = value
