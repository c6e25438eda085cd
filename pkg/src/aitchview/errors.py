"""Error types shared across the library and the HTTP API.

Every error carries a stable ``code`` string (its class name) so the API
layer can report machine-readable failures as ``{"error": code, ...}``.
"""


class AitchviewError(Exception):
    """Base class for all domain errors raised by this package."""

    #: machine-readable identifier, also used by the HTTP error payload
    code = "Error"
    #: request field the error refers to, when there is an obvious one
    field: str | None = None

    def __init__(self, *args, field: str | None = None):
        super().__init__(*args)
        if field is not None:
            self.field = field

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls.code = cls.__name__


# -- composition arithmetic ---------------------------------------------------

class NegativeEntry(AitchviewError, ValueError):
    """A proportion vector contains a negative part."""


class DegenerateInput(AitchviewError, ValueError):
    """Input has no valid compositional interpretation (all zero, d < 2, ...)."""


class EpsTooLarge(AitchviewError, ValueError):
    """Zero-replacement epsilon too large for the number of zero parts."""


class NonPositivePart(AitchviewError, ValueError):
    """Log-ratio operations need strictly positive parts."""


class NonFinite(AitchviewError, ValueError):
    """NaN or infinity where a finite value is required."""


class DimensionMismatch(AitchviewError, ValueError):
    """Operands have different numbers of parts."""


# -- embedding / clustering ---------------------------------------------------

class TooFewRows(AitchviewError, ValueError):
    """PCA needs at least two observations."""


class BadK(AitchviewError, ValueError):
    """Cluster count outside [1, n]."""

    field = "k"


# -- dataset IO ---------------------------------------------------------------

class MissingFile(AitchviewError, FileNotFoundError):
    """A file referenced by the manifest does not exist."""


class ParseError(AitchviewError, ValueError):
    """Malformed cell in a data file; carries 1-based line and column."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class IdMismatch(AitchviewError, ValueError):
    """Spot id present in one table but not the other, or duplicated."""

    def __init__(self, spot_id: str, message: str | None = None):
        super().__init__(message or f"spot id {spot_id!r} mismatch between tables")
        self.spot_id = spot_id


class OutOfBounds(AitchviewError, ValueError):
    """Spot position outside the image bounds."""

    def __init__(self, spot_id: str, message: str | None = None):
        super().__init__(message or f"spot {spot_id!r} lies outside the image")
        self.spot_id = spot_id


class BadHeader(AitchviewError, ValueError):
    """Manifest or CSV header does not match the expected schema."""


class SumOutOfTolerance(AitchviewError, ValueError):
    """Proportion row sum too far from 1 to renormalize silently."""

    def __init__(self, actual_sum: float, tol: float):
        super().__init__(f"row sums to {actual_sum!r}, outside 1 +/- {tol!r}")
        self.actual_sum = actual_sum


class EmptyGrid(AitchviewError, ValueError):
    """Synthetic grid step leaves no spot inside the image."""


class UncoveredSpot(AitchviewError, ValueError):
    """A synthetic grid spot belongs to no declared region."""


# -- session / selection ------------------------------------------------------

class DegenerateShape(AitchviewError, ValueError):
    """Selection shape has no interior (inverted rect, < 3 polygon vertices)."""


class BadLabel(AitchviewError, ValueError):
    """Cluster label outside [0, k)."""

    field = "label"


class BadCap(AitchviewError, ValueError):
    """Bar decimation cap below 2."""

    field = "cap"


class UnknownCellType(AitchviewError, ValueError):
    """Sort or filter refers to a cell type the dataset does not have."""
