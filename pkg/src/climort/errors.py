"""Exception types shared across the package.

Every error raised by climort derives from :class:`ClimortError`, so callers
can catch one base class at pipeline boundaries.
"""


class ClimortError(Exception):
    """Base class for all climort errors."""


# --- data ingestion ---------------------------------------------------------

class ParseError(ClimortError):
    """Malformed CSV content; message carries the 1-based line number."""


class MissingCell(ClimortError):
    """A (region, gender, age_band, month) combination is absent."""


class NonPositiveExposure(ClimortError):
    """Exposure must be strictly positive."""


class UnknownComponent(ClimortError):
    """Climate component outside the supported set (T90, T10, P, D, W)."""


class MissingMonth(ClimortError):
    """Gap in a monthly climate series."""


class InvalidSpec(ClimortError):
    """Synthetic-data specification violates its own constraints."""


# --- baseline models --------------------------------------------------------

class DegenerateSurface(ClimortError):
    """Leading singular value vanished on a non-constant panel."""


class SeriesTooShort(ClimortError):
    """Time series shorter than the operation requires."""


class NoConvergence(ClimortError):
    """Iterative routine hit its cap before reaching tolerance."""


class SingularBasis(ClimortError):
    """Spline basis columns are collinear after constraint absorption."""


class MissingKappa(ClimortError):
    """Period-effect values were not supplied for requested months."""


# --- time series ------------------------------------------------------------

class NonInvertible(ClimortError):
    """Fitted polynomial roots violate stationarity or invertibility."""


class LengthMismatch(ClimortError):
    """Paired inputs differ in length."""


# --- residual models --------------------------------------------------------

class CoverageMismatch(ClimortError):
    """Fitted surface does not cover the mortality panel."""


class RankDeficient(ClimortError):
    """Design matrix is rank deficient; message names the columns."""


class InsufficientVariation(ClimortError):
    """A smoothed covariate has too few distinct values."""


class EmptyData(ClimortError):
    """Operation received no observations."""


class InvalidHyperparams(ClimortError):
    """Hyperparameter outside its documented range."""


class GridEmpty(ClimortError):
    """Tuning grid contains no candidate points."""


class GroupMismatch(ClimortError):
    """Prediction covariates do not match the training covariate group."""


# --- copula -----------------------------------------------------------------

class TooFewObservations(ClimortError):
    """Residual column too short for a probability integral transform."""


class NotPositiveDefinite(ClimortError):
    """Matrix admits no Cholesky factorization even after projection."""


class NuBoundaryWarning(UserWarning):
    """Student-t degrees-of-freedom optimum sits at the search cap."""


# --- forecasting ------------------------------------------------------------

class ConfigMismatch(ClimortError):
    """Simulation configuration components disagree with each other."""


class HorizonMismatch(ClimortError):
    """Trajectories do not cover the requested horizon."""


class MissingObservedAci(ClimortError):
    """Observed climate covariates do not span the forecast window."""


# --- evaluation -------------------------------------------------------------

class DivisionByZeroObservation(ClimortError):
    """Observed value of exactly zero in a percentage-error denominator."""


class InconsistentSplit(ClimortError):
    """Pipelines evaluated on different train/test splits."""


# --- CLI --------------------------------------------------------------------

class BundleMismatch(ClimortError):
    """Model bundle was fitted under a different configuration."""


class DomainError(ClimortError, ValueError):
    """Numeric argument outside the mathematical domain."""
