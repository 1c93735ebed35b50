"""Exception and warning types shared across the toolkit."""


class TailfolioError(Exception):
    """Base class for every toolkit error."""


class EmptyPanel(TailfolioError):
    """Panel has too few rows or no columns for the requested estimate."""


class NonFiniteInput(TailfolioError):
    """Input contains NaN or infinite entries where finite values are required."""


class DegenerateSeries(TailfolioError):
    """Series is constant or too short for the requested statistic."""


class DimensionMismatch(TailfolioError):
    """Vector/matrix dimensions do not agree."""


class TooLarge(TailfolioError):
    """Materializing the requested object would exceed the configured size cap."""


class RankDeficient(TailfolioError):
    """Requested more directions than the panel's numerical rank supports."""


class ZeroVector(TailfolioError):
    """A direction vector with zero norm was supplied."""


class LengthMismatch(TailfolioError):
    """Series lengths differ where equal lengths are required."""


class ZeroVariance(TailfolioError):
    """A component with zero variance cannot be weighted."""


class ZeroVolatility(TailfolioError):
    """Series volatility is zero; the requested ratio/scaling is undefined."""


class KurtosisNearZero(TailfolioError):
    """Excess kurtosis is inside the floor band; the mean/kurtosis ratio diverges."""


class NotEnoughComponents(TailfolioError):
    """Fewer components are available than the portfolio requires."""


class InvalidDof(TailfolioError):
    """Student-t degrees of freedom must exceed 4 for the kurtosis to exist."""


class ParseError(TailfolioError):
    """Input file failed to parse; message carries the row/column location."""


class DuplicateDate(TailfolioError):
    """The same date appears twice in a price file."""


class EmptyBucket(TailfolioError):
    """A bucket selects no assets or no dates from the panel."""


class GaussianDataWarning(UserWarning):
    """All candidate component kurtoses are near zero; extraction is non-identifiable."""


class ConvergenceWarning(UserWarning):
    """An iterative routine stopped before reaching its tolerance."""


class UnsortedDatesWarning(UserWarning):
    """Price file dates were out of order and have been sorted."""
