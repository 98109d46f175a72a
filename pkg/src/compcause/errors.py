class MalformedInputError(ValueError):
    """Input file could not be parsed into numeric series."""


class EstimatorError(ValueError):
    """Data are valid but the requested estimate is undefined for them
    (empty or too-short sequences, zero variance, unequal lengths)."""
