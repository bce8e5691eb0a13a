"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: DataError -> 2, ResourceError -> 3.
"""


class LcpkitError(Exception):
    """Base class for toolkit errors."""


class DataError(LcpkitError):
    """Malformed or invalid input data (bad rows, out-of-range values, format mismatches)."""


class ResourceError(LcpkitError):
    """A required external resource (lexicon file, tagger, dataset) is missing or unusable."""
