"""Error taxonomy shared across the package.

The CLI maps these onto distinct exit codes: ConfigError -> 2,
DataError -> 3, anything else -> 4.
"""


class CorpusDiffError(Exception):
    """Base class for all package errors."""


class ConfigError(CorpusDiffError):
    """Bad run configuration: missing files, invalid parameters."""


class DataError(CorpusDiffError):
    """Invalid or unusable input data (corpus, manifests, artifacts)."""
