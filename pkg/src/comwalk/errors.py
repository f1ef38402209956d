"""Exception hierarchy shared by the library and the CLI.

The CLI maps each class to a one-line error category: ConfigError -> config,
OSError -> io, DataError -> data, NumericError -> numeric.
"""


class ComwalkError(Exception):
    """Base class for everything raised deliberately by this package."""


class ConfigError(ComwalkError):
    """Invalid configuration value or schema violation."""


class DataError(ComwalkError):
    """Input data is structurally unusable (parse errors, empty files,
    impossible sampling requests)."""


class EdgeListError(DataError):
    """Malformed edge-list line; carries the 1-based line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class SamplingError(DataError):
    """A rejection-sampling loop hit its attempt cap before finishing."""


class NumericError(ComwalkError):
    """Non-finite values appeared where the math guarantees finite ones."""
