"""Error taxonomy shared across the package.

The CLI maps these onto exit codes: invalid input data is a DataError (exit 3),
an unusable parameter combination is a ConfigError (exit 4). Plain usage
mistakes are argparse's business (exit 2).
"""


class DataError(ValueError):
    """Input data is malformed or inconsistent."""


class ConfigError(ValueError):
    """Parameters are individually valid but the combination is unusable."""
