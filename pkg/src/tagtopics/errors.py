"""Shared exception types."""


class DataError(Exception):
    """A fatal problem with input data (missing file, corrupt payload,
    mismatched key sets). The command line maps this to exit code 2."""
