class ContrastError(Exception):
    pass


class EmptyGridError(ContrastError):
    """Error raised when a sweep is asked to run over an empty grid."""

    pass


class InvalidSpinRateError(ContrastError, ValueError):
    """Error raised when a contrast quantity is asked for at omega0 <= 0."""

    pass
