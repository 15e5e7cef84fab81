class ExperimentError(Exception):
    pass


class MetricsReadError(ExperimentError):
    """Error raised when a metrics file cannot be read or parsed."""

    pass
