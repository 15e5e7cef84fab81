class SpinModelError(Exception):
    pass


class ProjectionInvalidError(SpinModelError):
    """Error raised when the |0> level cannot be eliminated (D = 0)."""

    pass
