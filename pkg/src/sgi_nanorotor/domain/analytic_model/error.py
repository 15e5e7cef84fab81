class AnalyticModelError(Exception):
    pass


class UnboundedTrajectoryError(AnalyticModelError):
    """Error raised when there is no trap (Omega = 0) to bound the motion."""

    pass


class GridMismatchError(AnalyticModelError):
    """Error raised when two branch series are not sampled on the same grid."""

    pass
