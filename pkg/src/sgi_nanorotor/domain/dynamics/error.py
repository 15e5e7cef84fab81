class DynamicsError(Exception):
    pass


class IntegrationDivergedError(DynamicsError):
    """Error raised when the state vector stops being finite."""

    def __init__(self, last_good_time: float, message: str | None = None):
        super().__init__(message or f"integration diverged after t={last_good_time:.6e} s")
        self.last_good_time = last_good_time
