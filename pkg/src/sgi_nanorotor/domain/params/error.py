class ParamsError(Exception):
    """Base class for parameter and configuration errors."""

    pass


class DegenerateFieldError(ParamsError):
    """Error raised when the field gradient vanishes and no trap exists."""

    pass


class ConfigLoadError(ParamsError):
    """Error raised when a config file cannot be read or parsed."""

    pass


class ConfigInvalidError(ParamsError):
    """Error raised when a loaded config violates a run invariant."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations
