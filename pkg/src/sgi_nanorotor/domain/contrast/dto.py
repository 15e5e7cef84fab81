import math

from pydantic import BaseModel, Field

from sgi_nanorotor.lib.dto_config import model_config


class ContrastReport(BaseModel):
    """Contrast lower bound with its exponent split by mode.

    ``contrast = exp(-(term_alpha + term_gamma + term_libration) / 2)``.
    """

    contrast: float = Field(ge=0, le=1)
    term_alpha: float = Field(ge=0)
    term_gamma: float = Field(ge=0)
    term_libration: float = Field(ge=0)
    kappa0: float = Field(ge=0)

    model_config = model_config()

    @property
    def exponent(self) -> float:
        """Sum of the three terms; still ordered when ``contrast`` underflows to 0."""
        return self.term_alpha + self.term_gamma + self.term_libration

    @property
    def log_contrast(self) -> float:
        return -0.5 * self.exponent


class LibrationCondition(BaseModel):
    lhs: float
    rhs: float
    satisfied: bool

    model_config = model_config()


class ContrastRow(BaseModel):
    mass_kg: float
    omega0_rad_s: float
    delta_alpha_rad: float
    delta_gamma_rad: float
    kappa0: float
    contrast: float
    exponent: float

    model_config = model_config()

    @property
    def omega0_hz(self) -> float:
        return self.omega0_rad_s / (2 * math.pi)
