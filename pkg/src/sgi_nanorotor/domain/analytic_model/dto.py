from dataclasses import dataclass


@dataclass(frozen=True)
class SmallAngleLibration:
    """beta(t) = a_beta * cos(omega_eff * t) + beta_bar, with beta(0) = beta0."""

    a_beta: float
    beta_bar: float
    omega_eff: float


@dataclass(frozen=True)
class MismatchEstimates:
    delta_beta0: float
    delta_beta_close: float
    delta_alpha: float
    delta_gamma: float


@dataclass(frozen=True)
class ZeroPointRow:
    occupation: int
    y0: float
