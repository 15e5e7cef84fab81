from dataclasses import dataclass, field

import numpy as np

from sgi_nanorotor.lib.types import FloatArray, Spin

STATE_COLUMNS = ("x", "vx", "y", "vy", "beta", "beta_dot", "alpha", "gamma")


@dataclass(frozen=True)
class BranchState:
    t: float
    x: float
    vx: float
    y: float
    vy: float
    beta: float
    beta_dot: float
    alpha: float
    gamma: float

    def as_vector(self) -> FloatArray:
        return np.array([getattr(self, name) for name in STATE_COLUMNS], dtype=np.float64)

    @classmethod
    def from_vector(cls, t: float, vector: FloatArray) -> "BranchState":
        return cls(t, *(float(v) for v in vector))


@dataclass(frozen=True)
class IntegrationOptions:
    """Switches used to build oracles out of the full model.

    Attributes:
        freeze_beta: hold beta at beta0 (no libration).
        frozen_field: constant (Bx, By) for the torque instead of the field at the COM.
        spin_coupled: when False the magnetic moment is dropped everywhere.
    """

    freeze_beta: bool = False
    frozen_field: tuple[float, float] | None = None
    spin_coupled: bool = True


@dataclass(frozen=True)
class ConservedMomenta:
    p_alpha: float
    p_gamma: float


@dataclass(frozen=True)
class Trajectory:
    """Sampled branch solution. ``states`` columns follow ``STATE_COLUMNS``."""

    spin: Spin
    t: FloatArray
    states: FloatArray
    conserved: ConservedMomenta
    field_x: FloatArray
    field_y: FloatArray

    def column(self, name: str) -> FloatArray:
        return self.states[:, STATE_COLUMNS.index(name)]

    @property
    def x(self) -> FloatArray:
        return self.column("x")

    @property
    def vx(self) -> FloatArray:
        return self.column("vx")

    @property
    def y(self) -> FloatArray:
        return self.column("y")

    @property
    def vy(self) -> FloatArray:
        return self.column("vy")

    @property
    def beta(self) -> FloatArray:
        return self.column("beta")

    @property
    def beta_dot(self) -> FloatArray:
        return self.column("beta_dot")

    @property
    def alpha(self) -> FloatArray:
        return self.column("alpha")

    @property
    def gamma(self) -> FloatArray:
        return self.column("gamma")

    @property
    def samples(self) -> list[BranchState]:
        return [BranchState.from_vector(float(t), row) for t, row in zip(self.t, self.states)]

    @property
    def final(self) -> BranchState:
        return BranchState.from_vector(float(self.t[-1]), self.states[-1])


@dataclass(frozen=True)
class Closure:
    dx: float
    dy: float
    dvx: float
    dvy: float


@dataclass(frozen=True)
class Mismatches:
    """Plus-minus differences on the shared sample grid."""

    delta_beta: FloatArray
    delta_alpha: FloatArray
    delta_gamma: FloatArray

    @property
    def delta_alpha_close(self) -> float:
        return float(self.delta_alpha[-1])

    @property
    def delta_gamma_close(self) -> float:
        return float(self.delta_gamma[-1])


@dataclass(frozen=True)
class InterferometerResult:
    plus: Trajectory
    minus: Trajectory
    t_close: float
    delta_r: FloatArray
    delta_r_max: float
    t_of_max: float
    closure: Closure
    mismatches: Mismatches = field(repr=False)


@dataclass(frozen=True)
class ConvergenceReport:
    """Step-doubling check on x(t_close): runs with n, 2n and 4n steps."""

    n_steps: int
    x_close: tuple[float, float, float]
    order: float
