import math
from typing import Any, Literal

from pydantic import BaseModel, Field, model_validator
from scipy import constants as codata

from sgi_nanorotor.lib.dto_config import model_config

# Density anchor for mass sweeps: radii scale as m**(1/3) through this point.
ANCHOR_MASS = 1e-17
ANCHOR_RADIUS = 50e-9

NV_ZFS_FREQUENCY = 2.87e9


class PhysicalConstants(BaseModel):
    hbar: float = Field(codata.hbar, gt=0)
    mu0: float = Field(4e-7 * math.pi, gt=0)
    mu_b: float = Field(codata.physical_constants["Bohr magneton"][0], gt=0)
    ge: float = Field(2.0, gt=0)

    model_config = model_config()


class NanodiamondParams(BaseModel):
    mass: float = Field(ANCHOR_MASS, gt=0)
    radius: float = Field(ANCHOR_RADIUS, gt=0)
    chi_rho: float = -6.2e-9
    d_zfs: float = Field(codata.h * NV_ZFS_FREQUENCY, gt=0)
    e_strain: float = Field(0.0, ge=0)

    model_config = model_config()

    @property
    def moment_of_inertia(self) -> float:
        # Uniform sphere, I1 = I2 = I3.
        return 0.4 * self.mass * self.radius**2


class FieldParams(BaseModel):
    b0: float = 0.14
    eta: float = -7000.0
    zeta: float | None = None

    model_config = model_config()

    @model_validator(mode="before")
    @classmethod
    def _fill_zeta(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("zeta") is None:
            eta = data.get("eta", cls.model_fields["eta"].default)
            return {**data, "zeta": -float(eta)}
        return data

    @model_validator(mode="after")
    def _check_maxwell(self) -> "FieldParams":
        if self.zeta is None or self.zeta + self.eta != 0.0:
            raise ValueError(
                f"zeta must equal -eta (divergence-free field), got eta={self.eta}, zeta={self.zeta}"
            )
        return self


class InitialConditions(BaseModel):
    x0: float = 0.0
    y0: float = 1e-9
    vx0: float = 0.0
    vy0: float = 0.0
    beta0: float = 1e-3
    beta_dot0: float = 0.0
    alpha0: float = 0.0
    gamma0: float = 0.0
    omega0: float = 2 * math.pi * 1e4

    model_config = model_config()


class PhysicalSetup(BaseModel):
    constants: PhysicalConstants = PhysicalConstants()
    nanodiamond: NanodiamondParams = NanodiamondParams()
    field: FieldParams = FieldParams()
    initial: InitialConditions = InitialConditions()

    model_config = model_config()

    @property
    def mu(self) -> float:
        """NV magnetic moment ge * muB (J/T)."""
        return self.constants.ge * self.constants.mu_b

    @property
    def moment_of_inertia(self) -> float:
        return self.nanodiamond.moment_of_inertia


class OutputControls(BaseModel):
    stride: int = Field(100, ge=1)
    trajectory_layout: Literal["per_branch", "combined"] = "per_branch"

    model_config = model_config()


class NvOffset(BaseModel):
    d: float = Field(0.0, ge=0)
    alpha_prime: float = 0.0

    model_config = model_config()


class WavePacketWidths(BaseModel):
    """Momentum spreads of the precession and rotation modes, in units of hbar."""

    dp_alpha: float = Field(5.0, gt=0)
    dp_gamma: float = Field(5.0, gt=0)

    model_config = model_config()


class ContrastSettings(BaseModel):
    widths: WavePacketWidths = WavePacketWidths()

    model_config = model_config()


class ZeroPointSettings(BaseModel):
    omega_trap: float = Field(math.sqrt(12.08), gt=0)
    occupations: list[int] = Field(default_factory=lambda: [0, 10, 100])

    model_config = model_config()


class SweepGrids(BaseModel):
    masses: list[float] = Field(default_factory=lambda: [1e-16, 1e-17, 5e-18])
    etas: list[float] = Field(default_factory=lambda: [-3000.0, -5000.0, -7000.0, -9000.0])
    omega0s: list[float] = Field(
        default_factory=lambda: [2 * math.pi * f for f in (1e4, 2e4, 5e4)]
    )

    model_config = model_config()


class RunConfig(BaseModel):
    setup: PhysicalSetup = PhysicalSetup()
    t_close: float | None = Field(None, gt=0)
    dt: float | None = None
    output: OutputControls = OutputControls()
    nv_offset: NvOffset = NvOffset()
    contrast: ContrastSettings = ContrastSettings()
    zero_point: ZeroPointSettings = ZeroPointSettings()
    adiabatic_margin: float = 100.0
    sweep: SweepGrids = SweepGrids()

    model_config = model_config()


class ValidationReport(BaseModel):
    violations: list[str] = Field(default_factory=list)

    model_config = model_config(frozen=False)

    @property
    def is_valid(self) -> bool:
        return not self.violations
