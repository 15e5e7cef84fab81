from typing import Annotated, Literal

from pydantic import BaseModel, Field, TypeAdapter, model_validator

from sgi_nanorotor.domain.params.dto import RunConfig
from sgi_nanorotor.lib.dto_config import model_config

ExperimentKind = Literal[
    "trajectory",
    "mass_gradient_map",
    "beta_evolution",
    "euler_angles",
    "contrast_curve",
]

# Sweep axes each experiment kind needs; any other axis is rejected.
REQUIRED_AXES: dict[str, frozenset[str]] = {
    "trajectory": frozenset(),
    "mass_gradient_map": frozenset({"masses", "etas"}),
    "beta_evolution": frozenset({"masses"}),
    "euler_angles": frozenset({"masses"}),
    "contrast_curve": frozenset({"masses", "omega0s"}),
}


class ExperimentSpec(BaseModel):
    kind: ExperimentKind
    base_config: RunConfig = RunConfig()
    masses: list[float] | None = None
    etas: list[float] | None = None
    omega0s: list[float] | None = None

    model_config = model_config()

    @model_validator(mode="after")
    def _check_axes(self) -> "ExperimentSpec":
        present = {axis for axis in ("masses", "etas", "omega0s") if getattr(self, axis) is not None}
        required = REQUIRED_AXES[self.kind]
        if present != required:
            raise ValueError(
                f"experiment '{self.kind}' takes sweep axes {sorted(required)}, got {sorted(present)}"
            )
        return self


class ClosureMetrics(BaseModel):
    dx: float
    dy: float
    dvx: float
    dvy: float

    model_config = model_config()


class SeriesSummary(BaseModel):
    max_abs: float
    rms: float
    final: float

    model_config = model_config()


class SimulationMetrics(BaseModel):
    kind: Literal["simulation"] = "simulation"
    mode: Literal["numeric", "analytic"]
    config_hash: str
    mass_kg: float
    omega0_rad_s: float
    t_close_s: float
    delta_r_max_m: float
    t_of_max_s: float
    closure: ClosureMetrics
    delta_beta: SeriesSummary
    delta_alpha_close_rad: float
    delta_gamma_close_rad: float

    model_config = model_config()


class ContrastPoint(BaseModel):
    mass_kg: float
    omega0_rad_s: float
    delta_alpha_rad: float
    contrast: float
    exponent: float

    model_config = model_config()


class ContrastMetrics(BaseModel):
    kind: Literal["contrast"] = "contrast"
    config_hash: str
    points: list[ContrastPoint]

    model_config = model_config()


Metrics = Annotated[SimulationMetrics | ContrastMetrics, Field(discriminator="kind")]
metrics_adapter: TypeAdapter[SimulationMetrics | ContrastMetrics] = TypeAdapter(Metrics)


class RunManifest(BaseModel):
    command: str
    config_hash: str
    version: str
    created_at: str
    files: list[str]

    model_config = model_config()


class ReportRow(BaseModel):
    quantity: str
    computed: float
    expected: float
    tolerance: str
    passed: bool

    model_config = model_config()
