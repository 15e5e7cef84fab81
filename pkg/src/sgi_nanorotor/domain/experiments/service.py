import json
import logging
from collections.abc import Iterable
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError
from scipy.integrate import cumulative_trapezoid

from sgi_nanorotor import __version__
from sgi_nanorotor.domain.analytic_model.service import (
    analytic_com,
    analytic_com_velocity,
    libration_amplitude,
    max_superposition,
    zero_point_table,
)
from sgi_nanorotor.domain.contrast.mapper import ContrastMapper
from sgi_nanorotor.domain.contrast.service import contrast_sweep
from sgi_nanorotor.domain.contrast.error import EmptyGridError
from sgi_nanorotor.domain.dynamics.dto import InterferometerResult, Trajectory
from sgi_nanorotor.domain.dynamics.integrator import steps_for
from sgi_nanorotor.domain.dynamics.mapper import TrajectoryMapper
from sgi_nanorotor.domain.dynamics.service import (
    combine_branches,
    conserved_momenta,
    run_interferometer,
)
from sgi_nanorotor.domain.params.dto import RunConfig
from sgi_nanorotor.domain.params.error import ConfigInvalidError, ConfigLoadError
from sgi_nanorotor.domain.params.service import (
    closure_time,
    config_hash,
    step_size,
    validate,
    with_eta,
    with_mass,
)
from sgi_nanorotor.lib.dto_converter import DtoConverter
from sgi_nanorotor.lib.table_writer import write_csv
from sgi_nanorotor.lib.types import SPINS, Spin

from .dto import (
    ClosureMetrics,
    ContrastMetrics,
    ContrastPoint,
    ExperimentSpec,
    ReportRow,
    RunManifest,
    SeriesSummary,
    SimulationMetrics,
    metrics_adapter,
)
from .error import MetricsReadError
from .reference import REFERENCE_VALUES, ReferenceValue, mass_matches, omega0_matches

logger = logging.getLogger("sgi_nanorotor.experiments")

MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class CommandOutcome:
    files: list[Path]
    metrics: SimulationMetrics | ContrastMetrics | None = None


def _require_valid(config: RunConfig) -> None:
    report = validate(config)
    if not report.is_valid:
        raise ConfigInvalidError(report.violations)


def _write_json(dto: BaseModel, path: Path) -> Path:
    payload = DtoConverter(type(dto)).dto_to_json_dict_with_json_case(dto)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_manifest(out_dir: Path, command: str, config: RunConfig, files: Iterable[Path]) -> Path:
    """List every emitted file, the manifest itself included."""
    names = sorted({path.name for path in files} | {MANIFEST_NAME})
    manifest = RunManifest(
        command=command,
        config_hash=config_hash(config),
        version=__version__,
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        files=names,
    )
    return _write_json(manifest, out_dir / MANIFEST_NAME)


def _sample_times(config: RunConfig) -> np.ndarray:
    """Sample grid the numeric integrator would produce for ``config``."""
    t_close = closure_time(config)
    n_steps = steps_for(t_close, step_size(config))
    dt = t_close / n_steps
    stride = config.output.stride
    steps = list(range(0, n_steps, stride)) + [n_steps]
    times = np.array(steps, dtype=np.float64) * dt
    times[-1] = t_close
    return times


def _analytic_branch(config: RunConfig, spin: Spin, t: np.ndarray) -> Trajectory:
    """Small-angle closed forms laid out like a numeric trajectory."""
    setup = config.setup
    initial = setup.initial
    x, y = analytic_com(t, spin, setup)
    vx, vy = analytic_com_velocity(t, spin, setup)
    libration = libration_amplitude(spin, setup)
    beta = libration.a_beta * np.cos(libration.omega_eff * t) + libration.beta_bar
    beta_dot = -libration.a_beta * libration.omega_eff * np.sin(libration.omega_eff * t)
    precession = (initial.omega0 / initial.beta0) * cumulative_trapezoid(
        beta - initial.beta0, t, initial=0.0
    )
    alpha = initial.alpha0 + precession
    gamma = initial.gamma0 + initial.omega0 * t - precession
    states = np.column_stack([x, vx, y, vy, beta, beta_dot, alpha, gamma])
    return Trajectory(
        spin=spin,
        t=t,
        states=states,
        conserved=conserved_momenta(setup),
        field_x=setup.field.b0 + setup.field.eta * x,
        field_y=-setup.field.eta * y,
    )


def analytic_interferometer(config: RunConfig) -> InterferometerResult:
    t = _sample_times(config)
    plus, minus = (_analytic_branch(config, spin, t) for spin in SPINS)
    return combine_branches(plus, minus)


def simulation_metrics(
    config: RunConfig,
    result: InterferometerResult,
    mode: Literal["numeric", "analytic"] = "numeric",
) -> SimulationMetrics:
    delta_beta = result.mismatches.delta_beta
    return SimulationMetrics(
        mode=mode,
        config_hash=config_hash(config),
        mass_kg=config.setup.nanodiamond.mass,
        omega0_rad_s=config.setup.initial.omega0,
        t_close_s=result.t_close,
        delta_r_max_m=result.delta_r_max,
        t_of_max_s=result.t_of_max,
        closure=ClosureMetrics(**asdict(result.closure)),
        delta_beta=SeriesSummary(
            max_abs=float(np.max(np.abs(delta_beta))),
            rms=float(np.sqrt(np.mean(delta_beta**2))),
            final=float(delta_beta[-1]),
        ),
        delta_alpha_close_rad=result.mismatches.delta_alpha_close,
        delta_gamma_close_rad=result.mismatches.delta_gamma_close,
    )


def simulate(
    config: RunConfig, out_dir: Path, analytic: bool = False, threads: int = 1
) -> CommandOutcome:
    """Paired trajectories, metrics JSON and manifest for one configuration."""
    _require_valid(config)
    result = analytic_interferometer(config) if analytic else run_interferometer(config, threads=threads)
    mapper = TrajectoryMapper()
    files: list[Path] = []
    if config.output.trajectory_layout == "combined":
        files.append(mapper.write_csv(mapper.result_to_frame(result), out_dir / "trajectory.csv"))
    else:
        for name, branch in (("plus", result.plus), ("minus", result.minus)):
            frame = mapper.trajectory_to_frame(branch)
            files.append(mapper.write_csv(frame, out_dir / f"trajectory_{name}.csv"))
    metrics = simulation_metrics(config, result, mode="analytic" if analytic else "numeric")
    files.append(_write_json(metrics, out_dir / "metrics.json"))
    files.append(write_manifest(out_dir, "simulate", config, files))
    logger.info("simulate_done", extra={"out_dir": str(out_dir), "files": len(files)})
    return CommandOutcome(files=files, metrics=metrics)


def superposition_table(config: RunConfig, masses: list[float], etas: list[float]) -> pd.DataFrame:
    """Half-loop separation with beta at beta0 over a mass x gradient grid."""
    if not masses or not etas:
        raise EmptyGridError("superposition sweep needs at least one mass and one eta")
    rows = [
        {
            "mass_kg": mass,
            "eta_t_per_m": eta,
            "delta_r_max_m": max_superposition(with_eta(with_mass(config.setup, mass), eta)),
        }
        for mass in sorted(masses)
        for eta in sorted(etas)
    ]
    return pd.DataFrame(rows, columns=["mass_kg", "eta_t_per_m", "delta_r_max_m"])


def sweep_superposition(
    config: RunConfig, masses: list[float], etas: list[float], out_dir: Path
) -> CommandOutcome:
    frame = superposition_table(config, masses, etas)
    files = [write_csv(frame, out_dir / "superposition.csv")]
    files.append(write_manifest(out_dir, "sweep-superposition", config, files))
    return CommandOutcome(files=files)


def contrast(
    config: RunConfig,
    masses: list[float],
    omega0s: list[float],
    out_dir: Path,
    threads: int = 1,
) -> CommandOutcome:
    """Contrast curve CSV plus the grid points at 2pi x 10 kHz, one per mass.

    Masses whose grid misses that spin rate get no point.
    """
    rows = contrast_sweep(omega0s, masses, config, threads=threads)
    files = [ContrastMapper().write_csv(rows, out_dir / "contrast_curve.csv")]
    points = [
        ContrastPoint(
            mass_kg=row.mass_kg,
            omega0_rad_s=row.omega0_rad_s,
            delta_alpha_rad=row.delta_alpha_rad,
            contrast=row.contrast,
            exponent=row.exponent,
        )
        for row in rows
        if omega0_matches(row.omega0_rad_s)
    ]
    metrics = ContrastMetrics(config_hash=config_hash(config), points=points)
    files.append(_write_json(metrics, out_dir / "contrast_points.json"))
    files.append(write_manifest(out_dir, "contrast", config, files))
    return CommandOutcome(files=files, metrics=metrics)


def _per_mass_results(
    config: RunConfig, masses: list[float], threads: int
) -> list[tuple[float, InterferometerResult]]:
    if not masses:
        raise EmptyGridError("at least one mass is required")
    results = []
    for mass in sorted(masses):
        point = config.model_copy(update={"setup": with_mass(config.setup, mass)})
        _require_valid(point)
        results.append((mass, run_interferometer(point, threads=threads)))
    return results


def beta_evolution(
    config: RunConfig, masses: list[float], out_dir: Path, threads: int = 1
) -> CommandOutcome:
    """beta for both branches and their difference, one block per mass."""
    frames = [
        pd.DataFrame(
            {
                "mass_kg": mass,
                "t": result.plus.t,
                "beta_plus": result.plus.beta,
                "beta_minus": result.minus.beta,
                "delta_beta": result.mismatches.delta_beta,
            }
        )
        for mass, result in _per_mass_results(config, masses, threads)
    ]
    files = [write_csv(pd.concat(frames, ignore_index=True), out_dir / "beta_evolution.csv")]
    files.append(write_manifest(out_dir, "beta-evolution", config, files))
    return CommandOutcome(files=files)


def euler_angles(
    config: RunConfig, masses: list[float], out_dir: Path, threads: int = 1
) -> CommandOutcome:
    """Precession and spin angles of both branches with their mismatches, per mass."""
    frames = [
        pd.DataFrame(
            {
                "mass_kg": mass,
                "t": result.plus.t,
                "alpha_plus": result.plus.alpha,
                "alpha_minus": result.minus.alpha,
                "gamma_plus": result.plus.gamma,
                "gamma_minus": result.minus.gamma,
                "delta_alpha": result.mismatches.delta_alpha,
                "delta_gamma": result.mismatches.delta_gamma,
            }
        )
        for mass, result in _per_mass_results(config, masses, threads)
    ]
    files = [write_csv(pd.concat(frames, ignore_index=True), out_dir / "euler_angles.csv")]
    files.append(write_manifest(out_dir, "euler-angles", config, files))
    return CommandOutcome(files=files)


def load_experiment_spec(path: str | Path) -> ExperimentSpec:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigLoadError(f"cannot read experiment {path}: {exc}") from exc
    try:
        return DtoConverter[ExperimentSpec](ExperimentSpec).json_to_dto(raw)
    except ValidationError as exc:
        raise ConfigLoadError(f"invalid experiment {path}: {exc}") from exc


def run_experiment(
    spec: ExperimentSpec, out_dir: Path, analytic: bool = False, threads: int = 1
) -> CommandOutcome:
    config = spec.base_config
    match spec.kind:
        case "trajectory":
            return simulate(config, out_dir, analytic=analytic, threads=threads)
        case "mass_gradient_map":
            return sweep_superposition(config, spec.masses or [], spec.etas or [], out_dir)
        case "beta_evolution":
            return beta_evolution(config, spec.masses or [], out_dir, threads=threads)
        case "euler_angles":
            return euler_angles(config, spec.masses or [], out_dir, threads=threads)
        case "contrast_curve":
            return contrast(config, spec.masses or [], spec.omega0s or [], out_dir, threads=threads)
    raise ValueError(f"unknown experiment kind {spec.kind}")


def read_metrics(path: str | Path) -> SimulationMetrics | ContrastMetrics:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MetricsReadError(f"cannot read metrics {path}: {exc}") from exc
    try:
        return metrics_adapter.validate_json(raw)
    except ValidationError as exc:
        raise MetricsReadError(f"invalid metrics {path}: {exc}") from exc


def _row(reference: ReferenceValue, computed: float) -> ReportRow:
    return ReportRow(
        quantity=reference.label,
        computed=computed,
        expected=reference.expected,
        tolerance=reference.tolerance_text,
        passed=reference.accepts(computed),
    )


def report_rows(
    metrics: Iterable[SimulationMetrics | ContrastMetrics], config: RunConfig | None = None
) -> list[ReportRow]:
    """Compare metrics against the reference table.

    Zero-point rows are computed from ``config`` (default setup if omitted) so
    they are always present.
    """
    config = config or RunConfig()
    rows: list[ReportRow] = []
    for item in metrics:
        if isinstance(item, SimulationMetrics):
            for reference in REFERENCE_VALUES:
                if reference.key == "t_close":
                    rows.append(_row(reference, item.t_close_s))
                elif reference.key == "delta_r_max" and mass_matches(reference, item.mass_kg):
                    rows.append(_row(reference, item.delta_r_max_m))
                elif (
                    reference.key == "delta_alpha"
                    and mass_matches(reference, item.mass_kg)
                    and omega0_matches(item.omega0_rad_s)
                ):
                    rows.append(_row(reference, item.delta_alpha_close_rad))
        else:
            for point in (p for p in item.points if omega0_matches(p.omega0_rad_s)):
                for reference in REFERENCE_VALUES:
                    if reference.key in ("delta_alpha", "contrast") and mass_matches(reference, point.mass_kg):
                        value = point.delta_alpha_rad if reference.key == "delta_alpha" else point.contrast
                        rows.append(_row(reference, value))
    zero_point = config.zero_point
    table = {
        row.occupation: row.y0
        for row in zero_point_table(
            config.setup.nanodiamond.mass,
            zero_point.omega_trap,
            sorted({ref.occupation for ref in REFERENCE_VALUES if ref.occupation is not None}),
            hbar=config.setup.constants.hbar,
        )
    }
    for reference in REFERENCE_VALUES:
        if reference.occupation is not None:
            rows.append(_row(reference, table[reference.occupation]))
    return rows

