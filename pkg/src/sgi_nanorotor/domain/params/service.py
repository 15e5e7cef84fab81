import hashlib
import json
import logging
import math
from pathlib import Path

from pydantic import ValidationError

from sgi_nanorotor.domain.spin_model.service import check_adiabaticity, project_field
from sgi_nanorotor.lib.dto_converter import DtoConverter

from .dto import (
    ANCHOR_MASS,
    ANCHOR_RADIUS,
    FieldParams,
    PhysicalSetup,
    RunConfig,
    ValidationReport,
)
from .error import ConfigLoadError, DegenerateFieldError

logger = logging.getLogger("sgi_nanorotor.params")

# The fastest mode must get at least this many steps per period.
MIN_STEPS_PER_PERIOD = 50
DEFAULT_STEPS_PER_PERIOD = 200


def derived_trap_frequency(setup: PhysicalSetup) -> float:
    """Diamagnetic trap frequency Omega = sqrt(|chi_rho| * eta^2 / mu0).

    Raises:
        DegenerateFieldError: if the gradient vanishes.
    """
    eta = setup.field.eta
    if eta == 0.0:
        raise DegenerateFieldError("eta = 0 gives no trap; supply an explicit t_close")
    return math.sqrt(abs(setup.nanodiamond.chi_rho) * eta**2 / setup.constants.mu0)


def closure_time(config: RunConfig) -> float:
    if config.t_close is not None:
        return config.t_close
    return 2 * math.pi / derived_trap_frequency(config.setup)


def _fastest_period(config: RunConfig) -> float:
    periods = [2 * math.pi / abs(config.setup.initial.omega0)] if config.setup.initial.omega0 else []
    if config.setup.field.eta != 0.0:
        periods.append(2 * math.pi / derived_trap_frequency(config.setup))
    if not periods:
        return closure_time(config)
    return min(periods)


def step_size(config: RunConfig) -> float:
    """Configured step, or the fastest period split into 200 steps."""
    if config.dt is not None:
        return config.dt
    return _fastest_period(config) / DEFAULT_STEPS_PER_PERIOD


def validate(config: RunConfig) -> ValidationReport:
    """Collect every violated run invariant; never raises."""
    report = ValidationReport()
    setup = config.setup
    initial = setup.initial

    if initial.beta0 <= 0.0:
        report.violations.append("beta0 must be strictly positive")
    elif initial.beta0 >= math.pi:
        report.violations.append("beta0 must be below pi")

    if setup.field.eta == 0.0 and config.t_close is None:
        report.violations.append("eta = 0 requires an explicit t_close")
    elif config.dt is not None:
        if config.dt <= 0.0:
            report.violations.append("dt must be positive")
        elif config.dt > _fastest_period(config) / MIN_STEPS_PER_PERIOD:
            report.violations.append(
                f"step too coarse: dt={config.dt:.3e} s exceeds fastest period/{MIN_STEPS_PER_PERIOD}"
            )

    if config.adiabatic_margin <= 1.0:
        report.violations.append("adiabaticMargin must exceed 1")
    else:
        bx = setup.field.b0 + setup.field.eta * initial.x0
        by = -setup.field.eta * initial.y0
        field = project_field(bx, by, initial.beta0, initial.gamma0)
        if not check_adiabaticity(
            initial.omega0,
            field.b_par,
            setup.nanodiamond.d_zfs,
            setup.mu,
            margin=config.adiabatic_margin,
            hbar=setup.constants.hbar,
        ):
            report.violations.append(
                f"adiabaticity violated at t=0: omega0={initial.omega0:.3e} rad/s, "
                f"B_par={field.b_par:.3e} T, margin={config.adiabatic_margin:g}"
            )

    if report.violations:
        logger.warning("config_invalid", extra={"violations": report.violations})
    return report


def default_run_config() -> RunConfig:
    """Reference setup: 1e-17 kg rotor in a 0.14 T, -7000 T/m field."""
    return RunConfig()


def load_run_config(path: str | Path) -> RunConfig:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigLoadError(f"cannot read config {path}: {exc}") from exc
    try:
        return DtoConverter[RunConfig](RunConfig).json_to_dto(raw)
    except ValidationError as exc:
        raise ConfigLoadError(f"invalid config {path}: {exc}") from exc


def dump_run_config(config: RunConfig) -> str:
    return json.dumps(DtoConverter[RunConfig](RunConfig).dto_to_json_dict_with_json_case(config), indent=2)


def config_hash(config: RunConfig) -> str:
    """sha256 of the canonical (sorted-key, compact) JSON form."""
    canonical = DtoConverter[RunConfig](RunConfig).dto_to_canonical_json(config)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def radius_for_mass(mass: float) -> float:
    """Constant-density radius through the (1e-17 kg, 50 nm) anchor."""
    return ANCHOR_RADIUS * (mass / ANCHOR_MASS) ** (1.0 / 3.0)


def with_mass(setup: PhysicalSetup, mass: float) -> PhysicalSetup:
    nanodiamond = setup.nanodiamond.model_copy(
        update={"mass": mass, "radius": radius_for_mass(mass)}
    )
    return setup.model_copy(update={"nanodiamond": nanodiamond})


def with_eta(setup: PhysicalSetup, eta: float) -> PhysicalSetup:
    # Rebuilt rather than copied so zeta follows eta.
    field = FieldParams(b0=setup.field.b0, eta=eta)
    return setup.model_copy(update={"field": field})


def with_omega0(setup: PhysicalSetup, omega0: float) -> PhysicalSetup:
    initial = setup.initial.model_copy(update={"omega0": omega0})
    return setup.model_copy(update={"initial": initial})
