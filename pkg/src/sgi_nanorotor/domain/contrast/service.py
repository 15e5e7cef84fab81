import logging
import math
from concurrent.futures import ThreadPoolExecutor
from itertools import product

from sgi_nanorotor.domain.analytic_model.service import torque_balance
from sgi_nanorotor.domain.dynamics.service import run_interferometer
from sgi_nanorotor.domain.params.dto import PhysicalSetup, RunConfig, WavePacketWidths
from sgi_nanorotor.domain.params.error import ConfigInvalidError
from sgi_nanorotor.domain.params.service import validate, with_mass, with_omega0

from .dto import ContrastReport, ContrastRow, LibrationCondition
from .error import EmptyGridError, InvalidSpinRateError

logger = logging.getLogger("sgi_nanorotor.contrast")


def _with_overrides(
    setup: PhysicalSetup, beta0: float | None, y0: float | None, omega0: float | None
) -> PhysicalSetup:
    update = {
        key: value
        for key, value in (("beta0", beta0), ("y0", y0), ("omega0", omega0))
        if value is not None
    }
    if not update:
        return setup
    return setup.model_copy(update={"initial": setup.initial.model_copy(update=update)})


def _libration_term(setup: PhysicalSetup) -> float:
    inertia = setup.moment_of_inertia
    hbar = setup.constants.hbar
    omega0 = setup.initial.omega0
    return 8 * setup.mu**2 * torque_balance(setup) ** 2 / (inertia * hbar * omega0**3)


def coherent_amplitude(
    setup: PhysicalSetup,
    beta0: float | None = None,
    y0: float | None = None,
    omega0: float | None = None,
) -> float:
    """|kappa0| = sqrt(I omega0 / (2 hbar)) * mu |B0 beta0 + eta y0| / (I omega0^2).

    Unchanged at t_close, so one value serves both ends of the loop.
    """
    setup = _with_overrides(setup, beta0, y0, omega0)
    inertia = setup.moment_of_inertia
    omega0 = setup.initial.omega0
    if omega0 <= 0:
        raise InvalidSpinRateError(f"omega0 must be positive, got {omega0}")
    zero_point = math.sqrt(inertia * omega0 / (2 * setup.constants.hbar))
    return zero_point * setup.mu * abs(torque_balance(setup)) / (inertia * omega0**2)


def contrast_lower_bound(
    delta_alpha: float,
    delta_gamma: float,
    widths: WavePacketWidths,
    setup: PhysicalSetup,
    beta0: float | None = None,
    y0: float | None = None,
    omega0: float | None = None,
) -> ContrastReport:
    """Lower bound on the spin contrast at recombination.

    Args:
        delta_alpha: Precession mismatch (rad).
        delta_gamma: Spin-angle mismatch (rad).
        widths: Momentum spreads in units of hbar.
        setup: Physical setup; ``beta0``, ``y0`` and ``omega0`` override its
            initial conditions when given.

    Returns:
        ContrastReport with the three exponent terms itemised.
    """
    setup = _with_overrides(setup, beta0, y0, omega0)
    if setup.initial.omega0 <= 0:
        raise InvalidSpinRateError(f"omega0 must be positive, got {setup.initial.omega0}")
    term_alpha = (delta_alpha * widths.dp_alpha) ** 2
    term_gamma = (delta_gamma * widths.dp_gamma) ** 2
    term_libration = _libration_term(setup)
    return ContrastReport(
        contrast=math.exp(-0.5 * (term_alpha + term_gamma + term_libration)),
        term_alpha=term_alpha,
        term_gamma=term_gamma,
        term_libration=term_libration,
        kappa0=coherent_amplitude(setup),
    )


def libration_negligibility(
    setup: PhysicalSetup,
    beta0: float | None = None,
    y0: float | None = None,
    omega0: float | None = None,
) -> LibrationCondition:
    """Compare |B0 beta0 + eta y0| with sqrt(I hbar omega0^3) / (2 mu)."""
    setup = _with_overrides(setup, beta0, y0, omega0)
    omega0 = max(setup.initial.omega0, 0.0)
    lhs = abs(torque_balance(setup))
    rhs = math.sqrt(setup.moment_of_inertia * setup.constants.hbar * omega0**3) / (2 * setup.mu)
    return LibrationCondition(lhs=lhs, rhs=rhs, satisfied=lhs < rhs)


def _sweep_point(config: RunConfig, mass: float, omega0: float) -> ContrastRow:
    setup = with_omega0(with_mass(config.setup, mass), omega0)
    # Only the end point matters; one sample per closure keeps memory flat.
    output = config.output.model_copy(update={"stride": 10**9})
    point = config.model_copy(update={"setup": setup, "output": output})
    report = validate(point)
    if not report.is_valid:
        raise ConfigInvalidError(report.violations)
    result = run_interferometer(point)
    delta_alpha = result.mismatches.delta_alpha_close
    delta_gamma = result.mismatches.delta_gamma_close
    contrast = contrast_lower_bound(delta_alpha, delta_gamma, config.contrast.widths, setup)
    logger.info(
        "sweep_point_done",
        extra={"mass": mass, "omega0": omega0, "contrast": contrast.contrast},
    )
    return ContrastRow(
        mass_kg=mass,
        omega0_rad_s=omega0,
        delta_alpha_rad=delta_alpha,
        delta_gamma_rad=delta_gamma,
        kappa0=contrast.kappa0,
        contrast=contrast.contrast,
        exponent=contrast.exponent,
    )


def contrast_sweep(
    omega0_grid: list[float],
    masses: list[float],
    config: RunConfig,
    threads: int = 1,
) -> list[ContrastRow]:
    """Full pipeline (dynamics -> mismatches -> contrast) over a mass x omega0 grid.

    Radii follow the constant-density scaling. Rows are sorted by (mass, omega0)
    whatever order the points finish in.

    Raises:
        EmptyGridError: if either grid is empty.
        InvalidSpinRateError: if an omega0 in the grid is not positive.
        ConfigInvalidError: if a grid point breaks a run invariant.
    """
    if not omega0_grid or not masses:
        raise EmptyGridError("contrast sweep needs at least one mass and one omega0")
    bad = [omega0 for omega0 in omega0_grid if omega0 <= 0]
    if bad:
        raise InvalidSpinRateError(f"contrast sweep needs positive omega0 values, got {bad}")
    points = list(product(masses, omega0_grid))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = list(pool.map(lambda p: _sweep_point(config, *p), points))
    return sorted(rows, key=lambda row: (row.mass_kg, row.omega0_rad_s))
