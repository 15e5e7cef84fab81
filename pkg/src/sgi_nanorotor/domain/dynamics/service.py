import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from sgi_nanorotor.domain.params.dto import PhysicalSetup, RunConfig
from sgi_nanorotor.domain.params.service import (
    closure_time,
    step_size,
)
from sgi_nanorotor.domain.spin_model.service import nv_site_field
from sgi_nanorotor.lib.types import SPINS, FloatArray, Spin

from .dto import (
    BranchState,
    Closure,
    ConservedMomenta,
    ConvergenceReport,
    IntegrationOptions,
    InterferometerResult,
    Mismatches,
    Trajectory,
)
from .integrator import Derivative, integrate_fixed_step, steps_for

logger = logging.getLogger("sgi_nanorotor.dynamics")

# Below this |sin(beta)| the closed forms are replaced by series in beta - beta0.
SIN_GUARD = 1e-6


def _trap_terms(setup: PhysicalSetup) -> tuple[float, float]:
    """(Omega^2, Omega^2 * B0 / eta) written without dividing by eta."""
    chi = abs(setup.nanodiamond.chi_rho)
    mu0 = setup.constants.mu0
    eta = setup.field.eta
    return chi * eta**2 / mu0, chi * eta * setup.field.b0 / mu0


def _com_acceleration(
    x: float, y: float, beta: float, omega_sq: float, offset: float, coupling: float
) -> tuple[float, float]:
    ax = -omega_sq * x - offset - coupling * math.cos(beta)
    ay = -omega_sq * y + coupling * math.sin(beta)
    return ax, ay


def com_acceleration(state: BranchState, spin: Spin, setup: PhysicalSetup) -> tuple[float, float]:
    """Centre-of-mass acceleration of one spin branch.

    ax = -Omega^2 (x + B0/eta) - (s mu eta / m) cos(beta)
    ay = -Omega^2 y + (s mu eta / m) sin(beta)
    """
    omega_sq, offset = _trap_terms(setup)
    coupling = spin * setup.mu * setup.field.eta / setup.nanodiamond.mass
    return _com_acceleration(state.x, state.y, state.beta, omega_sq, offset, coupling)


def _inertial_term(beta: float, beta0: float) -> float:
    """(cos b0 - cos b)(cos b0 cos b - 1) / sin^3 b, series-guarded near the poles."""
    sb = math.sin(beta)
    if abs(sb) >= SIN_GUARD:
        cb0, cb = math.cos(beta0), math.cos(beta)
        return (cb0 - cb) * (cb0 * cb - 1.0) / sb**3
    delta = beta - beta0
    cot0 = 1.0 / math.tan(beta0)
    return -delta + 1.5 * cot0 * delta**2 - (4.0 / 3.0 + 2.5 * cot0**2) * delta**3


def _rate_term(beta: float, beta0: float) -> float:
    """(cos b0 - cos b) / sin^2 b, series-guarded near the poles."""
    sb = math.sin(beta)
    if abs(sb) >= SIN_GUARD:
        return (math.cos(beta0) - math.cos(beta)) / sb**2
    delta = beta - beta0
    s0 = math.sin(beta0)
    return delta / s0 - 1.5 * math.cos(beta0) / s0**2 * delta**2


def _torque(bx: float, by: float, beta: float, spin_mu_over_i: float) -> float:
    return spin_mu_over_i * (bx * math.sin(beta) - by * math.cos(beta))


def beta_acceleration(
    state: BranchState,
    spin: Spin,
    setup: PhysicalSetup,
    field_at_com: tuple[float, float],
) -> float:
    """Nutation-angle acceleration: gyroscopic restoring term plus magnetic torque.

    Args:
        state: Branch state; only ``beta`` is read.
        spin: Branch label.
        setup: Physical setup supplying beta0, omega0, mu and I.
        field_at_com: Lab field (Bx, By) at the branch's centre of mass.
    """
    initial = setup.initial
    bx, by = field_at_com
    gyro = initial.omega0**2 * _inertial_term(state.beta, initial.beta0)
    return gyro + _torque(bx, by, state.beta, spin * setup.mu / setup.moment_of_inertia)


def euler_rates(beta: float, beta0: float, omega0: float) -> tuple[float, float]:
    """Precession and spin rates fixed by the conserved momenta p_alpha, p_gamma.

    Example:
        euler_rates(1e-3, 1e-3, 2 * math.pi * 1e4)  # (0.0, omega0)
    """
    h = _rate_term(beta, beta0)
    return omega0 * h, omega0 * (1.0 - h * math.cos(beta))


def conserved_momenta(setup: PhysicalSetup) -> ConservedMomenta:
    inertia = setup.moment_of_inertia
    omega0 = setup.initial.omega0
    return ConservedMomenta(
        p_alpha=inertia * omega0 * math.cos(setup.initial.beta0),
        p_gamma=inertia * omega0,
    )


def _branch_derivative(
    config: RunConfig, spin: Spin, options: IntegrationOptions
) -> Derivative:
    setup = config.setup
    initial = setup.initial
    eta, b0 = setup.field.eta, setup.field.b0
    omega_sq, offset = _trap_terms(setup)
    mu = setup.mu if options.spin_coupled else 0.0
    coupling = spin * mu * eta / setup.nanodiamond.mass
    spin_mu_over_i = spin * mu / setup.moment_of_inertia
    beta0, omega0 = initial.beta0, initial.omega0
    omega0_sq = omega0**2
    nv = config.nv_offset

    def derivative(_t: float, state: FloatArray) -> FloatArray:
        x, vx, y, vy, beta, beta_dot, _alpha, _gamma = state
        ax, ay = _com_acceleration(x, y, beta, omega_sq, offset, coupling)
        if options.freeze_beta:
            beta_ddot = 0.0
        else:
            if options.frozen_field is not None:
                bx, by = options.frozen_field
            else:
                bx, by = nv_site_field(b0 + eta * x, -eta * y, eta, nv.d, beta, nv.alpha_prime)
            beta_ddot = omega0_sq * _inertial_term(beta, beta0) + _torque(bx, by, beta, spin_mu_over_i)
        alpha_dot, gamma_dot = euler_rates(beta, beta0, omega0)
        return np.array([vx, ax, vy, ay, beta_dot, beta_ddot, alpha_dot, gamma_dot])

    return derivative


def _initial_vector(setup: PhysicalSetup, options: IntegrationOptions) -> FloatArray:
    initial = setup.initial
    beta_dot0 = 0.0 if options.freeze_beta else initial.beta_dot0
    return BranchState(
        t=0.0,
        x=initial.x0,
        vx=initial.vx0,
        y=initial.y0,
        vy=initial.vy0,
        beta=initial.beta0,
        beta_dot=beta_dot0,
        alpha=initial.alpha0,
        gamma=initial.gamma0,
    ).as_vector()


def _integrate(
    config: RunConfig,
    spin: Spin,
    n_steps: int,
    stride: int,
    options: IntegrationOptions,
) -> Trajectory:
    setup = config.setup
    t_close = closure_time(config)
    times, states = integrate_fixed_step(
        _branch_derivative(config, spin, options),
        _initial_vector(setup, options),
        t_close,
        n_steps,
        stride=stride,
    )
    x, y = states[:, 0], states[:, 2]
    if np.min(np.abs(np.sin(states[:, 4]))) < SIN_GUARD:
        logger.warning("beta_series_fallback", extra={"spin": spin})
    return Trajectory(
        spin=spin,
        t=times,
        states=states,
        conserved=conserved_momenta(setup),
        field_x=setup.field.b0 + setup.field.eta * x,
        field_y=-setup.field.eta * y,
    )


def integrate_branch(
    config: RunConfig,
    spin: Spin,
    options: IntegrationOptions | None = None,
) -> Trajectory:
    """Fixed-step RK4 solution of one branch over [0, t_close].

    Args:
        config: Validated run configuration.
        spin: +1 or -1.
        options: Oracle switches; the full coupled model by default.

    Returns:
        Trajectory sampled every ``config.output.stride`` steps, final state included.

    Raises:
        IntegrationDivergedError: if the state stops being finite.
    """
    options = options or IntegrationOptions()
    n_steps = steps_for(closure_time(config), step_size(config))
    trajectory = _integrate(config, spin, n_steps, config.output.stride, options)
    logger.info(
        "branch_integrated",
        extra={"spin": spin, "steps": n_steps, "samples": len(trajectory.t)},
    )
    return trajectory


def _refine_peak(t: FloatArray, values: FloatArray) -> tuple[float, float]:
    """Vertex of the parabola through the sampled maximum and its neighbours."""
    i = int(np.argmax(values))
    if i == 0 or i == len(values) - 1:
        return float(values[i]), float(t[i])
    coeffs = np.polyfit(t[i - 1 : i + 2] - t[i], values[i - 1 : i + 2], 2)
    a, b, c = coeffs
    if a >= 0:
        return float(values[i]), float(t[i])
    shift = -b / (2 * a)
    return float(max(values[i], c - b**2 / (4 * a))), float(t[i] + shift)


def combine_branches(plus: Trajectory, minus: Trajectory) -> InterferometerResult:
    """Superposition size, closure residuals and angle mismatches of a branch pair."""
    if plus.t.shape != minus.t.shape or not np.array_equal(plus.t, minus.t):
        raise ValueError("branches must share a sample grid")
    delta_r = np.hypot(plus.x - minus.x, plus.y - minus.y)
    delta_r_max, t_of_max = _refine_peak(plus.t, delta_r)
    p, m = plus.final, minus.final
    return InterferometerResult(
        plus=plus,
        minus=minus,
        t_close=float(plus.t[-1]),
        delta_r=delta_r,
        delta_r_max=delta_r_max,
        t_of_max=t_of_max,
        closure=Closure(dx=p.x - m.x, dy=p.y - m.y, dvx=p.vx - m.vx, dvy=p.vy - m.vy),
        mismatches=Mismatches(
            delta_beta=plus.beta - minus.beta,
            delta_alpha=plus.alpha - minus.alpha,
            delta_gamma=plus.gamma - minus.gamma,
        ),
    )


def run_interferometer(
    config: RunConfig,
    options: IntegrationOptions | None = None,
    threads: int = 1,
) -> InterferometerResult:
    """Integrate both spin branches from identical initial conditions."""
    with ThreadPoolExecutor(max_workers=max(1, min(threads, len(SPINS)))) as pool:
        plus, minus = pool.map(lambda s: integrate_branch(config, s, options), SPINS)
    result = combine_branches(plus, minus)
    logger.info(
        "interferometer_done",
        extra={
            "delta_r_max": result.delta_r_max,
            "t_of_max": result.t_of_max,
            "delta_alpha_close": result.mismatches.delta_alpha_close,
        },
    )
    return result


def rotational_energy(
    trajectory: Trajectory,
    setup: PhysicalSetup,
    field: tuple[float, float] | None = None,
) -> FloatArray:
    """Rotor energy along a trajectory.

    (I/2) beta_dot^2 + (p_alpha - p_gamma cos b)^2 / (2 I sin^2 b) + p_gamma^2 / (2 I)
    + s mu (Bx cos b + By sin b). Without ``field`` the sampled COM field is used;
    the sum is only conserved for a constant field.
    """
    inertia = setup.moment_of_inertia
    p_alpha, p_gamma = trajectory.conserved.p_alpha, trajectory.conserved.p_gamma
    beta = trajectory.beta
    if field is None:
        bx, by = trajectory.field_x, trajectory.field_y
    else:
        bx = np.full_like(beta, field[0])
        by = np.full_like(beta, field[1])
    kinetic = 0.5 * inertia * trajectory.beta_dot**2
    precession = (p_alpha - p_gamma * np.cos(beta)) ** 2 / (2 * inertia * np.sin(beta) ** 2)
    spin_term = p_gamma**2 / (2 * inertia)
    zeeman = trajectory.spin * setup.mu * (bx * np.cos(beta) + by * np.sin(beta))
    return kinetic + precession + spin_term + zeeman


def observed_order(
    config: RunConfig,
    spin: Spin = 1,
    n_steps: int | None = None,
    options: IntegrationOptions | None = None,
) -> ConvergenceReport:
    """Empirical convergence order from x(t_close) at n, 2n and 4n steps."""
    options = options or IntegrationOptions()
    if n_steps is None:
        n_steps = steps_for(closure_time(config), step_size(config))
    x_close = tuple(
        float(_integrate(config, spin, n_steps * k, n_steps * k, options).x[-1]) for k in (1, 2, 4)
    )
    coarse = abs(x_close[0] - x_close[1])
    fine = abs(x_close[1] - x_close[2])
    order = math.log2(coarse / fine) if coarse > 0 and fine > 0 else math.inf
    return ConvergenceReport(n_steps=n_steps, x_close=x_close, order=order)  # type: ignore[arg-type]
