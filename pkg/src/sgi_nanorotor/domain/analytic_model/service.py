import math

import numpy as np
import numpy.typing as npt
from scipy import constants as codata
from scipy.integrate import cumulative_trapezoid

from sgi_nanorotor.domain.params.dto import PhysicalSetup
from sgi_nanorotor.domain.params.error import DegenerateFieldError
from sgi_nanorotor.domain.params.service import derived_trap_frequency
from sgi_nanorotor.lib.types import FloatArray, Spin

from .dto import MismatchEstimates, SmallAngleLibration, ZeroPointRow
from .error import GridMismatchError, UnboundedTrajectoryError

TimeLike = float | npt.NDArray[np.float64]


def _trap_frequency(setup: PhysicalSetup) -> float:
    try:
        return derived_trap_frequency(setup)
    except DegenerateFieldError as exc:
        raise UnboundedTrajectoryError("no diamagnetic trap, trajectories are unbounded") from exc


def _spin_offsets(spin: Spin, setup: PhysicalSetup, omega: float) -> tuple[float, float]:
    """Equilibrium (x_p, y_p) of one branch with beta held at beta0."""
    field = setup.field
    beta0 = setup.initial.beta0
    k = spin * setup.mu * field.eta / (setup.nanodiamond.mass * omega**2)
    return -field.b0 / field.eta - k * math.cos(beta0), k * math.sin(beta0)


def analytic_com(t: TimeLike, spin: Spin, setup: PhysicalSetup) -> tuple[TimeLike, TimeLike]:
    """Exact (x, y) of one branch with beta frozen at beta0.

    Each axis oscillates at Omega about its spin-dependent equilibrium:
    ``q(t) = q_p + (q0 - q_p) cos(Omega t) + (v0 / Omega) sin(Omega t)``.
    For x0 = vx0 = 0 this is ``x(t) = (s mu eta cos(beta0) / (m Omega^2) + B0 / eta)(cos(Omega t) - 1)``.

    Raises:
        UnboundedTrajectoryError: if eta = 0.
    """
    omega = _trap_frequency(setup)
    initial = setup.initial
    x_p, y_p = _spin_offsets(spin, setup, omega)
    cos_t, sin_t = np.cos(omega * t), np.sin(omega * t)
    x = x_p + (initial.x0 - x_p) * cos_t + initial.vx0 / omega * sin_t
    y = y_p + (initial.y0 - y_p) * cos_t + initial.vy0 / omega * sin_t
    return x, y


def analytic_com_velocity(t: TimeLike, spin: Spin, setup: PhysicalSetup) -> tuple[TimeLike, TimeLike]:
    """Time derivative of :func:`analytic_com`."""
    omega = _trap_frequency(setup)
    initial = setup.initial
    x_p, y_p = _spin_offsets(spin, setup, omega)
    cos_t, sin_t = np.cos(omega * t), np.sin(omega * t)
    vx = -omega * (initial.x0 - x_p) * sin_t + initial.vx0 * cos_t
    vy = -omega * (initial.y0 - y_p) * sin_t + initial.vy0 * cos_t
    return vx, vy


def max_superposition(setup: PhysicalSetup, beta0: float | None = None) -> float:
    """Largest branch separation, reached at half a loop.

    Example:
        max_superposition(default_run_config().setup)  # ~2.148e-7 m
    """
    omega = _trap_frequency(setup)
    beta0 = setup.initial.beta0 if beta0 is None else beta0
    split = 4 * setup.mu * abs(setup.field.eta) / (setup.nanodiamond.mass * omega**2)
    return split * math.sqrt(1 + beta0**2)


def _torque_lever(setup: PhysicalSetup, field_at_com: tuple[float, float] | None) -> tuple[float, float]:
    if field_at_com is None:
        field, initial = setup.field, setup.initial
        return field.b0 + field.eta * initial.x0, -field.eta * initial.y0
    return field_at_com


def libration_amplitude(
    spin: Spin,
    setup: PhysicalSetup,
    field_at_com: tuple[float, float] | None = None,
    exact_frequency: bool = False,
) -> SmallAngleLibration:
    """Linearised libration about beta0 under the spin torque.

    Args:
        spin: Branch label.
        setup: Physical setup.
        field_at_com: (Bx, By); the field at the initial position when omitted.
        exact_frequency: Keep the torque's contribution to the libration
            frequency, ``omega^2 = omega0^2 - (s mu / I)(Bx + By beta0)``,
            instead of ``omega = omega0``.

    Returns:
        Amplitude, equilibrium and frequency. ``a_beta = beta0 - beta_bar`` so
        that beta(0) = beta0.
    """
    bx, by = _torque_lever(setup, field_at_com)
    initial = setup.initial
    spin_mu_over_i = spin * setup.mu / setup.moment_of_inertia
    omega_sq = initial.omega0**2
    if exact_frequency:
        omega_sq -= spin_mu_over_i * (bx + by * initial.beta0)
    beta_bar = initial.beta0 + spin_mu_over_i * (bx * initial.beta0 - by) / omega_sq
    return SmallAngleLibration(
        a_beta=initial.beta0 - beta_bar,
        beta_bar=beta_bar,
        omega_eff=math.sqrt(omega_sq),
    )


def small_angle_libration(
    t: TimeLike,
    spin: Spin,
    setup: PhysicalSetup,
    field_at_com: tuple[float, float] | None = None,
    exact_frequency: bool = False,
) -> TimeLike:
    libration = libration_amplitude(spin, setup, field_at_com, exact_frequency)
    return libration.a_beta * np.cos(libration.omega_eff * t) + libration.beta_bar


def torque_balance(setup: PhysicalSetup) -> float:
    """B0 beta0 + eta y0 (T): the field combination that drives the libration."""
    return setup.field.b0 * setup.initial.beta0 + setup.field.eta * setup.initial.y0


def delta_beta_initial(setup: PhysicalSetup) -> float:
    """Signed libration mismatch scale 4 mu (B0 beta0 + eta y0) / (I omega0^2)."""
    initial = setup.initial
    return 4 * setup.mu * torque_balance(setup) / (setup.moment_of_inertia * initial.omega0**2)


def delta_alpha_gamma(
    t: FloatArray,
    beta_plus: FloatArray,
    beta_minus: FloatArray,
    beta0: float,
    omega0: float,
    t_minus: FloatArray | None = None,
) -> tuple[FloatArray, FloatArray]:
    """Precession and spin mismatches from the two libration histories.

    delta_alpha(t) = (omega0 / beta0) * int_0^t (beta_plus - beta_minus) dt',
    trapezoidal on the shared grid; delta_gamma = -delta_alpha.

    Raises:
        GridMismatchError: if the series lengths differ or ``t_minus`` differs from ``t``.
    """
    if not (len(t) == len(beta_plus) == len(beta_minus)):
        raise GridMismatchError(
            f"series lengths differ: t={len(t)}, plus={len(beta_plus)}, minus={len(beta_minus)}"
        )
    if t_minus is not None and (len(t_minus) != len(t) or not np.array_equal(t_minus, t)):
        raise GridMismatchError("branches are sampled on different time grids")
    delta_alpha = (omega0 / beta0) * cumulative_trapezoid(
        np.asarray(beta_plus) - np.asarray(beta_minus), t, initial=0.0
    )
    return delta_alpha, -delta_alpha


def mismatch_estimates(setup: PhysicalSetup, t_close: float) -> MismatchEstimates:
    """Small-angle estimates of the branch mismatches at ``t_close``.

    Along the loop the bias seen by the rotor follows B0*cos(Omega t), so the
    shifted libration centre c_s(t) averages to zero over a closed loop and
    only the oscillation seeded at t = 0 survives in the angle mismatches.
    """
    initial = setup.initial
    omega0 = initial.omega0
    c_plus = libration_amplitude(1, setup).beta_bar - initial.beta0
    c_minus = libration_amplitude(-1, setup).beta_bar - initial.beta0
    spread = c_plus - c_minus
    delta_alpha = -(spread / initial.beta0) * math.sin(omega0 * t_close)
    return MismatchEstimates(
        delta_beta0=delta_beta_initial(setup),
        delta_beta_close=spread * (1 - math.cos(omega0 * t_close)),
        delta_alpha=delta_alpha,
        delta_gamma=-delta_alpha,
    )


def zero_point_y0(mass: float, omega_trap: float, n: int = 0, hbar: float = codata.hbar) -> float:
    """RMS position spread sqrt(hbar (n + 1/2) / (m omega)) of trap level n."""
    if omega_trap <= 0:
        raise ValueError(f"omega_trap must be positive, got {omega_trap}")
    if n < 0:
        raise ValueError(f"occupation must be non-negative, got {n}")
    return math.sqrt(hbar / (mass * omega_trap) * (n + 0.5))


def zero_point_table(
    mass: float, omega_trap: float, occupations: list[int], hbar: float = codata.hbar
) -> list[ZeroPointRow]:
    return [ZeroPointRow(occupation=n, y0=zero_point_y0(mass, omega_trap, n, hbar)) for n in occupations]
