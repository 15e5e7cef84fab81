import math
from collections.abc import Callable

import numpy as np

from sgi_nanorotor.lib.types import FloatArray

from .error import IntegrationDivergedError

Derivative = Callable[[float, FloatArray], FloatArray]


def rk4_step(t: float, state: FloatArray, derivative: Derivative, dt: float) -> FloatArray:
    """Classical fourth-order Runge-Kutta step.

    Args:
        t: Time at the start of the step.
        state: State vector at ``t``.
        derivative: Returns d(state)/dt given (t, state).
        dt: Step length.

    Returns:
        FloatArray: State at ``t + dt``.
    """
    half = dt / 2
    k1 = derivative(t, state)
    k2 = derivative(t + half, state + half * k1)
    k3 = derivative(t + half, state + half * k2)
    k4 = derivative(t + dt, state + dt * k3)
    return state + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def steps_for(t_end: float, dt: float) -> int:
    """Number of equal steps covering [0, t_end] with a step no longer than ``dt``."""
    return max(1, math.ceil(t_end / dt * (1 - 1e-12)))


def integrate_fixed_step(
    derivative: Derivative,
    initial: FloatArray,
    t_end: float,
    n_steps: int,
    stride: int = 1,
) -> tuple[FloatArray, FloatArray]:
    """March ``n_steps`` equal RK4 steps from 0 to ``t_end``.

    Samples are kept every ``stride`` steps; the first and the final state are
    always kept.

    Returns:
        (times, states) with ``states`` shaped (samples, len(initial)).

    Raises:
        IntegrationDivergedError: when a step produces a non-finite state.
    """
    dt = t_end / n_steps
    state = np.asarray(initial, dtype=np.float64)
    times = [0.0]
    states = [state]
    for step in range(1, n_steps + 1):
        t_prev = (step - 1) * dt
        state = rk4_step(t_prev, state, derivative, dt)
        if not np.all(np.isfinite(state)):
            raise IntegrationDivergedError(last_good_time=t_prev)
        if step % stride == 0 or step == n_steps:
            times.append(t_end if step == n_steps else step * dt)
            states.append(state)
    return np.array(times), np.vstack(states)
