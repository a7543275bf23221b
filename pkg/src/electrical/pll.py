# Synchronous-reference-frame phase-locked loop

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.electrical.state import DqSimState, check_step
from src.electrical.transforms import balanced_set, park_transform
from src.utils.config import ControlConfig, GridParams

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PllGains:
    kp: float
    ki: float


def pll_gains(bandwidth_hz: float, xi: float = 0.707) -> PllGains:
    """PI gains placing the linearised PLL poles at ``2*pi*bandwidth_hz`` with damping ``xi``."""
    omega = TWO_PI * bandwidth_hz
    return PllGains(kp=2.0 * xi * omega, ki=omega * omega)


def pll_step(
    state: DqSimState,
    v_abc: Sequence[float],
    dt_seconds: float,
    gains: PllGains,
    omega_nominal: float,
) -> Tuple[float, float]:
    """
    Advance the PLL by one step, driving the q-axis voltage toward zero

    Args:
        state: Simulation state; theta, omega_hat and pll_integrator are updated
        v_abc: Grid phase voltages at the current instant
        dt_seconds: Step length (<= 1e-4 s at the default bandwidth)
        gains: Loop filter gains
        omega_nominal: Feed-forward angular frequency (rad/s)

    Returns:
        Tuple (theta, omega_hat) after the step
    """
    check_step(dt_seconds)
    v_d, v_q = park_transform(v_abc, state.theta)
    amplitude = math.hypot(v_d, v_q)
    # normalised so the loop gain does not depend on the grid voltage
    error = v_q / amplitude if amplitude > 1e-9 else 0.0
    state.pll_integrator += gains.ki * error * dt_seconds
    state.omega_hat = omega_nominal + gains.kp * error + state.pll_integrator
    state.theta = (state.theta + state.omega_hat * dt_seconds) % TWO_PI
    return state.theta, state.omega_hat


@dataclass
class PllRun:
    t: np.ndarray
    theta: np.ndarray
    omega_hat: np.ndarray
    v_q: np.ndarray


def run_pll(
    grid: GridParams,
    control: ControlConfig,
    duration_s: float,
    dt_seconds: float = 1e-4,
    phase_offset: float = 0.0,
    frequency_steps: Optional[List[Tuple[float, float]]] = None,
) -> PllRun:
    """
    Run the PLL alone against an ideal balanced grid

    Args:
        grid: Grid voltage and nominal frequency
        control: Supplies the PLL bandwidth and damping
        duration_s: Simulated time
        dt_seconds: Step length
        phase_offset: Initial grid angle; the PLL starts at zero
        frequency_steps: Optional (t_start, f_hz) breakpoints for the grid frequency

    Returns:
        PllRun with the estimated angle, frequency and q-axis voltage per step
    """
    check_step(dt_seconds)
    gains = pll_gains(control.pll_bandwidth_hz, control.pll_xi)
    state = DqSimState(theta=0.0, omega_hat=grid.omega)
    steps = int(round(duration_s / dt_seconds))
    breakpoints = sorted(frequency_steps or [])
    t_out = np.empty(steps)
    theta_out = np.empty(steps)
    omega_out = np.empty(steps)
    vq_out = np.empty(steps)

    grid_angle = phase_offset
    for k in range(steps):
        t = k * dt_seconds
        frequency = grid.f
        for t_start, f_hz in breakpoints:
            if t >= t_start:
                frequency = f_hz
        v_abc = balanced_set(grid.v_phase_peak, grid_angle)
        vq_out[k] = park_transform(v_abc, state.theta)[1]
        pll_step(state, v_abc, dt_seconds, gains, grid.omega)
        t_out[k] = t
        theta_out[k] = state.theta
        omega_out[k] = state.omega_hat
        grid_angle = (grid_angle + TWO_PI * frequency * dt_seconds) % TWO_PI

    return PllRun(t=t_out, theta=theta_out, omega_hat=omega_out, v_q=vq_out)


def lock_time(run: PllRun, omega_target: float, tolerance: float = 0.5) -> Optional[float]:
    """First time after which |omega_hat - omega_target| stays below ``tolerance``."""
    outside = np.abs(run.omega_hat - omega_target) >= tolerance
    if not outside.any():
        return 0.0
    last = int(np.flatnonzero(outside)[-1])
    if last + 1 >= run.t.size:
        return None
    return float(run.t[last + 1])


def pll_lock_time(
    grid: GridParams,
    control: ControlConfig,
    duration_s: float = 0.2,
    dt_seconds: float = 1e-4,
    tolerance: float = 0.5,
    phase_offset: float = 1.0,
) -> Optional[float]:
    """Lock time of the PLL on a clean grid starting ``phase_offset`` rad out of alignment."""
    run = run_pll(grid, control, duration_s, dt_seconds, phase_offset=phase_offset)
    return lock_time(run, grid.omega, tolerance)
