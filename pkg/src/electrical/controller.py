# Decoupled dq PI current controller tuned on the filter inductance

import math
from dataclasses import dataclass
from typing import Tuple

from src.electrical.state import DqSimState
from src.utils.config import FilterParams


class DegenerateVoltageError(ValueError):
    """Raised when the d-axis voltage is too small to turn power into current."""


@dataclass(frozen=True)
class PiGains:
    kp: float
    ki: float

    def __post_init__(self):
        if self.kp <= 0 or self.ki <= 0:
            raise ValueError(f"PI gains must be positive, got kp={self.kp}, ki={self.ki}")

    @property
    def corner_rad_s(self) -> float:
        """Integral corner frequency ki/kp (the 1.33e3 'Ti' figure for the default tuning)."""
        return self.ki / self.kp


def tune_pi(filter_params: FilterParams, xi: float, omega_n: float) -> PiGains:
    """
    Pole placement on the filter inductance

    The series resistance is left out of the gain formulas, so the loop
    reduces to s^2 + 2*xi*omega_n*s + omega_n^2.

    Args:
        filter_params: RL filter between inverter and grid
        xi: Damping ratio
        omega_n: Natural frequency (rad/s)

    Returns:
        PiGains with kp = 2*xi*omega_n*L and ki = omega_n^2*L
    """
    if xi <= 0 or omega_n <= 0:
        raise ValueError("xi and omega_n must be positive")
    inductance = filter_params.l_f
    return PiGains(kp=2.0 * xi * omega_n * inductance, ki=omega_n * omega_n * inductance)


def current_refs(p_ref: float, q_ref: float, v_d: float) -> Tuple[float, float]:
    """
    dq current references for a power setpoint

    Args:
        p_ref: Active power (W)
        q_ref: Reactive power (var)
        v_d: d-axis grid voltage (V, peak)

    Returns:
        Tuple (i_d_ref, i_q_ref) in A
    """
    if not v_d > 0:
        raise DegenerateVoltageError(f"d-axis voltage must be positive, got {v_d}")
    return 2.0 * p_ref / (3.0 * v_d), -2.0 * q_ref / (3.0 * v_d)


def dq_power(v_dq: Tuple[float, float], i_dq: Tuple[float, float]) -> Tuple[float, float]:
    """Active and reactive power (W, var) from dq voltage and current."""
    v_d, v_q = v_dq
    i_d, i_q = i_dq
    return 1.5 * (v_d * i_d + v_q * i_q), 1.5 * (v_q * i_d - v_d * i_q)


def prefilter_step(state: DqSimState, refs: Tuple[float, float], gains: PiGains, dt_seconds: float) -> Tuple[float, float]:
    """
    First-order reference shaping with corner ki/kp

    Cancels the PI zero, leaving a zero-free second-order response from
    reference to current.
    """
    alpha = 1.0 - math.exp(-gains.corner_rad_s * dt_seconds)
    state.id_ref_f += alpha * (refs[0] - state.id_ref_f)
    state.iq_ref_f += alpha * (refs[1] - state.iq_ref_f)
    return state.id_ref_f, state.iq_ref_f


def controller_step(
    state: DqSimState,
    refs: Tuple[float, float],
    measured: Tuple[float, float],
    v_grid_dq: Tuple[float, float],
    omega: float,
    dt_seconds: float,
    gains: PiGains,
    l_f: float,
) -> Tuple[float, float]:
    """
    One step of the vector current controller

    Args:
        state: Holds the two integrator states (V); advanced in place
        refs: (i_d_ref, i_q_ref) in A
        measured: (i_d, i_q) in A
        v_grid_dq: Grid voltage in the dq frame, used as feedforward
        omega: Frame angular frequency for the cross-coupling terms
        dt_seconds: Controller step
        gains: PI gains shared by both axes
        l_f: Filter inductance used for decoupling

    Returns:
        Commanded inverter voltage (v_d, v_q)
    """
    error_d = refs[0] - measured[0]
    error_q = refs[1] - measured[1]
    state.ctrl_int_d += gains.ki * error_d * dt_seconds
    state.ctrl_int_q += gains.ki * error_q * dt_seconds

    v_d = gains.kp * error_d + state.ctrl_int_d + v_grid_dq[0] - omega * l_f * measured[1]
    v_q = gains.kp * error_q + state.ctrl_int_q + v_grid_dq[1] + omega * l_f * measured[0]
    return v_d, v_q
