# Average-model inverter behind an RL filter, integrated with fixed-step RK4

from typing import Callable, Tuple

import numpy as np

from src.utils.config import FilterParams


def rk4_step(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray, dt: float) -> np.ndarray:
    """Classic fourth-order Runge-Kutta step for an autonomous system."""
    k1 = fn(x)
    k2 = fn(x + 0.5 * dt * k1)
    k3 = fn(x + 0.5 * dt * k2)
    k4 = fn(x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def plant_step(
    currents: Tuple[float, float],
    v_inv_dq: Tuple[float, float],
    v_grid_dq: Tuple[float, float],
    omega: float,
    filter_params: FilterParams,
    dt_seconds: float,
) -> Tuple[float, float]:
    """
    Advance the filter currents by one step

    Inverter and grid voltages are held over the step. In the rotating frame:
        L*di_d/dt = v_inv_d - v_grid_d - R*i_d + omega*L*i_q
        L*di_q/dt = v_inv_q - v_grid_q - R*i_q - omega*L*i_d

    Args:
        currents: (i_d, i_q) at the start of the step
        v_inv_dq: Inverter output voltage
        v_grid_dq: Grid voltage
        omega: Frame angular frequency (rad/s)
        filter_params: Filter inductance and resistance
        dt_seconds: Step length

    Returns:
        (i_d, i_q) at the end of the step
    """
    inductance = filter_params.l_f
    resistance = filter_params.r_f
    drive = np.array([v_inv_dq[0] - v_grid_dq[0], v_inv_dq[1] - v_grid_dq[1]]) / inductance

    def derivative(i: np.ndarray) -> np.ndarray:
        return drive + np.array(
            [
                -resistance / inductance * i[0] + omega * i[1],
                -resistance / inductance * i[1] - omega * i[0],
            ]
        )

    i_next = rk4_step(derivative, np.array(currents, dtype=float), dt_seconds)
    return float(i_next[0]), float(i_next[1])
