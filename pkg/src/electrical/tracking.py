# Closed-loop tracking runs (PLL + current controller + plant) and their metrics

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.dispatch.engine import DispatchTrace
from src.electrical.controller import controller_step, current_refs, dq_power, prefilter_step, tune_pi
from src.electrical.plant import plant_step
from src.electrical.pll import pll_gains, pll_step
from src.electrical.state import DqSimState, NumericalDivergenceError, check_step
from src.electrical.transforms import balanced_set, park_transform
from src.utils.config import ElectricalConfig

logger = logging.getLogger(__name__)

WAVEFORM_COLUMNS = ["t_s", "id_ref", "iq_ref", "id", "iq", "vd", "vq", "p_w", "q_var"]


@dataclass
class TrackingTrace:
    t: np.ndarray
    id_ref: np.ndarray
    iq_ref: np.ndarray
    id: np.ndarray
    iq: np.ndarray
    vd: np.ndarray
    vq: np.ndarray
    p_w: np.ndarray
    q_var: np.ndarray

    def __len__(self) -> int:
        return int(self.t.size)

    def frame(self) -> pd.DataFrame:
        data = {column: getattr(self, column) for column in WAVEFORM_COLUMNS[1:]}
        return pd.DataFrame({"t_s": self.t, **data}, columns=WAVEFORM_COLUMNS)


def _reference_at(profile: Sequence[Tuple[float, float]], t: float) -> float:
    power = 0.0
    for t_start, p_w in profile:
        if t >= t_start:
            power = p_w
    return power


def run_tracking_sim(
    p_ref_profile: Sequence[Tuple[float, float]],
    duration_s: Optional[float] = None,
    dt_seconds: Optional[float] = None,
    electrical: Optional[ElectricalConfig] = None,
) -> TrackingTrace:
    """
    Simulate one grid-tied inverter following an active power step sequence

    Reactive power reference is held at zero. The PLL starts aligned with
    the grid and keeps tracking it throughout the run.

    Args:
        p_ref_profile: (t_start, p_w) breakpoints; the power is 0 before the first one
        duration_s: Simulated time, defaults to the configured horizon
        dt_seconds: Step length, defaults to the configured controller step
        electrical: Grid, filter and controller parameters

    Returns:
        TrackingTrace sampled at every step
    """
    electrical = electrical or ElectricalConfig()
    grid, filter_params, control = electrical.grid, electrical.filter, electrical.control
    duration_s = control.horizon_s if duration_s is None else duration_s
    dt_seconds = control.dt_s if dt_seconds is None else dt_seconds
    check_step(dt_seconds)

    gains = tune_pi(filter_params, control.xi, control.omega_n)
    loop_gains = pll_gains(control.pll_bandwidth_hz, control.pll_xi)
    profile = sorted(p_ref_profile)
    steps = int(round(duration_s / dt_seconds))
    columns = {name: np.zeros(steps) for name in ("t", "id_ref", "iq_ref", "id", "iq", "vd", "vq", "p_w", "q_var")}

    state = DqSimState(theta=0.0, omega_hat=grid.omega)
    grid_angle = 0.0
    logger.debug(f"Tracking run: {steps} steps, kp={gains.kp:.4f}, ki={gains.ki:.1f}")

    for k in range(steps):
        t = k * dt_seconds
        v_abc = balanced_set(grid.v_phase_peak, grid_angle)
        v_grid_dq = park_transform(v_abc, state.theta)
        refs = current_refs(_reference_at(profile, t), 0.0, v_grid_dq[0])
        shaped = prefilter_step(state, refs, gains, dt_seconds) if control.reference_prefilter else refs

        p_w, q_var = dq_power(v_grid_dq, (state.id, state.iq))
        columns["t"][k] = t
        columns["id_ref"][k], columns["iq_ref"][k] = refs
        columns["id"][k], columns["iq"][k] = state.id, state.iq
        columns["vd"][k], columns["vq"][k] = v_grid_dq
        columns["p_w"][k], columns["q_var"][k] = p_w, q_var

        v_inv_dq = controller_step(
            state, shaped, (state.id, state.iq), v_grid_dq, state.omega_hat, dt_seconds, gains, filter_params.l_f
        )
        state.id, state.iq = plant_step(
            (state.id, state.iq), v_inv_dq, v_grid_dq, state.omega_hat, filter_params, dt_seconds
        )
        pll_step(state, v_abc, dt_seconds, loop_gains, grid.omega)
        grid_angle = (grid_angle + grid.omega * dt_seconds) % (2.0 * math.pi)

        if not state.is_finite():
            raise NumericalDivergenceError(k, f"state {state}")

    return TrackingTrace(**columns)


@dataclass(frozen=True)
class StepMetrics:
    overshoot: float
    settling_time_s: Optional[float]
    steady_state_error: float
    final_power_w: float


def step_metrics(trace: TrackingTrace, target_w: float, t_step: float = 0.0, band: float = 0.02) -> StepMetrics:
    """
    Overshoot, settling time and steady-state error of a power step

    Args:
        trace: Tracking run containing the step
        target_w: Power the step moves to (non-zero)
        t_step: Time the step is applied
        band: Relative settling band (0.02 for the 2% criterion)

    Returns:
        StepMetrics; settling_time_s is None when the response never settles
    """
    if target_w == 0:
        raise ValueError("target_w must be non-zero")
    after = trace.t >= t_step
    t = trace.t[after]
    power = trace.p_w[after]
    if power.size == 0:
        raise ValueError(f"no samples after t_step={t_step}")

    scale = abs(target_w)
    peak = power.max() if target_w > 0 else power.min()
    overshoot = max(0.0, (peak - target_w) / target_w)

    outside = np.abs(power - target_w) > band * scale
    if not outside.any():
        settling: Optional[float] = 0.0
    elif outside[-1]:
        settling = None
    else:
        last = int(np.flatnonzero(outside)[-1])
        settling = float(t[last + 1] - t_step)

    tail = power[-max(1, power.size // 10):]
    final = float(tail.mean())
    return StepMetrics(
        overshoot=float(overshoot),
        settling_time_s=settling,
        steady_state_error=abs(final - target_w) / scale,
        final_power_w=final,
    )


@dataclass
class SetpointReport:
    """Inverter current references implied by a dispatch trace."""

    pv_rated_current: float
    battery_rated_current: float
    pv_peak_current: float = 0.0
    battery_peak_current: float = 0.0
    # (step, inverter, current) for references above the rated current
    violations: List[Tuple[int, str, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_dispatch_setpoints(trace: DispatchTrace, electrical: Optional[ElectricalConfig] = None) -> SetpointReport:
    """
    Map each dispatch step onto d-axis current references for the two inverters

    Args:
        trace: Dispatch trace (powers in kW)
        electrical: Grid voltage and inverter ratings

    Returns:
        SetpointReport with peak currents and any over-rating steps
    """
    electrical = electrical or ElectricalConfig()
    v_d = electrical.grid.v_d_nominal
    control = electrical.control
    report = SetpointReport(
        pv_rated_current=current_refs(control.pv_rated_w, 0.0, v_d)[0],
        battery_rated_current=current_refs(control.battery_rated_w, 0.0, v_d)[0],
    )
    for record in trace.records:
        for inverter, power_kw, rated in (
            ("pv", record.flows.p_pv, report.pv_rated_current),
            ("battery", abs(record.flows.p_batt), report.battery_rated_current),
        ):
            current = current_refs(power_kw * 1000.0, 0.0, v_d)[0]
            if inverter == "pv":
                report.pv_peak_current = max(report.pv_peak_current, current)
            else:
                report.battery_peak_current = max(report.battery_peak_current, current)
            if current > rated * (1.0 + 1e-9):
                report.violations.append((record.t, inverter, current))

    if report.violations:
        logger.warning(f"{len(report.violations)} dispatch setpoints exceed inverter ratings")
    return report


def write_waveform_csv(trace: TrackingTrace, path: Union[str, Path]) -> Path:
    output_path = Path(path)
    trace.frame().to_csv(output_path, index=False, lineterminator="\n")
    return output_path
