# Discrete-time dispatch loop: EMS decision -> power flows -> storage update

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from src.ems.decision import Decision, DecisionInputs, Mode, decide_mode, forecast_sufficient
from src.profiles.scenario import Scenario, day_slice
from src.profiles.timeseries import sample, tariff_is_lowest
from src.storage.battery import BatteryState, charge_headroom_energy, step_battery
from src.storage.ev import EvState, step_ev
from src.utils.config import BatteryConfig, MicrogridConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PowerFlows:
    """
    Power exchanged at the AC bus during one step (kW).

    Sign conventions: grid import positive, battery discharge positive.
    """

    p_pv: float
    p_pv_curtailed: float
    p_grid: float
    p_batt: float
    p_l_total: float

    @property
    def imbalance(self) -> float:
        return self.p_pv + self.p_grid + self.p_batt - self.p_l_total


@dataclass(frozen=True)
class DispatchRecord:
    t: int
    case_id: int
    mode: Mode
    flows: PowerFlows
    battery_soc_after: float
    ev_soc_after: float
    cash_flow: float
    p_ev: float
    tariff: float
    fit: float
    dt_hours: float


@dataclass
class DispatchTrace:
    records: List[DispatchRecord] = field(default_factory=list)

    @property
    def total_bill(self) -> float:
        return sum(record.cash_flow for record in self.records)

    @property
    def modes(self) -> List[Mode]:
        return [record.mode for record in self.records]

    @property
    def cases(self) -> List[int]:
        return [record.case_id for record in self.records]

    def __len__(self) -> int:
        return len(self.records)


def step_cash_flow(p_grid: float, tariff: float, fit: float, dt_hours: float) -> float:
    """Cost of one step: imports billed at the tariff, exports credited at the FiT."""
    return (tariff * max(p_grid, 0.0) - fit * max(-p_grid, 0.0)) * dt_hours


def _export(surplus: float, export_limit_kw: Optional[float]) -> Tuple[float, float]:
    """Split a PV surplus into (exported, curtailed)."""
    if export_limit_kw is None or surplus <= export_limit_kw:
        return surplus, 0.0
    return export_limit_kw, surplus - export_limit_kw


def dispatch_mode(
    decision: Decision,
    p_pv: float,
    battery: BatteryState,
    battery_config: BatteryConfig,
    dt_hours: float,
    export_limit_kw: Optional[float] = None,
) -> Tuple[PowerFlows, BatteryState]:
    """
    Turn a mode into concrete power flows and advance the battery

    Args:
        decision: EMS decision for this step
        p_pv: Available PV power (kW)
        battery: Battery state before the step
        battery_config: Battery ratings and limits
        dt_hours: Step length in hours
        export_limit_kw: Export cap, None for unlimited

    Returns:
        Tuple of (power flows, battery state after the step)
    """
    mode = decision.mode
    p_l_total = decision.p_l_total
    p_batt = 0.0
    new_battery = BatteryState(battery.soc)

    if mode in (Mode.M1, Mode.M2):
        surplus = decision.p_r
        if mode == Mode.M2:
            new_battery, p_batt = step_battery(battery, battery_config, -decision.p_r, dt_hours)
            surplus = decision.p_r + p_batt
        exported, curtailed = _export(surplus, export_limit_kw)
        flows = PowerFlows(p_pv - curtailed, curtailed, -exported, p_batt, p_l_total)

    elif mode in (Mode.M3, Mode.M4):
        p_grid = decision.p_d
        if mode == Mode.M4:
            new_battery, p_batt = step_battery(battery, battery_config, decision.p_d, dt_hours)
            p_grid = decision.p_d - p_batt
        flows = PowerFlows(p_pv, 0.0, p_grid, p_batt, p_l_total)

    else:
        # residual PV below the no-generation threshold is used only up to the load
        p_pv_used = min(p_pv, p_l_total)
        curtailed = p_pv - p_pv_used
        if mode == Mode.M6:
            new_battery, p_batt = step_battery(battery, battery_config, -battery_config.p_charge_max_kw, dt_hours)
        flows = PowerFlows(p_pv_used, curtailed, p_l_total - p_pv_used - p_batt, p_batt, p_l_total)

    return flows, new_battery


def simulate(scenario: Scenario, config: Optional[MicrogridConfig] = None) -> DispatchTrace:
    """
    Run the EMS over every step of a scenario

    Args:
        scenario: Validated input profiles
        config: Microgrid ratings; rated defaults when omitted

    Returns:
        DispatchTrace with one record per step
    """
    config = config or MicrogridConfig()
    dt_hours = scenario.dt_hours
    battery = BatteryState.initial(config.battery)
    ev = EvState.initial(config.ev)
    trace = DispatchTrace()

    logger.info(f"Simulating {scenario.horizon_steps} steps of {dt_hours:g} h")
    for t in range(scenario.horizon_steps):
        p_pv = sample(scenario.pv, t)
        tariff = sample(scenario.tariff, t)
        fit = scenario.fit_at(t)

        ev.connected = sample(scenario.ev_connected, t) == 1.0
        ev.p_charge_kw = min(sample(scenario.ev_power_request, t), config.ev.p_charge_max_kw)
        ev_soc_before = ev.soc
        ev, p_ev = step_ev(ev, dt_hours)

        headroom = charge_headroom_energy(battery, config.battery)
        forecast_ok = forecast_sufficient(
            day_slice(scenario.forecast_pv_next_day, t),
            day_slice(scenario.forecast_load_next_day, t),
            headroom,
        )
        inputs = DecisionInputs(
            p_pv=p_pv,
            p_load=sample(scenario.load, t),
            ev_connected=ev.connected,
            ev_soc=ev_soc_before,
            p_ev_request=p_ev,
            tariff=tariff,
            fit=fit,
            battery_soc=battery.soc,
            tariff_is_lowest=tariff_is_lowest(scenario.tariff, t, config.tariff_epsilon),
            forecast_ok=forecast_ok,
        )
        decision = decide_mode(
            inputs,
            soc_min=config.battery.soc_min,
            soc_max=config.battery.soc_max,
            ev_soc_max=config.ev.soc_max,
            pv_zero_epsilon=config.pv_zero_epsilon_kw,
        )
        flows, battery = dispatch_mode(decision, p_pv, battery, config.battery, dt_hours, config.export_limit_kw)

        trace.records.append(
            DispatchRecord(
                t=t,
                case_id=decision.case_id,
                mode=decision.mode,
                flows=flows,
                battery_soc_after=battery.soc,
                ev_soc_after=ev.soc,
                cash_flow=step_cash_flow(flows.p_grid, tariff, fit, dt_hours),
                p_ev=p_ev,
                tariff=tariff,
                fit=fit,
                dt_hours=dt_hours,
            )
        )

    logger.info(f"Simulation finished: bill {trace.total_bill:.4f}")
    return trace
