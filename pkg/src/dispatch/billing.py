# Electricity bill of a dispatch trace and of the no-EMS baseline

from typing import Optional

from src.dispatch.engine import DispatchTrace, step_cash_flow
from src.ems.decision import total_load_power
from src.profiles.scenario import Scenario
from src.profiles.timeseries import sample
from src.storage.ev import EvState, step_ev
from src.utils.config import MicrogridConfig


def energy_bill(trace: DispatchTrace) -> float:
    """Sum of tariff-priced imports minus FiT-credited exports over the trace."""
    return sum(
        step_cash_flow(record.flows.p_grid, record.tariff, record.fit, record.dt_hours)
        for record in trace.records
    )


def baseline_bill(scenario: Scenario, config: Optional[MicrogridConfig] = None) -> float:
    """
    Bill of the same day without an EMS: no battery, PV surplus always exported

    The EV still charges exactly as it would under the EMS, so both bills see
    the same total load.

    Args:
        scenario: Input profiles
        config: Supplies the EV model; rated defaults when omitted

    Returns:
        Baseline bill in currency units
    """
    config = config or MicrogridConfig()
    dt_hours = scenario.dt_hours
    ev = EvState.initial(config.ev)
    bill = 0.0
    for t in range(scenario.horizon_steps):
        ev.connected = sample(scenario.ev_connected, t) == 1.0
        ev.p_charge_kw = min(sample(scenario.ev_power_request, t), config.ev.p_charge_max_kw)
        ev_soc_before = ev.soc
        ev, p_ev = step_ev(ev, dt_hours)
        p_l_total = total_load_power(
            sample(scenario.load, t), ev.connected, ev_soc_before, config.ev.soc_max, p_ev
        )
        p_grid = p_l_total - sample(scenario.pv, t)
        if p_grid < 0 and config.export_limit_kw is not None:
            p_grid = max(p_grid, -config.export_limit_kw)
        bill += step_cash_flow(p_grid, sample(scenario.tariff, t), scenario.fit_at(t), dt_hours)
    return bill
