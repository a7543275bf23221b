# Trace export (CSV) and run summary (YAML key/value text)

from collections import Counter
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd
import yaml

from src.dispatch.billing import baseline_bill, energy_bill
from src.dispatch.engine import DispatchTrace
from src.ems.decision import Mode
from src.profiles.scenario import Scenario
from src.utils.config import MicrogridConfig

TRACE_COLUMNS = [
    "t",
    "case",
    "mode",
    "p_pv_kw",
    "p_grid_kw",
    "p_batt_kw",
    "p_ev_kw",
    "p_l_total_kw",
    "soc",
    "ev_soc",
    "cash_flow",
]


def trace_frame(trace: DispatchTrace) -> pd.DataFrame:
    rows = [
        {
            "t": record.t,
            "case": record.case_id,
            "mode": record.mode.value,
            "p_pv_kw": record.flows.p_pv,
            "p_grid_kw": record.flows.p_grid,
            "p_batt_kw": record.flows.p_batt,
            "p_ev_kw": record.p_ev,
            "p_l_total_kw": record.flows.p_l_total,
            "soc": record.battery_soc_after,
            "ev_soc": record.ev_soc_after,
            "cash_flow": record.cash_flow,
        }
        for record in trace.records
    ]
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def write_trace_csv(trace: DispatchTrace, path: Union[str, Path]) -> Path:
    output_path = Path(path)
    trace_frame(trace).to_csv(output_path, index=False, lineterminator="\n")
    return output_path


def summarize(
    trace: DispatchTrace,
    scenario: Scenario,
    config: Optional[MicrogridConfig] = None,
) -> Dict[str, Any]:
    """
    Collect the headline numbers of a run

    Args:
        trace: Completed dispatch trace
        scenario: Scenario the trace was produced from
        config: Configuration used for the run

    Returns:
        Ordered dict of summary values
    """
    total = energy_bill(trace)
    baseline = baseline_bill(scenario, config)
    counts = Counter(record.mode for record in trace.records)
    grid_energy: Dict[str, float] = {mode.value: 0.0 for mode in Mode}
    imported = exported = curtailed = 0.0
    for record in trace.records:
        energy = record.flows.p_grid * record.dt_hours
        grid_energy[record.mode.value] += energy
        imported += max(energy, 0.0)
        exported += max(-energy, 0.0)
        curtailed += record.flows.p_pv_curtailed * record.dt_hours

    last = trace.records[-1] if trace.records else None
    return {
        "steps": len(trace),
        "total_bill": round(total, 6),
        "baseline_bill": round(baseline, 6),
        "savings": round(baseline - total, 6),
        "import_energy_kwh": round(imported, 6),
        "export_energy_kwh": round(exported, 6),
        "curtailed_energy_kwh": round(curtailed, 6),
        "final_battery_soc": round(last.battery_soc_after, 6) if last else None,
        "final_ev_soc": round(last.ev_soc_after, 6) if last else None,
        "mode_counts": {mode.value: counts.get(mode, 0) for mode in Mode},
        "mode_grid_energy_kwh": {mode: round(value, 6) for mode, value in grid_energy.items()},
    }


def write_summary(summary: Dict[str, Any], path: Union[str, Path]) -> Path:
    output_path = Path(path)
    with open(output_path, "w", encoding="utf-8") as f:
        yaml.safe_dump(summary, f, sort_keys=False)
    return output_path
