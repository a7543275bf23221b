# Dispatch simulation, billing and reports

from src.dispatch.billing import baseline_bill, energy_bill
from src.dispatch.engine import (
    DispatchRecord,
    DispatchTrace,
    PowerFlows,
    dispatch_mode,
    simulate,
    step_cash_flow,
)
from src.dispatch.reporting import summarize, trace_frame, write_summary, write_trace_csv

__all__ = [
    "DispatchRecord",
    "DispatchTrace",
    "PowerFlows",
    "baseline_bill",
    "dispatch_mode",
    "energy_bill",
    "simulate",
    "step_cash_flow",
    "summarize",
    "trace_frame",
    "write_summary",
    "write_trace_csv",
]
