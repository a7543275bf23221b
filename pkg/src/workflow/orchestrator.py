# Run orchestration: scenario -> dispatch -> reports, and the controller check

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from src.dispatch.engine import simulate
from src.dispatch.reporting import summarize, write_summary, write_trace_csv
from src.electrical.controller import PiGains, tune_pi
from src.electrical.pll import pll_lock_time
from src.electrical.tracking import (
    StepMetrics,
    check_dispatch_setpoints,
    run_tracking_sim,
    step_metrics,
    write_waveform_csv,
)
from src.profiles.scenario import load_scenario, with_ev_disconnected, with_pv_scaled
from src.utils.config import ElectricalConfig, SimulatorConfig, load_config

REPORT_FORMATS = ("trace", "summary", "both")


class SimulationOrchestrator:
    """
    Runs one scenario through the EMS and writes the selected reports.
    """

    def __init__(self, config_path: Optional[str], output_dir: str):
        self.config_path = config_path
        self.output_dir = output_dir
        self.config = self._load_config()

    def _load_config(self) -> SimulatorConfig:
        """Load configuration, rated defaults when no file is given"""
        return load_config(self.config_path)

    def run_simulation(
        self,
        scenario_path: str,
        report: str = "both",
        ev_disconnected: bool = False,
        pv_scale: Optional[float] = None,
    ) -> dict:
        """
        Execute a complete run:
        1. Load and validate the scenario
        2. Apply the requested what-if variants
        3. Simulate the EMS over the horizon
        4. Check the dispatch setpoints against the inverter ratings
        5. Write the trace and/or summary

        Args:
            scenario_path: Scenario CSV file
            report: One of "trace", "summary", "both"
            ev_disconnected: Run the same day without the EV
            pv_scale: Scale PV and its forecast by this factor

        Returns:
            Results dict with the trace, summary, setpoint report and written files
        """
        if report not in REPORT_FORMATS:
            raise ValueError(f"report must be one of {REPORT_FORMATS}, got {report!r}")

        print(f"🔄 Loading scenario: {scenario_path}")
        scenario = load_scenario(scenario_path)
        if ev_disconnected:
            scenario = with_ev_disconnected(scenario)
        if pv_scale is not None:
            scenario = with_pv_scaled(scenario, pv_scale)

        microgrid = self.config.microgrid
        trace = simulate(scenario, microgrid)
        summary = summarize(trace, scenario, microgrid)
        setpoints = check_dispatch_setpoints(trace, self.config.electrical)
        if not setpoints.ok:
            print(f"⚠️ {len(setpoints.violations)} steps exceed an inverter rating")

        output_dir = Path(self.output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        files: Dict[str, Path] = {}
        if report in ("trace", "both"):
            files["trace"] = write_trace_csv(trace, output_dir / "trace.csv")
        if report in ("summary", "both"):
            files["summary"] = write_summary(summary, output_dir / "summary.txt")
        for kind, path in files.items():
            print(f"📋 {kind.capitalize()} saved to: {path}")

        return {
            "scenario": scenario,
            "trace": trace,
            "summary": summary,
            "setpoints": setpoints,
            "files": files,
        }


@dataclass(frozen=True)
class CheckThresholds:
    max_overshoot: float = 0.10
    max_settling_s: float = 0.006
    max_steady_state_error: float = 0.001
    max_q_fraction: float = 0.01
    max_lock_time_s: float = 0.2


@dataclass
class ControllerCheckResult:
    gains: PiGains
    metrics: Dict[str, StepMetrics]
    q_fraction: Dict[str, float]
    lock_time_s: Optional[float]
    failures: List[str] = field(default_factory=list)
    waveform_path: Optional[Path] = None

    @property
    def passed(self) -> bool:
        return not self.failures


class ControllerCheck:
    """
    Tuning, step tracking and PLL lock checks for the PV and battery inverters.

    Both inverters share one controller design and differ only in rating.
    """

    def __init__(self, electrical: Optional[ElectricalConfig] = None, thresholds: Optional[CheckThresholds] = None):
        self.electrical = electrical or ElectricalConfig()
        self.thresholds = thresholds or CheckThresholds()

    def run(self, output_dir: Optional[str] = None) -> ControllerCheckResult:
        control = self.electrical.control
        gains = tune_pi(self.electrical.filter, control.xi, control.omega_n)
        print(f"🔄 Tuned PI: kp={gains.kp:.4f}, ki={gains.ki:.1f} (ki/kp={gains.corner_rad_s:.1f} rad/s)")

        result = ControllerCheckResult(gains=gains, metrics={}, q_fraction={}, lock_time_s=None)
        limits = self.thresholds
        for inverter, rated_w in (("pv", control.pv_rated_w), ("battery", control.battery_rated_w)):
            print(f"🔄 Step response of the {inverter} inverter to {rated_w:g} W")
            trace = run_tracking_sim([(0.0, rated_w)], electrical=self.electrical)
            metrics = step_metrics(trace, rated_w)
            tail = trace.q_var[-max(1, len(trace) // 10):]
            result.metrics[inverter] = metrics
            result.q_fraction[inverter] = float(abs(tail).max() / rated_w)

            if metrics.overshoot > limits.max_overshoot:
                result.failures.append(f"{inverter} overshoot {metrics.overshoot:.1%} > {limits.max_overshoot:.1%}")
            if metrics.settling_time_s is None or metrics.settling_time_s > limits.max_settling_s:
                settled = "never" if metrics.settling_time_s is None else f"{metrics.settling_time_s * 1e3:.2f} ms"
                result.failures.append(f"{inverter} settling {settled} > {limits.max_settling_s * 1e3:.2f} ms")
            if metrics.steady_state_error > limits.max_steady_state_error:
                result.failures.append(
                    f"{inverter} steady-state error {metrics.steady_state_error:.3%} > {limits.max_steady_state_error:.3%}"
                )
            if result.q_fraction[inverter] > limits.max_q_fraction:
                result.failures.append(f"{inverter} reactive power {result.q_fraction[inverter]:.2%} of rating")

            if inverter == "pv" and output_dir is not None:
                directory = Path(output_dir)
                directory.mkdir(parents=True, exist_ok=True)
                result.waveform_path = write_waveform_csv(trace, directory / "waveform.csv")
                print(f"📋 Waveform saved to: {result.waveform_path}")

        print("🔄 PLL lock test")
        result.lock_time_s = pll_lock_time(self.electrical.grid, control, duration_s=limits.max_lock_time_s)
        if result.lock_time_s is None:
            result.failures.append(f"pll lock not reached within {limits.max_lock_time_s:g} s")

        return result
