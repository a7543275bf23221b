# Main entry point for the microgrid EMS simulator

import logging
import sys
from typing import Optional

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.table import Table

from src.ems.decision import Mode
from src.profiles.scenario import ScenarioError, read_scenario_text, validate_scenario_text
from src.utils.config import ConfigError, ElectricalConfig, load_config
from src.workflow.orchestrator import CheckThresholds, ControllerCheck, SimulationOrchestrator

EXIT_INVALID = 1
EXIT_IO = 2


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _fail(message: str, code: int) -> None:
    click.echo(f"❌ {message}", err=True)
    sys.exit(code)


@click.group()
def cli():
    """
    Microgrid EMS - rule-based dispatch of PV, battery, EV and grid

    Examples:
    python -m src.main simulate --scenario scenarios/ev_connected_day.csv --out outputs
    python -m src.main validate scenarios/measured_day.csv
    python -m src.main controller-check --xi 0.2 --max-overshoot 0.6 --max-settling-ms 15
    """
    # Load environment variables from .env file
    load_dotenv()


@cli.command()
@click.option("--scenario", "-s", "scenario_path", required=True, help="Scenario CSV file")
@click.option("--config", "-c", "config_path", envvar="MICROGRID_CONFIG", default=None, help="YAML or key=value configuration file")
@click.option("--out", "-o", "output_dir", default="outputs", help="Output directory for trace and summary")
@click.option("--report", type=click.Choice(["trace", "summary", "both"]), default="both", help="Reports to write")
@click.option("--ev-disconnected", is_flag=True, help="Run the same day with the EV unplugged")
@click.option("--pv-scale", type=float, default=None, help="Scale PV and its forecast (bad weather)")
@click.option("--verbose", "-v", is_flag=True, help="Log every EMS decision")
def simulate(
    scenario_path: str,
    config_path: Optional[str],
    output_dir: str,
    report: str,
    ev_disconnected: bool,
    pv_scale: Optional[float],
    verbose: bool,
):
    """Run a scenario through the EMS and write the dispatch reports."""
    _setup_logging(verbose)
    click.echo(f"⚡ Simulating scenario: {scenario_path}")
    click.echo(f"⚙️  Using config: {config_path or 'defaults'}")
    click.echo(f"📁 Output directory: {output_dir}")

    try:
        orchestrator = SimulationOrchestrator(config_path=config_path, output_dir=output_dir)
        results = orchestrator.run_simulation(
            scenario_path, report=report, ev_disconnected=ev_disconnected, pv_scale=pv_scale
        )
    except (ScenarioError, ConfigError) as e:
        _fail(f"Invalid input:\n{e}", EXIT_INVALID)
    except OSError as e:
        _fail(f"I/O failure: {e}", EXIT_IO)
    except ValueError as e:
        _fail(str(e), EXIT_INVALID)

    summary = results["summary"]
    click.echo("✅ Simulation completed successfully!")
    click.echo(f"💰 Total bill: {summary['total_bill']:.4f}")
    click.echo(f"💰 Baseline bill: {summary['baseline_bill']:.4f}")

    table = Table(title="Operating modes")
    table.add_column("Mode")
    table.add_column("Steps", justify="right")
    table.add_column("Grid energy (kWh)", justify="right")
    for mode in Mode:
        table.add_row(
            mode.value,
            str(summary["mode_counts"][mode.value]),
            f"{summary['mode_grid_energy_kwh'][mode.value]:.3f}",
        )
    Console().print(table)


@cli.command()
@click.argument("scenario_path")
def validate(scenario_path: str):
    """Check a scenario file and list every violation."""
    try:
        violations = validate_scenario_text(read_scenario_text(scenario_path))
    except ScenarioError as e:
        violations = e.violations
    except OSError as e:
        _fail(f"I/O failure: {e}", EXIT_IO)

    if violations:
        for violation in violations:
            click.echo(violation.describe(scenario_path), err=True)
        _fail(f"{len(violations)} problem(s) in {scenario_path}", EXIT_INVALID)
    click.echo("OK")


@cli.command("controller-check")
@click.option("--config", "-c", "config_path", default=None, help="YAML file with an electrical section")
@click.option("--out", "-o", "output_dir", default="outputs", help="Directory for waveform.csv")
@click.option("--xi", type=float, default=None, help="Damping ratio")
@click.option("--omega-n", type=float, default=None, help="Natural frequency (rad/s)")
@click.option("--lf", type=float, default=None, help="Filter inductance (H)")
@click.option("--rf", type=float, default=None, help="Filter resistance (ohm)")
@click.option("--dt", type=float, default=None, help="Controller step (s)")
@click.option("--max-overshoot", type=float, default=CheckThresholds.max_overshoot, help="Overshoot limit (fraction)")
@click.option("--max-settling-ms", type=float, default=CheckThresholds.max_settling_s * 1e3, help="2% settling limit (ms)")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
def controller_check(
    config_path: Optional[str],
    output_dir: str,
    xi: Optional[float],
    omega_n: Optional[float],
    lf: Optional[float],
    rf: Optional[float],
    dt: Optional[float],
    max_overshoot: float,
    max_settling_ms: float,
    verbose: bool,
):
    """Tune the current controller and verify step tracking and PLL lock."""
    _setup_logging(verbose)
    try:
        electrical = _electrical_with_overrides(config_path, xi=xi, omega_n=omega_n, lf=lf, rf=rf, dt=dt)
        thresholds = CheckThresholds(max_overshoot=max_overshoot, max_settling_s=max_settling_ms / 1e3)
        result = ControllerCheck(electrical, thresholds).run(output_dir)
    except ConfigError as e:
        _fail(f"Invalid configuration:\n{e}", EXIT_INVALID)
    except OSError as e:
        _fail(f"I/O failure: {e}", EXIT_IO)
    except ValueError as e:
        _fail(str(e), EXIT_INVALID)

    table = Table(title="Controller check")
    table.add_column("Metric")
    table.add_column("PV inverter", justify="right")
    table.add_column("Battery inverter", justify="right")
    pv, battery = result.metrics["pv"], result.metrics["battery"]
    table.add_row("overshoot", f"{pv.overshoot:.2%}", f"{battery.overshoot:.2%}")
    table.add_row("settling (ms)", _ms(pv.settling_time_s), _ms(battery.settling_time_s))
    table.add_row("steady-state error", f"{pv.steady_state_error:.4%}", f"{battery.steady_state_error:.4%}")
    table.add_row("final power (W)", f"{pv.final_power_w:.1f}", f"{battery.final_power_w:.1f}")
    Console().print(table)

    click.echo(f"kp = {result.gains.kp:.4f}")
    click.echo(f"ki = {result.gains.ki:.1f}")
    click.echo(f"PLL lock time: {_ms(result.lock_time_s)} ms")

    if not result.passed:
        for failure in result.failures:
            click.echo(f"❌ {failure}", err=True)
        sys.exit(EXIT_INVALID)
    click.echo("✅ All controller checks passed")


def _ms(seconds: Optional[float]) -> str:
    return "n/a" if seconds is None else f"{seconds * 1e3:.2f}"


def _electrical_with_overrides(config_path: Optional[str], **overrides: Optional[float]) -> ElectricalConfig:
    """Electrical section of the config file with the command-line overrides applied."""
    electrical = load_config(config_path).electrical
    data = electrical.model_dump()
    fields = {
        "xi": ("control", "xi"),
        "omega_n": ("control", "omega_n"),
        "lf": ("filter", "l_f"),
        "rf": ("filter", "r_f"),
        "dt": ("control", "dt_s"),
    }
    for option, value in overrides.items():
        if value is not None:
            section, name = fields[option]
            data[section][name] = value
    try:
        return ElectricalConfig.model_validate(data)
    except ValueError as e:
        raise ConfigError(f"invalid controller override: {e}") from e


if __name__ == "__main__":
    cli()
