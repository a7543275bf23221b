# Scenario files: parsing, validation, serialization and what-if variants

import codecs
import io
import logging
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
import pandas as pd

from src.profiles.timeseries import FlatOrProfile, TimeSeriesProfile, value_at

logger = logging.getLogger(__name__)

COLUMNS = [
    "hour",
    "pv_kw",
    "load_kw",
    "ev_connected",
    "ev_power_kw",
    "tariff",
    "fit",
    "forecast_pv_kw",
    "forecast_load_kw",
]
POWER_COLUMNS = ("pv_kw", "load_kw", "ev_power_kw", "forecast_pv_kw", "forecast_load_kw")
PRICE_COLUMNS = ("tariff", "fit")
STEP_SECONDS = 3600.0


@dataclass(frozen=True)
class Violation:
    """One problem found in a scenario file, located by line and column."""

    line: int
    column: str
    message: str

    def describe(self, source: str = "<scenario>") -> str:
        return f"{source}:{self.line}: column '{self.column}': {self.message}"


class ScenarioError(ValueError):
    """Raised when scenario content breaks the file format or an invariant."""

    def __init__(self, violations: List[Violation], source: str = "<scenario>"):
        self.violations = violations
        self.source = source
        super().__init__("\n".join(v.describe(source) for v in violations))


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    One run's worth of bundled input profiles.

    Forecast samples at step ``t`` describe the same hour of the NEXT day.
    """

    pv: TimeSeriesProfile
    load: TimeSeriesProfile
    ev_connected: TimeSeriesProfile
    ev_power_request: TimeSeriesProfile
    tariff: TimeSeriesProfile
    fit: FlatOrProfile
    forecast_pv_next_day: TimeSeriesProfile
    forecast_load_next_day: TimeSeriesProfile
    horizon_steps: int

    def __post_init__(self):
        problems = _invariant_problems(self)
        if problems:
            raise ScenarioError([Violation(0, column, message) for column, message in problems])

    @property
    def step_seconds(self) -> float:
        return self.pv.step_seconds

    @property
    def dt_hours(self) -> float:
        return self.pv.dt_hours

    def fit_at(self, t: int) -> float:
        return value_at(self.fit, t)

    @classmethod
    def from_arrays(
        cls,
        pv,
        load,
        tariff,
        fit: Union[float, np.ndarray],
        ev_connected=None,
        ev_power_request=None,
        forecast_pv=None,
        forecast_load=None,
        step_seconds: float = STEP_SECONDS,
    ) -> "Scenario":
        """Build a scenario from plain arrays; missing EV/forecast columns default to zeros."""
        pv = np.asarray(pv, dtype=float)
        steps = pv.size

        def profile(values, default: float = 0.0) -> TimeSeriesProfile:
            if values is None:
                values = np.full(steps, default)
            return TimeSeriesProfile(step_seconds, np.asarray(values, dtype=float))

        fit_rate: FlatOrProfile = float(fit) if np.isscalar(fit) else profile(fit)
        return cls(
            pv=profile(pv),
            load=profile(load),
            ev_connected=profile(ev_connected),
            ev_power_request=profile(ev_power_request),
            tariff=profile(tariff),
            fit=fit_rate,
            forecast_pv_next_day=profile(forecast_pv),
            forecast_load_next_day=profile(forecast_load),
            horizon_steps=steps,
        )


def _profiles(scenario: Scenario) -> Dict[str, TimeSeriesProfile]:
    profiles = {
        "pv_kw": scenario.pv,
        "load_kw": scenario.load,
        "ev_connected": scenario.ev_connected,
        "ev_power_kw": scenario.ev_power_request,
        "tariff": scenario.tariff,
        "forecast_pv_kw": scenario.forecast_pv_next_day,
        "forecast_load_kw": scenario.forecast_load_next_day,
    }
    if isinstance(scenario.fit, TimeSeriesProfile):
        profiles["fit"] = scenario.fit
    return profiles


def _invariant_problems(scenario: Scenario) -> List[tuple]:
    problems = []
    step = scenario.pv.step_seconds
    for column, profile in _profiles(scenario).items():
        if len(profile) < scenario.horizon_steps:
            problems.append((column, f"horizon mismatch: {len(profile)} samples for {scenario.horizon_steps} steps"))
        if profile.step_seconds != step:
            problems.append((column, "step length differs from the PV profile"))
        if not np.all(np.isfinite(profile.values)):
            problems.append((column, "non-finite sample"))
        elif column in POWER_COLUMNS and np.any(profile.values < 0):
            problems.append((column, "negative power"))
        elif column in PRICE_COLUMNS and np.any(profile.values < 0):
            problems.append((column, "negative price"))
    if not isinstance(scenario.fit, TimeSeriesProfile) and not scenario.fit >= 0:
        problems.append(("fit", "negative price"))
    flags = scenario.ev_connected.values
    if not np.all(np.isin(flags, (0.0, 1.0))):
        problems.append(("ev_connected", "flag must be 0 or 1"))
    requests = scenario.ev_power_request.values
    common = min(flags.size, requests.size)
    if np.any((flags[:common] == 0) & (requests[:common] > 0)):
        problems.append(("ev_power_kw", "EV request while disconnected"))
    return problems


def _data_lines(text: str) -> tuple:
    """Split off blank lines, keeping the original 1-based line numbers."""
    kept, numbers = [], []
    for number, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            kept.append(line)
            numbers.append(number)
    return kept, numbers


def _read_frame(text: str) -> tuple:
    lines, numbers = _data_lines(text.lstrip("\ufeff"))
    if not lines:
        raise ScenarioError([Violation(1, "hour", "empty file: header row is mandatory")])
    try:
        frame = pd.read_csv(
            io.StringIO("\n".join(lines)),
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
        )
    except pd.errors.ParserError as e:
        # pandas reports the physical line among the non-blank ones
        message = str(e)
        match = re.search(r"line (\d+)", message)
        bad_line = int(match.group(1)) if match else 1
        original = numbers[min(bad_line, len(numbers)) - 1]
        fields = re.search(r"Expected (\d+) fields", message)
        column = f"field {int(fields.group(1)) + 1}" if fields else "-"
        raise ScenarioError([Violation(original, column, f"syntax error: {message.strip()}")]) from e
    frame.columns = [str(c).strip() for c in frame.columns]
    return frame, numbers


def validate_scenario_text(text: str) -> List[Violation]:
    """
    Check scenario file content and collect every violation

    Args:
        text: UTF-8 CSV content with the mandatory header row

    Returns:
        List of violations, empty when the file is valid
    """
    try:
        frame, numbers = _read_frame(text)
    except ScenarioError as e:
        return e.violations
    return _frame_violations(frame, numbers)


def _frame_violations(frame: pd.DataFrame, numbers: List[int]) -> List[Violation]:
    violations: List[Violation] = []
    missing = [c for c in COLUMNS if c not in frame.columns]
    for column in missing:
        violations.append(Violation(numbers[0], column, "missing column"))
    if missing:
        return violations
    extra = [c for c in frame.columns if c not in COLUMNS]
    if extra:
        logger.warning(f"Ignoring unknown scenario columns: {extra}")
    if frame.empty:
        return [Violation(numbers[0], "hour", "no data rows")]

    values: Dict[str, np.ndarray] = {c: np.full(len(frame), np.nan) for c in COLUMNS}
    for row_index, row in enumerate(frame[COLUMNS].itertuples(index=False)):
        line = numbers[row_index + 1]
        for column, cell in zip(COLUMNS, row):
            text_cell = "" if cell is None or (isinstance(cell, float) and np.isnan(cell)) else str(cell).strip()
            if text_cell == "":
                violations.append(Violation(line, column, "horizon mismatch: missing value"))
                continue
            try:
                number = float(text_cell)
            except ValueError:
                violations.append(Violation(line, column, f"syntax error: not a number: {text_cell!r}"))
                continue
            if not np.isfinite(number):
                violations.append(Violation(line, column, f"syntax error: non-finite value {text_cell!r}"))
                continue
            values[column][row_index] = number

    for row_index in range(len(frame)):
        line = numbers[row_index + 1]
        hour = values["hour"][row_index]
        if np.isfinite(hour) and hour != row_index:
            violations.append(Violation(line, "hour", f"expected step index {row_index}, got {hour:g}"))
        for column in POWER_COLUMNS:
            if values[column][row_index] < 0:
                violations.append(Violation(line, column, "negative power"))
        for column in PRICE_COLUMNS:
            if values[column][row_index] < 0:
                violations.append(Violation(line, column, "negative price"))
        flag = values["ev_connected"][row_index]
        if np.isfinite(flag) and flag not in (0.0, 1.0):
            violations.append(Violation(line, "ev_connected", "flag must be 0 or 1"))
        if flag == 0.0 and values["ev_power_kw"][row_index] > 0:
            violations.append(Violation(line, "ev_power_kw", "EV request while disconnected"))

    per_day = int(round(86_400.0 / STEP_SECONDS))
    if len(frame) % per_day != 0:
        violations.append(
            Violation(
                numbers[-1],
                "hour",
                f"horizon mismatch: {len(frame)} steps do not fill whole {per_day}-step days",
            )
        )
    return violations


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    """
    Parse scenario CSV content into a validated Scenario

    Args:
        text: File content (header ``hour,pv_kw,load_kw,...``)
        source: Name used in diagnostics

    Returns:
        Scenario with one sample per row at a one-hour step
    """
    try:
        frame, numbers = _read_frame(text)
    except ScenarioError as e:
        raise ScenarioError(e.violations, source) from e
    violations = _frame_violations(frame, numbers)
    if violations:
        raise ScenarioError(violations, source)

    data = frame[COLUMNS].astype(float)
    fit_values = data["fit"].to_numpy()
    fit: FlatOrProfile = (
        float(fit_values[0]) if np.all(fit_values == fit_values[0]) else TimeSeriesProfile(STEP_SECONDS, fit_values)
    )
    scenario = Scenario(
        pv=TimeSeriesProfile(STEP_SECONDS, data["pv_kw"].to_numpy()),
        load=TimeSeriesProfile(STEP_SECONDS, data["load_kw"].to_numpy()),
        ev_connected=TimeSeriesProfile(STEP_SECONDS, data["ev_connected"].to_numpy()),
        ev_power_request=TimeSeriesProfile(STEP_SECONDS, data["ev_power_kw"].to_numpy()),
        tariff=TimeSeriesProfile(STEP_SECONDS, data["tariff"].to_numpy()),
        fit=fit,
        forecast_pv_next_day=TimeSeriesProfile(STEP_SECONDS, data["forecast_pv_kw"].to_numpy()),
        forecast_load_next_day=TimeSeriesProfile(STEP_SECONDS, data["forecast_load_kw"].to_numpy()),
        horizon_steps=len(data),
    )
    logger.info(f"Parsed scenario {source}: {scenario.horizon_steps} steps")
    return scenario


def read_scenario_text(path: Union[str, Path]) -> str:
    """
    Read a scenario file as UTF-8 text, an optional BOM removed

    Args:
        path: Scenario CSV file

    Returns:
        Decoded file content

    Raises:
        ScenarioError: the file is not valid UTF-8; the violation names the line
            and column of the first bad byte
        OSError: the file cannot be read
    """
    scenario_path = Path(path)
    raw = scenario_path.read_bytes()
    if raw.startswith(codecs.BOM_UTF8):
        raw = raw[len(codecs.BOM_UTF8):]
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line_start = raw.rfind(b"\n", 0, e.start) + 1
        line = raw.count(b"\n", 0, e.start) + 1
        field_index = raw.count(b",", line_start, e.start)
        header = raw.split(b"\n", 1)[0].decode("utf-8", errors="replace").split(",")
        column = header[field_index].strip() if line > 1 and field_index < len(header) else f"field {field_index + 1}"
        violation = Violation(line, column, f"syntax error: invalid UTF-8 byte 0x{raw[e.start]:02x}")
        raise ScenarioError([violation], str(scenario_path)) from e


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read and parse a scenario file (UTF-8, optional BOM)."""
    text = read_scenario_text(path)
    return parse_scenario(text, source=str(Path(path)))


def scenario_frame(scenario: Scenario) -> pd.DataFrame:
    steps = scenario.horizon_steps
    fit = (
        scenario.fit.values[:steps]
        if isinstance(scenario.fit, TimeSeriesProfile)
        else np.full(steps, float(scenario.fit))
    )
    return pd.DataFrame(
        {
            "hour": np.arange(steps),
            "pv_kw": scenario.pv.values[:steps],
            "load_kw": scenario.load.values[:steps],
            "ev_connected": scenario.ev_connected.values[:steps].astype(int),
            "ev_power_kw": scenario.ev_power_request.values[:steps],
            "tariff": scenario.tariff.values[:steps],
            "fit": fit,
            "forecast_pv_kw": scenario.forecast_pv_next_day.values[:steps],
            "forecast_load_kw": scenario.forecast_load_next_day.values[:steps],
        },
        columns=COLUMNS,
    )


def serialize_scenario(scenario: Scenario) -> str:
    """Render a scenario back to the CSV file format."""
    return scenario_frame(scenario).to_csv(index=False, lineterminator="\n")


def with_ev_disconnected(scenario: Scenario) -> Scenario:
    """Same day with the EV never plugged in."""
    zeros = TimeSeriesProfile(scenario.step_seconds, np.zeros(len(scenario.ev_connected)))
    return replace(scenario, ev_connected=zeros, ev_power_request=zeros)


def with_pv_scaled(scenario: Scenario, factor: float) -> Scenario:
    """Bad-weather variant: PV output and its next-day forecast scaled by ``factor``."""
    if factor < 0:
        raise ValueError(f"PV scale factor must be non-negative, got {factor}")
    return replace(
        scenario,
        pv=scenario.pv.scaled(factor),
        forecast_pv_next_day=scenario.forecast_pv_next_day.scaled(factor),
    )


def day_slice(profile: TimeSeriesProfile, t: int) -> TimeSeriesProfile:
    """The calendar day of ``profile`` containing step ``t`` as its own profile."""
    return TimeSeriesProfile(profile.step_seconds, profile.day_window(t))

