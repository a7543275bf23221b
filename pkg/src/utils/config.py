# Configuration models for the microgrid simulator with the rated defaults

import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import BaseModel, Field, ValidationError, model_validator


class ConfigError(ValueError):
    """Raised when a configuration file cannot be read or fails validation."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path:
            location = f"{path}:{line}: " if line else f"{path}: "
        super().__init__(f"{location}{message}")


class BatteryConfig(BaseModel):
    """Stationary Li-ion ESS behind the 5 kW bidirectional inverter."""

    capacity_kwh: float = Field(10.0, gt=0)
    soc_min: float = Field(0.10, ge=0, le=1)
    soc_max: float = Field(0.90, ge=0, le=1)
    p_charge_max_kw: float = Field(5.0, gt=0)
    p_discharge_max_kw: float = Field(5.0, gt=0)
    eta_charge: float = Field(0.95, gt=0, le=1)
    eta_discharge: float = Field(0.95, gt=0, le=1)
    initial_soc: float = Field(0.5, ge=0, le=1)

    @model_validator(mode="after")
    def _check_window(self) -> "BatteryConfig":
        if not self.soc_min < self.soc_max:
            raise ValueError("soc_min must be lower than soc_max")
        if not self.soc_min <= self.initial_soc <= self.soc_max:
            raise ValueError("initial_soc must lie inside [soc_min, soc_max]")
        return self


class EvConfig(BaseModel):
    """EV battery seen by the EMS as a constant-power load with a SoC cutoff."""

    capacity_kwh: float = Field(40.0, gt=0)
    soc_max: float = Field(0.90, ge=0, le=1)
    initial_soc: float = Field(0.5, ge=0, le=1)
    p_charge_max_kw: float = Field(5.0, gt=0)


class MicrogridConfig(BaseModel):
    """Everything the dispatch loop needs besides the scenario itself."""

    battery: BatteryConfig = Field(default_factory=BatteryConfig)
    ev: EvConfig = Field(default_factory=EvConfig)
    pv_zero_epsilon_kw: float = Field(1e-6, ge=0)
    tariff_epsilon: float = Field(1e-9, ge=0)
    # None means unlimited export; PV beyond the cap is curtailed
    export_limit_kw: Optional[float] = Field(None, ge=0)


class GridParams(BaseModel):
    v_ll_rms: float = Field(400.0, gt=0)
    f: float = Field(50.0, gt=0)
    # False reads 400 V as a phase RMS value instead of line-to-line
    line_to_line: bool = True

    @property
    def v_phase_peak(self) -> float:
        if self.line_to_line:
            return self.v_ll_rms * math.sqrt(2.0) / math.sqrt(3.0)
        return self.v_ll_rms * math.sqrt(2.0)

    @property
    def v_d_nominal(self) -> float:
        """d-axis grid voltage under the amplitude-invariant transform."""
        return self.v_phase_peak

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * self.f


class FilterParams(BaseModel):
    l_f: float = Field(0.007, gt=0)
    r_f: float = Field(0.1, gt=0)


class ControlConfig(BaseModel):
    xi: float = Field(0.707, gt=0)
    omega_n: float = Field(2.0 * math.pi * 300.0, gt=0)
    dt_s: float = Field(2e-5, gt=0, le=1e-4)
    horizon_s: float = Field(0.05, gt=0)
    pll_bandwidth_hz: float = Field(30.0, gt=0)
    pll_xi: float = Field(0.707, gt=0)
    reference_prefilter: bool = True
    pv_rated_w: float = Field(10_000.0, gt=0)
    battery_rated_w: float = Field(5_000.0, gt=0)


class ElectricalConfig(BaseModel):
    grid: GridParams = Field(default_factory=GridParams)
    filter: FilterParams = Field(default_factory=FilterParams)
    control: ControlConfig = Field(default_factory=ControlConfig)


class SimulatorConfig(BaseModel):
    microgrid: MicrogridConfig = Field(default_factory=MicrogridConfig)
    electrical: ElectricalConfig = Field(default_factory=ElectricalConfig)


def _parse_scalar(raw: str) -> Any:
    """Interpret a key=value right-hand side with YAML scalar rules."""
    return yaml.safe_load(raw) if raw.strip() else None


def _set_dotted(target: Dict[str, Any], dotted_key: str, value: Any) -> None:
    parts = dotted_key.split(".")
    node = target
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise KeyError(dotted_key)
    node[parts[-1]] = value


def _check_known_keys(data: Dict[str, Any], model: type, prefix: str = "") -> Optional[str]:
    """Return the first dotted key that the model does not declare."""
    for key, value in data.items():
        field = model.model_fields.get(key)
        if field is None:
            return f"{prefix}{key}"
        annotation = field.annotation
        if isinstance(value, dict) and isinstance(annotation, type) and issubclass(annotation, BaseModel):
            unknown = _check_known_keys(value, annotation, f"{prefix}{key}.")
            if unknown:
                return unknown
    return None


def parse_key_value_overrides(text: str, path: str = "<config>") -> MicrogridConfig:
    """
    Parse flat key=value override lines into a MicrogridConfig

    Args:
        text: File content, one ``dotted.key=value`` per line
        path: File name used in diagnostics

    Returns:
        MicrogridConfig with the overrides applied over the defaults
    """
    overrides: Dict[str, Any] = {}
    key_lines: Dict[str, int] = {}
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {raw_line.strip()!r}", path, line_no)
        key, raw_value = (part.strip() for part in line.split("=", 1))
        if _check_known_keys(_nest(key, None), MicrogridConfig):
            raise ConfigError(f"unknown configuration key {key!r}", path, line_no)
        try:
            _set_dotted(overrides, key, _parse_scalar(raw_value))
        except (KeyError, yaml.YAMLError):
            raise ConfigError(f"cannot apply {key!r}", path, line_no) from None
        key_lines[key] = line_no

    try:
        return MicrogridConfig.model_validate(overrides)
    except ValidationError as e:
        first = e.errors()[0]
        dotted = ".".join(str(part) for part in first.get("loc", ()))
        # cross-field errors point at the section, so fall back to any key under it
        line_no = key_lines.get(dotted) or next(
            (n for k, n in key_lines.items() if dotted and k.startswith(dotted + ".")), None
        )
        raise ConfigError(_first_error(e), path, line_no) from e


def _nest(dotted_key: str, value: Any) -> Dict[str, Any]:
    nested: Dict[str, Any] = {}
    _set_dotted(nested, dotted_key, value)
    return nested


def _first_error(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ()))
    return f"{location}: {first.get('msg', 'invalid value')}" if location else first.get("msg", "invalid value")


def load_config(path: Optional[Union[str, Path]] = None) -> SimulatorConfig:
    """
    Load simulator configuration from YAML or a key=value override file

    Args:
        path: Configuration file path; None returns the rated defaults

    Returns:
        Validated SimulatorConfig
    """
    if path is None:
        return SimulatorConfig()

    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read configuration: {e.strerror or e}", str(config_path)) from e

    if config_path.suffix.lower() in (".yaml", ".yml"):
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            raise ConfigError(f"YAML syntax error: {e}", str(config_path), mark.line + 1 if mark else None) from e
        if not isinstance(data, dict):
            raise ConfigError("top level must be a mapping", str(config_path))
        unknown = _check_known_keys(data, SimulatorConfig)
        if unknown:
            raise ConfigError(f"unknown configuration key {unknown!r}", str(config_path))
        try:
            return SimulatorConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigError(_first_error(e), str(config_path)) from e

    return SimulatorConfig(microgrid=parse_key_value_overrides(text, str(config_path)))
