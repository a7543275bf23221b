# EV battery seen by the EMS as a constant-power load with a SoC cutoff

from dataclasses import dataclass, replace
from typing import Tuple

from src.utils.config import EvConfig


@dataclass
class EvState:
    connected: bool
    soc: float
    soc_max: float
    capacity_kwh: float
    p_charge_kw: float

    def __post_init__(self):
        if not 0.0 <= self.soc <= 1.0:
            raise ValueError(f"EV soc must lie in [0, 1], got {self.soc}")

    @classmethod
    def initial(cls, config: EvConfig) -> "EvState":
        return cls(
            connected=False,
            soc=config.initial_soc,
            soc_max=config.soc_max,
            capacity_kwh=config.capacity_kwh,
            p_charge_kw=0.0,
        )

    @property
    def wants_charge(self) -> bool:
        return self.connected and self.soc < self.soc_max


def step_ev(state: EvState, dt_hours: float) -> Tuple[EvState, float]:
    """
    Charge the EV for one step if it is plugged in and below its ceiling

    Args:
        state: EV state with this step's connection flag and requested power
        dt_hours: Step length in hours

    Returns:
        Tuple of (new state, power drawn in kW)
    """
    if not dt_hours > 0:
        raise ValueError(f"dt_hours must be positive, got {dt_hours}")
    if not state.wants_charge or state.p_charge_kw <= 0:
        return replace(state), 0.0

    to_ceiling = (state.soc_max - state.soc) * state.capacity_kwh / dt_hours
    p_ev = min(state.p_charge_kw, to_ceiling)
    if p_ev == to_ceiling:
        soc = state.soc_max
    else:
        soc = min(state.soc + p_ev * dt_hours / state.capacity_kwh, state.soc_max)
    return replace(state, soc=soc), p_ev
