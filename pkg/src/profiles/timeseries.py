# Step-hold time series profiles sampled on the simulation time axis

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

SECONDS_PER_DAY = 86_400.0


@dataclass(frozen=True, eq=False)
class TimeSeriesProfile:
    """
    Piecewise-constant samples on a uniform time axis.

    ``values[t]`` holds over ``[t * step_seconds, (t + 1) * step_seconds)``.
    The unit is carried by context (kW, currency/kWh, 0/1 flags).
    """

    step_seconds: float
    values: np.ndarray

    def __post_init__(self):
        if not self.step_seconds > 0:
            raise ValueError(f"step_seconds must be positive, got {self.step_seconds}")
        values = np.asarray(self.values, dtype=float).copy()
        if values.ndim != 1 or values.size == 0:
            raise ValueError("profile values must be a non-empty 1-D sequence")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values: Sequence[float], step_seconds: float = 3600.0) -> "TimeSeriesProfile":
        return cls(step_seconds=step_seconds, values=np.asarray(values, dtype=float))

    @classmethod
    def flat(cls, value: float, steps: int, step_seconds: float = 3600.0) -> "TimeSeriesProfile":
        return cls(step_seconds=step_seconds, values=np.full(steps, float(value)))

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def dt_hours(self) -> float:
        return self.step_seconds / 3600.0

    @property
    def steps_per_day(self) -> int:
        return max(1, int(round(SECONDS_PER_DAY / self.step_seconds)))

    def day_window(self, t: int) -> np.ndarray:
        """Samples of the calendar day containing step ``t``."""
        per_day = self.steps_per_day
        start = (t // per_day) * per_day
        return self.values[start:start + per_day]

    def scaled(self, factor: float) -> "TimeSeriesProfile":
        return TimeSeriesProfile(self.step_seconds, self.values * factor)


def sample(profile: TimeSeriesProfile, t: int) -> float:
    """
    Value of the profile at step ``t`` (step-hold, never extrapolates)

    Args:
        profile: Profile to sample
        t: Step index in ``[0, len(profile))``

    Returns:
        The sample held over step ``t``
    """
    if not 0 <= t < len(profile):
        raise IndexError(f"step {t} outside profile of {len(profile)} samples")
    return float(profile.values[t])


def tariff_is_lowest(tariff: TimeSeriesProfile, t: int, epsilon: float = 1e-9) -> bool:
    """True iff the tariff at ``t`` is within ``epsilon`` of its calendar-day minimum."""
    current = sample(tariff, t)
    return current <= float(np.min(tariff.day_window(t))) + epsilon


FlatOrProfile = Union[float, TimeSeriesProfile]


def value_at(rate: FlatOrProfile, t: int) -> float:
    """Sample a rate that may be either flat or a profile."""
    if isinstance(rate, TimeSeriesProfile):
        return sample(rate, t)
    return float(rate)
