# Shared fixtures: shipped scenarios, default configs and a small scenario factory

from pathlib import Path

import numpy as np
import pytest

from src.profiles.scenario import Scenario
from src.utils.config import ElectricalConfig, MicrogridConfig

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"
FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture
def scenario_dir() -> Path:
    return SCENARIOS


@pytest.fixture
def fixture_dir() -> Path:
    return FIXTURES


@pytest.fixture
def microgrid_config() -> MicrogridConfig:
    return MicrogridConfig()


@pytest.fixture
def electrical_config() -> ElectricalConfig:
    return ElectricalConfig()


@pytest.fixture
def make_scenario():
    """Build a one-day scenario from a few overrides; everything else is flat."""

    def _make(steps: int = 24, pv=0.0, load=2.0, tariff=0.10, fit=0.08, **kwargs) -> Scenario:
        def column(value):
            return np.full(steps, float(value)) if np.isscalar(value) else np.asarray(value, dtype=float)

        return Scenario.from_arrays(
            pv=column(pv),
            load=column(load),
            tariff=column(tariff),
            fit=fit,
            **{key: column(value) for key, value in kwargs.items()},
        )

    return _make
