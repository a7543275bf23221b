# Tests for the battery and EV state-of-charge models

import numpy as np
import pytest

from src.storage.battery import (
    BatteryState,
    charge_headroom_energy,
    max_charge_power,
    max_discharge_power,
    step_battery,
)
from src.storage.ev import EvState, step_ev
from src.utils.config import BatteryConfig, EvConfig


@pytest.fixture
def battery_config() -> BatteryConfig:
    return BatteryConfig()


class TestStepBattery:
    def test_charge_clamped_at_soc_max(self):
        config = BatteryConfig(eta_charge=1.0)
        state, achieved = step_battery(BatteryState(0.5), config, -5.0, 1.0)
        assert state.soc == pytest.approx(0.9)
        assert achieved == pytest.approx(-4.0)

    def test_zero_command_is_identity(self, battery_config):
        state, achieved = step_battery(BatteryState(0.5), battery_config, 0.0, 1.0)
        assert state.soc == 0.5
        assert achieved == 0.0

    def test_empty_battery_cannot_discharge(self, battery_config):
        state, achieved = step_battery(BatteryState(0.1), battery_config, 3.0, 1.0)
        assert state.soc == 0.1
        assert achieved == 0.0

    def test_power_limit(self, battery_config):
        state, achieved = step_battery(BatteryState(0.5), battery_config, 8.0, 0.25)
        assert achieved == 5.0
        assert state.soc == pytest.approx(0.5 - 5.0 * 0.25 / (0.95 * 10.0))

    def test_efficiencies(self, battery_config):
        charged, _ = step_battery(BatteryState(0.5), battery_config, -2.0, 1.0)
        discharged, _ = step_battery(BatteryState(0.5), battery_config, 2.0, 1.0)
        assert charged.soc == pytest.approx(0.5 + 2.0 * 0.95 / 10.0)
        assert discharged.soc == pytest.approx(0.5 - 2.0 / (0.95 * 10.0))

    def test_lands_exactly_on_limits(self, battery_config):
        full, _ = step_battery(BatteryState(0.8), battery_config, -5.0, 1.0)
        empty, _ = step_battery(BatteryState(0.15), battery_config, 5.0, 1.0)
        assert full.soc == battery_config.soc_max
        assert empty.soc == battery_config.soc_min

    def test_rejects_non_positive_step(self, battery_config):
        with pytest.raises(ValueError):
            step_battery(BatteryState(0.5), battery_config, 1.0, 0.0)

    def test_random_commands_keep_soc_in_window_and_conserve_energy(self, battery_config):
        rng = np.random.default_rng(42)
        for _ in range(200):
            state = BatteryState(float(rng.uniform(0.1, 0.9)))
            start = state.soc
            stored = 0.0
            for command in rng.uniform(-8.0, 8.0, 48):
                dt = float(rng.choice([0.25, 0.5, 1.0]))
                state, achieved = step_battery(state, battery_config, float(command), dt)
                assert battery_config.soc_min <= state.soc <= battery_config.soc_max
                assert abs(achieved) <= abs(command)
                assert achieved == 0.0 or np.sign(achieved) == np.sign(command)
                if achieved < 0:
                    stored += -achieved * battery_config.eta_charge * dt
                else:
                    stored -= achieved * dt / battery_config.eta_discharge
            assert battery_config.capacity_kwh * (state.soc - start) == pytest.approx(stored, abs=1e-9)

    def test_more_headroom_never_charges_less(self, battery_config):
        achieved = [
            -step_battery(BatteryState(soc), battery_config, -5.0, 1.0)[1]
            for soc in np.linspace(0.9, 0.1, 33)
        ]
        assert all(later >= earlier for earlier, later in zip(achieved, achieved[1:]))


class TestLimits:
    def test_max_powers(self, battery_config):
        assert max_charge_power(BatteryState(0.3), battery_config, 1.0) == 5.0
        assert max_charge_power(BatteryState(0.5), battery_config, 1.0) == pytest.approx(4.0 / 0.95)
        assert max_charge_power(BatteryState(0.9), battery_config, 1.0) == 0.0
        assert max_discharge_power(BatteryState(0.1), battery_config, 1.0) == 0.0
        assert max_discharge_power(BatteryState(0.15), battery_config, 1.0) == pytest.approx(0.475)

    def test_charge_headroom_energy(self):
        assert charge_headroom_energy(BatteryState(0.9), BatteryConfig()) == 0.0
        assert charge_headroom_energy(BatteryState(0.5), BatteryConfig(eta_charge=1.0)) == pytest.approx(4.0)
        assert charge_headroom_energy(BatteryState(0.5), BatteryConfig(eta_charge=0.8)) == pytest.approx(5.0)

    def test_initial_state_from_config(self):
        assert BatteryState.initial(BatteryConfig(initial_soc=0.9)).soc == 0.9


class TestStepEv:
    def _ev(self, **overrides) -> EvState:
        values = dict(connected=True, soc=0.5, soc_max=0.9, capacity_kwh=30.0, p_charge_kw=3.0)
        values.update(overrides)
        return EvState(**values)

    def test_charges_while_connected(self):
        state, p_ev = step_ev(self._ev(), 1.0)
        assert p_ev == 3.0
        assert state.soc == pytest.approx(0.6)

    def test_disconnected_draws_nothing(self):
        original = self._ev(connected=False)
        state, p_ev = step_ev(original, 1.0)
        assert p_ev == 0.0
        assert state == original

    def test_full_ev_draws_nothing(self):
        _, p_ev = step_ev(self._ev(soc=0.9), 1.0)
        assert p_ev == 0.0

    def test_stops_at_ceiling(self):
        state, p_ev = step_ev(self._ev(soc=0.85), 1.0)
        assert p_ev == pytest.approx(1.5)
        assert state.soc == 0.9

    def test_initial_state(self):
        state = EvState.initial(EvConfig())
        assert not state.connected
        assert state.soc == 0.5

    def test_rejects_bad_soc(self):
        with pytest.raises(ValueError):
            self._ev(soc=1.2)
