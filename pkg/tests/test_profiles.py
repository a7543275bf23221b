# Tests for time series profiles and scenario files

import numpy as np
import pytest

from src.profiles.scenario import (
    COLUMNS,
    Scenario,
    ScenarioError,
    load_scenario,
    parse_scenario,
    read_scenario_text,
    serialize_scenario,
    validate_scenario_text,
    with_ev_disconnected,
    with_pv_scaled,
)
from src.profiles.timeseries import TimeSeriesProfile, sample, tariff_is_lowest

HEADER = ",".join(COLUMNS)


def _rows(count: int, tariff: float = 0.1) -> list:
    return [f"{h},1,2,0,0,{tariff},0.08,1,2" for h in range(count)]


def _text(rows: list) -> str:
    return "\n".join([HEADER] + rows) + "\n"


class TestTimeSeriesProfile:
    def test_sample_is_step_hold(self):
        profile = TimeSeriesProfile.from_values([1.0, 2.0, 3.0])
        assert [sample(profile, t) for t in range(3)] == [1.0, 2.0, 3.0]

    def test_sample_out_of_range_raises(self):
        profile = TimeSeriesProfile.flat(1.0, 24)
        with pytest.raises(IndexError):
            sample(profile, 24)
        with pytest.raises(IndexError):
            sample(profile, -1)

    def test_values_are_read_only(self):
        source = np.array([1.0, 2.0])
        profile = TimeSeriesProfile.from_values(source)
        source[0] = 99.0
        assert profile.values[0] == 1.0
        with pytest.raises(ValueError):
            profile.values[0] = 5.0

    def test_rejects_empty_and_bad_step(self):
        with pytest.raises(ValueError):
            TimeSeriesProfile.from_values([])
        with pytest.raises(ValueError):
            TimeSeriesProfile(0.0, np.ones(3))

    def test_day_window_and_steps_per_day(self):
        profile = TimeSeriesProfile.from_values(np.arange(48.0))
        assert profile.steps_per_day == 24
        assert profile.day_window(30).tolist() == list(np.arange(24.0, 48.0))

    def test_tariff_is_lowest_per_day(self):
        day_one = [0.2] * 24
        day_one[3] = 0.05
        day_two = [0.1] * 24
        tariff = TimeSeriesProfile.from_values(day_one + day_two)
        assert tariff_is_lowest(tariff, 3)
        assert not tariff_is_lowest(tariff, 4)
        # a flat day is lowest everywhere
        assert all(tariff_is_lowest(tariff, t) for t in range(24, 48))

    def test_tariff_is_lowest_holds_somewhere_every_day(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            tariff = TimeSeriesProfile.from_values(rng.uniform(0.01, 0.5, 72))
            for day in range(3):
                assert any(tariff_is_lowest(tariff, t) for t in range(day * 24, day * 24 + 24))


class TestScenarioParsing:
    def test_shipped_fixture_parses(self, scenario_dir):
        scenario = load_scenario(scenario_dir / "ev_connected_day.csv")
        assert scenario.horizon_steps == 24
        assert scenario.dt_hours == 1.0
        assert sample(scenario.pv, 7) == 9.0
        assert scenario.fit_at(5) == pytest.approx(0.10)

    def test_all_shipped_fixtures_validate(self, scenario_dir):
        for path in sorted(scenario_dir.glob("*.csv")):
            assert validate_scenario_text(path.read_text(encoding="utf-8")) == [], path.name

    def test_round_trip_preserves_samples(self, scenario_dir):
        original = load_scenario(scenario_dir / "measured_day.csv")
        reparsed = parse_scenario(serialize_scenario(original))
        assert np.array_equal(original.pv.values, reparsed.pv.values)
        assert np.array_equal(original.tariff.values, reparsed.tariff.values)
        assert np.array_equal(original.forecast_load_next_day.values, reparsed.forecast_load_next_day.values)
        assert reparsed.fit_at(0) == original.fit_at(0)

    def test_negative_tariff_names_row_and_column(self):
        rows = _rows(24)
        rows[2] = "2,1,2,0,0,-0.1,0.08,1,2"
        with pytest.raises(ScenarioError) as excinfo:
            parse_scenario(_text(rows), source="day.csv")
        message = str(excinfo.value)
        assert "day.csv:4:" in message
        assert "tariff" in message
        assert "negative price" in message

    def test_short_day_is_horizon_mismatch(self):
        violations = validate_scenario_text(_text(_rows(23)))
        assert len(violations) == 1
        assert "horizon mismatch" in violations[0].message

    def test_missing_cell_is_horizon_mismatch(self):
        rows = _rows(24)
        rows[5] = "5,1,,0,0,0.1,0.08,1,2"
        violations = validate_scenario_text(_text(rows))
        assert [(v.line, v.column) for v in violations] == [(7, "load_kw")]
        assert "horizon mismatch" in violations[0].message

    def test_non_number_is_syntax_error(self):
        rows = _rows(24)
        rows[0] = "0,abc,2,0,0,0.1,0.08,1,2"
        violations = validate_scenario_text(_text(rows))
        assert violations[0].column == "pv_kw"
        assert "syntax error" in violations[0].message

    def test_every_violation_is_reported(self):
        rows = _rows(24)
        rows[1] = "1,-1,2,0,0,0.1,0.08,1,2"
        rows[3] = "3,1,2,2,0,0.1,0.08,1,2"
        rows[4] = "4,1,2,0,3,0.1,0.08,1,2"
        violations = validate_scenario_text(_text(rows))
        assert {(v.line, v.column) for v in violations} == {
            (3, "pv_kw"),
            (5, "ev_connected"),
            (6, "ev_power_kw"),
        }

    def test_extra_field_names_position(self):
        rows = _rows(24)
        rows[2] = "2,1,2,0,0,0.1,0.08,1,2,7"
        violations = validate_scenario_text(_text(rows))
        assert [(v.line, v.column) for v in violations] == [(4, "field 10")]
        assert "syntax error" in violations[0].message

    def test_undecodable_bytes_name_line_and_column(self, tmp_path):
        path = tmp_path / "day.csv"
        path.write_bytes(b"\xef\xbb\xbf" + HEADER.encode() + b"\n0,1,2\n1,\xe9,2\n")
        with pytest.raises(ScenarioError) as excinfo:
            read_scenario_text(path)
        [violation] = excinfo.value.violations
        assert (violation.line, violation.column) == (3, "pv_kw")
        assert "0xe9" in violation.message
        assert str(excinfo.value).startswith(f"{path}:3:")
        with pytest.raises(ScenarioError):
            load_scenario(path)

    def test_bom_is_dropped(self, tmp_path):
        path = tmp_path / "day.csv"
        path.write_bytes(b"\xef\xbb\xbf" + _text(_rows(24)).encode())
        assert read_scenario_text(path).startswith("hour,")
        assert load_scenario(path).horizon_steps == 24

    def test_missing_column(self):
        text = "hour,pv_kw\n0,1\n"
        violations = validate_scenario_text(text)
        assert "load_kw" in {v.column for v in violations}
        assert all(v.message == "missing column" for v in violations)

    def test_hour_must_be_step_index(self):
        rows = _rows(24)
        rows[10] = "11,1,2,0,0,0.1,0.08,1,2"
        violations = validate_scenario_text(_text(rows))
        assert [(v.line, v.column) for v in violations] == [(12, "hour")]

    def test_blank_lines_keep_line_numbers(self):
        rows = _rows(24)
        rows[0] = "0,1,2,0,0,-1,0.08,1,2"
        text = HEADER + "\n\n" + "\n".join(rows) + "\n"
        violations = validate_scenario_text(text)
        assert violations[0].line == 3

    def test_byte_order_mark_is_accepted(self):
        scenario = parse_scenario("\ufeff" + _text(_rows(24)))
        assert scenario.horizon_steps == 24

    def test_empty_file(self):
        violations = validate_scenario_text("")
        assert violations and violations[0].line == 1

    def test_two_day_horizon(self):
        scenario = parse_scenario(_text(_rows(48)))
        assert scenario.horizon_steps == 48

    def test_time_varying_fit_kept_as_profile(self):
        rows = _rows(24)
        rows[3] = "3,1,2,0,0,0.1,0.05,1,2"
        scenario = parse_scenario(_text(rows))
        assert isinstance(scenario.fit, TimeSeriesProfile)
        assert scenario.fit_at(3) == 0.05


class TestScenarioVariants:
    def test_with_ev_disconnected(self, scenario_dir):
        scenario = with_ev_disconnected(load_scenario(scenario_dir / "ev_connected_day.csv"))
        assert not scenario.ev_connected.values.any()
        assert not scenario.ev_power_request.values.any()

    def test_with_pv_scaled(self, scenario_dir):
        original = load_scenario(scenario_dir / "ev_connected_day.csv")
        scaled = with_pv_scaled(original, 0.4)
        assert np.allclose(scaled.pv.values, original.pv.values * 0.4)
        assert np.allclose(scaled.forecast_pv_next_day.values, original.forecast_pv_next_day.values * 0.4)
        assert np.array_equal(scaled.load.values, original.load.values)

    def test_negative_pv_scale_rejected(self, make_scenario):
        with pytest.raises(ValueError):
            with_pv_scaled(make_scenario(), -1.0)

    def test_from_arrays_checks_invariants(self):
        with pytest.raises(ScenarioError):
            Scenario.from_arrays(pv=[-1.0] * 24, load=[1.0] * 24, tariff=[0.1] * 24, fit=0.08)
        with pytest.raises(ScenarioError):
            Scenario.from_arrays(
                pv=[1.0] * 24, load=[1.0] * 24, tariff=[0.1] * 24, fit=0.08, ev_power_request=[1.0] * 24
            )
