import json

import pytest

from ris_sop.cli import (
    CSV_HEADER,
    SweepSpec,
    emit_csv,
    main,
    parse_config,
    parse_csv,
    run_sweep,
)
from ris_sop.errors import ConfigError
from ris_sop.sysmodel import SystemConfig

FAST = json.dumps(
    {
        "base": {"n_elements": 16, "n_users": 2, "gamma0_db": 10.0},
        "sweep": {"gamma0_db": [0.0, 10.0]},
        "schemes": ["OUS", "NOMA_BU", "NOMA_WU"],
        "evaluators": ["closed", "asymptotic", "mc"],
        "mc_trials": 2000,
        "seed": 9,
    }
)


class TestParseConfig:
    def test_empty_object_gives_default_single_point(self):
        spec = parse_config("{}")
        assert spec.base == SystemConfig()
        assert spec.axes == (("gamma0_db", (20.0,)),)
        assert spec.schemes == ("OUS",)
        assert "closed" in spec.evaluators and "mc" in spec.evaluators

    def test_rejects_invalid_values(self):
        with pytest.raises(ConfigError):
            parse_config(json.dumps({"base": {"n_users": 0}}))
        with pytest.raises(ConfigError):
            parse_config(json.dumps({"mc_trials": 0}))
        with pytest.raises(ConfigError):
            parse_config(json.dumps({"seed": -1}))

    def test_unknown_keys_named(self):
        with pytest.raises(ConfigError, match="wavelength"):
            parse_config(json.dumps({"base": {"wavelength": 1.0}}))
        with pytest.raises(ConfigError, match="schemas"):
            parse_config(json.dumps({"schemas": ["OUS"]}))
        with pytest.raises(ConfigError, match="z0"):
            parse_config(json.dumps({"sweep": {"z0": [40.0]}}))

    def test_malformed_json_reports_position(self):
        with pytest.raises(ConfigError, match=r"line 1, column"):
            parse_config("{oops}")

    def test_round_trip(self):
        spec = parse_config(FAST)
        assert parse_config(spec.to_json()) == spec

    def test_grid_cap(self):
        doc = {"sweep": {"gamma0_db": list(map(float, range(1001))),
                         "n_elements": list(range(1, 1002))}}
        with pytest.raises(ConfigError, match="cap"):
            parse_config(json.dumps(doc))


@pytest.fixture(scope="module")
def table():
    return run_sweep(parse_config(FAST))


class TestRunSweep:

    def test_row_layout(self, table):
        assert len(table) == 6  # 2 grid points x 3 schemes
        assert [r.scheme for r in table[:3]] == ["OUS", "NOMA_BU", "NOMA_WU"]
        assert table[0].gamma0_db == 0.0 and table[3].gamma0_db == 10.0

    def test_noma_rows_have_no_analytic_columns(self, table):
        for row in table:
            if row.scheme == "OUS":
                assert row.sop_closed is not None
                assert row.sop_asym is not None
            else:
                assert row.sop_closed is None
                assert row.sop_asym is None
                assert row.sop_quad_exact is None
            assert row.sop_mc is not None
            assert row.mc_trials == 2000
            assert row.error is None

    def test_csv_round_trip(self, table):
        text = emit_csv(table)
        assert text.startswith(CSV_HEADER + "\n")
        again = parse_csv(text)
        assert again == table

    def test_empty_table(self):
        assert emit_csv([]) == CSV_HEADER + "\n"

    def test_field_count(self, table):
        for line in emit_csv(table).strip().split("\n")[1:]:
            assert len(line.split(",")) == 17

    def test_worker_count_invariance(self):
        spec = parse_config(FAST)
        csv1 = emit_csv(run_sweep(spec, workers=1))
        csv4 = emit_csv(run_sweep(spec, workers=4))
        assert csv1 == csv4

    def test_tiny_values_floored_to_zero(self):
        spec = parse_config(json.dumps({
            "base": {"n_elements": 512, "n_users": 3, "gamma0_db": 60.0},
            "evaluators": ["closed"],
        }))
        (row,) = run_sweep(spec)
        assert row.sop_closed == 0.0

    def test_errors_recorded_not_raised(self):
        spec = parse_config(json.dumps({
            "base": {"n_users": 1, "n_elements": 16},
            "schemes": ["NOMA_BU"],
            "evaluators": ["mc"],
            "mc_trials": 10,
        }))
        (row,) = run_sweep(spec)
        assert row.error is not None and "mc" in row.error
        assert row.sop_mc is None


class TestMain:
    def test_validate_round_trips(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(FAST)
        assert main(["validate", "--config", str(path)]) == 0
        printed = capsys.readouterr().out
        assert parse_config(printed) == parse_config(FAST)

    def test_validate_rejects(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"base": {"n_users": 0}}')
        assert main(["validate", "--config", str(path)]) == 1
        assert "error" in capsys.readouterr().err

    def test_sweep_writes_deterministic_csv(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({
            "sweep": {"gamma0_db": [0.0, 20.0]},
            "evaluators": ["closed", "mc"],
            "mc_trials": 5000,
            "seed": 3,
        }))
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(["sweep", "--config", str(path), "--out", str(out1)]) == 0
        assert main(["sweep", "--config", str(path), "--out", str(out2),
                     "--workers", "4"]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        rows = parse_csv(out1.read_text())
        assert len(rows) == 2 and all(r.sop_mc is not None for r in rows)

    def test_sweep_trial_override(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text('{"evaluators": ["mc"], "mc_trials": 50000}')
        out = tmp_path / "o.csv"
        assert main(["sweep", "--config", str(path), "--out", str(out),
                     "--trials", "100"]) == 0
        (row,) = parse_csv(out.read_text())
        assert row.mc_trials == 100

    def test_sweep_reports_row_failures(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({
            "base": {"n_users": 1, "n_elements": 16},
            "schemes": ["NOMA_WU"],
            "evaluators": ["mc"],
            "mc_trials": 10,
        }))
        out = tmp_path / "o.csv"
        assert main(["sweep", "--config", str(path), "--out", str(out)]) == 1
        assert "row error" in capsys.readouterr().err

    def test_oracle_passes_on_default_grid(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({
            "base": {"n_elements": 64, "n_users": 3},
            "sweep": {"gamma0_db": [0.0, 20.0, 40.0]},
        }))
        assert main(["oracle", "--config", str(path)]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 4  # three points plus the summary

    def test_missing_config_file(self, capsys):
        assert main(["sweep", "--config", "/nonexistent.json",
                     "--out", "/tmp/x.csv"]) == 1
        assert "error" in capsys.readouterr().err
