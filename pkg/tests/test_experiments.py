import json
import math

import pytest

from novikov2c import (
    ExperimentConfig,
    RateTable,
    fit_rate,
    run_initial_norms,
    run_partition_check,
    run_prop1,
    run_prop2,
    run_theorem,
    write_outputs,
)


@pytest.fixture(scope="module")
def coarse():
    """Quick configuration: mid-size grid, three frequency indices."""
    return ExperimentConfig(n_points=2**13, half_width=50.0, n_min=3, n_max=5,
                            sample_times=(0.0, 0.01, 0.02), horizon=0.02,
                            dt_max=1e-3)


class TestFitRate:
    def test_exact_halving(self):
        fit = fit_rate([(n, 2.0**-n) for n in (4, 5, 6, 7)])
        assert fit.slope == pytest.approx(-1.0, abs=1e-12)
        assert fit.residual <= 1e-12

    def test_constant_prefactor_absorbed(self):
        fit = fit_rate([(n, 3.7 * 2.0 ** (-n / 2)) for n in (4, 5, 6)])
        assert fit.slope == pytest.approx(-0.5, abs=1e-12)

    def test_flat_data(self):
        fit = fit_rate([(4, 1.0), (5, 1.0), (6, 1.0)])
        assert fit.slope == pytest.approx(0.0, abs=1e-12)

    def test_requires_three_points(self):
        with pytest.raises(ValueError):
            fit_rate([(4, 1.0), (5, 0.5)])

    def test_rejects_nonpositive_errors(self):
        with pytest.raises(ValueError):
            fit_rate([(4, 1.0), (5, 0.0), (6, 1.0)])


class TestExperimentConfig:
    def test_defaults_are_desk_scale(self):
        cfg = ExperimentConfig()
        assert cfg.n_points == 2**16
        assert cfg.half_width == 50.0
        assert (cfg.n_min, cfg.n_max) == (4, 8)

    def test_merge_overrides(self):
        cfg = ExperimentConfig().merged(n_max=6, out_dir="elsewhere", s=None)
        assert cfg.n_max == 6
        assert cfg.out_dir == "elsewhere"
        assert cfg.s == 2.0

    def test_json_round_trip(self, tmp_path):
        cfg = ExperimentConfig(n_points=2**13, n_min=3, n_max=5)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg.to_dict()))
        again = ExperimentConfig.from_json(path)
        assert again == cfg

    def test_rejects_bad_range(self):
        with pytest.raises(ValueError):
            ExperimentConfig(n_min=2)
        with pytest.raises(ValueError):
            ExperimentConfig(n_min=5, n_max=4)


class TestRateTable:
    def test_rows_sorted_in_csv(self, tmp_path):
        table = RateTable(columns=["n", "t", "v"])
        table.add(n=5, t=0.1, v=1.0)
        table.add(n=4, t=0.2, v=2.0)
        table.add(n=4, t=0.1, v=3.0)
        path = tmp_path / "t.csv"
        table.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "n,t,v"
        assert lines[1].startswith("4,0.1")
        assert lines[2].startswith("4,0.2")
        assert lines[3].startswith("5,0.1")

    def test_row_key_mismatch_rejected(self):
        table = RateTable(columns=["n", "v"])
        with pytest.raises(ValueError):
            table.add(n=4, wrong=1.0)

    def test_column_filter(self):
        table = RateTable(columns=["n", "v"])
        table.add(n=4, v=1.0)
        table.add(n=5, v=2.0)
        assert table.column("v", where=lambda rec: rec["n"] == 5) == [2.0]


class TestRunners:
    def test_partition_check_passes(self, coarse):
        result = run_partition_check(coarse)
        assert result.passed
        assert {c.name for c in result.criteria} == {
            "partition_of_unity", "block_disjointness", "reconstruction",
            "bernstein_factor"}

    def test_initial_norms_pass(self, coarse):
        result = run_initial_norms(coarse)
        assert result.passed, [c.name for c in result.criteria if not c.passed]
        assert result.fits["slope_low_s"]["slope"] == pytest.approx(-0.5, abs=1e-6)

    def test_prop1_rates(self, coarse):
        result = run_prop1(coarse)
        by_name = {c.name: c for c in result.criteria}
        assert by_name["t0_error"].passed
        assert by_name["slope_main"].passed
        assert by_name["slope_low_index"].passed
        # decay is strictly faster than the guaranteed envelope
        assert result.fits["slope_main"]["slope"] < -1.0

    def test_prop2_defect_vanishes_at_t0(self, coarse):
        result = run_prop2(coarse)
        by_name = {c.name: c for c in result.criteria}
        assert by_name["defect_at_t0"].passed
        assert math.isfinite(result.fits["tslope_at_nmax"])

    def test_theorem_structure(self, coarse):
        result = run_theorem(coarse)
        by_name = {c.name: c for c in result.criteria}
        assert by_name["slope_initial_distance"].passed
        assert by_name["triangle_inequality"].passed
        assert by_name["divergence_floor_rho"].passed
        assert by_name["divergence_floor_u"].passed
        assert result.fits["riemann_constant"] > 0


class TestOutputs:
    def test_files_reproduce_byte_identically(self, coarse, tmp_path):
        result = run_initial_norms(coarse)
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        doc1 = write_outputs(result, coarse, out1)
        doc2 = write_outputs(result, coarse, out2)
        assert doc1 == doc2
        csv1 = (out1 / "norms.csv").read_bytes()
        csv2 = (out2 / "norms.csv").read_bytes()
        assert csv1 == csv2
        json1 = (out1 / "norms.json").read_bytes()
        assert json1 == (out2 / "norms.json").read_bytes()

    def test_rerun_reproduces_results(self, coarse, tmp_path):
        r1 = run_prop1(coarse)
        r2 = run_prop1(coarse)
        out1 = tmp_path / "r1"
        out2 = tmp_path / "r2"
        write_outputs(r1, coarse, out1)
        write_outputs(r2, coarse, out2)
        assert (out1 / "prop1.csv").read_bytes() == (out2 / "prop1.csv").read_bytes()
        assert (out1 / "prop1.json").read_bytes() == (out2 / "prop1.json").read_bytes()

    def test_json_schema(self, coarse, tmp_path):
        doc = write_outputs(run_partition_check(coarse), coarse, tmp_path)
        assert set(doc) == {"experiment", "config", "fits", "criteria",
                            "flags", "pass"}
        on_disk = json.loads((tmp_path / "partition-check.json").read_text())
        assert on_disk["experiment"] == "partition-check"
        assert on_disk["config"]["n_points"] == coarse.n_points
        assert all({"name", "value", "threshold", "kind", "pass"} == set(c)
                   for c in on_disk["criteria"])

    def test_csv_full_precision(self, coarse, tmp_path):
        result = run_initial_norms(coarse)
        write_outputs(result, coarse, tmp_path)
        lines = (tmp_path / "norms.csv").read_text().splitlines()
        header = lines[0].split(",")
        first = lines[1].split(",")
        col = header.index("low_s")
        reparsed = float(first[col])
        assert reparsed == result.table.sorted_rows()[0][col]


class TestWorkerPool:
    def test_threaded_run_matches_sequential(self, coarse, tmp_path):
        seq = run_prop1(coarse)
        par = run_prop1(coarse.merged(workers=3))
        out1, out2 = tmp_path / "s", tmp_path / "p"
        write_outputs(seq, coarse, out1)
        write_outputs(par, coarse.merged(workers=3), out2)
        assert (out1 / "prop1.csv").read_bytes() == (out2 / "prop1.csv").read_bytes()
