import pytest

from coinroute import (HarnessError, ResultTable, braess_report,
                       bundled_scenarios, emit, load_scenario,
                       parse_scenario_file, run_scenario, steering_sweep)
from coinroute.cli import main as cli_main

TINY = """
name tiny
node X zero
node SH power 1 2
node AX affine 2 0
node DX zero
edge X SH
edge X AX
edge SH DX
edge AX DX
bedge X DX
demand X DX 1
row 1
row 2
schedule L=2 W=4
warmup 5
waves 20
seeds 2
algos ispa fk mb
steering 0.0 1.0
sweeprow 2
"""


@pytest.fixture
def tiny():
    return parse_scenario_file(TINY)


@pytest.fixture
def tiny_path(tmp_path):
    path = tmp_path / "tiny.txt"
    path.write_text(TINY)
    return str(path)


class TestScenarioParsing:
    def test_directives(self, tiny):
        assert tiny.name == "tiny"
        assert tiny.variants == ("a", "b")
        assert tiny.rows == [(1,), (2,)]
        assert tiny.seeds == 2 and tiny.warmup == 5 and tiny.waves == 20
        assert tiny.steering == (0.0, 1.0)
        assert tiny.sweeprow == (2,)

    def test_variant_b_includes_extra_links(self, tiny):
        assert ("X", "DX") in tiny.topology("b").edges
        assert ("X", "DX") not in tiny.topology("a").edges

    def test_row_overrides_demand_rate(self, tiny):
        assert tiny.topology("a", (2,)).demands == [("X", "DX", 2)]

    def test_unknown_variant(self, tiny):
        with pytest.raises(HarnessError):
            tiny.topology("c")

    def test_schedule_resolution(self, tiny):
        sched = tiny.schedule()
        assert (sched.L, sched.W) == (2, 4)
        assert sched.measure_start == 5 and sched.total_waves == 20
        assert tiny.schedule(waves=30).total_waves == 30

    def test_row_arity_checked(self):
        with pytest.raises(HarnessError, match="rates"):
            parse_scenario_file(TINY + "row 1 2\n")

    def test_unknown_directive(self):
        with pytest.raises(HarnessError, match="unknown directive"):
            parse_scenario_file("nodd S zero\n")

    def test_missing_schedule(self):
        with pytest.raises(HarnessError, match="schedule"):
            parse_scenario_file("node S zero\nnode D zero\nedge S D\ndemand S D 1\n")

    def test_unknown_algorithm(self):
        with pytest.raises(HarnessError, match="algorithms"):
            parse_scenario_file(TINY + "algos warp\n")

    def test_default_row_from_demands(self):
        text = ("node S zero\nnode D zero\nedge S D\ndemand S D 3\n"
                "schedule L=1 W=2\nwarmup 2\nwaves 4\n")
        assert parse_scenario_file(text).rows == [(3,)]


class TestLoading:
    def test_bundled_names(self):
        assert bundled_scenarios() == [
            "bootes2", "bootes4", "braess-figure2", "butterfly", "hex-linear",
            "hex-log", "ray", "two-router-shared-link"]

    def test_every_bundled_scenario_validates(self):
        for name in bundled_scenarios():
            scenario = load_scenario(name)
            assert scenario.rows and scenario.schedule()

    def test_load_from_path(self, tiny_path):
        assert load_scenario(tiny_path).name == "tiny"

    def test_missing_scenario_lists_options(self):
        with pytest.raises(HarnessError, match="hex-linear"):
            load_scenario("nope")


class TestRunScenario:
    def test_table_shape(self, tiny):
        table = run_scenario(tiny, workers=1)
        # 2 rows x 2 variants x (ispa, fk, mb@0, mb@1)
        assert len(table.rows) == 16
        assert [r.load for r in table.rows] == sorted(r.load for r in table.rows)

    def test_deterministic_cells_run_once(self, tiny):
        table = run_scenario(tiny, workers=1)
        assert table.cell((1,), "a", "ispa").seeds == 1
        assert table.cell((1,), "a", "mb@0").seeds == 2
        assert len(table.samples[((1,), "a", "mb@0")]) == 2

    def test_roster_validation(self, tiny):
        with pytest.raises(HarnessError):
            run_scenario(tiny, algos=["warp"])
        with pytest.raises(HarnessError):
            run_scenario(tiny, steering=[1.5])

    def test_csv_roundtrip_is_byte_identical(self, tiny):
        table = run_scenario(tiny, workers=1)
        text = table.to_csv()
        assert ResultTable.from_csv(text).to_csv() == text

    def test_markdown_and_emit(self, tiny, tmp_path):
        table = run_scenario(tiny, rows=[(1,)], algos=["ispa"], workers=1)
        assert table.to_markdown().startswith("| load |")
        out = tmp_path / "t.csv"
        emit(table, "csv", str(out))
        assert out.read_text() == table.to_csv()
        with pytest.raises(HarnessError):
            emit(table, "yaml")

    def test_worker_pool_matches_inline(self, tiny):
        inline = run_scenario(tiny, rows=[(1,)], workers=1)
        pooled = run_scenario(tiny, rows=[(1,)], workers=2)
        assert inline.to_csv() == pooled.to_csv()

    def test_missing_cell_lookup(self, tiny):
        table = run_scenario(tiny, rows=[(1,)], algos=["ispa"], workers=1)
        with pytest.raises(HarnessError):
            table.cell((1,), "a", "fk")


class TestBraessReport:
    def test_flags_and_deltas(self, tiny):
        table = run_scenario(tiny, workers=1)
        report = braess_report(table)
        # the direct zero-cost link is a pure benefit in this toy
        assert report.flag((2,), "ispa") == "BENEFIT"
        assert report.deltas[((2,), "ispa")] < 0
        assert "BENEFIT" in report.to_text()

    def test_tolerance_neutralizes_small_changes(self, tiny):
        table = run_scenario(tiny, workers=1)
        report = braess_report(table, tolerance=1e9)
        assert set(report.flags.values()) == {"NEUTRAL"}

    def test_missing_variant_rejected(self, tiny):
        table = run_scenario(tiny, variants=["a"], workers=1)
        with pytest.raises(HarnessError, match="variant"):
            braess_report(table)


class TestSteeringSweep:
    def test_rows_default_to_sweeprow(self, tiny):
        sweep = steering_sweep(tiny, workers=1)
        assert sweep.rows == [(2,)]
        assert sweep.variant == "b"
        assert set(sweep.tables) == {0.0, 1.0}

    def test_endpoint_matches_fk_per_seed(self, tiny):
        sweep = steering_sweep(tiny, workers=1)
        fk_value = sweep.reference.cell((2,), "b", "fk").mean
        endpoint = sweep.tables[1.0].samples[((2,), "b", "mb@1")]
        assert all(v == fk_value for v in endpoint)  # bitwise, not approx

    def test_curve_lookup(self, tiny):
        sweep = steering_sweep(tiny, workers=1)
        curve = sweep.curve((2,))
        assert set(curve) == {0.0, 1.0}

    def test_steering_validated(self, tiny):
        with pytest.raises(HarnessError):
            steering_sweep(tiny, steering=[-0.5])


class TestCli:
    def test_run_writes_per_run_rows(self, tiny_path, tmp_path, capsys):
        out = tmp_path / "runs.csv"
        code = cli_main(["run", "--scenario", tiny_path, "--algo", "mb",
                         "--steering", "0.0", "--seeds", "2", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == ("scenario,variant,algorithm,load,seed,"
                            "per_packet_cost,waves_measured")
        # 2 rows x 2 variants x 2 seeds
        assert len(lines) == 1 + 8
        assert lines[1].startswith("tiny,a,mb@0,1,0,")

    def test_run_deterministic_single_seed(self, tiny_path, capsys):
        assert cli_main(["run", "--scenario", tiny_path, "--algo", "ispa"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 1 + 4  # one run per (row, variant)

    def test_braess_prints_flags(self, tiny_path, capsys):
        assert cli_main(["braess", "--scenario", tiny_path]) == 0
        out = capsys.readouterr().out
        assert "| load |" in out and "BENEFIT" in out

    def test_sweep_prints_curve(self, tiny_path, capsys):
        assert cli_main(["sweep", "--scenario", tiny_path]) == 0
        out = capsys.readouterr().out
        assert "mb steering ->" in out

    def test_lb_bounds_text_and_csv(self, capsys):
        code = cli_main(["lb-bounds", "--ca", "power 1 2", "--cb", "affine 0 1",
                         "--W", "1000"])
        assert code == 0
        out = capsys.readouterr().out
        assert "suboptimal       yes" in out
        assert "k_lb/W,0.618034" in out

    def test_errors_exit_nonzero(self, tiny_path, capsys):
        assert cli_main(["run", "--scenario", "nope"]) == 1
        assert "error:" in capsys.readouterr().err
        assert cli_main(["lb-bounds", "--ca", "power 1 2", "--cb", "zero",
                         "--W", "1000"]) == 1
        assert "error:" in capsys.readouterr().err
