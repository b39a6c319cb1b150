"""Command-line interface: subcommands, formats, exit codes."""

import json
from fractions import Fraction

import numpy as np
import pytest

from conftest import univariate_moments
from homoment import cli, models


def run(args, capsys):
    code = cli.main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestDefectTable:
    def test_single_row_text(self, capsys):
        code, out, err = run(["defect-table", "--n", "2", "--k", "2",
                              "--check"], capsys)
        assert code == 0
        assert "2  2  3" in out.replace("   ", "  ")
        fields = out.splitlines()[1].split()
        assert fields == ["2", "2", "3", "8", "9", "8", "7", "1", "1"]

    def test_json_format(self, capsys):
        code, out, _ = run(["defect-table", "--n", "1", "--d", "3",
                            "--format", "json", "--check"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["schema"] == "homoment/1"
        assert payload["check"]["passed"]
        rows = {(r["n"], r["k"]): r for r in payload["rows"]}
        assert rows[(1, 1)]["dim"] == 2
        assert rows[(1, 2)]["fiber_dim"] == 1

    def test_csv_format(self, capsys):
        code, out, _ = run(["defect-table", "--n", "1", "--k", "1",
                            "--format", "csv"], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("n,k,d,")
        assert lines[1] == "1,1,3,2,3,2,2,0,0"

    def test_bad_range_is_input_error(self, capsys):
        code, _, err = run(["defect-table", "--n", "x..y"], capsys)
        assert code == cli.EXIT_INPUT
        assert json.loads(err)["error"]["code"] == "INPUT"

    def test_envelope_violation(self, capsys):
        code, _, err = run(["defect-table", "--n", "9"], capsys)
        assert code == cli.EXIT_INPUT

    def test_jobs_match_serial(self, capsys, tmp_path):
        serial = tmp_path / "serial.json"
        parallel = tmp_path / "parallel.json"
        code, _, _ = run(["defect-table", "--n", "2", "--format", "json",
                          "--output", str(serial)], capsys)
        assert code == 0
        code, _, _ = run(["defect-table", "--n", "2", "--format", "json",
                          "--jobs", "2", "--output", str(parallel)], capsys)
        assert code == 0
        assert serial.read_text() == parallel.read_text()


class TestSimulateAndFit2:
    PARAMS = {
        "means": [[1.0, 0.0], [-3.0 / 7.0, 0.0]],
        "weights": [0.3, 0.7],
        "cov": [[1.0, 0.0], [0.0, 1.0]],
    }

    def _write_params(self, tmp_path):
        path = tmp_path / "params.json"
        path.write_text(json.dumps(self.PARAMS))
        return path

    def test_simulate_deterministic(self, capsys, tmp_path):
        params = self._write_params(tmp_path)
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for out in (a, b):
            code, _, _ = run(["simulate", "--params", str(params), "--count",
                              "200", "--seed", "7", "--output", str(out)],
                             capsys)
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_round_trip_recovers_truth(self, capsys, tmp_path):
        params = self._write_params(tmp_path)
        data = tmp_path / "data.csv"
        code, _, _ = run(["simulate", "--params", str(params), "--count",
                          "60000", "--seed", "1", "--output", str(data)],
                         capsys)
        assert code == 0
        out_json = tmp_path / "fit.json"
        code, _, _ = run(["fit2", "--input", str(data), "--order", "5",
                          "--output", str(out_json)], capsys)
        assert code == 0
        payload = json.loads(out_json.read_text())
        assert payload["schema"] == "homoment/1"
        est = payload["estimates"][0]
        weights = sorted(est["weights"])
        assert weights == pytest.approx([0.3, 0.7], abs=0.05)
        means = sorted(m[0] for m in est["means"])
        assert means == pytest.approx([-3.0 / 7.0, 1.0], abs=0.15)

    def test_order_four_returns_pair(self, capsys, tmp_path):
        params = self._write_params(tmp_path)
        data = tmp_path / "data.csv"
        run(["simulate", "--params", str(params), "--count", "20000",
             "--seed", "3", "--output", str(data)], capsys)
        code, out, _ = run(["fit2", "--input", str(data), "--order", "4"],
                           capsys)
        assert code == 0
        assert len(json.loads(out)["estimates"]) == 2

    def test_single_column_csv_univariate_path(self, capsys, tmp_path):
        p = tmp_path / "p1.json"
        p.write_text(json.dumps({
            "means": [[0.0], [3.0]], "weights": [0.3, 0.7], "cov": [[0.25]]}))
        data = tmp_path / "one_col.csv"
        run(["simulate", "--params", str(p), "--count", "60000", "--seed",
             "2", "--output", str(data)], capsys)
        code, out, _ = run(["fit2", "--input", str(data)], capsys)
        assert code == 0
        est = json.loads(out)["estimates"][0]
        assert est["n"] == 1
        assert sorted(m[0] for m in est["means"]) == \
            pytest.approx([0.0, 3.0], abs=0.1)

    def test_empty_csv(self, capsys, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        code, _, err = run(["fit2", "--input", str(empty)], capsys)
        assert code == cli.EXIT_INPUT
        assert json.loads(err)["error"]["code"] == "INPUT_EMPTY"

    def test_non_numeric_cells(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n1.0,2.0\n3.0,oops\n")
        code, _, err = run(["fit2", "--input", str(bad)], capsys)
        assert code == cli.EXIT_INPUT
        assert json.loads(err)["error"]["code"] == "INPUT_PARSE"

    def test_header_detection(self, capsys, tmp_path):
        data = tmp_path / "with_header.csv"
        rows = ["x"] + ["%f" % v for v in np.linspace(-1, 1, 11)]
        data.write_text("\n".join(rows))
        code, out, _ = run(["fit1d", "--k", "1", "--input", str(data)], capsys)
        assert code == 0
        assert json.loads(out)["estimate"]["k"] == 1

    def test_symmetric_data_exit_code(self, capsys, tmp_path):
        # perfectly symmetric sample: third cumulants vanish identically
        data = tmp_path / "sym.csv"
        data.write_text("\n".join(["1.0", "-1.0", "2.0", "-2.0"] * 100))
        code, _, err = run(["fit2", "--input", str(data)], capsys)
        assert code == cli.EXIT_MODEL
        assert json.loads(err)["error"]["code"] == "SYMMETRIC_MIXTURE"


class TestFit1d:
    def test_single_gaussian_from_moments(self, capsys):
        code, out, _ = run(["fit1d", "--k", "1", "--moments", "1,3"], capsys)
        assert code == 0
        est = json.loads(out)["estimate"]
        assert est["means"][0][0] == pytest.approx(1.0, abs=1e-9)
        assert est["cov"][0][0] == pytest.approx(2.0, abs=1e-9)

    def test_requires_one_source(self, capsys):
        code, _, err = run(["fit1d", "--k", "1"], capsys)
        assert code == cli.EXIT_INPUT

    def test_multicolumn_csv_rejected(self, capsys, tmp_path):
        data = tmp_path / "wide.csv"
        data.write_text("1.0,2.0\n3.0,4.0\n")
        code, _, _ = run(["fit1d", "--k", "1", "--input", str(data)], capsys)
        assert code == cli.EXIT_INPUT


class TestRankTest:
    def test_two_mixture_counted(self, capsys):
        p = models.HomoscedasticParams(
            means=[[0], [3]], weights=[Fraction(2, 5), Fraction(3, 5)],
            cov=[[Fraction(1, 2)]])
        m = ",".join(str(float(x)) for x in univariate_moments(p, 7))
        code, out, _ = run(["rank-test", "--moments", m, "--kmax", "3"],
                           capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["estimated_components"] == 2
        assert [v["on_model"] for v in payload["verdicts"][:2]] == [False, True]

    def test_gaussian_counted(self, capsys):
        code, out, _ = run(["rank-test", "--moments", "1,3,7,25,81",
                            "--kmax", "2"], capsys)
        assert code == 0
        assert json.loads(out)["estimated_components"] == 1

    def test_insufficient_order(self, capsys):
        code, _, err = run(["rank-test", "--moments", "1,2,3", "--kmax", "2"],
                           capsys)
        assert code == cli.EXIT_INPUT
        assert json.loads(err)["error"]["code"] == "INSUFFICIENT_ORDER"


class TestSeedEnvironment:
    def test_env_seed_fallback(self, capsys, tmp_path, monkeypatch):
        params = tmp_path / "p.json"
        params.write_text(json.dumps({
            "means": [[0.0]], "weights": [1.0], "cov": [[1.0]]}))
        out1 = tmp_path / "s1.csv"
        out2 = tmp_path / "s2.csv"
        monkeypatch.setenv("HOMOMENT_SEED", "99")
        run(["simulate", "--params", str(params), "--count", "50",
             "--output", str(out1)], capsys)
        monkeypatch.delenv("HOMOMENT_SEED")
        run(["simulate", "--params", str(params), "--count", "50",
             "--seed", "99", "--output", str(out2)], capsys)
        assert out1.read_text() == out2.read_text()
