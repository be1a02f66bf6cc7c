import csv
import io
import json

import pytest

from conftest import FIXTURES
from wmsdspace.aggregate import AggregationKind
from wmsdspace.errors import (
    AllZeroWeights,
    BadNumber,
    HeaderMismatch,
    OutOfDomain,
    SchemaError,
)
from wmsdspace.cli import parse_config, read_matrix
from wmsdspace.wmsd import WmsdPoint
from wmsdspace.aggregate import agg_from_wmsd

STUDENTS_CONFIG = (FIXTURES / "students_config.json").read_text()


class TestParseConfig:
    def test_students_config(self):
        config = parse_config(STUDENTS_CONFIG)
        assert config.names == ("Math", "Bio", "Art")
        assert config.aggregation is AggregationKind.R
        assert config.weighted is True
        assert config.weight_vector.weights.tolist() == [0.5, 0.6, 1.0]

    def test_bad_aggregation(self):
        doc = json.loads(STUDENTS_CONFIG)
        doc["aggregation"] = "X"
        with pytest.raises(SchemaError):
            parse_config(json.dumps(doc))

    def test_all_zero_weights_path(self):
        doc = json.loads(STUDENTS_CONFIG)
        for c in doc["criteria"]:
            c["weight"] = 0.0
        with pytest.raises(AllZeroWeights) as exc:
            parse_config(json.dumps(doc))
        assert "criteria[*].weight" in str(exc.value)

    def test_unknown_field(self):
        doc = json.loads(STUDENTS_CONFIG)
        doc["normalisation"] = "vector"
        with pytest.raises(SchemaError):
            parse_config(json.dumps(doc))

    def test_missing_criterion_field(self):
        doc = json.loads(STUDENTS_CONFIG)
        del doc["criteria"][0]["min"]
        with pytest.raises(SchemaError, match=r"criteria\[0\]"):
            parse_config(json.dumps(doc))

    def test_invalid_json(self):
        with pytest.raises(SchemaError):
            parse_config("{not json")


class TestReadMatrix:
    def test_students(self, students_config):
        m = read_matrix((FIXTURES / "students.csv").read_text(),
                        students_config)
        assert m.m == 15 and m.n == 3

    def test_countries(self, countries_configs):
        m = read_matrix((FIXTURES / "countries.csv").read_text(),
                        countries_configs["w1"])
        assert m.m == 12 and m.n == 4

    def test_bad_number_coordinates(self, students_config):
        text = "id,Math,Bio,Art\nS1,50,3,4\nS2,abc,3,4\n"
        with pytest.raises(BadNumber) as exc:
            read_matrix(text, students_config)
        assert exc.value.row == 2
        assert exc.value.column == "Math"

    def test_header_mismatch(self, students_config):
        text = "id,Math,Biology,Art\nS1,50,3,4\n"
        with pytest.raises(HeaderMismatch):
            read_matrix(text, students_config)

    def test_out_of_domain(self, students_config):
        text = "id,Math,Bio,Art\nS1,150,3,4\n"
        with pytest.raises(OutOfDomain):
            read_matrix(text, students_config)


class TestRankCommand:
    def test_countries_w1_csv(self, run_cli):
        code, out, err = run_cli(
            "rank", "--data", FIXTURES / "countries.csv",
            "--config", FIXTURES / "countries_w1.json")
        assert code == 0 and err == ""
        rows = list(csv.DictReader(io.StringIO(out)))
        assert rows[0]["id"] == "CHL"
        assert float(rows[0]["score"]) == pytest.approx(0.7455, abs=5e-4)
        assert rows[0]["rank"] == "1"

    def test_countries_w2_peru_second(self, run_cli):
        code, out, _ = run_cli(
            "rank", "--data", FIXTURES / "countries.csv",
            "--config", FIXTURES / "countries_w2.json", "--format", "json")
        assert code == 0
        entries = json.loads(out)["entries"]
        assert entries[1]["id"] == "PER" and entries[1]["rank"] == 2

    def test_single_row(self, run_cli, tmp_path):
        data = tmp_path / "one.csv"
        data.write_text("id,Math,Bio,Art\nonly,50,3,4\n")
        code, out, _ = run_cli("rank", "--data", data,
                               "--config", FIXTURES / "students_config.json")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 1 and rows[0]["rank"] == "1"

    def test_deterministic_bytes(self, run_cli):
        args = ("rank", "--data", FIXTURES / "countries.csv",
                "--config", FIXTURES / "countries_w3.json")
        assert run_cli(*args) == run_cli(*args)


class TestTransformCommand:
    def test_student_plane_coordinates(self, run_cli):
        code, out, _ = run_cli(
            "transform", "--data", FIXTURES / "students.csv",
            "--config", FIXTURES / "students_config.json")
        assert code == 0
        rows = {r["id"]: r for r in csv.DictReader(io.StringIO(out))}
        assert float(rows["S8"]["wm"]) == pytest.approx(0.35, abs=0.005)
        assert float(rows["S8"]["wsd"]) == pytest.approx(0.20, abs=0.005)

    def test_equal_weights_reduce_to_msd(self, run_cli):
        code, out, _ = run_cli(
            "transform", "--data", FIXTURES / "students.csv",
            "--config", FIXTURES / "students_config_equal.json")
        assert code == 0
        for row in csv.DictReader(io.StringIO(out)):
            assert float(row["wm"]) == pytest.approx(float(row["m"]),
                                                     abs=1e-6)
            assert float(row["wsd"]) == pytest.approx(float(row["sd"]),
                                                      abs=1e-6)

    def test_empty_dataset_header_only(self, run_cli, tmp_path):
        data = tmp_path / "empty.csv"
        data.write_text("id,Math,Bio,Art\n")
        code, out, _ = run_cli("transform", "--data", data,
                               "--config", FIXTURES / "students_config.json")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 1 and lines[0].startswith("id,u_Math")

    def test_round_trip_reproduces_rank_scores(self, run_cli):
        # 6-decimal output quantizes the plane coordinates, so the
        # reconstruction is exact only to ~1e-6
        code, tr, _ = run_cli(
            "transform", "--data", FIXTURES / "students.csv",
            "--config", FIXTURES / "students_config.json")
        code2, rk, _ = run_cli(
            "rank", "--data", FIXTURES / "students.csv",
            "--config", FIXTURES / "students_config.json")
        assert code == 0 and code2 == 0
        scores = {r["id"]: float(r["score"])
                  for r in csv.DictReader(io.StringIO(rk))}
        for row in csv.DictReader(io.StringIO(tr)):
            rebuilt = agg_from_wmsd(
                "R", WmsdPoint(float(row["wm"]), float(row["wsd"])), 0.7)
            assert rebuilt == pytest.approx(scores[row["id"]], abs=5e-6)


class TestBoundaryCommand:
    def test_square_peak_row(self, run_cli, tmp_path):
        config = tmp_path / "two.json"
        config.write_text(json.dumps({"criteria": [
            {"name": "a", "kind": "gain", "min": 0, "max": 1, "weight": 1.0},
            {"name": "b", "kind": "gain", "min": 0, "max": 1, "weight": 1.0},
        ]}))
        code, out, _ = run_cli("boundary", "--config", config,
                               "--resolution", "513")
        assert code == 0
        rows = [r for r in csv.DictReader(io.StringIO(out))
                if r["section"] == "envelope"]
        assert any(abs(float(r["wm"]) - 0.5) < 1e-6
                   and abs(float(r["wsd"]) - 0.5) < 1e-6 for r in rows)
        assert (float(rows[0]["wm"]), float(rows[0]["wsd"])) == (0.0, 0.0)
        assert float(rows[-1]["wsd"]) == 0.0

    def test_json_format(self, run_cli):
        code, out, _ = run_cli("boundary", "--config",
                               FIXTURES / "countries_w2.json",
                               "--resolution", "33", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["wm"]) == 33 and len(doc["wsd"]) == 33
        assert [0.0, 0.0] in doc["vertices"]

    def test_bad_resolution(self, run_cli):
        code, _, err = run_cli("boundary", "--config",
                               FIXTURES / "countries_w2.json",
                               "--resolution", "1")
        assert code == 1
        assert json.loads(err)["error"] == "SchemaError"

    def test_permuted_weights_identical_output(self, run_cli, tmp_path):
        def config_for(weights):
            path = tmp_path / f"w_{'_'.join(map(str, weights))}.json"
            path.write_text(json.dumps({"criteria": [
                {"name": f"c{i}", "kind": "gain", "min": 0, "max": 1,
                 "weight": w} for i, w in enumerate(weights)]}))
            return path

        out1 = run_cli("boundary", "--config", config_for([0.5, 0.6, 1.0]))
        out2 = run_cli("boundary", "--config", config_for([1.0, 0.5, 0.6]))
        assert out1[1] == out2[1]


class TestPlotCommand:
    def test_two_by_two_panel(self, run_cli, tmp_path):
        out_path = tmp_path / "panel.svg"
        code, _, err = run_cli(
            "plot", "--data", FIXTURES / "countries.csv",
            "--config", FIXTURES / "countries_w1.json",
            "--config", FIXTURES / "countries_w2.json",
            "--config", FIXTURES / "countries_w3.json",
            "--config", FIXTURES / "countries_w4.json",
            "--grid", "24", "--columns", "2", "--out", out_path)
        assert code == 0, err
        svg = out_path.read_text()
        assert svg.count("<g transform") == 4
        assert svg.count('class="marker"') == 48

    def test_overlay_id_mismatch(self, run_cli):
        code, _, err = run_cli(
            "plot", "--data", FIXTURES / "countries.csv",
            "--config", FIXTURES / "countries_w3.json",
            "--overlay", FIXTURES / "countries_2023_synthetic.csv",
            "--grid", "16")
        assert code == 1
        record = json.loads(err)
        assert record["error"] == "IdSetMismatch"

    def test_overlay_renders(self, run_cli, tmp_path):
        out_path = tmp_path / "overlay.svg"
        code, _, err = run_cli(
            "plot", "--data", FIXTURES / "countries_2019_subset.csv",
            "--config", FIXTURES / "countries_w3.json",
            "--overlay", FIXTURES / "countries_2023_synthetic.csv",
            "--grid", "16", "--out", out_path)
        assert code == 0, err
        svg = out_path.read_text()
        assert svg.count('class="marker"') == 8
        assert svg.count('class="arrow"') == 4

    def test_unweighted_flag_gives_msd_view(self, run_cli):
        code, out, _ = run_cli(
            "plot", "--data", FIXTURES / "students.csv",
            "--config", FIXTURES / "students_config.json",
            "--grid", "16", "--unweighted")
        assert code == 0
        # equal weights: WM axis tops out at 1.00 instead of 0.70
        assert ">1.00</text>" in out

    def test_bad_grid_is_validation_error(self, run_cli):
        code, _, err = run_cli(
            "plot", "--data", FIXTURES / "students.csv",
            "--config", FIXTURES / "students_config.json", "--grid", "4")
        assert code == 1
        assert json.loads(err)["error"] == "SchemaError"

    def test_bad_isoline_level(self, run_cli):
        code, _, err = run_cli(
            "plot", "--data", FIXTURES / "students.csv",
            "--config", FIXTURES / "students_config.json",
            "--grid", "16", "--isolines", "0.5,1.5")
        assert code == 1
        assert json.loads(err)["error"] == "LevelOutOfRange"

    def test_snapshot_fixture_narrative(self, run_cli):
        # the synthetic second snapshot moves VEN and URY up, CHL and
        # SUR down, flipping the VEN/SUR and URY/CHL orders
        def scores(data):
            code, out, _ = run_cli(
                "rank", "--data", data,
                "--config", FIXTURES / "countries_w3.json")
            assert code == 0
            return {r["id"]: float(r["score"])
                    for r in csv.DictReader(io.StringIO(out))}

        before = scores(FIXTURES / "countries_2019_subset.csv")
        after = scores(FIXTURES / "countries_2023_synthetic.csv")
        assert after["VEN"] > before["VEN"] and after["URY"] > before["URY"]
        assert after["CHL"] < before["CHL"] and after["SUR"] < before["SUR"]
        assert before["SUR"] > before["VEN"] and after["VEN"] > after["SUR"]
        assert before["CHL"] > before["URY"] and after["URY"] > after["CHL"]


class TestCompareCommand:
    def test_uruguay_delta(self, run_cli):
        code, out, _ = run_cli(
            "compare", "--data", FIXTURES / "countries.csv",
            "--config", FIXTURES / "countries_w1.json",
            "--config-b", FIXTURES / "countries_w2.json")
        assert code == 0
        doc = json.loads(out)
        assert doc["deltas"]["URY"] == 3
        assert -1.0 <= doc["kendall_tau"] < 1.0
        assert ["URY", "PER"] in doc["reversals"]

    def test_csv_format(self, run_cli):
        code, out, _ = run_cli(
            "compare", "--data", FIXTURES / "countries.csv",
            "--config", FIXTURES / "countries_w1.json",
            "--config-b", FIXTURES / "countries_w2.json",
            "--format", "csv")
        assert code == 0
        assert out.startswith("id,score_a,rank_a,score_b,rank_b,delta")
        assert "# kendall_tau=" in out


class TestErrorStream:
    def test_validation_exit_code_and_record(self, run_cli, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"criteria": []}')
        code, out, err = run_cli("rank", "--data", FIXTURES / "students.csv",
                                 "--config", bad)
        assert code == 1 and out == ""
        record = json.loads(err)
        assert record["error"] == "SchemaError"
        assert err.count("\n") == 1  # single line

    def test_computation_exit_code(self, run_cli, tmp_path):
        config = tmp_path / "many.json"
        config.write_text(json.dumps({"criteria": [
            {"name": f"c{i}", "kind": "gain", "min": 0, "max": 1,
             "weight": 1.0} for i in range(21)]}))
        code, _, err = run_cli("boundary", "--config", config)
        assert code == 2
        assert json.loads(err)["error"] == "TooManyCriteria"

    def test_io_exit_code(self, run_cli):
        code, _, err = run_cli("rank", "--data", "/nonexistent/file.csv",
                               "--config", FIXTURES / "students_config.json")
        assert code == 3
        assert json.loads(err)["error"] == "IOError"

    def test_out_of_domain_with_coordinates(self, run_cli, tmp_path):
        data = tmp_path / "oob.csv"
        data.write_text("id,Math,Bio,Art\nS1,150,3,4\n")
        code, _, err = run_cli("rank", "--data", data,
                               "--config", FIXTURES / "students_config.json")
        assert code == 1
        record = json.loads(err)
        assert record["error"] == "OutOfDomain"
        assert record["row"] == 1 and record["column"] == "Math"

    def test_clamp_flag_rescues(self, run_cli, tmp_path):
        data = tmp_path / "oob.csv"
        data.write_text("id,Math,Bio,Art\nS1,150,3,4\n")
        code, out, _ = run_cli("rank", "--data", data,
                               "--config", FIXTURES / "students_config.json",
                               "--clamp")
        assert code == 0
        assert "S1" in out


class TestGoldenFiles:
    @pytest.mark.parametrize("name", ["w1", "w2", "w3", "w4"])
    def test_country_rank_outputs_frozen(self, run_cli, name):
        golden = FIXTURES / "golden" / f"countries_{name}_rank.csv"
        code, out, _ = run_cli(
            "rank", "--data", FIXTURES / "countries.csv",
            "--config", FIXTURES / f"countries_{name}.json")
        assert code == 0
        assert out == golden.read_text()

    def test_students_transform_frozen(self, run_cli):
        golden = FIXTURES / "golden" / "students_transform.csv"
        code, out, _ = run_cli(
            "transform", "--data", FIXTURES / "students.csv",
            "--config", FIXTURES / "students_config.json")
        assert code == 0
        assert out == golden.read_text()
