import json

import numpy as np
import pytest

from prodtv.cli import EXIT_BUDGET, EXIT_DOMAIN, EXIT_PARSE, main


def write_instance(tmp_path, doc, name="instance.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBoundsCommand:
    def test_exact_inside_bracket(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.5, 0.5], "q": [0.0, 0.0]})
        code, out, _ = run(capsys, ["bounds", path, "--exact"])
        assert code == 0
        doc = json.loads(out)
        assert doc["schema_version"] == 1
        assert doc["exact_tv"] == pytest.approx(0.75, abs=1e-12)
        assert doc["best_lower"] - 1e-9 <= doc["exact_tv"] <= doc["best_upper"] + 1e-9

    def test_identical_pair_upper_zero(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.4, 0.4], "q": [0.4, 0.4]})
        code, out, _ = run(capsys, ["bounds", path])
        assert code == 0
        doc = json.loads(out)
        assert doc["best_upper"] == 0.0
        assert doc["ratio"] is None

    def test_general_instance(self, tmp_path, capsys):
        path = write_instance(
            tmp_path,
            {"P": [[1 / 3, 1 / 3, 1 / 3]], "Q": [[0.5, 0.25, 0.25]], "label": "tri"},
        )
        code, out, _ = run(capsys, ["bounds", path, "--exact"])
        assert code == 0
        doc = json.loads(out)
        assert doc["label"] == "tri"
        assert doc["exact_tv"] == pytest.approx(1 / 6, abs=1e-12)

    def test_malformed_row_names_coordinate(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"P": [[0.5, 0.5], [0.5, 0.4]],
                                         "Q": [[0.5, 0.5], [0.5, 0.5]]})
        code, _, err = run(capsys, ["bounds", path])
        assert code == EXIT_PARSE
        assert "P[1]" in err

    def test_budget_overrun_degrades_gracefully(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.5] * 8, "q": [0.1] * 8})
        code, out, _ = run(capsys, ["bounds", path, "--exact", "--budget", "4"])
        assert code == 0
        doc = json.loads(out)
        assert "exact_tv" not in doc
        assert any("exact TV omitted" in w for w in doc["warnings"])
        assert doc["best_lower"] <= doc["best_upper"]

    def test_round_trip_values(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.9, 0.3], "q": [0.2, 0.8]})
        code, out, _ = run(capsys, ["bounds", path, "--exact"])
        assert code == 0
        doc = json.loads(out)
        assert json.loads(json.dumps(doc)) == doc

    def test_text_format(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.5], "q": [0.2]})
        code, out, _ = run(capsys, ["bounds", path, "--format", "text"])
        assert code == 0
        assert "best_lower" in out and "best_upper" in out

    def test_csv_format(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.5], "q": [0.2]})
        code, out, _ = run(capsys, ["bounds", path, "--format", "csv"])
        assert code == 0
        header, row = out.strip().split("\n")
        assert header.split(",")[0] == "schema_version"
        assert len(header.split(",")) == len(row.split(","))


class TestInstanceParsing:
    def test_both_shapes_rejected(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.5], "q": [0.5],
                                         "P": [[0.5, 0.5]], "Q": [[0.5, 0.5]]})
        code, _, err = run(capsys, ["bounds", path])
        assert code == EXIT_PARSE

    def test_missing_q(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.5]})
        code, _, err = run(capsys, ["bounds", path])
        assert code == EXIT_PARSE
        assert "both p and q" in err

    def test_invalid_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run(capsys, ["bounds", str(path)])
        assert code == EXIT_PARSE
        assert "invalid JSON" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, ["bounds", "/nonexistent/instance.json"])
        assert code == EXIT_PARSE

    def test_out_of_range_parameter(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [1.5], "q": [0.5]})
        code, _, err = run(capsys, ["bounds", path])
        assert code == EXIT_PARSE
        assert "outside [0, 1]" in err


class TestExactCommand:
    def test_bernoulli(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.5, 0.5], "q": [0.0, 0.0]})
        code, out, _ = run(capsys, ["exact", path])
        assert code == 0
        assert json.loads(out)["tv"] == pytest.approx(0.75, abs=1e-12)

    def test_budget_exit_code(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.5] * 8, "q": [0.1] * 8})
        code, _, err = run(capsys, ["exact", path, "--budget", "4"])
        assert code == EXIT_BUDGET
        assert "budget" in err

    def test_workers_flag_identical_output(self, tmp_path, capsys):
        rng = np.random.default_rng(601)
        doc = {"p": rng.random(17).tolist(), "q": rng.random(17).tolist()}
        path = write_instance(tmp_path, doc)
        outputs = set()
        for workers in ("1", "4", "8"):
            code, out, _ = run(capsys, ["exact", path, "--workers", workers])
            assert code == 0
            outputs.add(out)
        assert len(outputs) == 1


class TestMcCommand:
    def test_identical_pair(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.3, 0.3], "q": [0.3, 0.3]})
        code, out, _ = run(capsys, ["mc", path, "--samples", "1000", "--seed", "4"])
        assert code == 0
        assert json.loads(out)["value"] == 0.0

    def test_deterministic_given_seed(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.5, 0.5], "q": [0.0, 0.0]})
        argv = ["mc", path, "--samples", "20000", "--seed", "11"]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second

    def test_text_shows_interval(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.5], "q": [0.1]})
        code, out, _ = run(capsys, ["mc", path, "--samples", "500", "--seed", "1",
                                    "--format", "text"])
        assert code == 0
        assert "+/-" in out

    def test_invalid_confidence_is_domain_error(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.5], "q": [0.1]})
        code, _, err = run(capsys, ["mc", path, "--confidence", "1.5"])
        assert code == EXIT_DOMAIN

    def test_general_instance_rejected(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"P": [[0.5, 0.5]], "Q": [[0.4, 0.6]]})
        code, _, err = run(capsys, ["mc", path])
        assert code == EXIT_PARSE


class TestSymmetrizeCommand:
    def test_example_pair(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"p": [0.8], "q": [0.6]})
        code, out, _ = run(capsys, ["symmetrize", path])
        assert code == 0
        doc = json.loads(out)
        assert doc["p_hat"][0] == pytest.approx(0.571429, abs=1e-6)
        assert doc["q_hat"][0] == pytest.approx(0.428571, abs=1e-6)
        rows = doc["channels"][0]
        assert rows[0][0] + rows[0][1] == pytest.approx(1.0, abs=1e-12)
        assert rows[1][0] + rows[1][1] == pytest.approx(1.0, abs=1e-12)


class TestReduceCommand:
    def test_three_point(self, tmp_path, capsys):
        path = write_instance(tmp_path,
                              {"P": [[1 / 3, 1 / 3, 1 / 3]], "Q": [[0.5, 0.25, 0.25]]})
        code, out, _ = run(capsys, ["reduce", path])
        assert code == 0
        doc = json.loads(out)
        assert doc["witness_sets"] == [[1, 2]]
        assert doc["p"][0] == pytest.approx(2 / 3, abs=1e-12)
        assert doc["q"][0] == pytest.approx(0.5, abs=1e-12)


class TestGapCommand:
    def test_csv_row(self, capsys):
        code, out, _ = run(capsys, ["gap", "--n", "4"])
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "n,tv_pq,tv_pq_prime_upper,ratio_lower,sqrt_n"
        assert lines[1] == "4,0.68359375,0.5,1.3671875,2.0"

    def test_range(self, capsys):
        code, out, _ = run(capsys, ["gap", "--n-range", "1:3"])
        assert code == 0
        assert len(out.strip().split("\n")) == 4

    def test_requires_exactly_one_selector(self, capsys):
        code, _, _ = run(capsys, ["gap"])
        assert code == EXIT_PARSE
        code, _, _ = run(capsys, ["gap", "--n", "2", "--n-range", "1:3"])
        assert code == EXIT_PARSE

    def test_invalid_n_is_domain_error(self, capsys):
        code, _, _ = run(capsys, ["gap", "--n", "0"])
        assert code == EXIT_DOMAIN

    def test_bad_range_is_parse_error(self, capsys):
        code, _, _ = run(capsys, ["gap", "--n-range", "4:x"])
        assert code == EXIT_PARSE


class TestSweepCommand:
    def test_single_row(self, capsys):
        code, out, _ = run(capsys, ["sweep", "--n", "1"])
        assert code == 0
        lines = out.strip().split("\n")
        row = lines[1].split(",")
        assert row[0] == "1"
        assert float(row[4]) == 1.0  # exact gap ratio at n=1

    def test_ratio_strictly_increasing(self, capsys):
        code, out, _ = run(capsys, ["sweep", "--n-range", "4,16,64"])
        assert code == 0
        lines = out.strip().split("\n")
        header = lines[0].split(",")
        idx = header.index("gap_ratio_exact")
        ratios = [float(line.split(",")[idx]) for line in lines[1:]]
        assert ratios[0] < ratios[1] < ratios[2]

    def test_byte_identical_rerun(self, capsys):
        argv = ["sweep", "--n-range", "1:8"]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second


class TestLowtherCommand:
    def test_two_equal_weights(self, capsys):
        code, out, _ = run(capsys, ["lowther", "--weights", "1,1", "--threshold",
                                    "1.4142135623730951"])
        assert code == 0
        doc = json.loads(out)
        assert doc["ratio"] == pytest.approx(2.0, abs=1e-12)

    def test_nonpositive_weight_is_domain_error(self, capsys):
        code, _, _ = run(capsys, ["lowther", "--weights", "1,0", "--threshold", "1"])
        assert code == EXIT_DOMAIN

    def test_bad_weight_list_is_parse_error(self, capsys):
        code, _, _ = run(capsys, ["lowther", "--weights", "1,a", "--threshold", "1"])
        assert code == EXIT_PARSE
