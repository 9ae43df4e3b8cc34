import json
import math

import pytest

from permchar import cli


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sample_json_deterministic(capsys):
    code1, out1, _ = run(capsys, ["sample", "--n", "10", "--theta", "1",
                                  "--count", "3", "--seed", "7"])
    code2, out2, _ = run(capsys, ["sample", "--n", "10", "--theta", "1",
                                  "--count", "3", "--seed", "7"])
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    for row in payload["samples"]:
        counts = row["cycle_counts"]
        assert sum((m + 1) * c for m, c in enumerate(counts)) == 10


def test_sample_rejects_negative_theta(capsys):
    code, _, err = run(capsys, ["sample", "--n", "10", "--theta", "-1",
                                "--count", "1"])
    assert code == 2
    assert "error" in err


def test_sample_csv_format(capsys):
    code, out, _ = run(capsys, ["sample", "--n", "6", "--theta", "1",
                                "--count", "2", "--seed", "1", "--format", "csv"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "sample_index,cycle_length,count"


def test_clt_minimal_config(tmp_path, capsys):
    cfg = {"version": 1, "n": 50, "theta": 1.0, "points": [math.sqrt(2) % 1],
           "kind": "logZ", "model_spec": {"type": "uniform"},
           "num_samples": 10, "master_seed": 5}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    dump = tmp_path / "dump.csv"
    code, out, _ = run(capsys, ["clt", "--config", str(path),
                                "--dump-samples", str(dump)])
    assert code == 0
    payload = json.loads(out)
    assert payload["num_samples"] == 10
    assert len(payload["mean"]) == 2
    lines = dump.read_text().strip().splitlines()
    assert lines[0] == "sample_index,point_index,re,im"
    assert len(lines) == 11


def test_clt_regime_violation_exit_2(tmp_path, capsys):
    cfg = {"version": 1, "n": 50, "theta": 1.0, "points": [0.5],
           "kind": "logZ", "model_spec": {"type": "trivial"},
           "num_samples": 5, "master_seed": 5}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    code, _, err = run(capsys, ["clt", "--config", str(path)])
    assert code == 2
    assert "finite-type" in err


def test_clt_rejects_wrong_version(tmp_path, capsys):
    path = tmp_path / "v0.json"
    path.write_text(json.dumps({"version": 0, "n": 10, "theta": 1.0,
                                "points": [0.3]}))
    code, _, _ = run(capsys, ["clt", "--config", str(path)])
    assert code == 2


def test_discrepancy_bound_dominates(capsys):
    code, out, _ = run(capsys, ["discrepancy", "--kronecker", "1.41421356",
                                "--n", "1000", "--etk-H", "50"])
    assert code == 0
    payload = json.loads(out)
    assert payload["etk"] >= payload["exact"]


def test_constants_charpoly(capsys):
    code, out, _ = run(capsys, ["constants", "--function", "charpoly"])
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["m_R"]) < 1e-8
    assert payload["V_R"] == pytest.approx(0.8224670, abs=1e-6)


def test_constants_covariance_two_functions(capsys):
    code, out, _ = run(capsys, ["constants", "--function", "charpoly",
                                "charpoly", "--theta", "2.0"])
    assert code == 0
    payload = json.loads(out)
    assert payload["d"] == 2


def test_feller_check(capsys):
    code, out, _ = run(capsys, ["feller-check", "--n", "8", "--theta", "1"])
    assert code == 0
    payload = json.loads(out)
    assert payload["max_abs_difference"] <= 1e-12
    assert payload["total_probability"] == pytest.approx(1.0, abs=1e-12)


def test_unknown_subcommand_exit_2(capsys):
    assert cli.main(["bogus"]) == 2


def test_missing_config_file_exit_2(capsys):
    code, _, _ = run(capsys, ["clt", "--config", "/nonexistent/cfg.json"])
    assert code == 2
