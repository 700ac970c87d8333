import csv
import io
import json
import math
from importlib import resources

import jsonschema
import pytest

from cohsim import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def load_schema():
    ref = resources.files("cohsim").joinpath("schemas/output.schema.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def test_overlap_sweep_csv_values(capsys):
    code, out, _ = run_cli(
        capsys, "overlap-sweep", "--mu", "0.5,4", "--delta", "0.2,0.9"
    )
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["mu", "delta", "delta_alpha"]
    table = {(r[0], r[1]): float(r[2]) for r in rows}
    assert table[("0.5", "0.2")] == pytest.approx(math.exp(-0.4), rel=1e-11)
    assert table[("4", "0.9")] == pytest.approx(math.exp(-0.4), rel=1e-11)
    # small mu raises overlaps, large mu lowers them
    assert table[("0.5", "0.2")] > 0.2
    assert table[("4", "0.9")] < 0.9


def test_overlap_sweep_rejects_bad_grid(capsys):
    code, _, err = run_cli(capsys, "overlap-sweep", "--delta", "0.2,1.4")
    assert code == 1
    assert "delta" in err


def test_dim_bound_ratio_column(capsys):
    code, out, _ = run_cli(capsys, "dim-bound", "--d", "16,4096")
    assert code == 0
    header, rows = parse_csv(out)
    assert header[0] == "d"
    ratios = [float(r[4]) for r in rows]
    assert all(r < 6.5 for r in ratios)


def test_json_output_validates_against_shipped_schema(capsys, tmp_path):
    schema = load_schema()
    out_file = tmp_path / "sweep.json"
    code, _, _ = run_cli(
        capsys, "overlap-sweep", "--mu", "1", "--format", "json",
        "--out", str(out_file),
    )
    assert code == 0
    doc = json.loads(out_file.read_text())
    jsonschema.validate(doc, schema)
    assert doc["command"] == "overlap-sweep"


def test_hidden_matching_reference_instance(capsys):
    code, out, _ = run_cli(
        capsys, "hidden-matching",
        "--matching", "1-6,2-5,3-4", "--x", "010101",
        "--alpha-sq", "3", "--trials", "5000", "--seed", "42",
    )
    assert code == 0
    header, rows = parse_csv(out)
    row = dict(zip(header, rows[0]))
    assert row["wrong"] == "0"
    assert float(row["inconclusive_expected"]) == pytest.approx(math.exp(-3), rel=1e-11)
    rate = float(row["inconclusive_rate"])
    assert abs(rate - math.exp(-3)) < 0.02


def test_hidden_matching_output_is_bit_identical_per_seed(capsys, tmp_path):
    args = [
        "hidden-matching", "--n", "8", "--alpha-sq", "2",
        "--trials", "2000", "--seed", "7", "--format", "json",
    ]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_hidden_matching_malformed_matching(capsys):
    code, _, err = run_cli(
        capsys, "hidden-matching", "--matching", "1-2,3", "--seed", "1"
    )
    assert code == 1
    assert "pair" in err


def test_hidden_matching_requires_seed(capsys):
    code, _, _ = run_cli(capsys, "hidden-matching", "--n", "4")
    assert code == 1


def test_thm_check_all_bounds_hold(capsys):
    code, out, _ = run_cli(
        capsys, "thm-check", "--seed", "5",
        "--lecam-instances", "25", "--trials", "4000",
    )
    assert code == 0
    header, rows = parse_csv(out)
    idx = {name: i for i, name in enumerate(header)}
    for row in rows:
        if row[idx["check"]] in ("dim-bound", "poisson-approx"):
            assert row[idx["holds"]] == "true"
        if row[idx["check"]] == "success-condition" and row[idx["holds"]] == "true":
            p_hat = float(row[idx["p_hat"]])
            ci95 = float(row[idx["ci95"]])
            epsilon = float(row[idx["threshold"]])
            assert p_hat >= 1 - epsilon - 3 * ci95
    assert any(r[idx["check"]] == "success-condition" and r[idx["holds"]] == "true" for r in rows)
    assert any(r[idx["check"]] == "success-condition" and r[idx["holds"]] == "false" for r in rows)


def write_config(tmp_path, **overrides):
    config = {
        "n": 64, "alpha_sq": 9.0, "f": 0.01, "s_a": 0.02, "s_v": 0.05,
        "seed": 11, "trials": 3,
    }
    config.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return path


def test_qds_honest_config_accepts(capsys, tmp_path):
    path = write_config(tmp_path)
    code, out, _ = run_cli(capsys, "qds", "--config", str(path))
    assert code == 0
    header, rows = parse_csv(out)
    summary = [r for r in rows if r[1] == "summary" and r[2] == "accepted_by_both"]
    assert len(summary) == 3
    assert all(r[3] == "true" for r in summary)


def test_qds_tamper_config_rejects(capsys, tmp_path):
    path = write_config(
        tmp_path, n=512, alpha_sq=36.0,
        tamper_model="flip_revealed", tamper_params={"fraction": 0.2},
        trials=5,
    )
    code, out, _ = run_cli(capsys, "qds", "--config", str(path))
    assert code == 0
    _, rows = parse_csv(out)
    bob = [r for r in rows if r[1] == "summary" and r[2] == "bob_accepts"]
    assert all(r[3] == "false" for r in bob)


def test_qds_threshold_misorder_is_validation_error(capsys, tmp_path):
    path = write_config(tmp_path, s_a=0.05, s_v=0.05)
    code, _, err = run_cli(capsys, "qds", "--config", str(path))
    assert code == 1
    assert "threshold" in err


def test_qds_config_json_error_reports_line(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"n": 64,\n  "alpha_sq": }\n')
    code, _, err = run_cli(capsys, "qds", "--config", str(path))
    assert code == 1
    assert "line 2" in err


def test_qds_missing_seed_rejected(capsys, tmp_path):
    config = {"n": 16, "alpha_sq": 4.0}
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    code, _, err = run_cli(capsys, "qds", "--config", str(path))
    assert code == 1
    assert "seed" in err


def test_qds_json_output_validates(capsys, tmp_path):
    path = write_config(tmp_path, trials=1)
    out_file = tmp_path / "run.json"
    code, _, _ = run_cli(
        capsys, "qds", "--config", str(path), "--format", "json",
        "--out", str(out_file),
    )
    assert code == 0
    jsonschema.validate(json.loads(out_file.read_text()), load_schema())


def test_unknown_subcommand_is_validation_error(capsys):
    assert cli.main(["frobnicate"]) == 1


def test_internal_failure_maps_to_exit_code_two(capsys, monkeypatch):
    def boom(args):
        raise RuntimeError("invariant violated")

    # main() builds its parser after the patch, so the handler is the stub
    monkeypatch.setattr(cli, "_cmd_overlap_sweep", boom)
    code = cli.main(["overlap-sweep"])
    captured = capsys.readouterr()
    assert code == 2
    assert "invariant violated" in captured.err


def test_reals_use_twelve_significant_digits(capsys):
    code, out, _ = run_cli(capsys, "overlap-sweep", "--mu", "1", "--delta", "0.3")
    assert code == 0
    _, rows = parse_csv(out)
    value = rows[0][2]
    assert value == f"{math.exp(-0.7):.12g}"
