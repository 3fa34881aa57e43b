import json
import math

import pandas as pd
import pytest
from pydantic import ValidationError

from config import Config
from core.pipeline.run_config import RunConfig, parse_command_line
from entrypoints.main import main


def _load(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def _stable(report):
    report = dict(report)
    report.pop("metadata", None)
    config = dict(report.pop("config"))
    config.pop("out", None)
    config.pop("workers", None)
    report["config"] = config
    return report


def test_run_config_round_trip():
    config = RunConfig(command="stats", group="free:2,3", n=20, classes=["x1*x2", "x2"],
                       samples=50, seed=3)
    parsed, quiet = parse_command_line(config.to_args())
    assert parsed == config
    assert not quiet


def test_classes_accept_commas_and_spaces():
    config, _ = parse_command_line(["stats", "--group", "free:2,3", "--n", "5",
                                    "--classes", "x1*x2,x2", "x1*x2*x1*x2^2"])
    assert config.classes == ["x1*x2", "x2", "x1*x2*x1*x2^2"]


@pytest.mark.parametrize("kwargs", [
    {"command": "stats", "group": "free:2,3", "n": 10},
    {"command": "count", "group": "free:2,3"},
    {"command": "count", "group": "free:2,3", "max_n": 5, "model": "factored"},
    {"command": "count", "group": "torus:2", "max_n": 5},
    {"command": "betti", "group": "free:2,3", "n": 0},
    {"command": "stats", "group": "free:2,3", "n": 5, "classes": ["x3"]},
    {"command": "count", "group": "free:2,3", "max_n": 5, "samples": 0},
    {"command": "count", "group": "free:2,3", "max_n": 5, "colour": "red"},
])
def test_invalid_run_configs(kwargs):
    with pytest.raises(ValidationError):
        RunConfig(**kwargs)


def test_count_writes_decimal_string_table(tmp_path):
    out = tmp_path / "count.csv"
    code = main(["count", "--group", "free:2,3", "--max-n", "7", "--format", "csv",
                 "--out", str(out), "--quiet"])
    assert code == 0
    frame = pd.read_csv(out, dtype=str)
    assert list(frame["a"]) == ["1", "1", "4", "8", "5", "22", "42"]


def test_count_with_torus_columns(tmp_path):
    out = tmp_path / "count.json"
    assert main(["count", "--group", "torus:3,3,3", "--max-n", "12", "--with-asym",
                 "--out", str(out), "--quiet"]) == 0
    rows = _load(out)["table"]
    assert len(rows) == 12
    assert {"factor_ratio", "transitive_factor_ratio", "prediction_over_exact", "convolution_decay"} <= set(rows[0])
    assert rows[0]["convolution_decay"] is None
    assert rows[11]["convolution_decay"] > 0


def test_cap_exceeded_exit_code(tmp_path):
    code = main(["count", "--group", "torus:2,3", "--max-n", "10", "--cap-dp", "5",
                 "--out", str(tmp_path / "x.json"), "--quiet"])
    assert code == 2


def test_usage_errors_exit_with_one():
    assert main(["count", "--group", "torus:2", "--max-n", "5", "--quiet"]) == 1
    assert main(["frobnicate"]) == 1


def test_config_file_fills_missing_flags(tmp_path):
    config_path = tmp_path / "run.json"
    config_path.write_text(json.dumps({"group": "free:2,3", "max_n": 5}), encoding="utf-8")
    out = tmp_path / "count.json"
    assert main(["count", "--config", str(config_path), "--out", str(out), "--quiet"]) == 0
    assert len(_load(out)["table"]) == 5


def test_stats_is_reproducible(tmp_path):
    args = ["stats", "--group", "free:2,3", "--n", "20", "--samples", "1200", "--seed", "5",
            "--classes", "x1*x2", "x2", "--homs", "--quiet"]
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(first)]) == 0
    assert main(args + ["--workers", "2", "--out", str(second)]) == 0
    a, b = _load(first), _load(second)
    assert _stable(a) == _stable(b)

    assert {"group", "n", "samples", "seed", "model", "classes"} <= set(a)
    assert (a["group"], a["n"], a["samples"], a["seed"]) == ("free:2,3", 20, 1200, 5)
    by_word = {entry["word"]: entry for entry in a["classes"]}
    for entry in by_word.values():
        assert {"word", "classification", "limit_law", "histogram", "factorial_moments",
                "tv", "ks", "normalized_mean", "normalized_var"} <= set(entry)
        assert sum(entry["histogram"].values()) == 1200
    assert by_word["x1*x2"]["limit_law"]["kind"] == "compound_poisson"
    assert by_word["x1*x2"]["classification"]["kind"] == "infinite"
    assert "exact_mean" in by_word["x1*x2"]
    assert by_word["x2"]["limit_law"]["kind"] == "gaussian"
    assert by_word["x2"]["limit_law"]["span"] == 3
    assert len(a["independence"]) == 1


def test_stats_csv_has_one_row_per_value(tmp_path):
    out = tmp_path / "stats.csv"
    assert main(["stats", "--group", "torus:2,3", "--n", "8", "--samples", "300", "--seed", "6",
                 "--classes", "x1^2", "x1*x2", "--format", "csv", "--out", str(out), "--quiet"]) == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["class", "kind", "law", "z", "count", "frequency", "limit_mass"]
    for _, rows in frame.groupby("class"):
        assert rows["count"].sum() == 300
        assert not rows["z"].duplicated().any()
    kernel = frame[frame["class"] == "x1^2"]
    assert kernel.loc[kernel["z"] == 8, "limit_mass"].tolist() == [1.0]


def test_stats_rejects_common_roots(tmp_path):
    code = main(["stats", "--group", "free:2,3", "--n", "10", "--classes", "x1*x2", "(x1*x2)^2",
                 "--out", str(tmp_path / "s.json"), "--quiet"])
    assert code == 1


def test_betti_of_degree_one_torus_cover(tmp_path):
    out = tmp_path / "betti.json"
    assert main(["betti", "--group", "torus:2,3", "--n", "1", "--samples", "3",
                 "--out", str(out), "--quiet"]) == 0
    report = _load(out)
    assert [row["b1"] for row in report["rows"]] == [1, 1, 1]
    assert report["summary"]["limit"] == "1/6"


def test_betti_csv_with_summary(tmp_path):
    out = tmp_path / "betti.csv"
    assert main(["betti", "--group", "free:2,3", "--n", "12", "--samples", "20", "--format", "csv",
                 "--out", str(out), "--quiet"]) == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["sample_index", "n", "b1", "b1_over_n", "kurosh"]
    assert frame["kurosh"].all()
    summary = _load(tmp_path / "betti.summary.json")
    assert summary["summary"]["kurosh_failures"] == 0


def test_sample_writes_json_lines(tmp_path):
    out = tmp_path / "samples.jsonl"
    assert main(["sample", "--group", "free:2,3", "--n", "5", "--samples", "4",
                 "--out", str(out), "--quiet"]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 4
    for line in lines:
        record = json.loads(line)
        assert len(record["images"]) == 2
        assert record["transitive"] is True


def test_asym_report(tmp_path):
    out = tmp_path / "asym.json"
    assert main(["asym", "--group", "free:2,3", "--max-n", "10", "--out", str(out), "--quiet"]) == 0
    report = _load(out)
    assert len(report["rows"]) == 10
    assert set(report["cyclic"]) == {"2", "3"}
    evaluator, literal = report["constants"]["evaluator"], report["constants"]["literal"]
    assert (evaluator["power"], literal["power"]) == ("1/2", "-1/2")
    assert literal["constant"] == pytest.approx(evaluator["constant"] * 2 * math.pi)
    for row in report["rows"]:
        assert row["literal_over_exact"] == pytest.approx(row["prediction_over_exact"] * 2 * math.pi / row["n"], rel=1e-9)


def test_verify_single_group(tmp_path, monkeypatch):
    monkeypatch.setattr(Config, "VERIFY_TV_DRAWS", 5000)
    monkeypatch.setattr(Config, "VERIFY_TV_THRESHOLD", 0.1)
    out = tmp_path / "verify.json"
    code = main(["verify", "--group", "free:2,3", "--max-n", "4", "--classes", "x1*x2", "x2",
                 "--out", str(out), "--quiet"])
    assert code == 0
    report = _load(out)
    assert report["passed"] is True
    assert len(report["sampler_tv"]) == 2
    assert report["tau_sweep"]["pass"]


@pytest.mark.slow
def test_verify_default_matrix(tmp_path):
    out = tmp_path / "verify.json"
    assert main(["verify", "--out", str(out), "--quiet"]) == 0
