import json
import subprocess
import sys

import pytest

from fintempo.cli import EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, run
from fintempo.corpus import save_corpus
from fintempo.synthetic import generate_corpus


@pytest.fixture(scope="module")
def small(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "small.jsonl"
    save_corpus(generate_corpus(30, 20, seed=3), path)
    return path


def test_usage_errors(tmp_path, capsys):
    assert run(["bogus"]) == EXIT_VALIDATION
    assert run([]) == EXIT_VALIDATION
    assert run(["inspect", "--corpus", str(tmp_path / "none.jsonl")]) == EXIT_VALIDATION
    assert "corpus file not found" in capsys.readouterr().err
    bad = tmp_path / "bad.toml"
    bad.write_text("colour = 3\n")
    assert run(["inspect", "--config", str(bad)]) == EXIT_VALIDATION
    assert "unknown config key" in capsys.readouterr().err
    assert run(["predict", "--model", str(tmp_path / "m.json"), "--ticker", "Intel", "--text", "x"]) == EXIT_VALIDATION


def test_malformed_corpus(tmp_path, capsys):
    p = tmp_path / "c.jsonl"
    p.write_text('{"id": "a", "content": "x", "ticker": "T", "temporality": "Present"}\n')
    assert run(["inspect", "--corpus", str(p)]) == EXIT_VALIDATION
    assert "line 1" in capsys.readouterr().err


def test_runtime_failure_exit_code(tmp_path):
    broken = tmp_path / "model.json"
    broken.write_text("{}")
    assert run(["predict", "--model", str(broken), "--ticker", "Intel", "--text", "Intel rose."]) == EXIT_RUNTIME


def test_train_and_predict(small, tmp_path, capsys):
    model = tmp_path / "model.json"
    assert run(["train", "--corpus", str(small), "--model-out", str(model)]) == EXIT_OK
    capsys.readouterr()
    assert run(["predict", "--model", str(model), "--ticker", "Intel",
                "--text", "Intel will open a new plant next year."]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["label"] in ("Past", "Future")
    assert (out["margin"] >= 0) == (out["label"] == "Future")
    assert "GLOBAL_DEP_SUB" in out["temporal"]
    assert run(["predict", "--model", str(model), "--ticker", "Intel", "--text", ""]) == EXIT_OK
    empty = json.loads(capsys.readouterr().out)
    assert empty["temporal"]["GLOBAL_DEP_SUB"] is None


def test_evaluate_and_baseline_share_out_dir(small, tmp_path):
    out = tmp_path / "o"
    assert run(["evaluate", "--corpus", str(small), "--out-dir", str(out), "--folds", "3"]) == EXIT_OK
    assert run(["baseline", "--corpus", str(small), "--out-dir", str(out)]) == EXIT_OK
    names = {p.name for p in out.iterdir()}
    assert {"report.json", "report.txt", "timings.json", "baseline.json", "baseline.txt",
            "baseline_tallies.csv"} <= names


def test_outputs_are_byte_identical(small, tmp_path):
    for d in ("a", "b"):
        for cmd in (["evaluate", "--folds", "3"], ["baseline"], ["features"], ["preprocess"]):
            assert run([cmd[0], "--corpus", str(small), "--out-dir", str(tmp_path / d), *cmd[1:]]) == EXIT_OK
    files = sorted(p.name for p in (tmp_path / "a").iterdir() if p.name != "timings.json")
    assert files
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name


def test_console_script_via_module(small, tmp_path):
    r = subprocess.run([sys.executable, "-m", "fintempo", "inspect", "--corpus", str(small),
                        "--out-dir", str(tmp_path)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert "Past" in r.stdout and "Future" in r.stdout
