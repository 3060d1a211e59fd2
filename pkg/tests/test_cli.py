"""Tests for the command-line interface.

Commands run in-process through main(argv) for speed; one test drives the
installed console script end to end through a real subprocess.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from menuperf.cli import CliError, main, resolve_settings, build_parser
from menuperf.recurrent import TrainConfig, load_weights
from menuperf.sessions import parse_session, read_session
from menuperf.taxonomy import bundled_taxonomy, serialize_taxonomy


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    out = err = ""
    if capsys is not None:
        captured = capsys.readouterr()
        out, err = captured.out, captured.err
    return code, out, err


@pytest.fixture()
def corpus_dir(tmp_path):
    out = tmp_path / "corpus"
    code = main(["simulate", "--users", "3", "--out", str(out), "--seed", "5",
                 "--attempts", "1", "--tasks-per-attempt", "4"])
    assert code == 0
    return out


@pytest.fixture()
def model_file(tmp_path, corpus_dir):
    out = tmp_path / "models" / "tiny.w"
    code = main([
        "train", "--data", str(corpus_dir / "train"), "--out", str(out),
        "--epochs", "2", "--hidden", "4", "--quiet",
    ])
    assert code == 0
    return out


class TestSettings:
    def test_defaults(self):
        args = build_parser().parse_args(["tasks", "sample"])
        settings = resolve_settings(args)
        assert settings["seed"] == 0
        assert settings["port"] == 8000
        assert settings["model_dir"] == "models"

    def test_config_file_overrides_defaults(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 9, "port": 9001}))
        args = build_parser().parse_args(["--config", str(cfg), "tasks", "sample"])
        settings = resolve_settings(args)
        assert settings["seed"] == 9 and settings["port"] == 9001

    def test_env_overrides_config(self, tmp_path, monkeypatch):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 9}))
        monkeypatch.setenv("MENUPERF_SEED", "21")
        args = build_parser().parse_args(["--config", str(cfg), "tasks", "sample"])
        assert resolve_settings(args)["seed"] == 21

    def test_flag_overrides_env(self, monkeypatch):
        monkeypatch.setenv("MENUPERF_SEED", "21")
        args = build_parser().parse_args(["tasks", "sample", "--seed", "33"])
        assert resolve_settings(args)["seed"] == 33

    def test_unknown_config_key_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"sede": 1}))
        args = build_parser().parse_args(["--config", str(cfg), "tasks", "sample"])
        with pytest.raises(CliError, match="sede"):
            resolve_settings(args)

    def test_missing_config_file(self):
        args = build_parser().parse_args(["--config", "/nonexistent.json", "tasks", "sample"])
        with pytest.raises(CliError, match="not found"):
            resolve_settings(args)

    def test_malformed_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        args = build_parser().parse_args(["--config", str(cfg), "tasks", "sample"])
        with pytest.raises(CliError, match="JSON"):
            resolve_settings(args)


class TestErrors:
    def test_no_command(self, capsys):
        code, _, err = run_cli(capsys=capsys)
        assert code == 2
        assert err.startswith("menuperf: error: usage:")

    def test_unknown_flag(self, capsys):
        code, _, err = run_cli("tasks", "sample", "--bogus", capsys=capsys)
        assert code == 2
        assert "usage:" in err

    def test_missing_subcommand(self, capsys):
        code, _, err = run_cli("tasks", capsys=capsys)
        assert code == 2

    def test_runtime_error_is_single_line(self, capsys):
        code, _, err = run_cli("predict", "--model", "/no/such.w",
                               "--session", "/no/such.session", capsys=capsys)
        assert code == 1
        assert err.count("\n") == 1
        assert err.startswith("menuperf: error: ")


class TestTasksSample:
    def test_writes_session_format(self, capsys):
        code, out, _ = run_cli("tasks", "sample", "--count", "3", "--depth", "2",
                               capsys=capsys)
        assert code == 0
        session = parse_session(out)
        assert len(session.records) == 3
        assert all(r.task.depth == 2 for r in session.records)

    def test_seed_reproducible(self, capsys):
        _, a, _ = run_cli("tasks", "sample", "--count", "2", "--seed", "4", capsys=capsys)
        _, b, _ = run_cli("tasks", "sample", "--count", "2", "--seed", "4", capsys=capsys)
        assert a == b

    def test_custom_taxonomy_file(self, tmp_path, capsys):
        path = tmp_path / "tax.txt"
        path.write_text(serialize_taxonomy(bundled_taxonomy()), encoding="utf-8")
        code, out, _ = run_cli("tasks", "sample", "--taxonomy", str(path), capsys=capsys)
        assert code == 0 and "task 0" in out

    def test_depth_validation(self, capsys):
        code, _, err = run_cli("tasks", "sample", "--depth", "7", capsys=capsys)
        assert code == 1
        assert "depth" in err

    def test_out_file(self, tmp_path, capsys):
        dest = tmp_path / "tasks.session"
        code, out, _ = run_cli("tasks", "sample", "--out", str(dest), capsys=capsys)
        assert code == 0 and out == ""
        assert parse_session(dest.read_text()).records


class TestSimulateAndCe:
    def test_simulate_layout(self, corpus_dir):
        train = sorted(p.name for p in (corpus_dir / "train").glob("*.session"))
        test = sorted(p.name for p in (corpus_dir / "test").glob("*.session"))
        assert train == ["train-00.session", "train-01.session"]
        assert test == ["test-00.session"]

    def test_simulate_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["simulate", "--users", "2", "--out", str(out), "--seed", "3",
                         "--attempts", "1", "--tasks-per-attempt", "3"]) == 0
        fa = (a / "train" / "train-00.session").read_bytes()
        fb = (b / "train" / "train-00.session").read_bytes()
        assert fa == fb

    def test_simulate_rejects_single_user(self, capsys):
        code, _, err = run_cli("simulate", "--users", "1", "--out", "/tmp/x", capsys=capsys)
        assert code == 1 and "users" in err

    def test_ce_compute_matches_file(self, corpus_dir, capsys):
        path = corpus_dir / "train" / "train-00.session"
        code, out, _ = run_cli("ce", "compute", "--session", str(path), capsys=capsys)
        assert code == 0
        session = read_session(path)
        lines = out.strip().splitlines()
        assert len(lines) == len(session.records)
        for line, rec in zip(lines, session.records):
            assert line == f"task {rec.index} ce {rec.measured_ce!r}"


class TestFeaturesEncode:
    def test_row_shape(self, corpus_dir, capsys):
        path = corpus_dir / "train" / "train-00.session"
        code, out, _ = run_cli("features", "encode", "--session", str(path), capsys=capsys)
        assert code == 0
        rows = [line.split("\t") for line in out.strip().splitlines()]
        session = read_session(path)
        assert len(rows) == len(session.records)
        assert all(len(r) == 523 for r in rows)
        values = np.array([[float(v) for v in r] for r in rows])
        assert np.all(np.isfinite(values))


class TestTrainPredictEvaluate:
    def test_train_writes_weights(self, model_file):
        weights = load_weights(model_file)
        assert weights.hidden_dim == 4
        assert not model_file.with_suffix(".w.lock").exists()

    def test_train_seed_reproducible(self, tmp_path, corpus_dir):
        outs = []
        for name in ("a.w", "b.w"):
            out = tmp_path / name
            assert main(["train", "--data", str(corpus_dir / "train"), "--out", str(out),
                         "--epochs", "2", "--hidden", "4", "--seed", "11", "--quiet"]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_predict_lines(self, corpus_dir, model_file, capsys):
        path = corpus_dir / "test" / "test-00.session"
        code, out, _ = run_cli("predict", "--model", str(model_file),
                               "--session", str(path), capsys=capsys)
        assert code == 0
        lines = out.strip().splitlines()
        session = read_session(path)
        assert len(lines) == len(session.records)
        for i, line in enumerate(lines):
            parts = line.split()
            assert parts[0] == "task" and int(parts[1]) == i
            assert parts[2] == "ce" and parts[4] == "pt"
            float(parts[3]), float(parts[5])  # parseable

    def test_predict_deterministic(self, corpus_dir, model_file, capsys):
        path = corpus_dir / "test" / "test-00.session"
        _, a, _ = run_cli("predict", "--model", str(model_file), "--session", str(path),
                          capsys=capsys)
        _, b, _ = run_cli("predict", "--model", str(model_file), "--session", str(path),
                          capsys=capsys)
        assert a == b

    def test_evaluate_table_and_tsv(self, tmp_path, corpus_dir, model_file, capsys):
        tsv = tmp_path / "report.tsv"
        code, out, _ = run_cli("evaluate", "--data", str(corpus_dir / "test"),
                               "--model", str(model_file), "--tsv", str(tsv),
                               capsys=capsys)
        assert code == 0
        assert out.splitlines()[0].startswith("User")
        assert "Average" in out
        body = tsv.read_text().splitlines()
        assert body[0].split("\t") == ["user", "r2_ce", "mse_ce", "r2_pt", "mse_pt"]


class TestAblate:
    def test_four_rows(self, corpus_dir, capsys):
        code, out, _ = run_cli(
            "ablate", "--train-data", str(corpus_dir / "train"),
            "--test-data", str(corpus_dir / "test"),
            "--epochs", "1", "--hidden", "3", capsys=capsys,
        )
        assert code == 0
        for label in ("No Remove", "Without WAIS", "Without Semantics", "Without Organization"):
            assert label in out


class TestConsoleScript:
    def test_installed_entry_point(self, tmp_path):
        out = tmp_path / "s.session"
        proc = subprocess.run(
            [sys.executable, "-m", "menuperf.cli", "tasks", "sample",
             "--count", "1", "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert parse_session(out.read_text()).records
