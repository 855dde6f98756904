import json
import os
from pathlib import Path

import pytest

import routegen as rg
from routegen.cli import run


def run_cli(*args):
    return run(list(args))


@pytest.fixture()
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("ROUTEGEN_SEED", raising=False)
    return tmp_path


def train_tiny(workdir, name="model.ckpt", seed="3", epochs="15"):
    assert run_cli("synth", "--count", "8", "--seed", "1", "--out", "c.jsonl") == 0
    code = run_cli("train", "--corpus", "c.jsonl", "--out", name,
                   "--epochs", epochs, "--batch", "4", "--latent", "16",
                   "--seed", seed, "--loss-log", "loss.csv")
    assert code == 0
    return workdir / name


def test_synth_writes_deterministic_corpus(workdir):
    assert run_cli("synth", "--count", "5", "--seed", "9", "--out", "a.jsonl") == 0
    assert run_cli("synth", "--count", "5", "--seed", "9", "--out", "b.jsonl") == 0
    assert run_cli("synth", "--count", "5", "--seed", "10", "--out", "c.jsonl") == 0
    a, b, c = (Path(n).read_bytes() for n in ("a.jsonl", "b.jsonl", "c.jsonl"))
    assert a == b
    assert a != c
    assert len(rg.load_corpus("a.jsonl")) == 5


def test_train_generate_validate_render_pipeline(workdir, capsys):
    ckpt = train_tiny(workdir)
    assert ckpt.exists()
    assert Path(str(ckpt) + ".json").exists()
    assert Path("loss.csv").read_text().startswith("epoch,binary,count,kl,total")

    assert run_cli("generate", "--model", str(ckpt), "--count", "6", "--seed", "2",
                   "--corpus", "c.jsonl", "--out", "gen.jsonl") == 0
    lines = Path("gen.jsonl").read_text().splitlines()
    assert len(lines) == 6
    rec = json.loads(lines[0])
    assert len(rec["latent"]) == 16 and "report" in rec

    assert run_cli("validate", "--problems", "gen.jsonl", "--corpus", "c.jsonl",
                   "--out", "reports.jsonl") == 0
    reports = [json.loads(l) for l in Path("reports.jsonl").read_text().splitlines()]
    assert len(reports) == 6
    # recomputed reports agree with the ones stored at generation time
    for gen_line, rep in zip(lines, reports):
        stored = json.loads(gen_line)["report"]
        fresh = rep["report"]
        for key in ("min_holds_ok", "finish_ok", "start_ok", "reachable_ok",
                    "duplicate_of", "valid"):
            assert stored[key] == fresh[key]

    capsys.readouterr()
    assert run_cli("render", "--problem", "gen.jsonl", "--index", "0") == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].strip() == "A B C D E F G H I J K"

    assert run_cli("render", "--problem", "gen.jsonl", "--index", "1",
                   "--svg", "route.svg") == 0
    assert Path("route.svg").read_text().startswith("<svg")


def test_end_to_end_determinism(workdir):
    """Identical seeds -> byte-identical checkpoint, loss log, and routes."""
    outputs = []
    for tag in ("one", "two"):
        d = workdir / tag
        d.mkdir()
        os.chdir(d)
        run_cli("synth", "--count", "8", "--seed", "1", "--out", "c.jsonl")
        assert run_cli("train", "--corpus", "c.jsonl", "--out", "m.ckpt",
                       "--epochs", "10", "--batch", "4", "--seed", "5",
                       "--loss-log", "loss.csv") == 0
        assert run_cli("generate", "--model", "m.ckpt", "--count", "5",
                       "--seed", "2", "--corpus", "c.jsonl",
                       "--out", "gen.jsonl") == 0
        outputs.append({
            "ckpt": (d / "m.ckpt").read_bytes(),
            "sidecar": (d / "m.ckpt.json").read_bytes(),
            "loss": (d / "loss.csv").read_bytes(),
            "gen": (d / "gen.jsonl").read_bytes(),
        })
        os.chdir(workdir)
    assert outputs[0] == outputs[1]


def test_exit_code_usage_errors(workdir):
    assert run_cli() == 1
    assert run_cli("synth", "--count", "5") == 1  # missing --out
    assert run_cli("nonsense") == 1
    assert run_cli("train", "--bogus-flag", "x") == 1


def test_exit_code_data_errors(workdir):
    assert run_cli("train", "--corpus", "missing.jsonl", "--out", "m.ckpt") == 2
    Path("bad.jsonl").write_text('{"name": "x", "holds": [{"pos": "Z9", "role": "start"}]}\n')
    assert run_cli("validate", "--problems", "bad.jsonl") == 2
    assert run_cli("generate", "--model", "missing.ckpt", "--count", "1",
                   "--out", "g.jsonl") == 2


def test_exit_code_render_index(workdir):
    run_cli("synth", "--count", "2", "--seed", "1", "--out", "c.jsonl")
    assert run_cli("render", "--problem", "c.jsonl", "--index", "5") == 2


def test_exit_code_numeric_failure(workdir):
    import numpy as np
    run_cli("synth", "--count", "4", "--seed", "1", "--out", "c.jsonl")
    with np.errstate(over="ignore", invalid="ignore"):
        code = run_cli("train", "--corpus", "c.jsonl", "--out", "m.ckpt",
                       "--epochs", "40", "--batch", "4", "--lr", "1e12",
                       "--seed", "0")
    assert code == 3


def test_help_lists_reference_defaults(workdir, capsys):
    assert run_cli("train", "--help") == 0
    out = capsys.readouterr().out
    assert "2000" in out
    assert "512" in out
    assert "16" in out
    assert run_cli("generate", "--help") == 0
    out = capsys.readouterr().out
    assert "50" in out and "6" in out


def test_env_seed_fallback(workdir, monkeypatch):
    monkeypatch.setenv("ROUTEGEN_SEED", "77")
    run_cli("synth", "--count", "4", "--out", "env.jsonl")
    monkeypatch.delenv("ROUTEGEN_SEED")
    run_cli("synth", "--count", "4", "--seed", "77", "--out", "flag.jsonl")
    assert Path("env.jsonl").read_bytes() == Path("flag.jsonl").read_bytes()


def test_config_file_defaults_and_flag_override(workdir):
    run_cli("synth", "--count", "6", "--seed", "1", "--out", "c.jsonl")
    Path("train.cfg").write_text("epochs = 7\nbatch = 3  # small batches\nseed = 4\n")
    assert run_cli("train", "--corpus", "c.jsonl", "--out", "m.ckpt",
                   "--config", "train.cfg") == 0
    sidecar = json.loads(Path("m.ckpt.json").read_text())
    assert sidecar["training"]["epochs"] == 7
    assert sidecar["training"]["batch_size"] == 3

    # explicit flags beat the config file
    assert run_cli("train", "--corpus", "c.jsonl", "--out", "m2.ckpt",
                   "--config", "train.cfg", "--epochs", "2") == 0
    sidecar2 = json.loads(Path("m2.ckpt.json").read_text())
    assert sidecar2["training"]["epochs"] == 2
    assert sidecar2["training"]["batch_size"] == 3


def test_config_file_unknown_key(workdir):
    run_cli("synth", "--count", "4", "--seed", "1", "--out", "c.jsonl")
    Path("bad.cfg").write_text("bogus = 1\n")
    assert run_cli("train", "--corpus", "c.jsonl", "--out", "m.ckpt",
                   "--config", "bad.cfg") == 1


def test_train_with_holdout(workdir, capsys):
    run_cli("synth", "--count", "20", "--seed", "1", "--out", "c.jsonl")
    capsys.readouterr()
    assert run_cli("train", "--corpus", "c.jsonl", "--out", "m.ckpt",
                   "--epochs", "5", "--batch", "4", "--seed", "2",
                   "--test-fraction", "0.2") == 0
    out = capsys.readouterr().out
    assert "held-out loss over 4 problems" in out
