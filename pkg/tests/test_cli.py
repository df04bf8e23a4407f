import json
import subprocess
import sys

import pytest

from aztext.cli import RunConfig, main
from aztext.corpus import Corpus, load_csv, write_csv

from helpers import cleaning_fixture, doc


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


@pytest.fixture
def fixture_csv(tmp_path):
    corpus, _ = cleaning_fixture()
    p = tmp_path / "raw.csv"
    write_csv(corpus, p)
    return p


@pytest.fixture
def separable_csv(tmp_path, separable):
    p = tmp_path / "sep.csv"
    write_csv(separable, p)
    return p


def test_clean_fixture(run, fixture_csv, tmp_path):
    out_csv, rep_json = tmp_path / "clean.csv", tmp_path / "rep.json"
    code, out, err = run("clean", "--input", fixture_csv, "--output", out_csv, "--report", rep_json)
    assert code == 0, err
    report = json.loads(out)
    assert report == json.loads(rep_json.read_text())
    assert report["output_count"] == 40 and len(load_csv(out_csv)) == 40
    assert report["dropped_duplicates"] == 7
    assert report["input_count"] == 50


def test_clean_twice_is_noop(run, fixture_csv, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("clean", "--input", fixture_csv, "--output", first)[0] == 0
    code, out, _ = run("clean", "--input", first, "--output", second)
    report = json.loads(out)
    assert code == 0
    assert report["input_count"] == report["output_count"] == 40
    assert load_csv(first) == load_csv(second)


def test_clean_explicit_defaults(run, fixture_csv, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    ra = run("clean", "--input", fixture_csv, "--output", a)[1]
    rb = run(
        "clean", "--input", fixture_csv, "--output", b,
        "--min-chars", 30, "--max-chars", 10000, "--min-sentences", 3, "--max-sentences", 100,
    )[1]
    assert ra == rb and a.read_bytes() == b.read_bytes()


def test_clean_missing_input(run, tmp_path):
    out_csv = tmp_path / "out.csv"
    code, out, err = run("clean", "--input", tmp_path / "nope.csv", "--output", out_csv)
    assert code == 2 and not out_csv.exists()
    assert out == "" and len(err.strip().splitlines()) == 1


def test_clean_with_mapping(run, fixture_csv, tmp_path):
    mapping = tmp_path / "map.tsv"
    mapping.write_text("idman\tsport\nsiyasət\tsport\n", encoding="utf-8")
    out_csv = tmp_path / "out.csv"
    assert run("clean", "--input", fixture_csv, "--output", out_csv, "--mapping", mapping)[0] == 0
    assert "sport" in load_csv(out_csv).labels and "idman" not in load_csv(out_csv).labels
    code, _, err = run("clean", "--input", fixture_csv, "--output", out_csv, "--mapping", mapping, "--merge-policy", "strict")
    assert code == 2 and "UnknownCategory" in err


def test_stats(run, tmp_path):
    p = tmp_path / "s.csv"
    write_csv(Corpus([doc(i, " ".join(["Cümlə."] * n)) for i, n in enumerate([2, 4, 6])]), p)
    code, out, _ = run("stats", "--input", p, "--max-bucket", 5)
    assert code == 0
    stats = json.loads(out)
    assert stats["sentences"]["mean"] == 4.0 and stats["sentences"]["std"] == 2.0
    assert sum(stats["histogram"].values()) == 3
    assert stats["histogram"][">=5"] == 1


def test_stats_empty_corpus(run, tmp_path):
    p = tmp_path / "empty.csv"
    write_csv(Corpus(), p)
    code, out, err = run("stats", "--input", p)
    assert code == 2 and "EmptyCorpus" in err and out == ""


def test_train_predict_evaluate(run, separable_csv, separable, tmp_path):
    model = tmp_path / "svm.bin"
    code, out, err = run(
        "train", "--input", separable_csv, "--model-out", model,
        "--model", "svm", "--vectorizer", "tfidf", "--test-fraction", 0.1, "--seed", 7,
    )
    assert code == 0, err
    report = json.loads(out)
    assert model.exists() and report["test_size"] == 60 and report["accuracy"] >= 0.95

    texts = tmp_path / "in.txt"
    texts.write_text(separable[0].body + "\n\n" + separable[1].body + "\n", encoding="utf-8")
    code, out, _ = run("predict", "--model-path", model, "--input", texts)
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    assert lines[0].split("\t")[0] == separable[0].category
    assert lines[1] == "ERROR:empty_input"
    assert lines[2].split("\t")[0] == separable[1].category
    float(lines[0].split("\t")[1])

    code, out, _ = run("evaluate", "--model-path", model, "--input", separable_csv)
    assert code == 0 and json.loads(out)["accuracy"] >= 0.95


def test_train_deterministic(run, separable_csv, tmp_path):
    outs = []
    for name in ("a.bin", "b.bin"):
        code, out, _ = run("train", "--input", separable_csv, "--model-out", tmp_path / name, "--model", "nb", "--seed", 3)
        outs.append(json.loads(out)["confusion_matrix"])
    assert outs[0] == outs[1]
    assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()


def test_train_alpha_zero(run, separable_csv, tmp_path):
    code, out, err = run("train", "--input", separable_csv, "--model-out", tmp_path / "m.bin", "--model", "nb", "--alpha", 0)
    assert code == 2 and "alpha" in err and out == ""


def test_train_degenerate(run, tmp_path):
    p = tmp_path / "one.csv"
    write_csv(Corpus([doc(i, f"Mətn nömrə {i}. İkinci. Üçüncü.") for i in range(10)]), p)
    code, _, err = run("train", "--input", p, "--model-out", tmp_path / "m.bin")
    assert code == 3 and "DegenerateDataset" in err


def test_predict_corrupted_model(run, tmp_path):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"NOPE" + b"\x00" * 20)
    code, _, err = run("predict", "--model-path", bad, "--input", bad)
    assert code == 2 and "FormatError" in err


def test_config_file_and_flag_precedence(run, separable_csv, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"model": "nb", "alpha": 0.5, "test_fraction": 0.2}), encoding="utf-8")
    code, out, _ = run("--config", cfg, "train", "--input", separable_csv, "--model-out", tmp_path / "m.bin")
    assert code == 0
    report = json.loads(out)
    assert report["model_kind"] == "nb" and report["test_size"] == 120
    code, out, _ = run("--config", cfg, "train", "--input", separable_csv, "--model-out", tmp_path / "m.bin", "--test-fraction", 0.1)
    assert json.loads(out)["test_size"] == 60


def test_unknown_config_key(run, separable_csv, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"bogus": 1}), encoding="utf-8")
    code, _, err = run("--config", cfg, "stats", "--input", separable_csv)
    assert code == 2 and "bogus" in err


def test_env_seed(monkeypatch):
    monkeypatch.setenv("AZTEXT_SEED", "41")
    assert RunConfig().seed == 41
    monkeypatch.delenv("AZTEXT_SEED")
    assert RunConfig().seed == 0


def test_run_config_roundtrip():
    cfg = RunConfig(model="mlp", hidden=[8, 4], stemming=True, seed=5)
    assert RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_usage_error_exit_code(run):
    assert run("train")[0] == 2
    assert run("nonsense")[0] == 2


def test_console_script(tmp_path, fixture_csv):
    proc = subprocess.run(
        [sys.executable, "-m", "aztext.cli", "stats", "--input", str(fixture_csv)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["sentences"]["count"] == 50
