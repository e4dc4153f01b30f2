import json
import warnings
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from varlex import __version__
from varlex.classify import ClassifierConfig
from varlex.cli import main
from varlex.dataset import load_expression_csv, stratified_kfold, write_expression_csv
from varlex.evaluate import cross_validate
from varlex.synthetic import make_benchmark

DATA = Path(str(resources.files("varlex") / "data"))


@pytest.fixture(scope="module")
def small_data(tmp_path_factory):
    d = tmp_path_factory.mktemp("data")
    ds = make_benchmark(n_genes=80, n_per_class=(6, 6), n_signature=10, seed=1)
    write_expression_csv(ds, d / "all.csv", d / "labels.csv")
    write_expression_csv(ds.subset(samples=np.r_[0:5, 6:11]), d / "train.csv", d / "train_labels.csv")
    write_expression_csv(ds.subset(samples=[5, 11]), d / "test.csv")
    return d, ds


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_version(capsys):
    code, out, _ = run(capsys, "version")
    assert code == 0 and out.strip() == __version__


def test_usage_errors(capsys, tmp_path):
    code, _, err = run(capsys, "eval", "--config", tmp_path / "missing.cfg")
    assert code == 1 and "missing.cfg" in err
    assert run(capsys, "eval", "--bogus", "1")[0] == 1
    assert run(capsys)[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("input = x.csv\nnot a pair\n")
    code, _, err = run(capsys, "eval", "--config", cfg)
    assert code == 1 and "bad.cfg:2" in err
    cfg.write_text("colour = red\n")
    code, _, err = run(capsys, "eval", "--config", cfg)
    assert code == 1 and "colour" in err
    code, _, err = run(capsys, "decompose", "--input", tmp_path / "nope.csv")
    assert code == 1 and "nope.csv" in err
    code, _, err = run(capsys, "eval", "--input", DATA / "synthetic.csv", "--kind", "knn")
    assert code == 1 and "kind" in err


def test_data_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("gene_id,a,b\ng1,1\n")
    code, _, err = run(capsys, "decompose", "--input", bad, "--out", tmp_path)
    assert code == 2 and "dimension mismatch" in err


def test_dry_run_flag_beats_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"input = {DATA / 'synthetic.csv'}\nk = 4\nrepeats = 3\n")
    code, out, _ = run(capsys, "eval", "--config", cfg, "--k", "6", "--dry-run")
    assert code == 0
    assert "k = 6" in out.splitlines() and "repeats = 3" in out.splitlines()
    assert not (tmp_path / "report.json").exists()


def test_decompose_outputs(capsys, small_data, tmp_path):
    d, ds = small_data
    code, _, _ = run(capsys, "decompose", "--input", d / "train.csv", "--out", tmp_path,
                     "--lambda", "auto", "--seed", 3)
    assert code == 0
    for name in ("L.csv", "S.csv", "trace.csv"):
        assert (tmp_path / name).read_text().startswith(f"# varlex {__version__} seed=3\n")
    lines = (tmp_path / "trace.csv").read_text().splitlines()
    assert lines[1] == "iter,residual,rank,nnz"
    L = np.loadtxt(tmp_path / "L.csv", delimiter=",", skiprows=2, usecols=range(1, 11))
    S = np.loadtxt(tmp_path / "S.csv", delimiter=",", skiprows=2, usecols=range(1, 11))
    X = ds.subset(samples=np.r_[0:5, 6:11]).values
    assert np.linalg.norm(X - L - S) <= 1e-6 * np.linalg.norm(X)


def test_strict_nonconvergence(capsys, small_data, tmp_path):
    d, _ = small_data
    code, _, err = run(capsys, "decompose", "--input", d / "train.csv", "--out", tmp_path,
                       "--max-iter", 2, "--strict")
    assert code == 3 and "converge" in err
    assert run(capsys, "decompose", "--input", d / "train.csv", "--out", tmp_path, "--max-iter", 2)[0] == 0


def test_dict_then_solve(capsys, small_data, tmp_path):
    d, _ = small_data
    code, _, _ = run(capsys, "dict", "--mode", "changing", "--train", d / "train.csv",
                     "--train-labels", d / "train_labels.csv", "--test", d / "test.csv",
                     "--out", tmp_path / "dict")
    assert code == 0
    meta = json.loads((tmp_path / "dict" / "groups.json").read_text())
    assert meta["mode"] == "changing" and meta["class_of"] == [1] * 5 + [2] * 5
    assert meta["provenance"]["version"] == __version__
    code, _, _ = run(capsys, "solve", "--dict", tmp_path / "dict", "--problem", "ipgsrc",
                     "--out", tmp_path / "sol", "--history", tmp_path / "hist.csv")
    assert code == 0
    M = np.loadtxt(tmp_path / "sol" / "M.csv", delimiter=",", skiprows=2, usecols=range(1, 11))
    assert M.shape == (2, 10)
    assert (tmp_path / "hist.csv").read_text().splitlines()[1] == "iter,r_z,r_feas,objective"


def test_classify_predictions(capsys, small_data, tmp_path):
    d, ds = small_data
    code, _, _ = run(capsys, "classify", "--kind", "ipgsrc", "--mode", "changing",
                     "--train", d / "train.csv", "--train-labels", d / "train_labels.csv",
                     "--test", d / "test.csv", "--out", tmp_path)
    assert code == 0
    lines = (tmp_path / "predictions.csv").read_text().splitlines()
    assert lines[1] == "sample_id,predicted,score_1,score_2,csi,flags"
    rows = [l.split(",") for l in lines[2:]]
    assert [r[0] for r in rows] == [ds.sample_ids[5], ds.sample_ids[11]]
    assert all(0 <= float(r[4]) <= 1 for r in rows)


def test_rank_genes(capsys, small_data, tmp_path):
    d, _ = small_data
    code, _, _ = run(capsys, "rank-genes", "--input", d / "all.csv", "--labels", d / "labels.csv",
                     "--top-k", 5, "--out", tmp_path)
    assert code == 0
    lines = (tmp_path / "ranked_genes.csv").read_text().splitlines()
    assert lines[1] == "rank,gene_id,snr" and len(lines) == 7


def test_smoke_config_matches_library(capsys, tmp_path):
    code, _, _ = run(capsys, "eval", "--config", DATA / "smoke.cfg", "--out", tmp_path)
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["schema"] == "report_v1" and report["provenance"]["seed"] == 7
    ds = load_expression_csv(DATA / "synthetic.csv", DATA / "synthetic_labels.csv")
    cfg = dict(l.split(" = ") for l in (DATA / "smoke.cfg").read_text().splitlines()
               if l and not l.startswith("#"))
    plan = stratified_kfold(ds, int(cfg["k"]), int(cfg["repeats"]), int(cfg["seed"]))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lib = cross_validate(ds, ClassifierConfig(cfg["kind"], cfg["mode"]), plan)
    assert report["aggregate"]["accuracy_mean"] == lib.aggregate["accuracy_mean"]
    for name in ("roc.csv", "folds.csv", "csi.csv"):
        assert (tmp_path / name).read_text().startswith(f"# varlex {__version__} seed=7\n")


def test_eval_byte_identical_with_jobs(capsys, small_data, tmp_path):
    d, _ = small_data
    args = ["eval", "--input", d / "all.csv", "--labels", d / "labels.csv", "--k", 3,
            "--repeats", 2, "--mode", "changing", "--baselines", "gsrc", "--seed", 5]
    assert run(capsys, *args, "--out", tmp_path / "a")[0] == 0
    assert run(capsys, *args, "--out", tmp_path / "b", "--jobs", 2)[0] == 0
    for name in ("report.json", "roc.csv", "folds.csv", "csi.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    report = json.loads((tmp_path / "a" / "report.json").read_text())
    assert "gsrc" in report["baselines"] and set(report["csi_summary"]) == {"ipgsrc", "gsrc"}
