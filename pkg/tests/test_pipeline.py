import json

import pytest
import yaml

from pvisrec.cli.config import load_config
from pvisrec.cli.main import main
from pvisrec.cli.pipeline import pipeline_run
from pvisrec.corpus import generate_synthetic_corpus, save_corpus


@pytest.fixture(scope="module")
def corpus_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("pipe") / "corpus.json"
    save_corpus(generate_synthetic_corpus(seed=9, n_users=12, n_datasets=8), path)
    return path


def _config(tmp_path, corpus_file, name="cfg.yaml", **overrides):
    doc = {"paths": {"corpus": str(corpus_file),
                     "artifacts": str(tmp_path / "artifacts")},
           "train": {"rank": 4, "max_iters": 8},
           "neural": {"epochs": 2},
           "eval": {"models": ["pvisrec", "vispop", "neural"], "seed": 2}}
    for key, sub in overrides.items():
        doc.setdefault(key, {}).update(sub)
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc))
    return path


def test_fresh_run_then_cached(tmp_path, corpus_file):
    cfg_path = _config(tmp_path, corpus_file)
    cfg = load_config(cfg_path)
    results, report_path, report = pipeline_run(cfg)
    assert {r.status for r in results} == {"computed"}
    assert report_path.exists()
    assert set(report.models) == {"pvisrec", "vispop", "neural"}

    results2, report_path2, report2 = pipeline_run(cfg)
    assert {r.status for r in results2} == {"cached"}
    assert report_path2 == report_path
    assert report2.as_dict() == report.as_dict()


def test_rank_change_recomputes_only_train_and_eval(tmp_path, corpus_file):
    cfg_path = _config(tmp_path, corpus_file)
    pipeline_run(load_config(cfg_path))
    cfg_path2 = _config(tmp_path, corpus_file, name="cfg2.yaml",
                        train={"rank": 6, "max_iters": 8})
    results, _, _ = pipeline_run(load_config(cfg_path2))
    status = {r.name: r.status for r in results}
    assert status["metafeat"] == "cached"
    assert status["split"] == "cached"
    assert status["graphs"] == "cached"
    assert status["train-full"] == "computed"
    assert status["neural"] == "computed"      # consumes the retrained factors
    assert status["eval"] == "computed"


def test_reports_byte_identical_across_fresh_runs(tmp_path, corpus_file):
    import shutil
    cfg = load_config(_config(tmp_path, corpus_file))
    _, path_a, _ = pipeline_run(cfg)
    first = path_a.read_bytes()
    shutil.rmtree(tmp_path / "artifacts")      # force a full recompute
    _, path_b, _ = pipeline_run(cfg)
    assert path_b.read_bytes() == first


def test_cached_eval_output_matches_recompute(tmp_path, corpus_file):
    cfg = load_config(_config(tmp_path, corpus_file))
    _, report_path, _ = pipeline_run(cfg)
    original = report_path.read_bytes()
    report_path.unlink()
    results, report_path2, _ = pipeline_run(cfg)
    status = {r.name: r.status for r in results}
    assert status["eval"] == "computed"
    assert status["train-full"] == "cached"
    assert report_path2.read_bytes() == original


def test_pipeline_with_mfe_rank(tmp_path, corpus_file):
    cfg_path = _config(tmp_path, corpus_file, metafeatures={"rank": 4})
    results, _, report = pipeline_run(load_config(cfg_path))
    names = [r.name for r in results]
    assert "mfe" in names
    assert report.models["pvisrec"]["hr"][-1] >= 0.0


def test_run_command_end_to_end(tmp_path, corpus_file, capsys):
    cfg_path = _config(tmp_path, corpus_file)
    assert main(["run", "--config", str(cfg_path)]) == 0
    out = capsys.readouterr().out
    assert "report:" in out and "computed" in out


def test_run_missing_corpus_exits_2(tmp_path):
    cfg = tmp_path / "empty.yaml"
    cfg.write_text(yaml.safe_dump({"paths": {"artifacts": str(tmp_path / "x")}}))
    assert main(["run", "--config", str(cfg)]) == 2
