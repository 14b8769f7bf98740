"""End-to-end pipeline with content-addressed stage caching.

Stage keys hash the stage parameters plus every input key, so changing one
config field re-runs only the stages reachable from it (e.g. a new rank
re-runs train + eval while meta-features, split, and graphs stay cached).
Reports carry no timestamps: identical config + corpus + seeds produce
byte-identical output.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .. import artifacts
from ..corpus import Corpus, load_corpus
from ..errors import ValidationError
from ..evaluation import (MetricsReport, ModelPool, assert_no_leakage,
                          build_slates)
from ..evaluation.protocol import EvalSplit, HoldOut
from ..evaluation.runner import report_metadata, score_models
from ..factorization import als_fit
from ..metafeatures import (build_meta_feature_matrix, fit_meta_embedding,
                            layout_hash)
from ..neural import train_neural
from . import config as cfgmod

_CMF_VARIANT_OF = {"pvisrec": "full", "pvisrec-acm": "acm", "pvisrec-acd": "acd",
                   "neural": "full", "neural-cmf": "full", "global": "full"}


@dataclass
class StageResult:
    name: str
    status: str      # "computed" | "cached"
    path: str
    key: str


def _key(*parts) -> str:
    payload = json.dumps(parts, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _file_hash(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _split_doc(split: EvalSplit) -> dict:
    return {"seed": split.seed,
            "entries": [{"user": e.user, "dataset": e.dataset_id,
                         "positive": [list(e.positive[0]), e.positive[1]],
                         "validation": (None if e.validation is None else
                                        [list(e.validation[0]), e.validation[1]]),
                         "train_positives": [[list(b), c]
                                             for b, c in e.train_positives]}
                        for e in split.entries]}


def _split_from_doc(doc: dict, corpus: Corpus) -> EvalSplit:
    entries = []
    removed = set()
    for raw in doc["entries"]:
        positive = (tuple(raw["positive"][0]), raw["positive"][1])
        validation = None
        if raw["validation"] is not None:
            validation = (tuple(raw["validation"][0]), raw["validation"][1])
        entries.append(HoldOut(
            user=raw["user"], dataset_id=raw["dataset"], positive=positive,
            validation=validation,
            train_positives=[(tuple(b), c) for b, c in raw["train_positives"]]))
        removed.add((raw["user"], raw["dataset"]) + positive)
        if validation is not None:
            removed.add((raw["user"], raw["dataset"]) + validation)
    training = [v for v in corpus.visualizations if v.identity() not in removed]
    return EvalSplit(entries=entries, training_visualizations=training,
                     seed=doc["seed"])


class Pipeline:
    def __init__(self, cfg: dict, corpus_path=None):
        self.cfg = cfg
        self.corpus_path = corpus_path or cfg["paths"]["corpus"]
        if not self.corpus_path:
            raise ValidationError("config paths.corpus is required for a pipeline run")
        self.artifacts_dir = Path(cfg["paths"]["artifacts"])
        self.artifacts_dir.mkdir(parents=True, exist_ok=True)
        self.config_hash = cfgmod.config_hash(cfg)
        self.results: list[StageResult] = []

    def _stage_path(self, name: str, key: str, ext: str) -> Path:
        return self.artifacts_dir / f"{name}-{key}{ext}"

    def _record(self, name: str, status: str, path: Path, key: str):
        self.results.append(StageResult(name, status, str(path), key))

    def run(self, models=None, eval_seed=None) -> tuple[list[StageResult], Path, MetricsReport]:
        cfg = self.cfg
        models = list(models or cfg["eval"]["models"])
        eval_seed = int(cfg["eval"]["seed"] if eval_seed is None else eval_seed)
        corpus_hash = _file_hash(self.corpus_path)
        corpus = load_corpus(self.corpus_path)

        # meta-features (full matrix, data-derived: split independent)
        meta_key = _key("metafeat", corpus_hash, layout_hash())
        meta_path = self._stage_path("metafeat", meta_key, ".bin")
        if meta_path.exists():
            self._record("metafeat", "cached", meta_path, meta_key)
            mfm = artifacts.load_meta_matrix(meta_path)
        else:
            mfm = build_meta_feature_matrix(corpus)
            artifacts.save_meta_matrix(meta_path, mfm, self.config_hash)
            self._record("metafeat", "computed", meta_path, meta_key)

        rank = cfgmod.mfe_rank(cfg)
        if rank is not None:
            mfe_key = _key("mfe", meta_key, rank)
            mfe_path = self._stage_path("mfe", mfe_key, ".bin")
            if mfe_path.exists():
                self._record("mfe", "cached", mfe_path, mfe_key)
                membed = artifacts.load_meta_embedding(mfe_path)
            else:
                membed = fit_meta_embedding(mfm, rank)
                artifacts.save_meta_embedding(mfe_path, membed, layout_hash(),
                                              self.config_hash)
                self._record("mfe", "computed", mfe_path, mfe_key)
            meta_matrix = membed.reduced_matrix()
            meta_input_key = mfe_key
        else:
            meta_matrix = mfm.matrix
            meta_input_key = meta_key

        # leave-one-out split
        split_key = _key("split", corpus_hash, eval_seed)
        split_path = self._stage_path("split", split_key, ".json")
        if split_path.exists():
            self._record("split", "cached", split_path, split_key)
            with open(split_path, encoding="utf-8") as fh:
                split = _split_from_doc(json.load(fh), corpus)
        else:
            from ..evaluation import make_split
            split = make_split(corpus, eval_seed)
            with open(split_path, "w", encoding="utf-8") as fh:
                json.dump(_split_doc(split), fh, sort_keys=True)
            self._record("split", "computed", split_path, split_key)
        train_corpus = corpus.with_visualizations(split.training_visualizations)
        assert_no_leakage(split, train_corpus)

        # graphs from the training side
        from ..graphs import build_graphs
        graphs_key = _key("graphs", corpus_hash, split_key,
                          cfg["graphs"]["binarize"], cfg["graphs"]["feedback_weights"])
        graphs_path = self._stage_path("graphs", graphs_key, ".bin")
        if graphs_path.exists():
            self._record("graphs", "cached", graphs_path, graphs_key)
            graphs = artifacts.load_graphs(graphs_path)
        else:
            weights = cfg["graphs"]["feedback_weights"] or None
            graphs = build_graphs(train_corpus, weights=weights,
                                  binarize=cfg["graphs"]["binarize"])
            artifacts.save_graphs(graphs_path, graphs, self.config_hash)
            self._record("graphs", "computed", graphs_path, graphs_key)

        # coupled factorization per requested variant
        variants = sorted({_CMF_VARIANT_OF[m] for m in models if m in _CMF_VARIANT_OF})
        embeddings = {}
        train_keys = []
        for variant in variants:
            tc = cfgmod.train_config(cfg, variant)
            t_key = _key("train", graphs_key,
                         meta_input_key if variant != "acd" else "none",
                         variant, tc.rank, tc.ridge, tc.max_iters, tc.tol, tc.seed)
            train_keys.append(t_key)
            t_path = self._stage_path(f"model-{variant}", t_key, ".bin")
            if t_path.exists():
                self._record(f"train-{variant}", "cached", t_path, t_key)
                embeddings[variant], _ = artifacts.load_cmf_model(t_path)
            else:
                meta_arg = None if variant == "acd" else meta_matrix
                embeddings[variant] = als_fit(graphs, meta_arg, tc)
                artifacts.save_cmf_model(t_path, embeddings[variant], tc,
                                         self.config_hash)
                self._record(f"train-{variant}", "computed", t_path, t_key)

        # neural head over the frozen full-variant embeddings
        neural_params = None
        if any(m in ("neural", "neural-cmf") for m in models):
            ncfg = cfgmod.neural_config(cfg)
            n_key = _key("neural", train_keys[variants.index("full")], split_key,
                         ncfg.lr, ncfg.n_layers, ncfg.widths, ncfg.activation,
                         ncfg.epochs, ncfg.batch_size, ncfg.neg_per_pos,
                         ncfg.s_max, ncfg.seed)
            n_path = self._stage_path("neural", n_key, ".bin")
            if n_path.exists():
                self._record("neural", "cached", n_path, n_key)
                neural_params, _, _ = artifacts.load_mlp(n_path)
            else:
                neural_params, losses = train_neural(embeddings["full"],
                                                     train_corpus, ncfg)
                artifacts.save_mlp(n_path, neural_params,
                                   {"alpha": ncfg.alpha, "s_max": ncfg.s_max,
                                    "loss_trace": losses},
                                   config_hash=self.config_hash)
                self._record("neural", "computed", n_path, n_key)

        # evaluation on identical slates
        ecfg = cfgmod.eval_config(cfg)
        eval_key = _key("eval", corpus_hash, split_key, graphs_key, train_keys,
                        models, ecfg.k_max, ecfg.n_negatives, ecfg.max_attrs,
                        ecfg.knn_k, ecfg.slate_minmax, self.config_hash)
        report_path = self._stage_path("report", eval_key, ".json")
        if report_path.exists():
            self._record("eval", "cached", report_path, eval_key)
            with open(report_path, encoding="utf-8") as fh:
                doc = json.load(fh)
            report = MetricsReport(models=doc["models"], metadata=doc["metadata"])
        else:
            pool = ModelPool(corpus, train_corpus, ecfg, split, eval_seed,
                             meta=meta_matrix, embeddings=embeddings,
                             neural=neural_params)
            slates = build_slates(corpus, split, eval_seed,
                                  ecfg.n_negatives, ecfg.max_attrs)
            scored = score_models(pool, slates, models, ecfg)
            metadata = report_metadata(ecfg, eval_seed, models, len(split.entries),
                                       extra={"config_hash": self.config_hash})
            report = MetricsReport(models=scored, metadata=metadata)
            write_report(report, report_path)
            self._record("eval", "computed", report_path, eval_key)
        return self.results, report_path, report


def write_report(report: MetricsReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def pipeline_run(cfg: dict, corpus_path=None):
    """Run all stages; returns (stage results, report path, MetricsReport)."""
    return Pipeline(cfg, corpus_path).run()
