"""Command-line entry point.

Subcommands: corpus, metafeat, graphs, train, baseline, eval, run. Every
subcommand accepts ``--config``; explicit flags override the file, which
overrides built-in defaults. Exit codes: 0 success, 2 validation problem,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .. import __version__, accel, artifacts
from ..baselines import EalsConfig, eals_fit
from ..containers import save_container
from ..corpus import (corpus_stats, generate_synthetic_corpus, load_corpus,
                      save_corpus)
from ..errors import NumericsError, PVisRecError
from ..evaluation import run_experiment
from ..factorization import TrainConfig, als_fit
from ..graphs import build_graphs, graph_stats
from ..metafeatures import (build_meta_feature_matrix, fit_meta_embedding,
                            layout_entries, layout_hash)
from ..neural import NeuralConfig, train_neural
from . import config as cfgmod
from .pipeline import pipeline_run, write_report


def _resolve(args, flag: str, cfg: dict, section: str, key: str):
    """CLI flag wins; a None falls back to the (config-file) value."""
    value = getattr(args, flag)
    return cfg[section][key] if value is None else value


def _cmd_corpus(args) -> int:
    if args.action == "validate":
        corpus = load_corpus(args.path)
        stats = corpus_stats(corpus)
        print(f"OK: {stats['users']} users, {stats['attributes']} attributes, "
              f"{stats['visualizations']} visualizations, "
              f"{stats['configurations']} configurations")
        return 0
    if args.action == "stats":
        stats = corpus_stats(load_corpus(args.path))
        labels = [("# Users", "users"), ("# Datasets", "datasets"),
                  ("# Attributes", "attributes"),
                  ("# Visualizations", "visualizations"),
                  ("# Vis. Configs", "configurations"),
                  ("mean # attr. per dataset", "mean_attrs_per_dataset"),
                  ("mean # attr. per user", "mean_attrs_per_user"),
                  ("mean # vis. per user", "mean_vis_per_user"),
                  ("mean # datasets per user", "mean_datasets_per_user")]
        for label, key in labels:
            value = stats[key]
            text = f"{value:.2f}" if isinstance(value, float) else str(value)
            print(f"{label:<28s} {text}")
        return 0
    corpus = generate_synthetic_corpus(
        seed=args.seed, n_users=args.users, n_datasets=args.datasets,
        cols_per_dataset=args.cols, planted_rank=args.rank,
        datasets_per_user=args.datasets_per_user,
        max_positives=args.max_positives, noise=args.noise,
        spread=args.spread, family_alignment=args.family_alignment)
    save_corpus(corpus, args.out)
    print(f"wrote {args.out}: {corpus.n_users} users, "
          f"{corpus.n_visualizations} visualizations")
    return 0


def _cmd_metafeat(args) -> int:
    if args.action == "catalog":
        print(f"layout {layout_hash()[:16]}  (index  representation  partition  cell  feature)")
        for idx, rep, scheme, cell, name in layout_entries():
            cell_txt = "-" if cell < 0 else str(cell)
            print(f"{idx:5d}  {rep:<11s} {scheme:<11s} {cell_txt:>4s}  {name}")
        return 0
    if args.action == "extract":
        corpus = load_corpus(args.corpus)
        mfm = build_meta_feature_matrix(corpus)
        artifacts.save_meta_matrix(args.out, mfm)
        print(f"wrote {args.out}: K={mfm.n_features} m={mfm.n_attributes} "
              f"density={mfm.density():.4f}")
        return 0
    cfg = cfgmod.load_config(args.config)
    rank = args.rank if args.rank is not None else cfgmod.mfe_rank(cfg)
    if rank is None:
        raise PVisRecError("metafeat embed needs --rank or metafeatures.rank in the config")
    mfm = artifacts.load_meta_matrix(args.matrix)
    emb = fit_meta_embedding(mfm, int(rank))
    artifacts.save_meta_embedding(args.out, emb, mfm.layout_hash)
    print(f"wrote {args.out}: rank={emb.rank} "
          f"sigma=[{emb.singular_values[0]:.4g} .. {emb.singular_values[-1]:.4g}]")
    return 0


def _cmd_graphs(args) -> int:
    if args.action == "build":
        cfg = cfgmod.load_config(args.config)
        binarize = _resolve(args, "binarize", cfg, "graphs", "binarize")
        weights = cfg["graphs"]["feedback_weights"] or None
        corpus = load_corpus(args.corpus)
        graphs = build_graphs(corpus, weights=weights, binarize=bool(binarize))
        artifacts.save_graphs(args.out, graphs)
        print(f"wrote {args.out}")
        stats = graph_stats(graphs)
    else:
        stats = graph_stats(artifacts.load_graphs(args.path))
    for key, value in stats.items():
        text = f"{value:.6f}" if isinstance(value, float) else str(value)
        print(f"{key:<24s} {text}")
    return 0


def _train_config_from(args) -> TrainConfig:
    cfg = cfgmod.load_config(args.config)
    return TrainConfig(
        rank=int(_resolve(args, "d", cfg, "train", "rank")),
        ridge=float(_resolve(args, "ridge", cfg, "train", "ridge")),
        max_iters=int(_resolve(args, "iters", cfg, "train", "max_iters")),
        tol=float(_resolve(args, "tol", cfg, "train", "tol")),
        seed=int(_resolve(args, "seed", cfg, "train", "seed")),
        variant=_resolve(args, "variant", cfg, "train", "variant"))


def _train_cmf(args, trace_csv=None) -> int:
    cfg = _train_config_from(args)
    graphs = artifacts.load_graphs(args.graphs)
    meta = None
    if cfg.variant != "acd":
        if not args.meta:
            raise PVisRecError("variants using meta-features need --meta")
        meta = artifacts.load_meta_matrix(args.meta).matrix
    rows = []
    cb = (lambda it, factor, value: rows.append((it, factor, value))) if trace_csv else None
    emb = als_fit(graphs, meta, cfg, on_update=cb)
    artifacts.save_cmf_model(args.out, emb, cfg)
    print(f"wrote {args.out}: objective {emb.trace[0]:.6g} -> {emb.trace[-1]:.6g} "
          f"({len(emb.trace) - 1} iterations)")
    if trace_csv:
        with open(trace_csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "factor", "objective"])
            writer.writerows(rows)
        print(f"wrote {trace_csv}")
    return 0


def _cmd_train(args) -> int:
    if args.action == "pvisrec":
        return _train_cmf(args)
    if args.action == "trace":
        return _train_cmf(args, trace_csv=args.trace_out)
    # neural
    cfg = cfgmod.load_config(args.config)
    emb, _ = artifacts.load_cmf_model(args.model)
    corpus = load_corpus(args.corpus)
    widths_raw = _resolve(args, "widths", cfg, "neural", "widths")
    if widths_raw in ("auto", None):
        widths, strict = None, True
    else:
        raw = widths_raw.split(",") if isinstance(widths_raw, str) else widths_raw
        widths, strict = [int(w) for w in raw], False
    ncfg = NeuralConfig(
        lr=float(_resolve(args, "lr", cfg, "neural", "lr")),
        n_layers=int(_resolve(args, "layers", cfg, "neural", "layers")),
        widths=widths,
        activation=_resolve(args, "activation", cfg, "neural", "activation"),
        epochs=int(_resolve(args, "epochs", cfg, "neural", "epochs")),
        batch_size=int(_resolve(args, "batch_size", cfg, "neural", "batch_size")),
        neg_per_pos=int(_resolve(args, "neg_per_pos", cfg, "neural", "neg_per_pos")),
        s_max=int(_resolve(args, "s_max", cfg, "neural", "s_max")),
        seed=int(_resolve(args, "seed", cfg, "neural", "seed")),
        alpha=float(_resolve(args, "alpha", cfg, "neural", "alpha")),
        max_attrs=int(_resolve(args, "max_attrs", cfg, "eval", "max_attrs")),
        strict_tower=strict)
    params, losses = train_neural(emb, corpus, ncfg)
    artifacts.save_mlp(args.out, params,
                       {"alpha": ncfg.alpha, "s_max": ncfg.s_max, "loss_trace": losses})
    last = f"{losses[-1]:.6g}" if losses else "n/a"
    print(f"wrote {args.out}: {len(losses)} epochs, final loss {last}")
    if args.loss_csv:
        with open(args.loss_csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "loss"])
            writer.writerows(enumerate(losses))
        print(f"wrote {args.loss_csv}")
    return 0


def _cmd_baseline(args) -> int:
    if args.method != "eals":
        raise PVisRecError(f"unknown baseline method {args.method!r}")
    cfg = cfgmod.load_config(args.config)
    ecfg = EalsConfig(
        rank=int(_resolve(args, "d", cfg, "eals", "rank")),
        ridge=float(_resolve(args, "ridge", cfg, "eals", "ridge")),
        iters=int(_resolve(args, "iters", cfg, "eals", "iters")),
        seed=int(_resolve(args, "seed", cfg, "eals", "seed")),
        c0=float(_resolve(args, "c0", cfg, "eals", "c0")))
    graphs = artifacts.load_graphs(args.graphs)
    model = eals_fit(graphs, ecfg)
    save_container(args.out, "eals-model",
                   {"rank": ecfg.rank, "c0": ecfg.c0},
                   {"attr_users": model.attr_users, "attr_items": model.attr_items,
                    "config_users": model.config_users,
                    "config_items": model.config_items})
    print(f"wrote {args.out}")
    return 0


def _load_report(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _cmd_eval(args) -> int:
    if args.action == "run":
        cfg = cfgmod.load_config(args.config)
        ecfg = cfgmod.eval_config(cfg)
        if args.K is not None:
            ecfg.k_max = args.K
        seed = int(_resolve(args, "seed", cfg, "eval", "seed"))
        models = (args.models.split(",") if args.models
                  else list(cfg["eval"]["models"]))
        corpus = load_corpus(args.corpus)
        report = run_experiment(corpus, models, ecfg, seed)
        report.metadata["config_hash"] = cfgmod.config_hash(cfg)
        write_report(report, args.out)
        print(f"wrote {args.out} ({report.metadata['n_slates']} slates)")
        return 0
    doc = _load_report(args.report)
    if args.action == "table":
        k_show = min(5, doc["metadata"]["k_max"])
        header = (["Model"] + [f"HR@{k}" for k in range(1, k_show + 1)]
                  + [f"NDCG@{k}" for k in range(1, k_show + 1)])
        rows = []
        for name, metrics in doc["models"].items():
            rows.append([name] + [f"{metrics['hr'][k]:.3f}" for k in range(k_show)]
                        + [f"{metrics['ndcg'][k]:.3f}" for k in range(k_show)])
        if args.csv:
            writer = csv.writer(sys.stdout)
            writer.writerow(header)
            writer.writerows(rows)
        else:
            widths = [max(len(str(r[i])) for r in [header] + rows)
                      for i in range(len(header))]
            for row in [header] + rows:
                print("  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)))
        return 0
    # plotdata: long-form CSV of the metric curves
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "metric", "K", "value"])
        for name, metrics in doc["models"].items():
            for metric in ("hr", "ndcg"):
                for k, value in enumerate(metrics[metric], start=1):
                    writer.writerow([name, metric, k, f"{value:.6f}"])
    print(f"wrote {args.out}")
    return 0


def _cmd_run(args) -> int:
    cfg = cfgmod.load_config(args.config)
    results, report_path, report = pipeline_run(cfg, corpus_path=args.corpus)
    for res in results:
        print(f"{res.name:<14s} {res.status:<9s} {res.path}")
    print(f"report: {report_path}")
    best = max(sorted(report.models), key=lambda m: report.models[m]["hr"][-1])
    print(f"best HR@{report.metadata['k_max']}: {best} "
          f"({report.models[best]['hr'][-1]:.3f})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pvisrec",
        description="Personalized visualization recommendation engine")
    parser.add_argument("--version", action="version",
                        version=f"pvisrec {__version__} ({accel.active_path()} kernels)")
    config_parent = argparse.ArgumentParser(add_help=False)
    config_parent.add_argument("--config", default=None,
                               help="YAML run configuration supplying defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    corpus = sub.add_parser("corpus", help="validate, summarize, or synthesize corpora")
    corpus_sub = corpus.add_subparsers(dest="action", required=True)
    p = corpus_sub.add_parser("validate", parents=[config_parent])
    p.add_argument("path")
    p = corpus_sub.add_parser("stats", parents=[config_parent])
    p.add_argument("path")
    p = corpus_sub.add_parser("synth", parents=[config_parent])
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--users", type=int, default=50)
    p.add_argument("--datasets", type=int, default=12)
    p.add_argument("--cols", type=int, default=8)
    p.add_argument("--rank", type=int, default=3)
    p.add_argument("--datasets-per-user", type=int, default=3)
    p.add_argument("--max-positives", type=int, default=4)
    p.add_argument("--noise", type=float, default=0.25)
    p.add_argument("--spread", type=float, default=0.35)
    p.add_argument("--family-alignment", type=float, default=0.7)
    p.add_argument("--out", required=True)
    corpus.set_defaults(func=_cmd_corpus)

    metafeat = sub.add_parser("metafeat", help="meta-feature extraction and embedding")
    metafeat_sub = metafeat.add_subparsers(dest="action", required=True)
    p = metafeat_sub.add_parser("extract", parents=[config_parent])
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    p = metafeat_sub.add_parser("embed", parents=[config_parent])
    p.add_argument("matrix")
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--out", required=True)
    metafeat_sub.add_parser("catalog", parents=[config_parent])
    metafeat.set_defaults(func=_cmd_metafeat)

    graphs = sub.add_parser("graphs", help="interaction graph construction")
    graphs_sub = graphs.add_subparsers(dest="action", required=True)
    p = graphs_sub.add_parser("build", parents=[config_parent])
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--binarize", action=argparse.BooleanOptionalAction, default=None)
    p = graphs_sub.add_parser("stats", parents=[config_parent])
    p.add_argument("path")
    graphs.set_defaults(func=_cmd_graphs)

    train = sub.add_parser("train", help="model training")
    train_sub = train.add_subparsers(dest="action", required=True)
    for action in ("pvisrec", "trace"):
        p = train_sub.add_parser(action, parents=[config_parent])
        p.add_argument("--graphs", required=True)
        p.add_argument("--meta", default=None)
        p.add_argument("--d", type=int, default=None)
        p.add_argument("--lambda", dest="ridge", type=float, default=None)
        p.add_argument("--iters", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--variant", choices=["full", "acm", "acd"], default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", required=True)
        if action == "trace":
            p.add_argument("--trace-out", required=True,
                           help="CSV of the objective after every factor update")
    p = train_sub.add_parser("neural", parents=[config_parent])
    p.add_argument("--model", required=True, help="trained factorization artifact")
    p.add_argument("--corpus", required=True)
    p.add_argument("--layers", type=int, default=None)
    p.add_argument("--widths", default=None, help="auto or comma-separated sizes")
    p.add_argument("--activation", choices=["relu", "sigmoid", "tanh"], default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--neg-per-pos", type=int, default=None)
    p.add_argument("--s-max", type=int, default=None)
    p.add_argument("--max-attrs", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--loss-csv", default=None)
    train.set_defaults(func=_cmd_train)

    baseline = sub.add_parser("baseline", help="reference scorers")
    baseline_sub = baseline.add_subparsers(dest="action", required=True)
    p = baseline_sub.add_parser("fit", parents=[config_parent])
    p.add_argument("--method", required=True, choices=["eals"])
    p.add_argument("--graphs", required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--ridge", type=float, default=None)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--c0", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    baseline.set_defaults(func=_cmd_baseline)

    ev = sub.add_parser("eval", help="leave-one-out ranking evaluation")
    ev_sub = ev.add_subparsers(dest="action", required=True)
    p = ev_sub.add_parser("run", parents=[config_parent])
    p.add_argument("--corpus", required=True)
    p.add_argument("--models", default=None,
                   help="comma-separated model names (default from config)")
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p = ev_sub.add_parser("table", parents=[config_parent])
    p.add_argument("report")
    p.add_argument("--csv", action="store_true")
    p = ev_sub.add_parser("plotdata", parents=[config_parent])
    p.add_argument("report")
    p.add_argument("--out", required=True)
    ev.set_defaults(func=_cmd_eval)

    runp = sub.add_parser("run", help="full cached pipeline from a config file")
    runp.add_argument("--config", required=True)
    runp.add_argument("--corpus", default=None, help="override config paths.corpus")
    runp.set_defaults(func=_cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except PVisRecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
