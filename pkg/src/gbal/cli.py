"""Command-line entry points: build-graph, coreset, run, serve, report."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .coreset import dac
from .graph import build_similarity_graph, connected_components
from .io import load_features, load_labels_csv, save_graph
from .reporting import (load_history_json, save_history_json,
                        write_curve_csv, write_summary_csv)
from .session import ActiveLearningSession, ExperimentConfig, run_experiment


def _load_config(args):
    if getattr(args, "config", None):
        with open(args.config) as fh:
            config = ExperimentConfig.from_json_dict(json.load(fh))
    else:
        config = ExperimentConfig()
    if getattr(args, "seed", None) is not None:
        config = config.with_seed(args.seed)
    return config


def _load_dataset(args, need_labels=False):
    if not getattr(args, "features", None):
        raise SystemExit("--features is required for this command")
    X, y = load_features(args.features)
    if getattr(args, "labels", None):
        y = load_labels_csv(args.labels, n_points=X.shape[0])
    if need_labels and y is None:
        raise SystemExit(
            "ground-truth labels are required: pass --labels or a feature "
            "CSV with a final label column")
    return X, y


def _cmd_build_graph(args):
    config = _load_config(args)
    X, _ = _load_dataset(args)
    graph = build_similarity_graph(X, k=config.k, metric=config.metric,
                                   method=config.knn_method)
    n_comp, _ = connected_components(graph)
    save_graph(args.out, graph)
    print(f"graph: {graph.n_nodes} nodes, {graph.weights.nnz // 2} edges, "
          f"k={graph.k}, metric={graph.metric}, components={n_comp}")
    print(f"wrote {args.out}")


def _cmd_coreset(args):
    config = _load_config(args)
    X, _ = _load_dataset(args)
    graph = build_similarity_graph(X, k=config.k, metric=config.metric,
                                   method=config.knn_method)
    params = config.dac
    if params is None:
        raise SystemExit("config disables the core-set (dac is null)")
    core, trace = dac(graph, initial=config.initial_labeled, params=params,
                      return_trace=True)
    out = Path(args.out)
    if out.suffix == ".json":
        out.write_text(json.dumps({"core": [int(i) for i in core]}))
    else:
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id"])
            for i in core:
                writer.writerow([int(i)])
    print(f"core-set: {core.size} points ({params.mode} mode) -> {out}")
    if args.trace:
        with open(args.trace, "w") as fh:
            json.dump([asdict(step) for step in trace], fh, indent=2)
        print(f"trace -> {args.trace}")


def _cmd_run(args):
    config = _load_config(args)
    X, y = _load_dataset(args, need_labels=True)
    history, session = run_experiment(config, features=X, truth=y,
                                      return_session=True)
    for h in history:
        acc = "-" if h.accuracy is None else f"{h.accuracy:.4f}"
        print(f"iter {h.iteration:3d}  labels {h.n_labeled:5d}  "
              f"acc {acc}  fit {h.fit_seconds:.3f}s  "
              f"select {h.select_seconds:.3f}s  [{h.method}]")
    if args.out:
        save_history_json(args.out, history, config=config)
        print(f"history -> {args.out}")
    if args.curve:
        write_curve_csv(args.curve, history)
        print(f"curve -> {args.curve}")
    if args.save_session:
        session.save(args.save_session)
        print(f"session -> {args.save_session}")


def _cmd_serve(args):
    import uvicorn

    from .server import create_app

    config = _load_config(args)
    X, y = _load_dataset(args)
    if args.resume:
        session = ActiveLearningSession.load(args.resume, features=X, truth=y)
    else:
        session = ActiveLearningSession.from_features(config, X, truth=y)
        session.start()
    ui_dir = args.ui if args.ui else None
    app = create_app(session, ui_dir=ui_dir)
    print(f"serving session ({session.graph.n_nodes} points, "
          f"budget {session.budget_target}) on {args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")


def _cmd_report(args):
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    histories = {}
    for path in args.histories:
        name = Path(path).stem
        history = load_history_json(path)
        histories[name] = history
        curve_path = outdir / f"curve_{name}.csv"
        write_curve_csv(curve_path, history)
        print(f"curve -> {curve_path}")
    summary_path = outdir / "summary.csv"
    rows = write_summary_csv(summary_path, histories)
    print(f"summary -> {summary_path}")
    for r in rows:
        acc = "-" if r["accuracy"] is None else f"{r['accuracy']:.4f}"
        print(f"  {r['method']:<16} {r['seconds']:.2f}s  acc {acc}  "
              f"labels {r['n_labeled']}  cycles {r['cycles']}")


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    parser.add_argument("--config", help="JSON experiment config")
    parser.add_argument("--features", help="feature file (CSV or binary)")
    parser.add_argument("--labels", help="ground-truth label CSV")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gbal",
        description="graph-based batch active learning toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-graph", help="build and save a KNN graph")
    _add_common(p)
    p.add_argument("--out", required=True, help="output graph file")
    p.set_defaults(func=_cmd_build_graph)

    p = sub.add_parser("coreset", help="construct the annulus core-set")
    _add_common(p)
    p.add_argument("--out", required=True, help="core-set CSV or JSON")
    p.add_argument("--trace", help="per-selection trace JSON")
    p.set_defaults(func=_cmd_coreset)

    p = sub.add_parser("run", help="run a ground-truth-oracle experiment")
    _add_common(p)
    p.add_argument("--out", help="history JSON")
    p.add_argument("--curve", help="accuracy curve CSV")
    p.add_argument("--save-session", help="session snapshot JSON")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("serve", help="serve the labeling API and UI")
    _add_common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--ui", help="directory of built UI assets")
    p.add_argument("--resume", help="session snapshot to resume")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("report", help="export curves and a summary table")
    p.add_argument("histories", nargs="+", help="history JSON files")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main(sys.argv[1:])
