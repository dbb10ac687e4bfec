"""Accuracy-curve and timing exports for finished runs."""

from __future__ import annotations

import csv
import json

from .session import HistoryEntry

__all__ = [
    "save_history_json",
    "load_history_json",
    "write_curve_csv",
    "write_summary_csv",
    "summarize",
]

CURVE_COLUMNS = ("iteration", "n_labeled", "accuracy", "fit_seconds",
                 "select_seconds", "method")


def save_history_json(path, history, config=None):
    """Persist a history list (optionally with its config) as JSON."""
    doc = {"history": [h.to_json_dict() for h in history]}
    if config is not None:
        doc["config"] = config.to_json_dict()
        doc["config_hash"] = config.config_hash()
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)


def load_history_json(path):
    with open(path) as fh:
        doc = json.load(fh)
    return [HistoryEntry(**h) for h in doc["history"]]


def write_curve_csv(path, history):
    """Accuracy-vs-labels curve, one row per fit cycle."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CURVE_COLUMNS)
        for h in history:
            writer.writerow([
                h.iteration, h.n_labeled,
                "" if h.accuracy is None else repr(float(h.accuracy)),
                repr(float(h.fit_seconds)), repr(float(h.select_seconds)),
                h.method,
            ])


def summarize(histories, names=None):
    """Per-run totals: method label, selection+fit seconds, final accuracy.

    ``histories`` maps names to history lists, or is a plain list in which
    case ``names`` (or the last entry's method tag) labels each run.
    """
    if isinstance(histories, dict):
        items = list(histories.items())
    else:
        items = []
        for i, h in enumerate(histories):
            name = (names[i] if names is not None
                    else (h[-1].method if h else f"run_{i}"))
            items.append((name, h))
    rows = []
    for name, history in items:
        total = sum(h.fit_seconds + h.select_seconds for h in history)
        final = history[-1].accuracy if history else None
        rows.append({"method": name, "seconds": total, "accuracy": final,
                     "n_labeled": history[-1].n_labeled if history else 0,
                     "cycles": max(len(history) - 1, 0)})
    return rows


def write_summary_csv(path, histories, names=None):
    """Comparison table across runs (method, time, accuracy)."""
    rows = summarize(histories, names=names)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "seconds", "accuracy", "n_labeled",
                         "cycles"])
        for r in rows:
            writer.writerow([
                r["method"], repr(float(r["seconds"])),
                "" if r["accuracy"] is None else repr(float(r["accuracy"])),
                r["n_labeled"], r["cycles"],
            ])
    return rows
