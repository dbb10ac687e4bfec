"""History persistence and summary tables."""

import csv
import json

from gbal.reporting import (load_history_json, save_history_json, summarize,
                            write_curve_csv, write_summary_csv)
from gbal.session import ExperimentConfig, HistoryEntry


def entries():
    return [
        HistoryEntry(iteration=0, n_labeled=10, accuracy=0.5,
                     fit_seconds=0.5, select_seconds=0.25, method="coreset"),
        HistoryEntry(iteration=1, n_labeled=15, accuracy=None,
                     fit_seconds=0.5, select_seconds=0.25, method="localmax"),
    ]


def test_history_json_round_trip(tmp_path):
    path = tmp_path / "h.json"
    cfg = ExperimentConfig(budget=20, metric="euclidean")
    save_history_json(path, entries(), config=cfg)
    back = load_history_json(path)
    assert back == entries()
    doc = json.loads(path.read_text())
    assert doc["config_hash"] == cfg.config_hash()


def test_curve_csv_blank_for_unknown_accuracy(tmp_path):
    path = tmp_path / "curve.csv"
    write_curve_csv(path, entries())
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["iteration", "n_labeled", "accuracy", "fit_seconds",
                       "select_seconds", "method"]
    assert rows[1][2] == "0.5"
    assert rows[2][2] == ""


def test_summarize_totals_and_cycles():
    rows = summarize({"localmax": entries()})
    assert rows == [{"method": "localmax", "seconds": 1.5, "accuracy": None,
                     "n_labeled": 15, "cycles": 1}]
    # list input falls back to the last entry's method tag
    by_tag = summarize([entries()])
    assert by_tag[0]["method"] == "localmax"
    named = summarize([entries()], names=["mine"])
    assert named[0]["method"] == "mine"
    assert summarize({"empty": []}) == [{"method": "empty", "seconds": 0,
                                         "accuracy": None, "n_labeled": 0,
                                         "cycles": 0}]


def test_summary_csv(tmp_path):
    path = tmp_path / "summary.csv"
    write_summary_csv(path, {"a": entries()})
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[1][0] == "a"
    assert float(rows[1][1]) == 1.5
    assert rows[1][2] == ""  # final entry had no accuracy
