"""Serialize experiment results as JSON, CSV and markdown tables."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Optional

import numpy as np

from ..datasets import N_CLASSES
from .experiments import ExperimentResult

HIST_BINS = 20
_TASK_COLUMNS = ("task", "mode", "pos", "neg", "trained", "seed", "n_train", "n_eval",
                 "tp", "fp", "fn", "tn", "accuracy", "recall", "precision", "f1", "auc", "epochs_run")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _md(v: Optional[float]) -> str:
    return "n/a" if v is None else f"{v:.3f}"


def to_json(res: ExperimentResult, include_timing: bool = False) -> str:
    return json.dumps(res.to_dict(include_timing), indent=1, sort_keys=True) + "\n"


def from_json(text: str) -> ExperimentResult:
    return ExperimentResult.from_dict(json.loads(text))


def tasks_csv(res: ExperimentResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_TASK_COLUMNS)
    for t in res.tasks:
        m = t.metrics
        c = t.confusion
        w.writerow([_cell(v) for v in (
            t.name, t.mode, t.pos, t.neg, t.trained, t.seed, t.n_train, t.n_eval,
            c["tp"], c["fp"], c["fn"], c["tn"], m.accuracy, m.recall, m.precision, m.f1, m.auc,
            len(t.history))])
    return buf.getvalue()


def grid_csv(res: ExperimentResult) -> str:
    """11 x 11 table: header row of negative classes, first column of positive classes."""
    if res.grid is None:
        raise ValueError("result has no OvO grid")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["positive\\negative"] + list(range(N_CLASSES)))
    for pos, row in enumerate(res.grid):
        w.writerow([pos] + [_cell(v) for v in row])
    return buf.getvalue()


def readout_histogram(readouts, bins: int = HIST_BINS) -> list[tuple[float, float, int]]:
    """(bin left edge, bin right edge, count) over [0, 1]; the last bin includes 1."""
    counts, edges = np.histogram(np.asarray(readouts, dtype=float), bins=bins, range=(0.0, 1.0))
    return [(float(edges[k]), float(edges[k + 1]), int(counts[k])) for k in range(bins)]


def histogram_csv(readouts, bins: int = HIST_BINS) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bin_left", "bin_right", "count"])
    for row in readout_histogram(readouts, bins):
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def histograms_csv(res: ExperimentResult, bins: int = HIST_BINS) -> str:
    """Per task and true class, the distribution of evaluation readouts."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["task", "true_class", "bin_left", "bin_right", "count"])
    for t in res.tasks:
        if t.readouts is None:
            continue
        r = np.asarray(t.readouts)
        truth = np.asarray(t.truths, dtype=bool)
        for cls, sel in (("positive", truth), ("negative", ~truth)):
            for lo, hi, n in readout_histogram(r[sel], bins):
                w.writerow([t.name, cls, _cell(lo), _cell(hi), n])
    return buf.getvalue()


def markdown(res: ExperimentResult) -> str:
    cfg = res.config
    title = f"{cfg['dataset']} {cfg['validation']}, seed {res.seed}"
    lines = [f"### {title}", ""]
    if res.kind == "ovo":
        lines.append("| Positive \\ Negative | " + " | ".join(map(str, range(N_CLASSES))) + " |")
        lines.append("|---" * (N_CLASSES + 1) + "|")
        for pos, row in enumerate(res.grid):
            lines.append(f"| {pos} | " + " | ".join(_md(v) for v in row) + " |")
    else:
        lines.append("| Positive Class | Negative | Recall | Accuracy | Precision | F1 | AUC |")
        lines.append("|---" * 7 + "|")
        for t in res.tasks:
            m = t.metrics
            neg = "rest" if t.neg is None else str(t.neg)
            lines.append(f"| {t.pos} | {neg} | {_md(m.recall)} | {_md(m.accuracy)} | "
                         f"{_md(m.precision)} | {_md(m.f1)} | {_md(m.auc)} |")
    return "\n".join(lines) + "\n"


def export_results(res: ExperimentResult, out_dir, formats=("json", "csv", "markdown"),
                   include_timing: bool = False) -> list[Path]:
    """Write the requested formats into ``out_dir`` and return the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{res.kind}_{res.config['dataset']}_{res.config['validation']}"
    files: dict[str, str] = {}
    for fmt in formats:
        if fmt == "json":
            files[f"{stem}.json"] = to_json(res, include_timing)
        elif fmt == "csv":
            files[f"{stem}_tasks.csv"] = tasks_csv(res)
            files[f"{stem}_histograms.csv"] = histograms_csv(res)
            if res.grid is not None:
                files[f"{stem}_grid.csv"] = grid_csv(res)
        elif fmt == "markdown":
            files[f"{stem}.md"] = markdown(res)
        else:
            raise ValueError(f"unknown format {fmt!r}")
    written = []
    for name, text in files.items():
        path = out / name
        path.write_text(text)
        written.append(path)
    return written
