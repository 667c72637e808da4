"""Two-class confusion matrix and the performance measures reported per task.

Division-by-zero cases return ``None`` instead of raising, so degenerate
tasks (a single-class OvO diagonal, a fold without positives) never abort a
grid run.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricsReport:
    accuracy: Optional[float]
    recall: Optional[float]
    precision: Optional[float]
    f1: Optional[float]
    auc: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def positive_mask(labels) -> np.ndarray:
    """Booleans (True = positive) from bools, 0/1 ints or ``Label`` values."""
    if isinstance(labels, np.ndarray) and labels.dtype == bool:
        return labels
    out = []
    for v in labels:
        if isinstance(v, str):
            if v not in ("positive", "negative"):
                raise ValueError(f"unknown label {v!r}")
            out.append(v == "positive")
        else:
            out.append(bool(v))
    return np.asarray(out, dtype=bool)


def confusion(predictions, truths) -> ConfusionMatrix:
    pred = positive_mask(predictions)
    true = positive_mask(truths)
    if pred.shape != true.shape:
        raise ValueError(f"{pred.size} predictions vs {true.size} truths")
    if pred.size == 0:
        raise ValueError("need at least one instance")
    return ConfusionMatrix(
        tp=int(np.sum(pred & true)),
        fp=int(np.sum(pred & ~true)),
        fn=int(np.sum(~pred & true)),
        tn=int(np.sum(~pred & ~true)),
    )


def _ratio(num: int, den: int) -> Optional[float]:
    return None if den == 0 else num / den


def accuracy(cm: ConfusionMatrix) -> Optional[float]:
    return _ratio(cm.tp + cm.tn, cm.total)


def tpr(cm: ConfusionMatrix) -> Optional[float]:
    """True positive rate, a.k.a. recall or sensitivity."""
    return _ratio(cm.tp, cm.tp + cm.fn)


def ppv(cm: ConfusionMatrix) -> Optional[float]:
    """Positive predictive value, a.k.a. precision."""
    return _ratio(cm.tp, cm.tp + cm.fp)


def f1(cm: ConfusionMatrix) -> Optional[float]:
    return _ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn)


def roc_auc(readouts, truths) -> Optional[float]:
    """Area under the ROC curve with affinity ``1 - readout`` for the positive class.

    Computed as the Mann-Whitney statistic over average ranks, which counts a
    tied positive/negative pair as one half.
    """
    r = np.asarray(readouts, dtype=float)
    true = positive_mask(truths)
    if r.shape != true.shape:
        raise ValueError(f"{r.size} readouts vs {true.size} truths")
    n_pos = int(true.sum())
    n_neg = true.size - n_pos
    if n_pos == 0 or n_neg == 0:
        return None
    affinity = 1.0 - r
    _, inverse, counts = np.unique(affinity, return_inverse=True, return_counts=True)
    # average 1-based rank of each distinct value
    upper = np.cumsum(counts)
    avg_rank = upper - (counts - 1) / 2.0
    rank_sum = float(avg_rank[inverse][true].sum())
    u = rank_sum - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def report(predictions, truths, readouts=None) -> MetricsReport:
    cm = confusion(predictions, truths)
    auc = None if readouts is None else roc_auc(readouts, truths)
    return MetricsReport(accuracy(cm), tpr(cm), ppv(cm), f1(cm), auc)
