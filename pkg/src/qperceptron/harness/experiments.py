"""Experiment orchestration: single tasks, the OvO grid and the OvA sweep.

Every binary task gets its own seed derived from (master seed, task id), so
results do not depend on the order or the process in which tasks run.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from .. import metrics, perceptron
from ..datasets import N_CLASSES, Dataset, Task, load_optdigits, load_semeion, ova, ovo, select_task
from ..perceptron import EpochRecord, Label, TrainedModel
from .config import ExperimentConfig

log = logging.getLogger(__name__)

_MODE_CODE = {"ovo": 0, "ova": 1}


def task_seed(master_seed: int, task: Task) -> int:
    """64-bit seed for ``task``, independent of every other task's stream."""
    key = (_MODE_CODE[task.mode], task.pos, 0 if task.neg is None else task.neg)
    ss = np.random.SeedSequence(master_seed, spawn_key=key)
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class TaskResult:
    name: str
    mode: str
    pos: int
    neg: Optional[int]
    seed: int
    trained: bool
    n_train: int
    n_eval: int
    confusion: dict
    metrics: metrics.MetricsReport
    history: list[EpochRecord] = field(default_factory=list)
    weights: Optional[list[int]] = None
    readouts: Optional[list[float]] = None
    truths: Optional[list[bool]] = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TaskResult":
        d = dict(d)
        d["metrics"] = metrics.MetricsReport(**d["metrics"])
        d["history"] = [EpochRecord(**h) for h in d["history"]]
        return cls(**d)


@dataclass
class ExperimentResult:
    kind: str
    config: dict
    seed: int
    tasks: list[TaskResult]
    grid: Optional[list[list[Optional[float]]]] = None
    wall_time: Optional[float] = None

    @property
    def ova_rows(self) -> list[dict]:
        """Recall, accuracy, precision, F1, AUC per positive class (OvA runs)."""
        return [{"positive": t.pos, "recall": t.metrics.recall, "accuracy": t.metrics.accuracy,
                 "precision": t.metrics.precision, "f1": t.metrics.f1, "auc": t.metrics.auc}
                for t in self.tasks if t.mode == "ova"]

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {"kind": self.kind, "config": self.config, "seed": self.seed,
             "grid": self.grid, "tasks": [t.to_dict() for t in self.tasks]}
        if include_timing:
            d["wall_time"] = self.wall_time
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentResult":
        return cls(kind=d["kind"], config=d["config"], seed=d["seed"],
                   tasks=[TaskResult.from_dict(t) for t in d["tasks"]],
                   grid=d.get("grid"), wall_time=d.get("wall_time"))


def _load(path: str, dataset: str) -> Dataset:
    return load_optdigits(path) if dataset == "digits" else load_semeion(path)


def load_splits(cfg: ExperimentConfig) -> tuple[Dataset, Dataset]:
    """(training set, evaluation set) for the configured validation method.

    Resubstitution uses one set for both, preferring ``test_path`` (for
    optdigits the 1797-instance test partition).
    """
    if cfg.validation == "holdout":
        return _load(cfg.train_path, cfg.dataset), _load(cfg.test_path, cfg.dataset)
    data = _load(cfg.test_path or cfg.train_path, cfg.dataset)
    return data, data


def run_task(train_set: Dataset, eval_set: Dataset, task: Task, cfg: ExperimentConfig) -> TaskResult:
    seed = task_seed(cfg.hyperparams.seed, task)
    cutoff = cfg.effective_cutoff
    eval_data = select_task(eval_set, task, cutoff)
    if task.mode == "ovo" and task.pos == task.neg:
        # a single class: every instance is positive and so is every prediction
        cm = metrics.ConfusionMatrix(len(eval_data), 0, 0, 0)
        rep = metrics.MetricsReport(1.0, 1.0, 1.0, 1.0, None)
        return TaskResult(task.name, task.mode, task.pos, task.neg, seed, False, 0,
                          len(eval_data), asdict(cm), rep)
    train_data = select_task(train_set, task, cutoff)
    hp = perceptron.with_seed(cfg.hyperparams, seed)
    model = perceptron.train(train_data, hp)
    preds, readouts = perceptron.evaluate(model, eval_data)
    truths = [lp.label is Label.POSITIVE for lp in eval_data]
    pred_pos = [p is Label.POSITIVE for p in preds]
    cm = metrics.confusion(pred_pos, truths)
    rep = metrics.report(pred_pos, truths, readouts)
    log.info("%s: accuracy %.3f after %d epochs", task.name, rep.accuracy, len(model.history))
    return TaskResult(task.name, task.mode, task.pos, task.neg, seed, True, len(train_data),
                      len(eval_data), asdict(cm), rep, list(model.history),
                      [int(v) for v in model.weights], [float(r) for r in readouts], truths)


def model_of(result: TaskResult, cfg: ExperimentConfig) -> TrainedModel:
    """Rebuild the trained model of a task result."""
    if result.weights is None:
        raise ValueError(f"task {result.name} was not trained")
    hp = perceptron.with_seed(cfg.hyperparams, result.seed)
    return TrainedModel(np.array(result.weights), hp, list(result.history))


def _run_one(args) -> TaskResult:
    return run_task(*args)


def run_tasks(cfg: ExperimentConfig, tasks: list[Task]) -> list[TaskResult]:
    train_set, eval_set = load_splits(cfg)
    jobs = [(train_set, eval_set, t, cfg) for t in tasks]
    if cfg.workers == 1 or len(jobs) == 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(_run_one, jobs))


def _finish(kind: str, cfg: ExperimentConfig, results: list[TaskResult], start: float,
            grid=None) -> ExperimentResult:
    record = cfg.to_dict()
    # the worker count never changes results, so it stays out of the exported record
    record.pop("workers")
    return ExperimentResult(kind, record, cfg.hyperparams.seed, results, grid,
                            time.perf_counter() - start)


def run_single(cfg: ExperimentConfig) -> ExperimentResult:
    start = time.perf_counter()
    task = ova(cfg.pos) if cfg.neg is None else ovo(cfg.pos, cfg.neg)
    return _finish("single", cfg, run_tasks(cfg, [task]), start)


def run_ovo(cfg: ExperimentConfig) -> ExperimentResult:
    """All 90 ordered (positive, negative) pairs plus the fixed diagonal.

    Each ordered pair is trained on its own; a (j, k) classifier is never
    reused for (k, j).
    """
    start = time.perf_counter()
    tasks = [ovo(p, n) for p in range(N_CLASSES) for n in range(N_CLASSES)]
    results = run_tasks(cfg, tasks)
    grid = [[None] * N_CLASSES for _ in range(N_CLASSES)]
    for r in results:
        grid[r.pos][r.neg] = r.metrics.accuracy
    return _finish("ovo", cfg, results, start, grid)


def run_ova(cfg: ExperimentConfig) -> ExperimentResult:
    start = time.perf_counter()
    return _finish("ova", cfg, run_tasks(cfg, [ova(p) for p in range(N_CLASSES)]), start)


# small selection grid used by scripts/select_hyperparams.py and the acceptance tests
DEFAULT_GRID = {"threshold": (0.1, 0.25, 0.5), "lr": (0.02, 0.05, 0.2)}


@dataclass(frozen=True)
class GridPoint:
    threshold: float
    lr: float
    accuracy: float


def grid_search(cfg: ExperimentConfig, task: Task, grid: Optional[dict] = None) -> list[GridPoint]:
    """Train ``task`` at every (threshold, lr) grid point; lr is used for both classes.

    Returns the points best-first (highest accuracy, ties kept in grid order).
    Selection uses the configured evaluation set, which under resubstitution
    is also the training set.
    """
    grid = grid or DEFAULT_GRID
    train_set, eval_set = load_splits(cfg)
    points = []
    for thr in grid["threshold"]:
        for lr in grid["lr"]:
            hp = replace(cfg.hyperparams, threshold=thr, lr_pos=lr, lr_neg=lr)
            res = run_task(train_set, eval_set, task, replace(cfg, hyperparams=hp))
            points.append(GridPoint(thr, lr, res.metrics.accuracy))
    return sorted(points, key=lambda g: -g.accuracy)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return {"single": run_single, "ovo": run_ovo, "ova": run_ova}[cfg.task](cfg)
