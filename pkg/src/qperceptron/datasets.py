"""Loaders for the UCI optdigits and Semeion handwritten-digit files.

optdigits: one instance per line, 64 comma-separated integers in 0..16
followed by the class label (the layout of ``optdigits.tra``/``optdigits.tes``).

Semeion: one instance per line, 256 whitespace-separated 0/1 numerals (often
written as ``1.0000``) followed by a 10-entry one-hot class block.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from .perceptron import Label, LabeledPattern

N_CLASSES = 10


class DatasetParseError(ValueError):
    """A line could not be parsed; the message carries the line number."""


class DatasetValidationError(ValueError):
    """Parsed values violate the dataset's documented ranges."""


@dataclass(frozen=True)
class RawInstance:
    attributes: np.ndarray
    class_label: int


@dataclass(frozen=True)
class Dataset:
    """An immutable table of instances: ``X`` (n, d) integers and ``y`` (n,) class labels."""

    name: str
    X: np.ndarray
    y: np.ndarray
    max_value: int

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.int64)
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise DatasetValidationError(f"inconsistent shapes {X.shape} / {y.shape}")
        if X.shape[1] not in (64, 256):
            raise DatasetValidationError(f"attribute count {X.shape[1]} not in (64, 256)")
        if X.size and (X.min() < 0 or X.max() > self.max_value):
            raise DatasetValidationError(f"attribute values outside 0..{self.max_value}")
        if y.size and (y.min() < 0 or y.max() >= N_CLASSES):
            raise DatasetValidationError("class labels outside 0..9")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return len(self.y)

    def __getitem__(self, k: int) -> RawInstance:
        return RawInstance(self.X[k], int(self.y[k]))

    def __iter__(self) -> Iterator[RawInstance]:
        return (self[k] for k in range(len(self)))

    def concat(self, other: "Dataset", name: Optional[str] = None) -> "Dataset":
        return Dataset(name or f"{self.name}+{other.name}", np.vstack([self.X, other.X]),
                       np.concatenate([self.y, other.y]), max(self.max_value, other.max_value))


def load_optdigits(path) -> Dataset:
    rows, labels = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 65:
                raise DatasetParseError(f"{path}:{lineno}: expected 65 fields, found {len(fields)}")
            try:
                values = [int(f) for f in fields]
            except ValueError:
                raise DatasetParseError(f"{path}:{lineno}: non-integer field") from None
            if any(not 0 <= v <= 16 for v in values[:64]):
                raise DatasetValidationError(f"{path}:{lineno}: attribute outside 0..16")
            if not 0 <= values[64] < N_CLASSES:
                raise DatasetValidationError(f"{path}:{lineno}: label {values[64]} outside 0..9")
            rows.append(values[:64])
            labels.append(values[64])
    return Dataset(Path(path).name, np.array(rows, dtype=np.int64).reshape(-1, 64), np.array(labels), 16)


def _as_binary(tok: str, where: str) -> int:
    try:
        v = float(tok)
    except ValueError:
        raise DatasetParseError(f"{where}: bad numeral {tok!r}") from None
    r = round(v)
    if r not in (0, 1) or abs(v - r) > 1e-9:
        raise DatasetValidationError(f"{where}: value {tok!r} is not 0 or 1")
    return int(r)


def load_semeion(path) -> Dataset:
    rows, labels = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            toks = line.split()
            if not toks:
                continue
            where = f"{path}:{lineno}"
            if len(toks) != 266:
                raise DatasetParseError(f"{where}: expected 266 numerals, found {len(toks)}")
            values = [_as_binary(t, where) for t in toks]
            onehot = values[256:]
            if sum(onehot) != 1:
                raise DatasetValidationError(f"{where}: label block is not one-hot")
            rows.append(values[:256])
            labels.append(onehot.index(1))
    return Dataset(Path(path).name, np.array(rows, dtype=np.int64).reshape(-1, 256), np.array(labels), 1)


def dump_optdigits(data: Dataset) -> str:
    return "".join(",".join(map(str, list(x) + [int(c)])) + "\n" for x, c in zip(data.X, data.y))


def dump_semeion(data: Dataset) -> str:
    lines = []
    for x, c in zip(data.X, data.y):
        onehot = [0] * N_CLASSES
        onehot[int(c)] = 1
        lines.append(" ".join(f"{v}.0000" for v in list(x) + onehot) + "\n")
    return "".join(lines)


def binarize(attributes, cutoff: int = 10) -> np.ndarray:
    """0 where the value is below ``cutoff``, 1 otherwise.  Works on single rows or tables."""
    if isinstance(attributes, RawInstance):
        attributes = attributes.attributes
    return (np.asarray(attributes) >= cutoff).astype(np.int8)


@dataclass(frozen=True)
class Task:
    """A binary task: ``ovo`` (pos vs neg) or ``ova`` (pos vs every other class)."""

    mode: str
    pos: int
    neg: Optional[int] = None

    def __post_init__(self):
        if self.mode not in ("ovo", "ova"):
            raise ValueError(f"unknown task mode {self.mode!r}")
        if not 0 <= self.pos < N_CLASSES:
            raise ValueError(f"positive class {self.pos} outside 0..9")
        if self.mode == "ovo":
            if self.neg is None or not 0 <= self.neg < N_CLASSES:
                raise ValueError("ovo task needs a negative class in 0..9")
        elif self.neg is not None:
            raise ValueError("ova task takes no negative class")

    @property
    def name(self) -> str:
        return f"ovo_{self.pos}_{self.neg}" if self.mode == "ovo" else f"ova_{self.pos}"


def ovo(pos: int, neg: int) -> Task:
    return Task("ovo", pos, neg)


def ova(pos: int) -> Task:
    return Task("ova", pos)


def select_task(data: Dataset, task: Task, cutoff: int = 10) -> list[LabeledPattern]:
    """Binarized, labelled patterns for ``task`` in the dataset's original order.

    ``ovo(k, k)`` yields every class-k instance labelled positive.
    """
    if task.mode == "ovo":
        keep = (data.y == task.pos) | (data.y == task.neg)
    else:
        keep = np.ones(len(data), dtype=bool)
    if not keep.any():
        raise ValueError(f"task {task.name} selects no instances")
    bits = binarize(data.X[keep], cutoff)
    pos = data.y[keep] == task.pos
    return [LabeledPattern(b, Label.POSITIVE if p else Label.NEGATIVE) for b, p in zip(bits, pos)]


@dataclass(frozen=True)
class DatasetStats:
    total_instances: int
    class_counts: tuple[int, ...]
    imbalance_ratio: float


def dataset_stats(data: Dataset) -> DatasetStats:
    """Per-class counts and majority/minority count ratio (rounded to 3 decimals)."""
    if len(data) == 0:
        raise ValueError("empty dataset")
    counts = np.bincount(data.y, minlength=N_CLASSES)
    present = counts[counts > 0]
    ratio = round(float(present.max() / present.min()), 3)
    return DatasetStats(int(counts.sum()), tuple(int(c) for c in counts), ratio)
