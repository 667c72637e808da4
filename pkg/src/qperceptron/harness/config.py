"""Experiment configuration: built-in defaults < JSON config file < CLI flags."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

from ..perceptron import Hyperparams

DATASETS = ("digits", "semeion")
VALIDATIONS = ("resubstitution", "holdout")
TASKS = ("single", "ovo", "ova")
FORMATS = ("json", "csv", "markdown")
DEFAULT_CUTOFF = {"digits": 10, "semeion": 1}

_HP_KEYS = tuple(f.name for f in fields(Hyperparams))


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str = "digits"
    train_path: Optional[str] = None
    test_path: Optional[str] = None
    validation: str = "resubstitution"
    task: str = "ovo"
    pos: Optional[int] = None
    neg: Optional[int] = None
    hyperparams: Hyperparams = field(default_factory=Hyperparams)
    # None picks 10 for digits and 1 (identity on 0/1 data) for semeion
    cutoff: Optional[int] = None
    out: Optional[str] = None
    formats: tuple[str, ...] = ("json", "csv", "markdown")
    workers: int = 1

    def __post_init__(self):
        if self.dataset not in DATASETS:
            raise ValueError(f"dataset must be one of {DATASETS}")
        if self.validation not in VALIDATIONS:
            raise ValueError(f"validation must be one of {VALIDATIONS}")
        if self.task not in TASKS:
            raise ValueError(f"task must be one of {TASKS}")
        if self.validation == "holdout" and not (self.train_path and self.test_path):
            raise ValueError("holdout validation needs both train_path and test_path")
        if self.validation == "resubstitution" and not (self.train_path or self.test_path):
            raise ValueError("resubstitution needs a data path (test_path or train_path)")
        if self.task == "single" and self.pos is None:
            raise ValueError("a single task needs a positive class")
        for name in ("pos", "neg"):
            v = getattr(self, name)
            if v is not None and not 0 <= v <= 9:
                raise ValueError(f"{name} class {v} outside 0..9")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise ValueError(f"unknown output formats {sorted(bad)}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        object.__setattr__(self, "formats", tuple(self.formats))

    @property
    def effective_cutoff(self) -> int:
        return DEFAULT_CUTOFF[self.dataset] if self.cutoff is None else self.cutoff

    def to_dict(self) -> dict:
        """Flat record (hyperparameters inlined), the same shape a config file uses."""
        d = asdict(self)
        d.update(d.pop("hyperparams"))
        d["formats"] = list(self.formats)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        known = {f.name for f in fields(cls)} | set(_HP_KEYS)
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        hp = Hyperparams(**{k: d.pop(k) for k in _HP_KEYS if k in d})
        if "formats" in d:
            d["formats"] = tuple(d["formats"])
        return cls(hyperparams=hp, **d)


def load_config(path=None, overrides: Optional[dict] = None) -> ExperimentConfig:
    """Merge defaults, an optional JSON file and non-None ``overrides``."""
    merged: dict = {}
    if path is not None:
        data = json.loads(Path(path).read_text())
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        merged.update(data)
    for k, v in (overrides or {}).items():
        if v is not None:
            merged[k] = v
    return ExperimentConfig.from_dict(merged)
