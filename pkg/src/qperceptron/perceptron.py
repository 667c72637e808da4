"""Quantum perceptron: readout, threshold rule, online weight updates, training.

The readout of input i against weights w is the probability of finding the
ancilla in |1> after the perceptron circuit, (w.i / m)**2.  A readout below
the threshold means *positive*; anything else means *negative*.  Training
therefore pushes the weights toward negative patterns (overlap grows) and
toward orthogonality with positive patterns (overlap shrinks toward zero).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import metrics
from .core import DimensionError, as_bits, as_signs, dot, map_to_signs, num_qubits_for
from .encoder import build_perceptron_circuit, build_Ui, build_Uw
from .simulator import MCX, GateKind, apply_gates, new_state, prob_one, run, sample_ones

READOUT_MODES = ("exact", "sampled")
EARLY_STOP_METRICS = ("accuracy", "recall", "f1")


class Label(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class Hyperparams:
    threshold: float = 0.5
    lr_pos: float = 0.05
    lr_neg: float = 0.05
    shots: int = 1000
    readout_mode: str = "exact"
    epochs: int = 10
    early_stop_metric: Optional[str] = None
    early_stop_value: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")
        for name in ("lr_pos", "lr_neg"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {v}")
        if self.shots < 1 or self.epochs < 1:
            raise ValueError("shots and epochs must be positive")
        if self.readout_mode not in READOUT_MODES:
            raise ValueError(f"readout_mode must be one of {READOUT_MODES}")
        if self.early_stop_metric is not None:
            if self.early_stop_metric not in EARLY_STOP_METRICS:
                raise ValueError(f"early_stop_metric must be one of {EARLY_STOP_METRICS}")
            if self.early_stop_value is None or not 0.0 < self.early_stop_value <= 1.0:
                raise ValueError("early_stop_value must lie in (0, 1] when a metric is set")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class LabeledPattern:
    pattern: np.ndarray
    label: Label

    def __post_init__(self):
        object.__setattr__(self, "pattern", as_bits(self.pattern))
        object.__setattr__(self, "label", Label(self.label))


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    updates: int
    accuracy: Optional[float]
    recall: Optional[float]
    precision: Optional[float]
    f1: Optional[float]


@dataclass
class TrainedModel:
    weights: np.ndarray
    hyperparams: Hyperparams
    history: list[EpochRecord] = field(default_factory=list)

    def __post_init__(self):
        self.weights = as_signs(self.weights)


def exact_readout(inputs, weights) -> float:
    """Simulate the full perceptron circuit and return P(ancilla = 1)."""
    circ = build_perceptron_circuit(inputs, weights)
    return prob_one(run(circ), circ.num_qubits - 1)


def sampled_readout(inputs, weights, shots: int, rng: np.random.Generator) -> float:
    """Fraction of ``shots`` ancilla measurements that returned 1."""
    return sample_ones(exact_readout(inputs, weights), shots, rng) / shots


def classify(readout: float, threshold: float) -> Label:
    return Label.POSITIVE if readout < threshold else Label.NEGATIVE


def _flip_count(rate: float, k: int) -> int:
    # round() guards against products like 0.1 * 30 = 3.0000000000000004
    return math.ceil(round(rate * k, 9))


def update_weights(weights, inputs, true_label, hp: Hyperparams, rng: np.random.Generator) -> np.ndarray:
    """New weights after a misclassification of ``inputs``; ``weights`` is not modified.

    A negative pattern read as positive copies ``ceil(lr_neg * |D|)`` randomly
    chosen entries of the pattern into the weights, D being the disagreeing
    positions, so the overlap grows by 2 per flip.

    A positive pattern read as negative flips ``ceil(lr_pos * |S|)`` weights
    that push the overlap toward zero (agreeing positions when the overlap is
    positive, disagreeing ones when negative), capped at ``|w.i| // 2`` flips
    so the overlap never changes sign.
    """
    w = as_signs(weights).copy()
    i = as_signs(inputs)
    if w.size != i.size:
        raise DimensionError(f"weight length {w.size} != input length {i.size}")
    if Label(true_label) is Label.NEGATIVE:
        pool = np.flatnonzero(w != i)
        f = _flip_count(hp.lr_neg, pool.size)
        chosen = rng.choice(pool, size=f, replace=False) if f else pool[:0]
        w[chosen] = i[chosen]
        return w
    d = dot(w, i)
    if d == 0:
        return w
    pool = np.flatnonzero(w == i) if d > 0 else np.flatnonzero(w != i)
    f = min(_flip_count(hp.lr_pos, pool.size), abs(d) // 2)
    chosen = rng.choice(pool, size=f, replace=False) if f else pool[:0]
    w[chosen] = -w[chosen]
    return w


class ReadoutEngine:
    """Circuit-level readouts for a fixed set of inputs against changing weights.

    Each input's U_i state is simulated once and kept; a readout then runs only
    the U_w part, the ancilla NOT and the ancilla measurement.  The MCZ run at
    the start of U_w is diagonal, so it is fused into one phase vector
    (obtained by applying those gates to the all-ones vector) and reused until
    the weights change.
    """

    def __init__(self, signs: np.ndarray):
        signs = np.asarray(signs)
        self.m = signs.shape[1]
        self.n = num_qubits_for(self.m)
        zero = new_state(self.n)
        self.prepared = np.stack([apply_gates(zero, build_Ui(s).gates) for s in signs])
        self._ancilla_not = MCX(range(self.n), self.n)
        self._w_key: Optional[bytes] = None
        self._phase = np.ones(self.m, dtype=np.complex128)
        self._rest: list = []

    def _compile(self, weights: np.ndarray) -> None:
        key = weights.tobytes()
        if key == self._w_key:
            return
        gates = build_Uw(weights).gates
        k = 0
        while k < len(gates) and gates[k].kind is GateKind.MCZ:
            k += 1
        self._phase = apply_gates(np.ones(self.m, dtype=np.complex128), gates[:k])
        self._rest = gates[k:]
        self._w_key = key

    def readouts(self, weights, rows=None) -> np.ndarray:
        """Exact P(ancilla = 1) for the selected inputs (all by default)."""
        w = as_signs(weights)
        self._compile(w)
        states = self.prepared if rows is None else self.prepared[rows]
        phi = apply_gates(states * self._phase, self._rest)
        # ancilla is qubit n, the most significant bit, starting in |0>
        full = np.concatenate([phi, np.zeros_like(phi)], axis=-1)
        full = apply_gates(full, [self._ancilla_not])
        return np.atleast_1d(prob_one(full, self.n))

    def readout(self, weights, row: int) -> float:
        return float(self.readouts(weights, [row])[0])


def _stack(data: Sequence[LabeledPattern]) -> tuple[np.ndarray, np.ndarray]:
    if len(data) == 0:
        raise ValueError("training data is empty")
    sizes = {lp.pattern.size for lp in data}
    if len(sizes) != 1:
        raise DimensionError(f"mixed pattern dimensions {sorted(sizes)}")
    signs = np.stack([map_to_signs(lp.pattern) for lp in data])
    positive = np.array([lp.label is Label.POSITIVE for lp in data])
    return signs, positive


def _epoch_metrics(readouts: np.ndarray, positive: np.ndarray, threshold: float) -> metrics.MetricsReport:
    return metrics.report(readouts < threshold, positive)


def train(data: Sequence[LabeledPattern], hp: Hyperparams) -> TrainedModel:
    """Online training; fully determined by the data order and ``hp`` (including its seed)."""
    signs, positive = _stack(data)
    rng = np.random.default_rng(hp.seed)
    m = signs.shape[1]
    w = rng.choice(np.array([-1, 1], dtype=np.int8), size=m)
    engine = ReadoutEngine(signs)
    history: list[EpochRecord] = []
    for epoch in range(1, hp.epochs + 1):
        updates = 0
        for k in rng.permutation(len(signs)):
            r = engine.readout(w, k)
            if hp.readout_mode == "sampled":
                r = sample_ones(r, hp.shots, rng) / hp.shots
            predicted_positive = classify(r, hp.threshold) is Label.POSITIVE
            if predicted_positive != positive[k]:
                label = Label.POSITIVE if positive[k] else Label.NEGATIVE
                w = update_weights(w, signs[k], label, hp, rng)
                updates += 1
        rep = _epoch_metrics(engine.readouts(w), positive, hp.threshold)
        history.append(EpochRecord(epoch, updates, rep.accuracy, rep.recall, rep.precision, rep.f1))
        if hp.early_stop_metric is not None:
            value = getattr(rep, hp.early_stop_metric)
            if value is not None and value >= hp.early_stop_value:
                break
    return TrainedModel(w, hp, history)


def evaluate(model: TrainedModel, data: Sequence[LabeledPattern], mode: str = "exact",
             rng: Optional[np.random.Generator] = None) -> tuple[list[Label], np.ndarray]:
    """Predictions and readouts of ``model`` on ``data``.

    ``mode="sampled"`` draws ``model.hyperparams.shots`` measurements per
    pattern from ``rng`` (seeded from the model's seed when omitted).
    """
    if mode not in READOUT_MODES:
        raise ValueError(f"mode must be one of {READOUT_MODES}")
    signs, _ = _stack(data)
    if signs.shape[1] != model.weights.size:
        raise DimensionError(f"pattern length {signs.shape[1]} != weight length {model.weights.size}")
    readouts = ReadoutEngine(signs).readouts(model.weights)
    if mode == "sampled":
        rng = rng if rng is not None else np.random.default_rng(model.hyperparams.seed)
        shots = model.hyperparams.shots
        readouts = np.array([sample_ones(p, shots, rng) / shots for p in readouts])
    preds = [classify(r, model.hyperparams.threshold) for r in readouts]
    return preds, readouts


def readout_distribution(inputs, weights, shots: int, repeats: int, rng: np.random.Generator) -> np.ndarray:
    """``repeats`` independent sampled readouts of the same circuit."""
    p = exact_readout(inputs, weights)
    return np.array([sample_ones(p, shots, rng) / shots for _ in range(repeats)])




def dumps_model(model: TrainedModel) -> str:
    lines = ["# qperceptron model", f"dimension {model.weights.size}",
             "weights " + " ".join(f"{int(v):+d}" for v in model.weights)]
    for key, value in model.hyperparams.to_dict().items():
        lines.append(f"{key} {'none' if value is None else value}")
    return "\n".join(lines) + "\n"


def loads_model(text: str) -> TrainedModel:
    fields: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, _, value = line.partition(" ")
        fields[key] = value.strip()
    try:
        dim = int(fields.pop("dimension"))
        weights = np.array([int(v) for v in fields.pop("weights").split()], dtype=np.int8)
    except KeyError as exc:
        raise ValueError(f"model record is missing {exc}") from None
    if weights.size != dim:
        raise DimensionError(f"model declares dimension {dim} but lists {weights.size} weights")
    casts = {"threshold": float, "lr_pos": float, "lr_neg": float, "shots": int,
             "readout_mode": str, "epochs": int, "early_stop_metric": str,
             "early_stop_value": float, "seed": int}
    unknown = set(fields) - set(casts)
    if unknown:
        raise ValueError(f"unknown model fields {sorted(unknown)}")
    kwargs = {k: (None if v == "none" else casts[k](v)) for k, v in fields.items()}
    return TrainedModel(weights, Hyperparams(**kwargs))


def save_model(model: TrainedModel, path) -> None:
    Path(path).write_text(dumps_model(model))


def load_model(path) -> TrainedModel:
    return loads_model(Path(path).read_text())


def with_seed(hp: Hyperparams, seed: int) -> Hyperparams:
    return replace(hp, seed=seed)
