"""Dense statevector simulation for H, X, multi-controlled Z and multi-controlled X.

Qubit q is bit q of the basis index (qubit 0 is the least significant bit), so
pixel j of a pattern corresponds to basis state |j>.

States are complex128 numpy arrays whose last axis has length 2**n.  Leading
axes are treated as a batch: one gate application updates every state in the
batch, which is how whole datasets are evaluated against a fixed weight vector.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

MAX_QUBITS = 16
NORM_TOL = 1e-12
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class CapacityError(ValueError):
    """Requested register size is outside the supported range."""


class GateError(ValueError):
    """A gate is malformed or does not fit the register."""


class GateKind(str, Enum):
    H = "H"
    X = "X"
    MCZ = "MCZ"
    MCX = "MCX"


@dataclass(frozen=True)
class Gate:
    """One gate.

    ``H``/``X`` use ``target`` only.  ``MCZ`` uses ``qubits`` as the set it acts
    on (the phase flips when every qubit in the set is 1).  ``MCX`` uses
    ``qubits`` as controls and ``target`` as the flipped qubit.
    """

    kind: GateKind
    qubits: tuple[int, ...] = ()
    target: int | None = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        qubits = tuple(sorted(int(q) for q in self.qubits))
        object.__setattr__(self, "qubits", qubits)
        if len(set(qubits)) != len(qubits):
            raise GateError(f"repeated qubit in {kind.value} {qubits}")
        if any(q < 0 for q in qubits) or (self.target is not None and self.target < 0):
            raise GateError("qubit indices must be non-negative")
        if kind in (GateKind.H, GateKind.X):
            if self.target is None or qubits:
                raise GateError(f"{kind.value} takes exactly one target qubit")
        elif kind is GateKind.MCZ:
            if not qubits or self.target is not None:
                raise GateError("MCZ needs a non-empty qubit set and no target")
        else:
            if not qubits or self.target is None:
                raise GateError("MCX needs non-empty controls and a target")
            if self.target in qubits:
                raise GateError("MCX target must not be a control")

    @property
    def support(self) -> tuple[int, ...]:
        """All qubits the gate touches."""
        extra = () if self.target is None else (self.target,)
        return tuple(sorted(self.qubits + extra))

    def __str__(self) -> str:
        if self.kind in (GateKind.H, GateKind.X):
            return f"{self.kind.value} q{self.target}"
        body = " ".join(f"q{q}" for q in self.qubits)
        if self.kind is GateKind.MCZ:
            return f"MCZ {body}"
        return f"MCX {body} -> q{self.target}"


def H(q: int) -> Gate:
    return Gate(GateKind.H, target=q)


def X(q: int) -> Gate:
    return Gate(GateKind.X, target=q)


def MCZ(qubits) -> Gate:
    return Gate(GateKind.MCZ, qubits=tuple(qubits))


def MCX(controls, target: int) -> Gate:
    return Gate(GateKind.MCX, qubits=tuple(controls), target=target)


@dataclass
class QuantumCircuit:
    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        _check_capacity(self.num_qubits)
        self.gates = list(self.gates)
        for g in self.gates:
            _check_fits(g, self.num_qubits)

    def append(self, gate: Gate) -> None:
        _check_fits(gate, self.num_qubits)
        self.gates.append(gate)

    def extend(self, gates) -> None:
        for g in gates:
            self.append(g)

    def __len__(self) -> int:
        return len(self.gates)

    def dump(self) -> str:
        """One gate per line, e.g. ``MCX q0 q1 q2 q3 -> q6``."""
        return "".join(f"{g}\n" for g in self.gates)


def _parse_qubit(tok: str) -> int:
    if not tok.startswith("q") or not tok[1:].isdigit():
        raise GateError(f"bad qubit token {tok!r}")
    return int(tok[1:])


def parse_circuit(text: str, num_qubits: int) -> QuantumCircuit:
    """Inverse of :meth:`QuantumCircuit.dump`."""
    gates = []
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks:
            continue
        kind, rest = toks[0], toks[1:]
        try:
            if kind in ("H", "X"):
                if len(rest) != 1:
                    raise GateError(f"{kind} takes one qubit")
                gates.append(Gate(GateKind(kind), target=_parse_qubit(rest[0])))
            elif kind == "MCZ":
                gates.append(MCZ([_parse_qubit(t) for t in rest]))
            elif kind == "MCX":
                if len(rest) < 3 or rest[-2] != "->":
                    raise GateError("MCX syntax is 'MCX q.. -> qT'")
                gates.append(MCX([_parse_qubit(t) for t in rest[:-2]], _parse_qubit(rest[-1])))
            else:
                raise GateError(f"unknown gate {kind!r}")
        except GateError as exc:
            raise GateError(f"line {lineno}: {exc}") from None
    return QuantumCircuit(num_qubits, gates)


def _check_capacity(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise CapacityError(f"register size {n} outside 1..{MAX_QUBITS}")


def _check_fits(gate: Gate, n: int) -> None:
    if any(q >= n for q in gate.support):
        raise GateError(f"{gate} does not fit a {n}-qubit register")


def _num_qubits_of(state: np.ndarray) -> int:
    dim = state.shape[-1]
    n = dim.bit_length() - 1
    if dim != 1 << n or n < 1:
        raise CapacityError(f"state length {dim} is not 2**n")
    return n


@lru_cache(maxsize=None)
def _mask(n: int, bits: int) -> np.ndarray:
    """Boolean selector of basis indices whose bits include ``bits``."""
    idx = np.arange(1 << n)
    return (idx & bits) == bits


@lru_cache(maxsize=None)
def _mcx_pairs(n: int, controls: int, target: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(1 << n)
    low = idx[((idx & controls) == controls) & ((idx >> target) & 1 == 0)]
    return low, low | (1 << target)


def _bitmask(qubits) -> int:
    m = 0
    for q in qubits:
        m |= 1 << q
    return m


def new_state(n: int) -> np.ndarray:
    """|0...0> on n qubits."""
    _check_capacity(n)
    s = np.zeros(1 << n, dtype=np.complex128)
    s[0] = 1.0
    return s


def _apply_inplace(state: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    batch = state.shape[:-1]
    if gate.kind is GateKind.H or gate.kind is GateKind.X:
        q = gate.target
        view = state.reshape(*batch, 1 << (n - q - 1), 2, 1 << q)
        a = view[..., 0, :].copy()
        b = view[..., 1, :]
        if gate.kind is GateKind.X:
            view[..., 0, :] = b
            view[..., 1, :] = a
        else:
            view[..., 0, :] = (a + b) * _INV_SQRT2
            view[..., 1, :] = (a - b) * _INV_SQRT2
        return state
    if gate.kind is GateKind.MCZ:
        state[..., _mask(n, _bitmask(gate.qubits))] *= -1
        return state
    low, high = _mcx_pairs(n, _bitmask(gate.qubits), gate.target)
    tmp = state[..., low]
    state[..., low] = state[..., high]
    state[..., high] = tmp
    return state


def apply_gate(state: np.ndarray, gate: Gate) -> np.ndarray:
    """Return a new state with ``gate`` applied; the input is left untouched."""
    state = np.asarray(state, dtype=np.complex128)
    n = _num_qubits_of(state)
    _check_fits(gate, n)
    return _apply_inplace(state.copy(), gate, n)


def apply_gates(state: np.ndarray, gates) -> np.ndarray:
    """Apply a gate sequence to a (possibly batched) state; returns a new array."""
    out = np.array(state, dtype=np.complex128, copy=True)
    n = _num_qubits_of(out)
    for g in gates:
        _check_fits(g, n)
        _apply_inplace(out, g, n)
    return out


def run(circuit: QuantumCircuit) -> np.ndarray:
    """Apply the circuit's gates in order to |0...0>."""
    return apply_gates(new_state(circuit.num_qubits), circuit.gates)


def prob_one(state: np.ndarray, q: int):
    """Probability that measuring qubit q gives 1 (batched over leading axes)."""
    state = np.asarray(state)
    n = _num_qubits_of(state)
    if not 0 <= q < n:
        raise GateError(f"qubit {q} outside a {n}-qubit register")
    sel = state.reshape(*state.shape[:-1], 1 << (n - q - 1), 2, 1 << q)[..., 1, :]
    p = np.sum(np.abs(sel) ** 2, axis=(-2, -1))
    p = np.clip(p, 0.0, 1.0)
    return float(p) if p.ndim == 0 else p


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Deterministic generator for ``seed``; ``key`` selects an independent stream."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def sample_ones(p: float, shots: int, rng: np.random.Generator) -> int:
    """Number of 1 outcomes in ``shots`` independent measurements with P(1) = p."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if not -NORM_TOL <= p <= 1 + NORM_TOL:
        raise ValueError(f"probability {p} outside [0, 1]")
    return int(rng.binomial(shots, min(max(p, 0.0), 1.0)))
