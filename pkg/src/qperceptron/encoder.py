"""Compile sign vectors into hypergraph-state circuits and assemble the perceptron.

A sign vector s of length m = 2**N is loaded as (1/sqrt(m)) * sum_j s_j |j>
by Hadamards on every qubit followed by one multi-controlled Z per qubit
subset whose sign has to be corrected.  Subsets are visited by increasing
cardinality (ties by the subset's basis index), so every subset is handled
after all of its proper subsets and each needed MCZ is emitted exactly once.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .core import DimensionError, as_signs, num_qubits_for
from .simulator import MCX, MCZ, Gate, GateKind, H, QuantumCircuit, X


@dataclass(frozen=True)
class CompiledEncoding:
    sign_gates: tuple[Gate, ...]
    # True when signs[0] was -1 and the whole vector was negated first.
    global_flip: bool


@lru_cache(maxsize=None)
def ordered_subsets(n: int) -> tuple[tuple[int, ...], ...]:
    """Non-empty subsets of range(n) by cardinality, then by basis index."""
    out = []
    for k in range(1, n + 1):
        out += sorted(combinations(range(n), k), key=lambda s: sum(1 << q for q in s))
    return tuple(out)


def hypergraph_gates(signs) -> CompiledEncoding:
    s = as_signs(signs)
    n = num_qubits_for(s.size)
    flip = bool(s[0] == -1)
    target = -s if flip else s
    idx = np.arange(s.size)
    cur = np.ones(s.size, dtype=np.int8)
    gates = []
    for subset in ordered_subsets(n):
        j = sum(1 << q for q in subset)
        if cur[j] != target[j]:
            gates.append(MCZ(subset))
            cur[(idx & j) == j] *= -1
    assert np.array_equal(cur, target)
    return CompiledEncoding(tuple(gates), flip)


def build_Ui(signs) -> QuantumCircuit:
    """Circuit taking |0...0> to the hypergraph state of ``signs`` (up to global sign)."""
    s = as_signs(signs)
    n = num_qubits_for(s.size)
    return QuantumCircuit(n, [H(q) for q in range(n)] + list(hypergraph_gates(s).sign_gates))


def build_Uw(signs) -> QuantumCircuit:
    """Circuit mapping the hypergraph state of ``signs`` onto |1...1>."""
    s = as_signs(signs)
    n = num_qubits_for(s.size)
    gates = list(hypergraph_gates(s).sign_gates)
    gates += [H(q) for q in range(n)]
    gates += [X(q) for q in range(n)]
    return QuantumCircuit(n, gates)


def build_perceptron_circuit(inputs, weights) -> QuantumCircuit:
    """U_i, then U_w, then a NOT on the ancilla (qubit N) controlled by all N encoding qubits."""
    i = as_signs(inputs)
    w = as_signs(weights)
    if i.size != w.size:
        raise DimensionError(f"input length {i.size} != weight length {w.size}")
    n = num_qubits_for(i.size)
    circ = QuantumCircuit(n + 1)
    circ.extend(build_Ui(i).gates)
    circ.extend(build_Uw(w).gates)
    circ.append(MCX(range(n), n))
    return circ


@dataclass(frozen=True)
class CircuitStats:
    gate_count: int
    layer_count: int
    max_control_arity: int


def circuit_stats(circuit: QuantumCircuit) -> CircuitStats:
    """Gate count, greedy ASAP layer count, and the widest MCZ set / MCX control set."""
    frontier: dict[int, int] = {}
    layers = 0
    arity = 0
    for g in circuit.gates:
        layer = 1 + max((frontier.get(q, 0) for q in g.support), default=0)
        for q in g.support:
            frontier[q] = layer
        layers = max(layers, layer)
        if g.kind in (GateKind.MCZ, GateKind.MCX):
            arity = max(arity, len(g.qubits))
    return CircuitStats(len(circuit.gates), layers, arity)
