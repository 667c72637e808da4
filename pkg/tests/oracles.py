"""Reference implementations that share no code path with the package."""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

_H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]])


def single_qubit_matrix(u: np.ndarray, q: int, n: int) -> np.ndarray:
    """Full 2**n matrix of ``u`` on qubit q; qubit 0 is the least significant bit."""
    out = np.array([[1.0]])
    for k in reversed(range(n)):
        out = np.kron(out, u if k == q else np.eye(2))
    return out


def gate_matrix(kind: str, n: int, qubits=(), target=None) -> np.ndarray:
    dim = 1 << n
    if kind == "H":
        return single_qubit_matrix(_H, target, n)
    if kind == "X":
        return single_qubit_matrix(_X, target, n)
    mat = np.zeros((dim, dim))
    for j in range(dim):
        ctrl = all((j >> q) & 1 for q in qubits)
        if kind == "MCZ":
            mat[j, j] = -1.0 if ctrl else 1.0
        else:
            mat[j ^ (1 << target) if ctrl else j, j] = 1.0
    return mat


def circuit_matrix(gates, n: int) -> np.ndarray:
    u = np.eye(1 << n)
    for g in gates:
        u = gate_matrix(g.kind.value, n, g.qubits, g.target) @ u
    return u


def anf_subsets(target_signs) -> set[tuple[int, ...]]:
    """Subsets S with odd XOR of f over all T within S, f(j) = [sign_j == -1].

    These are exactly the monomials of the algebraic normal form of f, i.e. the
    MCZ gates whose product turns the all-(+1) vector into the target signs.
    """
    t = np.asarray(target_signs)
    m = t.size
    n = m.bit_length() - 1
    f = (t == -1).astype(int)
    out = set()
    for j in range(1, m):
        parity = 0
        for k in range(m):
            if k & j == k:
                parity ^= int(f[k])
        if parity:
            out.add(tuple(q for q in range(n) if (j >> q) & 1))
    return out


def auc_pairs(readouts, positive) -> Fraction:
    """Exhaustive positive/negative pair count with affinity 1 - readout."""
    aff = [1.0 - float(r) for r in readouts]
    pos = [a for a, p in zip(aff, positive) if p]
    neg = [a for a, p in zip(aff, positive) if not p]
    score = Fraction(0)
    for a, b in itertools.product(pos, neg):
        score += 1 if a > b else Fraction(1, 2) if a == b else 0
    return score / (len(pos) * len(neg))


def count_confusion(preds, truths) -> tuple[int, int, int, int]:
    tp = fp = fn = tn = 0
    for p, t in zip(preds, truths):
        if p and t:
            tp += 1
        elif p:
            fp += 1
        elif t:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn
