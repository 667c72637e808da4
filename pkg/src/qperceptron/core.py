"""Binary patterns, their +-1 sign encoding, and integer inner products.

Patterns are carried around as 1-D numpy integer arrays.  A pattern of
length m = 2**N with entries in {0, 1} is a *bit pattern*; the same length
with entries in {-1, +1} is a *sign vector*.  Bit 0 maps to +1 and bit 1 maps
to -1.  Images are flattened row-major from the top-left pixel.
"""
from __future__ import annotations

import numpy as np


class InvalidPatternError(ValueError):
    """A pattern length or entry violates the bit/sign invariants."""


class DimensionError(ValueError):
    """Two vectors that must share a length do not."""


def is_power_of_two(m: int) -> bool:
    return m >= 2 and (m & (m - 1)) == 0


def num_qubits_for(m: int) -> int:
    """Number of encoding qubits N for a pattern of length m = 2**N."""
    if not is_power_of_two(m):
        raise InvalidPatternError(f"pattern length {m} is not a power of two >= 2")
    return m.bit_length() - 1


def as_bits(bits) -> np.ndarray:
    """Validate and return a bit pattern as an int8 array."""
    arr = np.asarray(bits)
    if arr.ndim != 1:
        raise InvalidPatternError(f"expected a 1-D pattern, got shape {arr.shape}")
    num_qubits_for(arr.size)
    if not np.all((arr == 0) | (arr == 1)):
        raise InvalidPatternError("bit pattern entries must be 0 or 1")
    return arr.astype(np.int8)


def as_signs(signs) -> np.ndarray:
    """Validate and return a sign vector as an int8 array."""
    arr = np.asarray(signs)
    if arr.ndim != 1:
        raise InvalidPatternError(f"expected a 1-D sign vector, got shape {arr.shape}")
    num_qubits_for(arr.size)
    if not np.all((arr == 1) | (arr == -1)):
        raise InvalidPatternError("sign vector entries must be -1 or +1")
    return arr.astype(np.int8)


def map_to_signs(bits) -> np.ndarray:
    """(-1)**bit for every entry: 0 -> +1, 1 -> -1."""
    return (1 - 2 * as_bits(bits)).astype(np.int8)


def map_to_bits(signs) -> np.ndarray:
    """Inverse of :func:`map_to_signs`."""
    return ((1 - as_signs(signs)) // 2).astype(np.int8)


def dot(a, b) -> int:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape} vs {b.shape}")
    return int(np.dot(a.astype(np.int64), b.astype(np.int64)))
