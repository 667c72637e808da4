"""Quantum perceptron classifier for binary-attribute image patterns."""

__version__ = "0.1.0"
