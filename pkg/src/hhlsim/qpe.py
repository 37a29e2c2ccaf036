"""Quantum phase estimation on the clock register, and its exact inverse.

Clock conventions: clock qubit j (the j-th qubit of the clock register,
j = 0 least significant) controls U^(2^j), and the clock integer c read
from the register therefore estimates the eigenphase as
``lambda * t / (2*pi) ~= c / 2^p``.  The inverse QFT is applied as one
dense 2^p x 2^p unitary on the clock subspace; at p <= 9 this is cheap and
sidesteps per-gate phase-ordering bugs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ClockNotZero
from .hamsim import EvolutionSpec, controlled_power_unitary
from .statevector import StateVector, apply_controlled_unitary, apply_unitary

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class ClockReading:
    """A p-bit clock outcome and the eigenvalue estimate it encodes."""

    p: int
    index: int
    lambda_tilde: float

    @classmethod
    def from_index(cls, p: int, index: int, t: float) -> "ClockReading":
        return cls(p=p, index=index, lambda_tilde=(2 * np.pi / t) * index / (1 << p))


def clock_grid(p: int, t: float) -> np.ndarray:
    """Eigenvalue estimates for every clock index 0..2^p-1."""
    return (2 * np.pi / t) * np.arange(1 << p) / (1 << p)


def _inverse_qft_matrix(p: int) -> np.ndarray:
    dim = 1 << p
    j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    return np.exp(-2j * np.pi * j * k / dim) / np.sqrt(dim)


def inverse_qft(state: StateVector, clock_qubits) -> StateVector:
    """Dense inverse Fourier transform on the given qubits."""
    p = len(list(clock_qubits))
    return apply_unitary(state, _inverse_qft_matrix(p), clock_qubits)


def forward_qft(state: StateVector, clock_qubits) -> StateVector:
    p = len(list(clock_qubits))
    return apply_unitary(state, _inverse_qft_matrix(p).conj().T, clock_qubits)


def _clock_zero_weight(state: StateVector) -> float:
    view = state.registers_view()
    return float(np.sum(np.abs(view[:, 0, :]) ** 2))


def apply_qpe(state: StateVector, a, spec: EvolutionSpec) -> StateVector:
    """Write p-bit eigenphase estimates of exp(i A t) into the clock.

    Hadamards on the clock, controlled U^(2^j) blocks, then the inverse
    QFT.  Requires the clock register in |0>^p.
    """
    lay = state.layout
    if _clock_zero_weight(state) < 1.0 - 1e-12:
        raise ClockNotZero("clock register must be |0...0> before QPE")
    out = state
    for q in lay.clock_qubits:
        out = apply_unitary(out, _HADAMARD, [q])
    for j, q in enumerate(lay.clock_qubits):
        u = controlled_power_unitary(a, spec, j)
        out = apply_controlled_unitary(out, u, q, lay.input_qubits)
    return inverse_qft(out, lay.clock_qubits)


def apply_inverse_qpe(state: StateVector, a, spec: EvolutionSpec) -> StateVector:
    """Exact adjoint of apply_qpe: inverse gates in reverse order."""
    lay = state.layout
    out = forward_qft(state, lay.clock_qubits)
    for j, q in reversed(list(enumerate(lay.clock_qubits))):
        u = controlled_power_unitary(a, spec, j)
        out = apply_controlled_unitary(out, u.conj().T, q, lay.input_qubits)
    for q in lay.clock_qubits:
        out = apply_unitary(out, _HADAMARD, [q])
    return out
