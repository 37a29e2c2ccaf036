"""Hamiltonian simulation: exp(i A t) exactly or by first-order Trotter.

The Trotter path decomposes A into Pauli strings, exponentiates each term
in closed form (every Pauli string squares to the identity, so
``exp(i a P dt) = cos(a dt) I + i sin(a dt) P``), and multiplies the terms
in a fixed lexicographic-label order.  Accuracy is controlled purely by the
slice count.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product

import numpy as np

from .errors import NotPowerOfTwo
from .numerics import frobenius, matrix_exp_hermitian, require_hermitian

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

COEFF_CUTOFF = 1e-14


@dataclass(frozen=True)
class PauliTerm:
    """A coefficient times a Pauli string; label characters act left = high qubit."""

    label: str
    coefficient: float

    def matrix(self) -> np.ndarray:
        return reduce(np.kron, (_PAULI[ch] for ch in self.label))


@dataclass(frozen=True)
class EvolutionSpec:
    """How to realize exp(i A t): evolution time, slice count, and mode."""

    t: float
    slices: int = 6
    mode: str = "exact"

    def __post_init__(self):
        if not np.isfinite(self.t):
            raise ValueError("evolution time must be finite")
        if self.slices < 1:
            raise ValueError("slice count must be >= 1")
        if self.mode not in ("exact", "trotter"):
            raise ValueError(f"unknown evolution mode {self.mode!r}")


def _num_qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise NotPowerOfTwo(f"dimension {dim} is not a power of two >= 2")
    return n


def pauli_decompose(a) -> list[PauliTerm]:
    """Expand a Hermitian matrix as sum_k c_k P_k over Pauli strings.

    Coefficients are trace(P A) / 2^n; they are real for Hermitian input.
    Terms with |c| <= 1e-14 are dropped, and the remaining terms come back
    in lexicographic label order.
    """
    m = require_hermitian(a)
    n = _num_qubits(m.shape[0])
    dim = m.shape[0]
    terms = []
    for chars in product("IXYZ", repeat=n):
        label = "".join(chars)
        p = reduce(np.kron, (_PAULI[ch] for ch in chars))
        coeff = np.trace(p @ m) / dim
        if abs(coeff) > COEFF_CUTOFF:
            terms.append(PauliTerm(label, float(coeff.real)))
    return terms


def _trotter_step(terms: list[PauliTerm], dt: float, dim: int) -> np.ndarray:
    """One Lie-Trotter slice: the term listed first acts first."""
    u = np.eye(dim, dtype=complex)
    for term in terms:
        angle = term.coefficient * dt
        factor = np.cos(angle) * np.eye(dim) + 1j * np.sin(angle) * term.matrix()
        u = factor @ u
    return u


def evolution_unitary(a, spec: EvolutionSpec) -> np.ndarray:
    """exp(i A t), exactly or as an r-slice first-order Trotter product."""
    if spec.mode == "exact":
        return matrix_exp_hermitian(a, spec.t)
    m = require_hermitian(a)
    terms = pauli_decompose(m)
    dim = m.shape[0]
    step = _trotter_step(terms, spec.t / spec.slices, dim)
    return np.linalg.matrix_power(step, spec.slices)


def controlled_power_unitary(a, spec: EvolutionSpec, j: int) -> np.ndarray:
    """The U^(2^j) block used by phase estimation.

    In exact mode this is exp(i A t 2^j).  In Trotter mode the time-t
    product is reused 2^j times, mirroring a circuit that repeats the same
    controlled-U block, so the error stays that of a single time-t product.
    """
    if j < 0:
        raise ValueError("power index j must be >= 0")
    if spec.mode == "exact":
        return matrix_exp_hermitian(a, spec.t * (1 << j))
    base = evolution_unitary(a, spec)
    return np.linalg.matrix_power(base, 1 << j)


def reconstruction_error(a, terms: list[PauliTerm]) -> float:
    """Frobenius distance between A and its Pauli expansion, relative to ||A||."""
    m = np.asarray(a, dtype=complex)
    total = sum(term.coefficient * term.matrix() for term in terms)
    scale = max(frobenius(m), 1e-300)
    return frobenius(m - total) / scale
