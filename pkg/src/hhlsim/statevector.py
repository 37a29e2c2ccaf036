"""Multi-register statevector simulation: state prep, gates, sampling.

Register convention (fixed across the whole library):

* the global basis index is little-endian in qubits, i.e. qubit 0 is the
  least significant bit of the index;
* qubits ``[0, n_input)`` hold the input (solution) register, qubits
  ``[n_input, n_input + n_clock)`` hold the phase-estimation clock, and the
  single top qubit is the post-selection ancilla.

So a global index decomposes as
``g = input + (clock << n_input) + (ancilla << (n_input + n_clock))``.

Gates are applied by direct index arithmetic on the dense amplitude array
(reshape + tensordot); there is no circuit IR.  All operations return fresh
``StateVector`` objects and never mutate their inputs, so completed states
are safe to share between threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AcceptanceTooLow,
    ClockNotUncomputed,
    DimensionMismatch,
    NotUnitary,
    QubitIndexOutOfRange,
    ZeroVector,
)

UNITARY_ATOL = 1e-10


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit counts for the input | clock | ancilla register split."""

    n_input: int
    n_clock: int
    n_ancilla: int = 1

    def __post_init__(self):
        if self.n_input < 1 or self.n_clock < 1:
            raise ValueError("need at least one input and one clock qubit")
        if self.n_ancilla != 1:
            raise ValueError("layout uses exactly one ancilla qubit")

    @property
    def total_qubits(self) -> int:
        return self.n_input + self.n_clock + self.n_ancilla

    @property
    def dim(self) -> int:
        return 1 << self.total_qubits

    @property
    def input_qubits(self) -> list[int]:
        return list(range(self.n_input))

    @property
    def clock_qubits(self) -> list[int]:
        return list(range(self.n_input, self.n_input + self.n_clock))

    @property
    def ancilla_qubit(self) -> int:
        return self.n_input + self.n_clock


@dataclass(frozen=True)
class StateVector:
    """Dense amplitudes over the full register, unit 2-norm."""

    amplitudes: np.ndarray
    layout: RegisterLayout

    def __post_init__(self):
        if self.amplitudes.shape != (self.layout.dim,):
            raise DimensionMismatch(
                f"amplitude vector has shape {self.amplitudes.shape}, "
                f"layout expects ({self.layout.dim},)"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def registers_view(self) -> np.ndarray:
        """Amplitudes reshaped to axes (ancilla, clock, input)."""
        lay = self.layout
        return self.amplitudes.reshape(2, 1 << lay.n_clock, 1 << lay.n_input)


@dataclass(frozen=True)
class MeasurementHistogram:
    """Input-register outcome counts among ancilla=1 shots.

    ``accepted`` is the number of kept (ancilla=1) shots, which equals the
    sum of ``counts``; ``total_executions`` additionally counts the rejected
    ancilla=0 repetitions of the circuit.
    """

    counts: dict[int, int]
    accepted: int
    total_executions: int
    n_input: int = field(default=1)

    def __post_init__(self):
        if sum(self.counts.values()) != self.accepted:
            raise ValueError("counts do not sum to the accepted-shot total")
        if self.accepted > self.total_executions:
            raise ValueError("accepted shots exceed total executions")

    def acceptance_rate(self) -> float:
        return self.accepted / self.total_executions


def prepare_b_state(b, layout: RegisterLayout) -> StateVector:
    """|b/||b||> on the input register, clock and ancilla in |0>."""
    vec = np.asarray(b, dtype=complex)
    if vec.ndim != 1 or vec.shape[0] != (1 << layout.n_input):
        raise DimensionMismatch(
            f"b has shape {vec.shape}, input register holds {1 << layout.n_input}"
        )
    nrm = float(np.linalg.norm(vec))
    if nrm <= 1e-300:
        raise ZeroVector("cannot amplitude-encode a zero vector")
    amps = np.zeros(layout.dim, dtype=complex)
    amps[: vec.shape[0]] = vec / nrm
    return StateVector(amps, layout)


def _check_targets(targets, n_qubits: int) -> None:
    if len(set(targets)) != len(targets):
        raise QubitIndexOutOfRange(f"duplicate target qubits: {targets}")
    for q in targets:
        if not 0 <= q < n_qubits:
            raise QubitIndexOutOfRange(f"qubit {q} outside [0, {n_qubits})")


def _check_unitary(u: np.ndarray, k: int) -> None:
    if u.shape != (1 << k, 1 << k):
        raise DimensionMismatch(
            f"gate is {u.shape}, expected {(1 << k, 1 << k)} for {k} target(s)"
        )
    dev = np.max(np.abs(u.conj().T @ u - np.eye(1 << k)))
    if dev > UNITARY_ATOL:
        raise NotUnitary(f"max |U^dagger U - I| = {dev:.3e}")


def _apply_matrix(amps: np.ndarray, u: np.ndarray, targets, n_qubits: int) -> np.ndarray:
    """Apply u on the given qubits; targets[j] carries bit j of u's index."""
    k = len(targets)
    tensor = amps.reshape([2] * n_qubits)  # axis i <-> qubit n_qubits-1-i
    # state axes for u's index bits, most significant bit first
    axes = [n_qubits - 1 - q for q in reversed(targets)]
    ut = u.reshape([2] * (2 * k))
    moved = np.tensordot(ut, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(moved, range(k), axes).reshape(-1)


def apply_unitary(state: StateVector, u, targets) -> StateVector:
    """Apply a 2^k x 2^k unitary on an ordered subset of k qubits.

    ``targets[j]`` is the qubit carrying bit j (value 2^j) of the gate's
    row/column index.  The rest of the register is untouched.
    """
    targets = list(targets)
    _check_targets(targets, state.layout.total_qubits)
    mat = np.asarray(u, dtype=complex)
    _check_unitary(mat, len(targets))
    amps = _apply_matrix(state.amplitudes, mat, targets, state.layout.total_qubits)
    return StateVector(amps, state.layout)


def apply_controlled_unitary(state: StateVector, u, control_qubit: int, targets) -> StateVector:
    """Apply u on the targets only where the control qubit is |1>."""
    targets = list(targets)
    _check_targets(targets + [control_qubit], state.layout.total_qubits)
    mat = np.asarray(u, dtype=complex)
    k = len(targets)
    _check_unitary(mat, k)
    # embed as block-diag(I, U) with the control as the top index bit
    dim = 1 << k
    cu = np.eye(2 * dim, dtype=complex)
    cu[dim:, dim:] = mat
    amps = _apply_matrix(
        state.amplitudes, cu, targets + [control_qubit], state.layout.total_qubits
    )
    return StateVector(amps, state.layout)


def sample(state: StateVector, shots_accepted: int, seed: int) -> MeasurementHistogram:
    """Measure the full register repeatedly, keeping ancilla=1 outcomes.

    Draws are repeated until exactly ``shots_accepted`` of them land in the
    ancilla=1 subspace; rejected repetitions only increment
    ``total_executions``.  The rejected-shot count is drawn from the exact
    negative-binomial law of the retry loop instead of simulating each
    rejection, which is distribution-identical and keeps low acceptance
    rates affordable.  Deterministic for a fixed seed.
    """
    if shots_accepted < 1:
        raise ValueError("shots_accepted must be >= 1")
    lay = state.layout
    probs = state.probabilities()
    total = probs.sum()
    anc_split = lay.dim // 2  # indices >= anc_split have ancilla = 1
    p_accept = float(probs[anc_split:].sum() / total)
    if p_accept < 1e-9:
        raise AcceptanceTooLow(f"ancilla=1 probability {p_accept:.3e} < 1e-9")

    rng = np.random.default_rng(seed)
    cond = probs[anc_split:] / probs[anc_split:].sum()
    draws = rng.choice(anc_split, size=shots_accepted, p=cond)
    input_mask = (1 << lay.n_input) - 1
    outcomes = draws & input_mask
    binned = np.bincount(outcomes, minlength=1 << lay.n_input)
    counts = {int(i): int(c) for i, c in enumerate(binned) if c > 0}

    if p_accept >= 1.0:
        rejected = 0
    else:
        rejected = int(rng.negative_binomial(shots_accepted, p_accept))
    return MeasurementHistogram(
        counts=counts,
        accepted=shots_accepted,
        total_executions=shots_accepted + rejected,
        n_input=lay.n_input,
    )


def ancilla_one_probability(state: StateVector) -> float:
    probs = state.probabilities()
    return float(probs[state.layout.dim // 2:].sum())


def read_solution_amplitudes(state: StateVector, min_clock_weight: float = 0.5) -> np.ndarray:
    """Input-register amplitudes conditioned on ancilla=1 and clock=0.

    Requires the clock register to have been uncomputed: the clock=0 slice
    must hold at least ``min_clock_weight`` of the ancilla=1 probability
    mass.  Off-grid eigenphases leave a genuine percent-level remainder on
    clock!=0 even after an exact uncompute, so the default gate is a coarse
    0.5 rather than a roundoff-level threshold; it still rejects states
    whose clock was never uncomputed.  Returns the conditional amplitudes
    renormalized to unit norm, phases (signs) preserved.
    """
    lay = state.layout
    view = state.registers_view()
    anc1 = view[1]
    total = float(np.sum(np.abs(anc1) ** 2))
    if total <= 0.0:
        raise ClockNotUncomputed("ancilla=1 subspace carries no amplitude")
    clock0 = anc1[0]
    weight = float(np.sum(np.abs(clock0) ** 2))
    if weight < min_clock_weight * total:
        raise ClockNotUncomputed(
            f"clock=0 holds {weight / total:.3e} of the ancilla=1 mass, "
            f"need >= {min_clock_weight}"
        )
    return clock0 / np.sqrt(weight)
