"""The full HHL pipeline: QPE, eigenvalue-inversion rotation, uncompute,
readout, and the scale/phase post-processing.

A single solve runs:

1. amplitude-encode b on the input register;
2. phase estimation with exp(i A t) writes eigenvalue estimates into the
   clock register;
3. a rotation conditioned on the clock value c != 0 takes the ancilla from
   |0> to sqrt(1 - C^2/lt^2)|0> + (C/lt)|1>, with lt the grid eigenvalue
   for c (clock value 0 is skipped: 1/lt is singular there, and that mass
   is discarded by post-selection anyway);
4. the phase estimation is uncomputed;
5. readout: either the exact amplitudes conditioned on ancilla=1, clock=0
   (``statevector`` mode, signs preserved) or square roots of
   post-selected measurement frequencies (``sampled`` mode, signs lost);
6. post-processing rescales by f1 = ||b|| / ||A x_sta|| and applies the
   single global phase f2 = arg(<b, A x_sta>).

Per-component signs are deliberately not reconstructed here; recovering
them is the refinement loop's job (see ``refine``).
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    DegenerateScale,
    EmptyHistogram,
    RotationOverflow,
    SpectrumOutOfRange,
)
from .numerics import as_matrix, as_vector, inner, jacobi_eigh, norm2
from .hamsim import EvolutionSpec
from .qpe import apply_inverse_qpe, apply_qpe, clock_grid
from .statevector import (
    MeasurementHistogram,
    RegisterLayout,
    StateVector,
    ancilla_one_probability,
    prepare_b_state,
    read_solution_amplitudes,
    sample,
)


def default_evolution_time(p: int) -> float:
    """2*pi*(1 - 2^-p): for spectra in (0, 1] this puts lambda = 1 exactly
    on the top clock grid point and keeps every phase below 2*pi."""
    return 2 * np.pi * (1.0 - 2.0 ** (-p))


def default_rotation_constant(p: int, t: float) -> float:
    """Smallest nonzero clock-grid eigenvalue, (2*pi/t) * 2^-p.

    This maximizes acceptance while keeping every rotation amplitude
    C/lambda_tilde <= 1.
    """
    return (2 * np.pi / t) * 2.0 ** (-p)


@dataclass(frozen=True)
class HHLConfig:
    """Solver knobs: clock size, evolution, readout, and the rotation constant.

    ``t`` and ``C`` default to ``default_evolution_time(p)`` and
    ``default_rotation_constant(p, t)`` when left as None.
    """

    p: int
    t: float | None = None
    slices: int = 6
    evolution_mode: str = "exact"
    readout_mode: str = "statevector"
    shots: int = 1000
    C: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("need at least one clock qubit")
        if self.evolution_mode not in ("exact", "trotter"):
            raise ValueError(f"unknown evolution mode {self.evolution_mode!r}")
        if self.readout_mode not in ("statevector", "sampled"):
            raise ValueError(f"unknown readout mode {self.readout_mode!r}")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.t is not None and self.t <= 0:
            raise ValueError("evolution time must be positive")
        if self.C is not None and self.C <= 0:
            raise ValueError("rotation constant must be positive")

    def resolved_t(self) -> float:
        return self.t if self.t is not None else default_evolution_time(self.p)

    def resolved_C(self) -> float:
        return (
            self.C
            if self.C is not None
            else default_rotation_constant(self.p, self.resolved_t())
        )

    def evolution_spec(self) -> EvolutionSpec:
        return EvolutionSpec(t=self.resolved_t(), slices=self.slices, mode=self.evolution_mode)

    def with_seed(self, seed: int) -> "HHLConfig":
        return replace(self, seed=seed)


@dataclass(frozen=True)
class HHLSolution:
    """Post-processed solve result plus diagnostics.

    ``x_sta`` is the raw unit-norm estimate before rescaling (non-negative
    entries in sampled mode); ``x = f1 * exp(i f2) * x_sta`` satisfies
    ``||A x|| = ||b||`` by construction.
    """

    x: np.ndarray
    x_sta: np.ndarray
    f1: float
    f2: float
    acceptance_rate: float
    histogram: MeasurementHistogram | None = None


def apply_controlled_rotation(state: StateVector, config: HHLConfig) -> StateVector:
    """Rotate the ancilla by C / lambda_tilde on every nonzero clock value.

    Raises RotationOverflow if a populated clock index would need
    C / lambda_tilde > 1 (a sign that C was chosen too large).
    """
    lay = state.layout
    t = config.resolved_t()
    c_rot = config.resolved_C()
    grid = clock_grid(lay.n_clock, t)[1:]  # clock values 1 .. 2^p - 1
    ratio = c_rot / grid

    view = state.amplitudes.copy().reshape(2, 1 << lay.n_clock, 1 << lay.n_input)
    mass = (
        np.sum(np.abs(view[0, 1:, :]) ** 2, axis=1)
        + np.sum(np.abs(view[1, 1:, :]) ** 2, axis=1)
    )
    populated = mass > 1e-12
    if np.any(populated & (ratio > 1.0 + 1e-12)):
        bad = int(np.argmax(populated & (ratio > 1.0 + 1e-12))) + 1
        raise RotationOverflow(
            f"C/lambda_tilde = {ratio[bad - 1]:.6f} > 1 at clock index {bad}"
        )

    sin_t = np.minimum(ratio, 1.0)
    cos_t = np.sqrt(1.0 - sin_t**2)
    a0 = view[0, 1:, :].copy()
    a1 = view[1, 1:, :].copy()
    view[0, 1:, :] = cos_t[:, None] * a0 - sin_t[:, None] * a1
    view[1, 1:, :] = sin_t[:, None] * a0 + cos_t[:, None] * a1
    return StateVector(view.reshape(-1), lay)


def estimate_from_histogram(hist: MeasurementHistogram) -> np.ndarray:
    """Entrywise sqrt of outcome frequencies: a unit-norm magnitude estimate."""
    if hist.accepted < 1:
        raise EmptyHistogram("histogram has no accepted shots")
    est = np.zeros(1 << hist.n_input)
    for idx, cnt in hist.counts.items():
        est[idx] = np.sqrt(cnt / hist.accepted)
    return est


def postprocess(x_sta, a, b) -> tuple[float, float, np.ndarray]:
    """Scale and phase recovery: f1 = ||b||/||A x_sta||, f2 = arg <b, A x_sta>.

    Returns (f1, f2, x) with x = f1 * exp(i f2) * x_sta, which enforces
    ||A x|| = ||b|| and aligns the single global phase against b.
    """
    mat = as_matrix(a)
    xs = as_vector(x_sta)
    bv = as_vector(b)
    ax = mat @ xs
    nax = norm2(ax)
    if nax <= 1e-300:
        raise DegenerateScale("||A x_sta|| is numerically zero")
    f1 = norm2(bv) / nax
    f2 = float(np.angle(inner(bv, ax)))
    return f1, f2, f1 * np.exp(1j * f2) * xs


def build_final_state(a, b, config: HHLConfig) -> StateVector:
    """Run pipeline steps 1-4 and return the pre-measurement state."""
    mat = as_matrix(a)
    bv = as_vector(b)
    eig = jacobi_eigh(mat)
    t = config.resolved_t()
    phases = eig.eigenvalues * t
    if np.any(phases <= 0.0) or np.any(phases >= 2 * np.pi):
        raise SpectrumOutOfRange(
            f"eigenvalue phases lambda*t must lie in (0, 2*pi); got "
            f"[{phases.min():.4f}, {phases.max():.4f}]"
        )

    n_input = int(np.log2(mat.shape[0]))
    layout = RegisterLayout(n_input=n_input, n_clock=config.p)
    spec = config.evolution_spec()
    state = prepare_b_state(bv, layout)
    state = apply_qpe(state, mat, spec)
    state = apply_controlled_rotation(state, config)
    return apply_inverse_qpe(state, mat, spec)


def run_hhl(a, b, config: HHLConfig) -> HHLSolution:
    """Solve A x = b through the full simulated pipeline."""
    state = build_final_state(a, b, config)
    if config.readout_mode == "statevector":
        x_sta = read_solution_amplitudes(state)
        histogram = None
        acceptance = ancilla_one_probability(state)
    else:
        histogram = sample(state, config.shots, config.seed)
        x_sta = estimate_from_histogram(histogram)
        acceptance = histogram.acceptance_rate()
    f1, f2, x = postprocess(x_sta, a, b)
    return HHLSolution(
        x=x,
        x_sta=x_sta,
        f1=f1,
        f2=f2,
        acceptance_rate=acceptance,
        histogram=histogram,
    )
