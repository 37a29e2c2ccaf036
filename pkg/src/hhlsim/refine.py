"""Iterative improvement of linear solves, with sign-rescuing shifts.

Classical iterative improvement repeatedly solves A y = r against the
current residual r = b - A x and adds the correction y to x.  When the
inner solver is a sampled HHL run, per-component signs of y are lost to
statistical readout, which stalls the naive loop whenever the true
correction mixes signs.  The shifted variant offsets each inner solve so
that its expected solution is componentwise positive:

    y_m   solves  A y = r_m            (HHL, signs lost)
    x_m = y_m - shift_m                (undo the offset)
    x  <- x + x_m
    shift_{m+1} = strategy(x_m, x_{m-1})
    r_{m+1} = b - A (x - shift_{m+1})  (bake the next offset into the rhs)

Five shift strategies are provided (``ShiftStrategy``); ratio-based ones
need the previous correction and therefore only activate from the second
iteration.  Iteration 0 always runs unshifted.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import Diverged, DimensionMismatch, MissingPrevious
from .hhl import HHLConfig, run_hhl
from .numerics import as_matrix, as_vector, norm2, relative_error

DIVERGENCE_FACTOR = 1e12


class ShiftStrategy(enum.Enum):
    """How to choose the positivity shift for the next inner solve."""

    NONE = "none"
    UNIFORM_RATIO = "uniform-ratio"
    ABS_TENTH = "abs-tenth"
    ABS_RATIO = "abs-ratio"
    ABS_SQRT_RATIO = "abs-sqrt-ratio"

    @classmethod
    def from_string(cls, name: str) -> "ShiftStrategy":
        key = name.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown shift strategy {name!r}")

    @property
    def needs_previous(self) -> bool:
        return self in (
            ShiftStrategy.UNIFORM_RATIO,
            ShiftStrategy.ABS_RATIO,
            ShiftStrategy.ABS_SQRT_RATIO,
        )


def compute_shift(
    strategy: ShiftStrategy,
    x_m: np.ndarray,
    x_prev: np.ndarray | None,
    m: int,
) -> np.ndarray:
    """Shift vector for the next iteration, from the last correction(s).

    With g = ||x_m|| / ||x_prev||:

    * ``none``           -> 0
    * ``uniform-ratio``  -> g * [1, ..., 1]
    * ``abs-tenth``      -> 0.1 * |x_m|
    * ``abs-ratio``      -> g * |x_m|
    * ``abs-sqrt-ratio`` -> sqrt(g) * |x_m|

    |x_m| is the entrywise modulus.  Ratio strategies raise
    MissingPrevious when no previous correction exists (m = 0); the caller
    is expected to fall back to ``none`` there.
    """
    xm = as_vector(x_m)
    if strategy is ShiftStrategy.NONE:
        return np.zeros_like(xm)
    if strategy is ShiftStrategy.ABS_TENTH:
        return 0.1 * np.abs(xm).astype(complex)
    if x_prev is None or norm2(x_prev) == 0.0:
        raise MissingPrevious(
            f"strategy {strategy.value} needs a previous correction (m={m})"
        )
    gain = norm2(xm) / norm2(x_prev)
    if strategy is ShiftStrategy.UNIFORM_RATIO:
        return gain * np.ones_like(xm)
    if strategy is ShiftStrategy.ABS_RATIO:
        return gain * np.abs(xm).astype(complex)
    return np.sqrt(gain) * np.abs(xm).astype(complex)


@dataclass(frozen=True)
class RefinementConfig:
    """Loop knobs around an inner HHL configuration.

    ``pre_shift`` offsets the whole problem before iterating: the loop then
    solves A x' = b + A s with x' = x + s, and the reported solution has s
    subtracted back out.  ``count_rejected`` switches the cumulative
    measurement bookkeeping from accepted shots to total circuit
    executions (including ancilla=0 rejections).
    """

    hhl: HHLConfig
    shift: ShiftStrategy = ShiftStrategy.NONE
    max_iterations: int = 20
    stop_residual: float | None = None
    pre_shift: np.ndarray | None = None
    count_rejected: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class IterationRecord:
    """One refinement step: vectors, error metrics, and measurement costs."""

    m: int
    y: np.ndarray
    shift: np.ndarray
    correction: np.ndarray
    x: np.ndarray
    residual_norm: float
    rel_error: float | None
    accepted_shots: int
    total_executions: int
    cumulative_measurements: int
    f1: float
    f2: float


@dataclass
class IterationTrace:
    records: list[IterationRecord] = field(default_factory=list)

    def append(self, record: IterationRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def final(self) -> IterationRecord:
        return self.records[-1]

    def rel_errors(self) -> list[float | None]:
        return [r.rel_error for r in self.records]

    def residual_norms(self) -> list[float]:
        return [r.residual_norm for r in self.records]


def iteration_seed(base_seed: int, m: int) -> int:
    """Deterministic per-iteration RNG seed derived from (base_seed, m)."""
    words = np.random.SeedSequence((base_seed, m)).generate_state(2)
    return (int(words[0]) << 32) | int(words[1])


def apply_pre_shift(b, a, s) -> np.ndarray:
    """Right-hand side of the shifted problem: b + A s.

    Solving against the result yields x + s; the caller subtracts s from
    the final solution.
    """
    mat = as_matrix(a)
    bv = as_vector(b)
    sv = as_vector(s)
    if mat.shape[1] != sv.shape[0] or mat.shape[0] != bv.shape[0]:
        raise DimensionMismatch(
            f"pre-shift dims: A {mat.shape}, b {bv.shape}, s {sv.shape}"
        )
    return bv + mat @ sv


def classical_iterative_improvement(a, b, inner_solver, max_iterations: int):
    """Plain residual-correction refinement around any approximate solver.

    ``inner_solver(A, r)`` returns an approximate solution of A y = r.
    Returns (x, trace).
    """
    mat = as_matrix(a)
    bv = as_vector(b)
    x = np.zeros_like(bv)
    r = bv.copy()
    trace = IterationTrace()
    best_residual = np.inf
    for m in range(max_iterations):
        y = as_vector(inner_solver(mat, r))
        x = x + y
        r = bv - mat @ x
        res_norm = norm2(r)
        trace.append(
            IterationRecord(
                m=m,
                y=y,
                shift=np.zeros_like(bv),
                correction=y,
                x=x.copy(),
                residual_norm=res_norm,
                rel_error=None,
                accepted_shots=0,
                total_executions=0,
                cumulative_measurements=0,
                f1=float("nan"),
                f2=float("nan"),
            )
        )
        if res_norm > DIVERGENCE_FACTOR * best_residual:
            raise Diverged(
                f"residual {res_norm:.3e} grew 1e12x beyond best {best_residual:.3e}"
            )
        best_residual = min(best_residual, res_norm)
    return x, trace


def refine_hhl(a, b, config: RefinementConfig, x_true=None, inner_solver=None):
    """Shift-aware iterative improvement with HHL as the inner solver.

    Every iteration solves against a residual that embeds the current
    shift, so the inner solve's true answer is (expected to be)
    componentwise positive and survives the sampled readout's sign loss.
    Per-iteration sampling seeds are derived deterministically from
    ``config.hhl.seed`` and the iteration index.

    ``inner_solver`` may replace the HHL engine with any ``(A, r) -> y``
    callable (e.g. an exact solver as an oracle); shift bookkeeping is
    unchanged.  Returns (x, trace); with a pre-shift configured, the
    returned x is for the original system while the trace tracks the
    shifted one.
    """
    mat = as_matrix(a)
    bv = as_vector(b)

    if config.pre_shift is not None:
        s = as_vector(config.pre_shift)
        b_eff = apply_pre_shift(bv, mat, s)
        truth = as_vector(x_true) + s if x_true is not None else None
    else:
        s = None
        b_eff = bv.copy()
        truth = as_vector(x_true) if x_true is not None else None

    x = np.zeros_like(b_eff)
    shift = np.zeros_like(b_eff)
    prev_correction = None
    r = b_eff.copy()
    trace = IterationTrace()
    cumulative = 0
    best_residual = np.inf
    sampled = config.hhl.readout_mode == "sampled"

    for m in range(config.max_iterations):
        if inner_solver is not None:
            y = as_vector(inner_solver(mat, r))
            f1 = f2 = float("nan")
            accepted = total = 0
        else:
            sol = run_hhl(mat, r, config.hhl.with_seed(iteration_seed(config.hhl.seed, m)))
            y = sol.x
            f1, f2 = sol.f1, sol.f2
            if sampled:
                accepted = sol.histogram.accepted
                total = sol.histogram.total_executions
            else:
                accepted = total = 0

        shift_used = shift
        correction = y - shift_used
        x = x + correction

        strategy = config.shift
        if m == 0 and strategy.needs_previous:
            strategy = ShiftStrategy.NONE
        shift = compute_shift(strategy, correction, prev_correction, m)
        prev_correction = correction

        r = b_eff - mat @ (x - shift)
        res_norm = norm2(b_eff - mat @ x)
        rel = relative_error(x, truth) if truth is not None else None
        cumulative += total if config.count_rejected else accepted
        trace.append(
            IterationRecord(
                m=m,
                y=y,
                shift=shift_used,
                correction=correction,
                x=x.copy(),
                residual_norm=res_norm,
                rel_error=rel,
                accepted_shots=accepted,
                total_executions=total,
                cumulative_measurements=cumulative,
                f1=f1,
                f2=f2,
            )
        )
        if res_norm > DIVERGENCE_FACTOR * best_residual:
            raise Diverged(
                f"residual {res_norm:.3e} grew 1e12x beyond best {best_residual:.3e}"
            )
        best_residual = min(best_residual, res_norm)
        if config.stop_residual is not None and res_norm <= config.stop_residual:
            break
        if norm2(r) <= 1e-300:
            break  # exactly solved; a zero rhs cannot be amplitude-encoded

    final = x - s if s is not None else x
    return final, trace
