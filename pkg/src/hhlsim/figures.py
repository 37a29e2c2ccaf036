"""Preset convergence experiments (f1-f7) behind the `figure` CLI command.

Every preset emits long-format rows
``(figure, strategy, seed, iteration, rel_error, cumulative_measurements)``
plus the 2^-p resolution guide value for plotting.

Configuration notes:

* f1 is the resolution-ceiling study: single solves at p=9 with the
  library-default evolution time, sweeping the accepted-shot count against
  the statevector readout baseline.
* f2-f7 are refinement studies at the benchmark anchoring
  ``t = 2*pi*kappa*2^-p``, which places the smallest benchmark eigenvalue
  1/kappa exactly on the first clock grid value (and, because the
  benchmark spectrum is an integer multiple of 1/kappa, the whole spectrum
  on the grid).  This mirrors the usual C = lambda_min convention and the
  p-vs-kappa pairing (2^p > kappa) of the bundled experiments.
"""
from __future__ import annotations

import numpy as np

from .hhl import HHLConfig, run_hhl
from .numerics import relative_error
from .problems import make_instance
from .refine import RefinementConfig, ShiftStrategy, refine_hhl

FIGURE_IDS = ("f1", "f2", "f3", "f4", "f5", "f6", "f7")

# (kappa, solution index, clock qubits, accepted shots per iteration)
_REFINEMENT_SETUPS = {
    "f2": (10, 1, 4, 1000),
    "f3": (10, 2, 4, 1000),
    "f4": (100, 1, 7, 10000),
    "f5": (100, 2, 7, 10000),
    "f6": (10, 2, 4, 1000),
}

F1_SHOT_GRID = (100, 1000, 10_000, 100_000, 1_000_000)
PRE_SHIFT_VECTOR = np.array([2.0, 2.0, 2.0, 2.0], dtype=complex)


def anchored_time(kappa: float, p: int) -> float:
    """Benchmark evolution time 2*pi*kappa/2^p (lambda_min on grid index 1).

    Requires 2^p > kappa so the largest eigenvalue stays below 2*pi/t.
    """
    if 2**p <= kappa:
        raise ValueError(f"need 2^p > kappa, got p={p}, kappa={kappa}")
    return 2 * np.pi * kappa * 2.0 ** (-p)


def _row(figure, strategy, seed, iteration, rel_error, cumulative):
    return {
        "figure": figure,
        "strategy": strategy,
        "seed": seed,
        "iteration": iteration,
        "rel_error": rel_error,
        "cumulative_measurements": cumulative,
    }


def _refinement_rows(figure, strategy_label, seed, trace):
    return [
        _row(figure, strategy_label, seed, r.m, r.rel_error, r.cumulative_measurements)
        for r in trace
    ]


def run_figure(
    figure_id: str,
    repeats: int = 5,
    base_seed: int = 0,
    iterations: int = 20,
    evolution_mode: str = "exact",
    slices: int = 6,
) -> tuple[list[dict], float]:
    """Run one preset; returns (rows, resolution guide value 2^-p)."""
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {figure_id!r}, expected one of {FIGURE_IDS}")
    seeds = [base_seed + i for i in range(repeats)]
    if figure_id == "f1":
        return _run_f1(seeds, evolution_mode, slices)
    if figure_id == "f7":
        return _run_f7(seeds, iterations, evolution_mode, slices)
    return _run_refinement_figure(figure_id, seeds, iterations, evolution_mode, slices)


def _run_f1(seeds, evolution_mode, slices):
    """Shot sweep at p=9 against the statevector baseline (kappa=10, x1)."""
    p = 9
    rows = []
    for seed in seeds:
        inst = make_instance(10, 1, seed=seed)
        sv = run_hhl(
            inst.A,
            inst.b,
            HHLConfig(p=p, evolution_mode=evolution_mode, slices=slices),
        )
        rows.append(_row("f1", "statevector", seed, 0, relative_error(sv.x, inst.x_true), 0))
        for shots in F1_SHOT_GRID:
            sol = run_hhl(
                inst.A,
                inst.b,
                HHLConfig(
                    p=p,
                    readout_mode="sampled",
                    shots=shots,
                    seed=seed,
                    evolution_mode=evolution_mode,
                    slices=slices,
                ),
            )
            rows.append(
                _row("f1", "sampled", seed, 0, relative_error(sol.x, inst.x_true), shots)
            )
    return rows, 2.0**-p


def _run_refinement_figure(figure_id, seeds, iterations, evolution_mode, slices):
    """Five shift strategies plus the statevector curve, one run per seed."""
    kappa, k, p, shots = _REFINEMENT_SETUPS[figure_id]
    pre_shift = PRE_SHIFT_VECTOR if figure_id == "f6" else None
    t = anchored_time(kappa, p)
    rows = []
    for seed in seeds:
        inst = make_instance(kappa, k, seed=seed)
        for strategy in ShiftStrategy:
            cfg = RefinementConfig(
                hhl=HHLConfig(
                    p=p,
                    t=t,
                    readout_mode="sampled",
                    shots=shots,
                    seed=seed,
                    evolution_mode=evolution_mode,
                    slices=slices,
                ),
                shift=strategy,
                max_iterations=iterations,
                pre_shift=pre_shift,
            )
            _, trace = refine_hhl(inst.A, inst.b, cfg, x_true=inst.x_true)
            rows.extend(_refinement_rows(figure_id, strategy.value, seed, trace))
        sv_cfg = RefinementConfig(
            hhl=HHLConfig(
                p=p, t=t, readout_mode="statevector", evolution_mode=evolution_mode, slices=slices
            ),
            shift=ShiftStrategy.NONE,
            max_iterations=iterations,
            pre_shift=pre_shift,
        )
        _, trace = refine_hhl(inst.A, inst.b, sv_cfg, x_true=inst.x_true)
        rows.extend(_refinement_rows(figure_id, "statevector", seed, trace))
    return rows, 2.0**-p


def _run_f7(seeds, iterations, evolution_mode, slices):
    """Error versus cumulative accepted measurements for two shot budgets."""
    kappa, k, p = 10, 1, 4
    t = anchored_time(kappa, p)
    rows = []
    for seed in seeds:
        inst = make_instance(kappa, k, seed=seed)
        for shots in (1000, 10000):
            cfg = RefinementConfig(
                hhl=HHLConfig(
                    p=p,
                    t=t,
                    readout_mode="sampled",
                    shots=shots,
                    seed=seed,
                    evolution_mode=evolution_mode,
                    slices=slices,
                ),
                shift=ShiftStrategy.ABS_SQRT_RATIO,
                max_iterations=iterations,
            )
            _, trace = refine_hhl(inst.A, inst.b, cfg, x_true=inst.x_true)
            rows.extend(_refinement_rows("f7", f"shots{shots}", seed, trace))
    return rows, 2.0**-p


def figure_x_axis(figure_id: str) -> str:
    """Column used as the x axis: shot counts for f1/f7, iterations otherwise."""
    return "cumulative_measurements" if figure_id in ("f1", "f7") else "iteration"


def median_series(rows: list[dict], x_key: str) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Median rel_error per (strategy, x-position), for plotting."""
    series: dict[str, dict[float, list[float]]] = {}
    for row in rows:
        buckets = series.setdefault(row["strategy"], {})
        buckets.setdefault(float(row[x_key]), []).append(row["rel_error"])
    out = {}
    for label, buckets in series.items():
        xvals = np.array(sorted(buckets))
        yvals = np.array([np.median(buckets[x]) for x in xvals])
        out[label] = (xvals, yvals)
    return out
