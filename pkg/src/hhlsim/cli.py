"""Command-line interface: single solves, preset figures, and sweeps.

Exit codes: 0 success, 1 solver error, 2 specification/flag error.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
from pathlib import Path

import numpy as np

from .errors import HHLSimError, SpecParseError
from .figures import FIGURE_IDS, anchored_time, figure_x_axis, median_series, run_figure
from .hhl import HHLConfig, default_evolution_time, default_rotation_constant
from .numerics import norm2, residual
from .plotting import write_convergence_svg
from .problems import ProblemInstance, identity_instance, make_instance
from .refine import RefinementConfig, ShiftStrategy, refine_hhl

TRACE_COLUMNS = [
    "iteration",
    "rel_error",
    "residual_norm",
    "accepted_shots",
    "total_executions",
    "cumulative_measurements",
    "f1",
    "f2",
]

SWEEP_COLUMNS = [
    "kappa",
    "solution",
    "p",
    "shots",
    "strategy",
    "seed",
    "iteration",
    "rel_error",
    "residual_norm",
    "cumulative_measurements",
]

FIGURE_COLUMNS = [
    "figure",
    "strategy",
    "seed",
    "iteration",
    "rel_error",
    "cumulative_measurements",
]


def _fmt(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])


def _parse_pre_shift(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")], dtype=complex)
    except ValueError as exc:
        raise SpecParseError(f"--pre-shift expects comma-separated numbers: {exc}")


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--kappa", type=float, default=10.0, help="condition number of the generated problem")
    sub.add_argument("--solution", type=int, choices=(1, 2), default=1, help="benchmark solution index")
    sub.add_argument("--p", type=int, default=4, help="clock qubits for phase estimation")
    sub.add_argument("--shots", type=int, default=1000, help="accepted measurements per solve (sampled mode)")
    sub.add_argument(
        "--shift",
        choices=[s.value for s in ShiftStrategy],
        default="none",
        help="shift strategy for the refinement loop",
    )
    sub.add_argument("--iters", type=int, default=20, help="refinement iterations")
    sub.add_argument("--slices", type=int, default=6, help="Trotter time slices")
    sub.add_argument("--mode", choices=("statevector", "sampled"), default="sampled", help="readout mode")
    sub.add_argument("--evolution", choices=("exact", "trotter"), default="exact", help="Hamiltonian evolution mode")
    sub.add_argument("--seed", type=int, default=0, help="base RNG seed (recorded in all outputs)")
    sub.add_argument("--out", type=Path, default=Path("."), help="output directory")
    sub.add_argument(
        "--t",
        type=float,
        default=None,
        help="evolution time; default 2*pi*(1 - 2**-p) for spectra in (0, 1]",
    )
    sub.add_argument(
        "--anchor-t",
        action="store_true",
        help="use t = 2*pi*kappa/2**p so the smallest benchmark eigenvalue sits on the first clock grid value",
    )
    sub.add_argument(
        "--C",
        type=float,
        default=None,
        help="rotation constant; default (2*pi/t)*2**-p, the smallest nonzero grid eigenvalue",
    )
    sub.add_argument("--pre-shift", type=str, default=None, help='pre-shift vector "v1,v2,..."')
    sub.add_argument(
        "--count-rejected",
        action="store_true",
        help="count rejected (ancilla=0) executions in cumulative_measurements",
    )


def _problem_from_args(args) -> ProblemInstance:
    if getattr(args, "problem", None) is not None:
        return ProblemInstance.load(args.problem)
    if getattr(args, "identity", False):
        return identity_instance()
    return make_instance(args.kappa, args.solution, args.seed)


def _resolve_t(args, problem: ProblemInstance) -> float | None:
    if args.t is not None and args.anchor_t:
        raise SpecParseError("--t and --anchor-t are mutually exclusive")
    if args.anchor_t:
        if problem.kappa is None:
            raise SpecParseError("--anchor-t needs a problem with a known kappa")
        return anchored_time(problem.kappa, args.p)
    return args.t


def cmd_solve(args) -> int:
    problem = _problem_from_args(args)
    hhl_cfg = HHLConfig(
        p=args.p,
        t=_resolve_t(args, problem),
        slices=args.slices,
        evolution_mode=args.evolution,
        readout_mode=args.mode,
        shots=args.shots,
        C=args.C,
        seed=args.seed,
    )
    config = RefinementConfig(
        hhl=hhl_cfg,
        shift=ShiftStrategy.from_string(args.shift),
        max_iterations=1 if args.no_refine else args.iters,
        pre_shift=_parse_pre_shift(args.pre_shift) if args.pre_shift else None,
        count_rejected=args.count_rejected,
    )
    x, trace = refine_hhl(problem.A, problem.b, config, x_true=problem.x_true)

    args.out.mkdir(parents=True, exist_ok=True)
    rows = [
        {
            "iteration": r.m,
            "rel_error": r.rel_error,
            "residual_norm": r.residual_norm,
            "accepted_shots": r.accepted_shots,
            "total_executions": r.total_executions,
            "cumulative_measurements": r.cumulative_measurements,
            "f1": r.f1,
            "f2": r.f2,
        }
        for r in trace
    ]
    _write_csv(args.out / "trace.csv", TRACE_COLUMNS, rows)

    final = trace.final
    solution_doc = {
        "x": [[float(z.real), float(z.imag)] for z in x],
        "rel_error": final.rel_error,
        "residual_norm": norm2(residual(problem.A, x, problem.b)),
        "f1": final.f1,
        "f2": final.f2,
        "iterations": len(trace),
        "problem": {"label": problem.label, "kappa": problem.kappa, "seed": problem.seed},
        "config": {
            "p": args.p,
            "t": hhl_cfg.resolved_t(),
            "C": hhl_cfg.resolved_C(),
            "slices": args.slices,
            "evolution": args.evolution,
            "mode": args.mode,
            "shots": args.shots,
            "shift": args.shift,
            "seed": args.seed,
            "pre_shift": args.pre_shift,
        },
    }
    with open(args.out / "solution.json", "w") as fh:
        json.dump(solution_doc, fh, indent=2)
    print(f"wrote {args.out / 'trace.csv'} and {args.out / 'solution.json'}")
    return 0


def cmd_figure(args) -> int:
    rows, guide = run_figure(
        args.id,
        repeats=args.repeats,
        base_seed=args.seed,
        iterations=args.iters,
        evolution_mode=args.evolution,
        slices=args.slices,
    )
    args.out.mkdir(parents=True, exist_ok=True)
    csv_path = args.out / f"figure_{args.id}.csv"
    svg_path = args.out / f"figure_{args.id}.svg"
    _write_csv(csv_path, FIGURE_COLUMNS, rows)
    x_key = figure_x_axis(args.id)
    write_convergence_svg(
        svg_path,
        median_series(rows, x_key),
        guide=guide,
        x_label="accepted measurements" if x_key == "cumulative_measurements" else "iteration",
        title=f"{args.id}: median over {args.repeats} seeds",
        log_x=x_key == "cumulative_measurements",
        markers=args.id == "f7",
    )
    print(f"wrote {csv_path} and {svg_path}")
    return 0


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SpecParseError(message)


def load_sweep_spec(path) -> dict:
    """Parse and validate a sweep specification JSON file."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SpecParseError(f"cannot read spec file: {exc}")
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"spec is not valid JSON (line {exc.lineno}, col {exc.colno}): {exc.msg}")
    _require(isinstance(doc, dict), "spec must be a JSON object")

    spec = {
        "name": doc.get("name", "sweep"),
        "kappa": doc.get("kappa", [10]),
        "solution": doc.get("solution", [1]),
        "p": doc.get("p", [4]),
        "shots": doc.get("shots", [1000]),
        "strategy": doc.get("strategy", ["none"]),
        "iters": doc.get("iters", 20),
        "mode": doc.get("mode", "sampled"),
        "evolution": doc.get("evolution", "exact"),
        "slices": doc.get("slices", 6),
        "t": doc.get("t"),
    }
    if "seeds" in doc:
        spec["seeds"] = doc["seeds"]
    else:
        base = doc.get("seed", 0)
        repeats = doc.get("repeats", 1)
        _require(isinstance(repeats, int) and repeats >= 0, "field 'repeats' must be a non-negative integer")
        spec["seeds"] = [base + i for i in range(repeats)]

    for field in ("kappa", "solution", "p", "shots", "strategy", "seeds"):
        _require(isinstance(spec[field], list), f"field {field!r} must be a list")
    for k in spec["solution"]:
        _require(k in (1, 2), f"field 'solution' entries must be 1 or 2, got {k!r}")
    for s in spec["strategy"]:
        try:
            ShiftStrategy.from_string(str(s))
        except ValueError as exc:
            raise SpecParseError(f"field 'strategy': {exc}")
    _require(spec["mode"] in ("statevector", "sampled"), "field 'mode' must be statevector|sampled")
    _require(spec["evolution"] in ("exact", "trotter"), "field 'evolution' must be exact|trotter")
    _require(spec["t"] is None or spec["t"] == "anchored" or isinstance(spec["t"], (int, float)),
             "field 't' must be a number or 'anchored'")
    _require(isinstance(spec["iters"], int) and spec["iters"] >= 1, "field 'iters' must be a positive integer")
    return spec


def run_sweep(spec: dict) -> list[dict]:
    rows = []
    product = itertools.product(
        spec["kappa"], spec["solution"], spec["p"], spec["shots"], spec["strategy"], spec["seeds"]
    )
    for kappa, solution, p, shots, strategy, seed in product:
        inst = make_instance(kappa, solution, seed)
        if spec["t"] == "anchored":
            t = anchored_time(kappa, p)
        else:
            t = spec["t"]
        cfg = RefinementConfig(
            hhl=HHLConfig(
                p=p,
                t=t,
                slices=spec["slices"],
                evolution_mode=spec["evolution"],
                readout_mode=spec["mode"],
                shots=shots,
                seed=seed,
            ),
            shift=ShiftStrategy.from_string(str(strategy)),
            max_iterations=spec["iters"],
        )
        _, trace = refine_hhl(inst.A, inst.b, cfg, x_true=inst.x_true)
        for r in trace:
            rows.append(
                {
                    "kappa": kappa,
                    "solution": solution,
                    "p": p,
                    "shots": shots,
                    "strategy": strategy,
                    "seed": seed,
                    "iteration": r.m,
                    "rel_error": r.rel_error,
                    "residual_norm": r.residual_norm,
                    "cumulative_measurements": r.cumulative_measurements,
                }
            )
    return rows


def cmd_sweep(args) -> int:
    spec = load_sweep_spec(args.spec)
    rows = run_sweep(spec)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / f"{spec['name']}.csv"
    _write_csv(path, SWEEP_COLUMNS, rows)
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


def cmd_gen_problem(args) -> int:
    inst = make_instance(args.kappa, args.solution, args.seed)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    inst.save(args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hhlsim",
        description="Simulated-HHL linear solves with sign-robust iterative refinement.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    solve = subs.add_parser("solve", help="run one refinement (or plain solve) and write trace.csv + solution.json")
    _add_common_flags(solve)
    solve.add_argument("--problem", type=Path, default=None, help="load a problem JSON instead of generating one")
    solve.add_argument("--identity", action="store_true", help="use the trivial identity benchmark problem")
    solve.add_argument("--no-refine", action="store_true", help="single solve without refinement (one trace row)")
    solve.add_argument(
        "--statevector",
        action="store_const",
        dest="mode",
        const="statevector",
        help="shorthand for --mode statevector",
    )
    solve.set_defaults(func=cmd_solve)

    figure = subs.add_parser("figure", help="reproduce a preset convergence experiment (CSV + SVG)")
    figure.add_argument("id", choices=FIGURE_IDS, help="preset id")
    figure.add_argument("--repeats", type=int, default=5, help="seed count for the median")
    figure.add_argument("--seed", type=int, default=0, help="base seed")
    figure.add_argument("--iters", type=int, default=20)
    figure.add_argument("--evolution", choices=("exact", "trotter"), default="exact")
    figure.add_argument("--slices", type=int, default=6)
    figure.add_argument("--out", type=Path, default=Path("."))
    figure.set_defaults(func=cmd_figure)

    sweep = subs.add_parser("sweep", help="run the Cartesian product described by a JSON spec file")
    sweep.add_argument("spec", type=Path, help="sweep specification JSON")
    sweep.add_argument("--out", type=Path, default=Path("."))
    sweep.set_defaults(func=cmd_sweep)

    gen = subs.add_parser("gen-problem", help="write a benchmark problem instance as JSON")
    gen.add_argument("--kappa", type=float, default=10.0)
    gen.add_argument("--solution", type=int, choices=(1, 2), default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path, default=Path("problem.json"))
    gen.set_defaults(func=cmd_gen_problem)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HHLSimError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
