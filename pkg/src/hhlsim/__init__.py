"""hhlsim: statevector HHL solves with sign-robust iterative refinement."""

from .errors import HHLSimError
from .hamsim import EvolutionSpec, PauliTerm, pauli_decompose, evolution_unitary
from .hhl import (
    HHLConfig,
    HHLSolution,
    default_evolution_time,
    default_rotation_constant,
    run_hhl,
)
from .numerics import (
    EigenDecomposition,
    condition_number,
    jacobi_eigh,
    matrix_exp_hermitian,
    relative_error,
    residual,
    solve_exact,
)
from .problems import (
    ProblemInstance,
    build_conditioned_matrix,
    hermitian_embed,
    make_instance,
    reference_solutions,
)
from .refine import (
    IterationTrace,
    RefinementConfig,
    ShiftStrategy,
    classical_iterative_improvement,
    compute_shift,
    refine_hhl,
)
from .statevector import MeasurementHistogram, RegisterLayout, StateVector

__all__ = [
    "EigenDecomposition",
    "EvolutionSpec",
    "HHLConfig",
    "HHLSimError",
    "HHLSolution",
    "IterationTrace",
    "MeasurementHistogram",
    "PauliTerm",
    "ProblemInstance",
    "RefinementConfig",
    "RegisterLayout",
    "ShiftStrategy",
    "StateVector",
    "build_conditioned_matrix",
    "classical_iterative_improvement",
    "compute_shift",
    "condition_number",
    "default_evolution_time",
    "default_rotation_constant",
    "evolution_unitary",
    "hermitian_embed",
    "jacobi_eigh",
    "make_instance",
    "matrix_exp_hermitian",
    "pauli_decompose",
    "reference_solutions",
    "refine_hhl",
    "relative_error",
    "residual",
    "run_hhl",
    "solve_exact",
]

__version__ = "0.1.0"
