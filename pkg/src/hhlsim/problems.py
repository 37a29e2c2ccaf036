"""Benchmark problem construction and the Hermitian embedding.

The conditioned benchmark matrices are similarity transforms of
diag(1, 0.5, 0.1, 1/kappa) by a seeded random real orthogonal matrix, so
the condition number is exactly kappa (for kappa >= 10) while the
eigenbasis varies with the seed.  Two reference solutions probe sign
behavior: x1 is componentwise positive, x2 flips the first component.

Problem instances serialize to JSON with complex entries as [re, im]
pairs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .numerics import as_matrix, as_vector, norm2

RESIDUAL_RTOL = 1e-10


@dataclass(frozen=True)
class ProblemInstance:
    """An (A, b) system with optional ground truth and metadata."""

    A: np.ndarray
    b: np.ndarray
    x_true: np.ndarray | None = None
    kappa: float | None = None
    label: str = ""
    seed: int | None = None

    def __post_init__(self):
        a = as_matrix(self.A)
        bv = as_vector(self.b)
        if a.shape[0] != a.shape[1] or a.shape[0] != bv.shape[0]:
            raise DimensionMismatch(f"A {a.shape} incompatible with b {bv.shape}")
        if self.x_true is not None:
            res = norm2(bv - a @ as_vector(self.x_true))
            if res > RESIDUAL_RTOL * norm2(bv):
                raise ValueError(
                    f"x_true does not solve the system: ||b - A x|| = {res:.3e}"
                )

    def to_json_dict(self) -> dict:
        doc = {
            "A": _complex_matrix_to_lists(self.A),
            "b": _complex_vector_to_lists(self.b),
            "kappa": self.kappa,
            "seed": self.seed,
            "label": self.label,
        }
        if self.x_true is not None:
            doc["x_true"] = _complex_vector_to_lists(self.x_true)
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ProblemInstance":
        return cls(
            A=_lists_to_complex_matrix(doc["A"]),
            b=_lists_to_complex_vector(doc["b"]),
            x_true=_lists_to_complex_vector(doc["x_true"]) if "x_true" in doc else None,
            kappa=doc.get("kappa"),
            label=doc.get("label", ""),
            seed=doc.get("seed"),
        )

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)

    @classmethod
    def load(cls, path) -> "ProblemInstance":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def _complex_vector_to_lists(v) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def _complex_matrix_to_lists(m) -> list:
    return [_complex_vector_to_lists(row) for row in np.asarray(m, dtype=complex)]


def _lists_to_complex_vector(entries) -> np.ndarray:
    return np.array([complex(re, im) for re, im in entries])


def _lists_to_complex_matrix(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def conditioned_spectrum(kappa: float) -> np.ndarray:
    """diag entries (1, 0.5, 0.1, 1/kappa); kappa = 1 degenerates to all ones.

    Values 1 < kappa < 10 are rejected: the fixed interior eigenvalues 0.5
    and 0.1 would make the actual condition number 10 regardless.
    """
    if kappa == 1:
        return np.ones(4)
    if kappa < 10:
        raise ValueError("kappa must be 1 or >= 10 for the fixed spectrum shape")
    return np.array([1.0, 0.5, 0.1, 1.0 / kappa])


def random_orthogonal(seed) -> np.ndarray:
    """Seeded random real orthogonal 4x4 matrix (QR of a Gaussian draw).

    The QR sign ambiguity is fixed by making diag(R) positive, so a seed
    pins the matrix exactly.
    """
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((4, 4))
    q, r = np.linalg.qr(g)
    return q * np.sign(np.diag(r))


def build_conditioned_matrix(kappa: float, seed) -> tuple[np.ndarray, np.ndarray]:
    """A = U^T diag(1, 0.5, 0.1, 1/kappa) U for a seeded orthogonal U.

    Returns (A, U); A is real symmetric (stored complex) with condition
    number exactly kappa for kappa >= 10.
    """
    u = random_orthogonal(seed)
    d = conditioned_spectrum(kappa)
    a = u.T @ np.diag(d) @ u
    return a.astype(complex), u


def reference_solutions() -> tuple[np.ndarray, np.ndarray]:
    """The two benchmark solutions: all-positive x1, mixed-sign x2."""
    x1 = np.array([1.0, 0.1, 0.01, 10.0], dtype=complex)
    x2 = np.array([-1.0, 0.1, 0.01, 10.0], dtype=complex)
    return x1, x2


def make_instance(kappa: float, k: int, seed: int) -> ProblemInstance:
    """Benchmark instance A_{kappa,k} x = b with x_true = x_k.

    The orthogonal basis depends only on (seed, k), so instances with the
    same seed and solution index share U across condition numbers.
    """
    if k not in (1, 2):
        raise ValueError("solution index k must be 1 or 2")
    basis_seed = np.random.SeedSequence((seed, k))
    a, _ = build_conditioned_matrix(kappa, basis_seed)
    x = reference_solutions()[k - 1]
    b = a @ x
    return ProblemInstance(
        A=a,
        b=b,
        x_true=x,
        kappa=float(kappa),
        label=f"kappa{kappa:g}-x{k}-seed{seed}",
        seed=seed,
    )


def identity_instance() -> ProblemInstance:
    """Trivial 4x4 system A = I with the all-positive reference solution."""
    x1, _ = reference_solutions()
    return ProblemInstance(
        A=np.eye(4, dtype=complex),
        b=x1.copy(),
        x_true=x1,
        kappa=1.0,
        label="identity",
    )


def hermitian_embed(a, b) -> ProblemInstance:
    """Wrap any square A into the Hermitian block system.

    With At = [[0, A], [A^dagger, 0]] and bt = [b; 0], the solution of
    At xt = bt is xt = [0; x] where A x = b, so a Hermitian-only solver
    can handle arbitrary square systems at twice the dimension.
    """
    mat = as_matrix(a)
    bv = as_vector(b)
    n = mat.shape[0]
    if mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch(f"matrix is {mat.shape}, not square")
    if bv.shape[0] != n:
        raise DimensionMismatch(f"b has length {bv.shape[0]}, expected {n}")
    embedded = np.zeros((2 * n, 2 * n), dtype=complex)
    embedded[:n, n:] = mat
    embedded[n:, :n] = mat.conj().T
    rhs = np.zeros(2 * n, dtype=complex)
    rhs[:n] = bv
    return ProblemInstance(A=embedded, b=rhs, label="hermitian-embedding")
