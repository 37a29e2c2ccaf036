"""Dense complex linear algebra for small Hermitian systems.

Matrices and vectors are plain numpy ``complex128`` arrays: matrices are
``(n, n)`` row-major, vectors are ``(n,)``.  Everything is written for the
small systems this library simulates (n <= 64); there are no sparse or
blocked code paths.  Tolerances are relative to the Frobenius norm of the
input matrix unless the compared quantity is already normalized.

All functions are pure: inputs are never mutated and results are freshly
allocated, so values can be shared freely across threads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotHermitian,
    Singular,
)

# max |A - A^dagger| allowed, relative to ||A||_F
HERMITIAN_RTOL = 1e-12
# off-diagonal Frobenius norm target for the Jacobi sweep, relative to ||A||_F
JACOBI_OFF_RTOL = 1e-14
# pivot underflow threshold for Gaussian elimination, relative to ||A||_F
PIVOT_RTOL = 1e-14


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def as_vector(v) -> np.ndarray:
    w = np.asarray(v, dtype=complex)
    if w.ndim != 1:
        raise DimensionMismatch(f"expected a 1-d vector, got shape {w.shape}")
    return w


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=complex)))


def is_hermitian(a, rtol: float = HERMITIAN_RTOL) -> bool:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, frobenius(m))
    return float(np.max(np.abs(m - m.conj().T))) <= rtol * scale


def require_hermitian(a) -> np.ndarray:
    m = as_matrix(a)
    if not is_hermitian(m):
        dev = float(np.max(np.abs(m - m.conj().T)))
        raise NotHermitian(f"max |A - A^dagger| = {dev:.3e} exceeds tolerance")
    return m


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenpairs of a Hermitian matrix.

    ``eigenvalues`` are real and sorted ascending; column j of
    ``eigenvectors`` is the (unit-norm) eigenvector for ``eigenvalues[j]``
    and the column matrix is unitary.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _jacobi_rotate(h: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero h[p, q] (and h[q, p]) with a complex Givens rotation, in place.

    The rotation is J = diag(e^{i phi}, 1) @ [[c, -s], [s, c]] on the (p, q)
    plane, where phi is the phase of h[p, q]; it is accumulated into v.
    """
    b = h[p, q]
    absb = abs(b)
    phase = b / absb
    tau = (h[q, q].real - h[p, p].real) / (2.0 * absb)
    if tau >= 0.0:
        t = -1.0 / (tau + np.hypot(1.0, tau))
    else:
        t = 1.0 / (-tau + np.hypot(1.0, tau))
    c = 1.0 / np.hypot(1.0, t)
    s = t * c

    # columns, i.e. H <- H J
    col_p = h[:, p].copy()
    col_q = h[:, q].copy()
    h[:, p] = phase * c * col_p + s * col_q
    h[:, q] = -phase * s * col_p + c * col_q
    # rows, i.e. H <- J^dagger H
    row_p = h[p, :].copy()
    row_q = h[q, :].copy()
    h[p, :] = np.conj(phase) * c * row_p + s * row_q
    h[q, :] = -np.conj(phase) * s * row_p + c * row_q
    h[p, q] = 0.0
    h[q, p] = 0.0

    vcol_p = v[:, p].copy()
    vcol_q = v[:, q].copy()
    v[:, p] = phase * c * vcol_p + s * vcol_q
    v[:, q] = -phase * s * vcol_p + c * vcol_q


def _off_norm(h: np.ndarray) -> float:
    off = h - np.diag(np.diag(h))
    return float(np.linalg.norm(off))


def _reorthogonalize_degenerate(lam: np.ndarray, vecs: np.ndarray, scale: float) -> np.ndarray:
    """Re-orthogonalize eigenvector columns inside degenerate clusters.

    The accumulated Jacobi rotations are unitary to roundoff already; this
    pass guards the orthonormality contract when eigenvalues coincide.
    """
    tol = 1e-10 * max(1.0, scale)
    n = len(lam)
    out = vecs.copy()
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and abs(lam[stop] - lam[stop - 1]) <= tol:
            stop += 1
        if stop - start > 1:
            q, _ = np.linalg.qr(out[:, start:stop])
            out[:, start:stop] = q
        start = stop
    return out


def jacobi_eigh(a, max_sweeps: int = 60) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Raises NotHermitian on asymmetric input and NoConvergence if the
    off-diagonal norm does not fall below 1e-14 * ||A||_F within the sweep
    cap (quadratic convergence makes that effectively unreachable for the
    intended n <= 64).
    """
    m = require_hermitian(a)
    n = m.shape[0]
    # symmetrize so representation noise below the Hermitian tolerance
    # cannot survive into the eigenvalues
    h = 0.5 * (m + m.conj().T)
    v = np.eye(n, dtype=complex)
    scale = frobenius(m)
    if scale == 0.0:
        return EigenDecomposition(np.zeros(n), v)

    target = JACOBI_OFF_RTOL * scale
    skip = target / max(n * n, 1)
    for _ in range(max_sweeps):
        if _off_norm(h) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(h[p, q]) > skip:
                    _jacobi_rotate(h, v, p, q)
    if _off_norm(h) > target:
        raise NoConvergence(
            f"off-diagonal norm {_off_norm(h):.3e} above {target:.3e} "
            f"after {max_sweeps} sweeps"
        )

    lam = np.real(np.diag(h))
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    vecs = v[:, order]
    vecs = _reorthogonalize_degenerate(lam, vecs, scale)
    return EigenDecomposition(lam, vecs)


def condition_number(a) -> float:
    """|lambda_max| / |lambda_min| of a Hermitian matrix."""
    eig = jacobi_eigh(a)
    mags = np.abs(eig.eigenvalues)
    lo = float(mags.min())
    hi = float(mags.max())
    if lo <= 1e-14 * hi:
        raise Singular("smallest eigenvalue magnitude is numerically zero")
    return hi / lo


def solve_exact(a, b) -> np.ndarray:
    """Solve A x = b by Gaussian elimination with partial pivoting.

    This is the classical ground-truth path: residuals come out at the
    1e-12 * ||b|| level for the condition numbers this library targets.
    """
    m = as_matrix(a)
    rhs = as_vector(b)
    n = m.shape[0]
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"matrix is {m.shape}, not square")
    if rhs.shape[0] != n:
        raise DimensionMismatch(f"b has length {rhs.shape[0]}, expected {n}")

    u = m.copy()
    y = rhs.copy()
    scale = frobenius(m)
    tol = PIVOT_RTOL * max(scale, 1e-300)
    for k in range(n):
        piv = int(np.argmax(np.abs(u[k:, k]))) + k
        if abs(u[piv, k]) <= tol:
            raise Singular(f"pivot {abs(u[piv, k]):.3e} underflows at column {k}")
        if piv != k:
            u[[k, piv], :] = u[[piv, k], :]
            y[[k, piv]] = y[[piv, k]]
        factors = u[k + 1:, k] / u[k, k]
        u[k + 1:, k:] -= np.outer(factors, u[k, k:])
        y[k + 1:] -= factors * y[k]

    x = np.zeros(n, dtype=complex)
    for k in range(n - 1, -1, -1):
        x[k] = (y[k] - u[k, k + 1:] @ x[k + 1:]) / u[k, k]
    return x


def matrix_exp_hermitian(a, t: float) -> np.ndarray:
    """exp(i A t) for Hermitian A, via the eigendecomposition.

    The result is unitary with eigenvalues e^{i lambda_j t}.
    """
    eig = jacobi_eigh(a)
    phases = np.exp(1j * eig.eigenvalues * t)
    v = eig.eigenvectors
    return (v * phases) @ v.conj().T


def residual(a, x, b) -> np.ndarray:
    """b - A x, in working precision."""
    m = as_matrix(a)
    xv = as_vector(x)
    bv = as_vector(b)
    if m.shape[1] != xv.shape[0] or m.shape[0] != bv.shape[0]:
        raise DimensionMismatch(
            f"residual dims: A {m.shape}, x {xv.shape}, b {bv.shape}"
        )
    return bv - m @ xv


def norm2(v) -> float:
    return float(np.linalg.norm(as_vector(v)))


def inner(u, v) -> complex:
    """<u, v>, conjugate-linear in the first argument."""
    uv = as_vector(u)
    vv = as_vector(v)
    if uv.shape != vv.shape:
        raise DimensionMismatch(f"inner dims: {uv.shape} vs {vv.shape}")
    return complex(np.vdot(uv, vv))


def relative_error(x, x_true) -> float:
    """||x - x_true||_2 / ||x_true||_2."""
    xv = as_vector(x)
    tv = as_vector(x_true)
    if xv.shape != tv.shape:
        raise DimensionMismatch(f"relative_error dims: {xv.shape} vs {tv.shape}")
    return float(np.linalg.norm(xv - tv) / np.linalg.norm(tv))
