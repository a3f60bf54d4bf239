"""Small dense linear algebra for the qubit-qutrit (2x3) system.

Basis ordering is fixed everywhere: index ``3*a + b`` for qubit state ``a``
and qutrit state ``b``, i.e. |00>,|01>,|02>,|10>,|11>,|12>.
"""
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, NotHermitian, NotPSD

DIM_A = 2
DIM_B = 3
DIM = DIM_A * DIM_B

BASIS_LABELS = ("00", "01", "02", "10", "11", "12")

# eigenvalues in [-PSD_CLAMP, 0) are rounding noise and are set to zero
PSD_CLAMP = 1e-10
SQRT_FLOOR = 1e-13

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class HermitianEigenSystem(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # columns are orthonormal eigenvectors

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _as_square(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _require_shape(m, shape):
    m = np.asarray(m, dtype=complex)
    if m.shape != shape:
        raise DimensionMismatch(f"expected shape {shape}, got {m.shape}")
    return m


def hermiticity_violation(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_eigendecompose(m, tol: float = 1e-12) -> HermitianEigenSystem:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.

    Raises :class:`NotHermitian` if ``max|m - m^H| > tol``.  The strictly
    Hermitian part of ``m`` is what gets decomposed.
    """
    m = _as_square(m)
    viol = hermiticity_violation(m)
    if viol > tol:
        raise NotHermitian(viol, tol)
    h = 0.5 * (m + m.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigendecomposition did not converge: {exc}") from exc
    return HermitianEigenSystem(w, v)


def psd_sqrt(m, tol: float = PSD_CLAMP, herm_tol: float = 1e-10) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix."""
    w, v = hermitian_eigendecompose(m, herm_tol)
    if w[0] < -tol:
        raise NotPSD(w[0])
    # eigenvalues at roundoff level are zero; sqrt would blow them up to ~1e-8
    w = np.where(w < SQRT_FLOOR * max(1.0, w[-1]), 0.0, w)
    r = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (r + r.conj().T)


def partial_transpose_qubit(rho) -> np.ndarray:
    """Transpose on the qubit factor: [[A, B], [C, D]] -> [[A, C], [B, D]]."""
    rho = _require_shape(rho, (DIM, DIM))
    return rho.reshape(DIM_A, DIM_B, DIM_A, DIM_B).transpose(2, 1, 0, 3).reshape(DIM, DIM)


def partial_trace(rho, keep: str) -> np.ndarray:
    """Reduced density matrix of the ``"qubit"`` or the ``"qutrit"``."""
    rho = _require_shape(rho, (DIM, DIM))
    t = rho.reshape(DIM_A, DIM_B, DIM_A, DIM_B)
    if keep in ("qubit", "A"):
        return np.einsum("ibjb->ij", t)
    if keep in ("qutrit", "B"):
        return np.einsum("aiaj->ij", t)
    raise ValueError(f"keep must be 'qubit' or 'qutrit', got {keep!r}")


def trace_distance(a, b) -> float:
    a = _as_square(a)
    b = _as_square(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    d = a - b
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T)))))


def qubit_local(op) -> np.ndarray:
    """``op (x) I_3`` for a 2x2 operator on the qubit."""
    return np.kron(op, np.eye(DIM_B))


def qutrit_local(op) -> np.ndarray:
    """``I_2 (x) op`` for a 3x3 operator on the qutrit."""
    return np.kron(np.eye(DIM_A), op)


def unitarity_violation(u) -> float:
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase fix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph
