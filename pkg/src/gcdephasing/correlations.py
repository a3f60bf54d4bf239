"""Negativity and local quantum uncertainty (LQU) for 2x3 states."""
import numpy as np

from .errors import NotHermitian, NumericalError
from .linalg import PAULIS, hermiticity_violation, partial_transpose_qubit, psd_sqrt, qubit_local

# partial-transpose eigenvalues in (-NEG_EIG_CUTOFF, 0) count as zero
NEG_EIG_CUTOFF = 1e-12

_LOCAL_PAULIS = np.array([qubit_local(p) for p in PAULIS])


def negativity(rho, cutoff: float = NEG_EIG_CUTOFF) -> float:
    """Twice the summed magnitude of the negative partial-transpose eigenvalues."""
    ev = np.linalg.eigvalsh(partial_transpose_qubit(rho))
    return 2.0 * float(np.abs(ev[ev <= -cutoff]).sum())


def skew_information(rho, observable, sqrt_rho=None) -> float:
    """Wigner-Yanase skew information -1/2 Tr([sqrt(rho), M]^2)."""
    m = np.asarray(observable, dtype=complex)
    viol = hermiticity_violation(m)
    if viol > 1e-10:
        raise NotHermitian(viol, 1e-10)
    s = psd_sqrt(rho) if sqrt_rho is None else sqrt_rho
    c = s @ m - m @ s
    return max(float(-0.5 * np.trace(c @ c).real), 0.0)


def lqu_witness(rho, sqrt_rho=None, sym_tol: float = 1e-10) -> np.ndarray:
    """3x3 real matrix r_ij = Tr{sqrt(rho) s_i sqrt(rho) s_j}, s_i = sigma_i (x) I."""
    s = psd_sqrt(rho) if sqrt_rho is None else sqrt_rho
    a = np.einsum("xy,iyz->ixz", s, _LOCAL_PAULIS)  # sqrt(rho) s_i
    r = np.einsum("ixy,jyx->ij", a, a).real
    asym = float(np.max(np.abs(r - r.T)))
    if asym > sym_tol:
        raise NumericalError(f"LQU witness matrix asymmetric by {asym:.3e}")
    return 0.5 * (r + r.T)


def lqu(rho, floor: float = -1e-9) -> float:
    """1 - largest eigenvalue of :func:`lqu_witness`, clamped to [0, 1]."""
    r = lqu_witness(rho)
    q = 1.0 - np.linalg.eigvalsh(r)[-1]
    if q < floor:
        raise NumericalError(f"LQU evaluated to {q:.3e} < {floor:.1e}")
    return float(min(max(q, 0.0), 1.0))


def bloch_grid(grid: int) -> np.ndarray:
    """Unit vectors covering the sphere modulo m ~ -m.

    theta_i = i pi/grid (i = 0..grid), phi_k = k pi/grid (k < grid), so the
    grid for ``g`` is a subset of the grid for ``2 g``.
    """
    theta = np.arange(grid + 1) * np.pi / grid
    phi = np.arange(grid) * np.pi / grid
    t, p = np.meshgrid(theta, phi, indexing="ij")
    return np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=-1).reshape(-1, 3)


def lqu_bruteforce(rho, grid: int = 200, chunk: int = 4096) -> float:
    """Minimum skew information over qubit observables (m.sigma) (x) I on a grid.

    Each grid observable is evaluated through the full commutator, so this
    does not share any algebra with the closed form in :func:`lqu`.
    """
    if grid < 8:
        raise ValueError("grid must be >= 8")
    s = psd_sqrt(rho)
    dirs = bloch_grid(grid)
    best = np.inf
    for start in range(0, len(dirs), chunk):
        m = np.einsum("nk,kxy->nxy", dirs[start:start + chunk], _LOCAL_PAULIS)
        c = s @ m - m @ s
        j = -0.5 * np.einsum("nxy,nyx->n", c, c).real
        best = min(best, float(j.min()))
    return max(best, 0.0)
