"""State families for the qubit-qutrit system.

Density matrices are plain 6x6 complex ``numpy`` arrays.  Everything built
here goes through :func:`validate`, which hands back a read-only copy.
Pure states are length-6 complex vectors.
"""
import numpy as np

from .errors import NotHermitian, NotPSD, NotUnitary, ParamOutOfRange, TraceNotOne, UnknownKind
from .linalg import DIM, DIM_A, DIM_B, DimensionMismatch, hermiticity_violation, random_unitary, unitarity_violation

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

_SQRT_HALF = 1.0 / np.sqrt(2.0)

# (first, second) basis indices of the six Schmidt-form families
SCHMIDT_PAIRS = {
    1: (0, 5),  # |00>, |12>
    2: (0, 4),  # |00>, |11>
    3: (1, 5),  # |01>, |12>
    4: (1, 3),  # |01>, |10>
    5: (2, 3),  # |02>, |10>
    6: (2, 4),  # |02>, |11>
}


def basis_ket(index: int) -> np.ndarray:
    v = np.zeros(DIM, dtype=complex)
    v[index] = 1.0
    return v


def product_ket(a: int, b: int) -> np.ndarray:
    return basis_ket(DIM_B * a + b)


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def _frozen(m):
    m = np.array(m, dtype=complex)
    m.flags.writeable = False
    return m


def validate(rho, herm_tol=HERMITIAN_TOL, trace_tol=TRACE_TOL, psd_tol=PSD_TOL) -> np.ndarray:
    """Check that ``rho`` is a density matrix and return a read-only copy.

    The copy is the Hermitian part of ``rho``, so it is Hermitian to the
    last bit (a no-op for inputs that already are).  Raises NotHermitian,
    TraceNotOne or NotPSD (checked in that order), each carrying the
    measured violation.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise DimensionMismatch(f"density matrix must be {DIM}x{DIM}, got {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    viol = hermiticity_violation(rho)
    if viol > herm_tol:
        raise NotHermitian(viol, herm_tol)
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise TraceNotOne(abs(tr - 1.0))
    rho = 0.5 * (rho + rho.conj().T)
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -psd_tol:
        raise NotPSD(lam_min)
    return _frozen(rho)


def _check_range(name, value, lo, hi):
    if not (lo <= value <= hi):
        raise ParamOutOfRange(name, value, f"{lo} <= {name} <= {hi}")


def bell_states():
    """phi+, phi-, psi+, psi- on the qubit and the {|0>,|1>} qutrit levels."""
    s = _SQRT_HALF
    phi_p = s * (product_ket(0, 0) + product_ket(1, 1))
    phi_m = s * (product_ket(0, 0) - product_ket(1, 1))
    psi_p = s * (product_ket(0, 1) + product_ket(1, 0))
    psi_m = s * (product_ket(0, 1) - product_ket(1, 0))
    return phi_p, phi_m, psi_p, psi_m


def psi1() -> np.ndarray:
    """(|00> + |12>)/sqrt(2)."""
    return _SQRT_HALF * (product_ket(0, 0) + product_ket(1, 2))


def psi3() -> np.ndarray:
    """(|02> + |10>)/sqrt(2).

    The maximally entangled member of Schmidt family 5.  It spans the
    decoherence-free pair for a z-oriented field, which is what makes the
    alpha-beta family time-invariant in that orientation.
    """
    return _SQRT_HALF * (product_ket(0, 2) + product_ket(1, 0))


def alpha_gamma_beta(alpha: float, gamma: float) -> float:
    """Weight of the three Bell projectors fixed by 2a + 3b + g = 1."""
    return (1.0 - 2.0 * alpha - gamma) / 3.0


def rho_alpha_gamma(alpha: float, gamma: float) -> np.ndarray:
    """alpha (|02><02| + |12><12|) + beta (phi+ + phi- + psi+) + gamma psi-."""
    _check_range("alpha", alpha, 0.0, 0.5)
    _check_range("gamma", gamma, 0.0, 1.0)
    beta = alpha_gamma_beta(alpha, gamma)
    # allow rounding slack on the derived weight, e.g. alpha=0.1, gamma=0.7
    if not (-1e-15 <= beta <= 1.0 / 3.0 + 1e-15):
        raise ParamOutOfRange("beta", beta, "0 <= beta = (1 - 2 alpha - gamma)/3 <= 1/3")
    beta = min(max(beta, 0.0), 1.0 / 3.0)
    phi_p, phi_m, psi_p, psi_m = bell_states()
    rho = alpha * (projector(product_ket(0, 2)) + projector(product_ket(1, 2)))
    rho = rho + beta * (projector(phi_p) + projector(phi_m) + projector(psi_p))
    rho = rho + gamma * projector(psi_m)
    return validate(rho)


def isotropic(alpha: float) -> np.ndarray:
    """alpha |psi1><psi1| + (1 - alpha)/6 I."""
    _check_range("alpha", alpha, 0.0, 1.0)
    return validate(alpha * projector(psi1()) + (1.0 - alpha) / DIM * np.eye(DIM))


def rho_alpha_beta(alpha: float, beta: float) -> np.ndarray:
    """beta |psi3><psi3| + (1 - beta) isotropic(alpha)."""
    _check_range("alpha", alpha, 0.0, 1.0)
    _check_range("beta", beta, 0.0, 1.0)
    return validate(beta * projector(psi3()) + (1.0 - beta) * isotropic(alpha))


def schmidt_state(kind: int, alpha: float, sign: int = 1) -> np.ndarray:
    """alpha |x> + sign sqrt(1 - alpha^2) |y> for the Schmidt family ``kind``.

    ==== ==============
    kind pair
    ==== ==============
    1    |00>, |12>
    2    |00>, |11>
    3    |01>, |12>
    4    |01>, |10>
    5    |02>, |10>
    6    |02>, |11>
    ==== ==============
    """
    if kind not in SCHMIDT_PAIRS:
        raise UnknownKind(f"Schmidt kind must be 1..6, got {kind!r}")
    _check_range("alpha", alpha, 0.0, 1.0)
    if sign not in (1, -1):
        raise ParamOutOfRange("sign", sign, "sign in {+1, -1}")
    i, j = SCHMIDT_PAIRS[kind]
    psi = np.zeros(DIM, dtype=complex)
    psi[i] = alpha
    psi[j] = sign * np.sqrt(max(1.0 - alpha * alpha, 0.0))
    return psi


def arbitrary_pure(u_qubit, u_qutrit, alpha: float, tol: float = 1e-12) -> np.ndarray:
    """(U_A (x) U_B)(alpha|00> + sqrt(1 - alpha^2)|11>)."""
    u_qubit = np.asarray(u_qubit, dtype=complex)
    u_qutrit = np.asarray(u_qutrit, dtype=complex)
    if u_qubit.shape != (DIM_A, DIM_A) or u_qutrit.shape != (DIM_B, DIM_B):
        raise DimensionMismatch("expected a 2x2 and a 3x3 unitary")
    for u in (u_qubit, u_qutrit):
        viol = unitarity_violation(u)
        if viol > tol:
            raise NotUnitary(viol)
    _check_range("alpha", alpha, 0.0, 1.0)
    core = alpha * product_ket(0, 0) + np.sqrt(max(1.0 - alpha * alpha, 0.0)) * product_ket(1, 1)
    return np.kron(u_qubit, u_qutrit) @ core


def maximally_mixed() -> np.ndarray:
    return validate(np.eye(DIM) / DIM)


def pure_density(psi, tol: float = 1e-12) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ParamOutOfRange("norm", norm, "|psi| = 1")
    return validate(projector(psi))


def random_pure(rng: np.random.Generator, dim: int = DIM) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def random_density(rng: np.random.Generator, rank: int = DIM) -> np.ndarray:
    """Convex mixture of ``rank`` Haar-random pure states, flat Dirichlet weights."""
    w = rng.dirichlet(np.ones(rank))
    rho = sum(wi * projector(random_pure(rng)) for wi in w)
    return validate(rho)


def random_product(rng: np.random.Generator) -> np.ndarray:
    """rho_A (x) rho_B with both factors random full-rank mixtures."""
    def factor(d):
        w = rng.dirichlet(np.ones(d))
        return sum(wi * projector(random_pure(rng, d)) for wi in w)

    return validate(np.kron(factor(DIM_A), factor(DIM_B)))


def random_separable(rng: np.random.Generator, terms: int = 4) -> np.ndarray:
    w = rng.dirichlet(np.ones(terms))
    return validate(sum(wi * random_product(rng) for wi in w))


def random_local_unitary(rng: np.random.Generator) -> np.ndarray:
    return np.kron(random_unitary(DIM_A, rng), random_unitary(DIM_B, rng))
