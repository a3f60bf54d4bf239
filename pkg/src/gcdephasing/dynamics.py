"""Collective dephasing of a qubit-qutrit pair in an arbitrarily oriented field.

The qubit couples through ``n . sigma`` and the qutrit through
``S_z = diag(1, 0, -1)``; both see the same classical white-noise field.
With the collective operator ``G = n.sigma (x) I + I (x) S_z`` the master
equation is ``d rho / d tau = -1/4 [G, [G, rho]]`` with ``tau = Gamma t``.

Vectorization is row-major throughout: ``vec(rho) = rho.reshape(36)``, so
``vec(A rho B) = kron(A, B.T) vec(rho)``.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .correlations import lqu, negativity
from .errors import ConvergenceFailure, NegativeTime, NotUnitVector, NumericalError
from .linalg import (
    DIM,
    DIM_A,
    DIM_B,
    PAULIS,
    HermitianEigenSystem,
    hermitian_eigendecompose,
    qubit_local,
    qutrit_local,
)
from .states import validate

SZ_QUTRIT = np.diag([1.0, 0.0, -1.0]).astype(complex)
UNIT_TOL = 1e-12
SPECTRUM = (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class Orientation:
    """Unit vector giving the field direction seen by the qubit."""

    nx: float
    ny: float
    nz: float

    def __post_init__(self):
        norm = float(np.sqrt(self.nx ** 2 + self.ny ** 2 + self.nz ** 2))
        if not np.isfinite(norm) or abs(norm * norm - 1.0) > UNIT_TOL:
            raise NotUnitVector(norm)

    @classmethod
    def normalized(cls, x, y, z) -> "Orientation":
        v = np.array([x, y, z], dtype=float)
        norm = np.linalg.norm(v)
        if norm == 0 or not np.isfinite(norm):
            raise NotUnitVector(norm)
        v = v / norm
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz])

    def __neg__(self):
        return Orientation(-self.nx, -self.ny, -self.nz)

    def as_tuple(self):
        return (self.nx, self.ny, self.nz)


def as_orientation(n) -> Orientation:
    if isinstance(n, Orientation):
        return n
    v = np.asarray(n, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise NotUnitVector(np.nan)
    return Orientation(float(v[0]), float(v[1]), float(v[2]))


_R3 = 1.0 / np.sqrt(3.0)
_R2 = 1.0 / np.sqrt(2.0)

# z (time-invariant), x (sudden death) plus three directions that freeze the
# alpha-beta state; the n_x = 0 pair also shows the early LQU rise (see README).
DEFAULT_ORIENTATIONS = {
    "z": Orientation(0.0, 0.0, 1.0),
    "x": Orientation(1.0, 0.0, 0.0),
    "yz30": Orientation(0.0, 0.5, float(np.sqrt(3.0) / 2.0)),
    "xyz": Orientation(_R3, _R3, _R3),
    "yz45": Orientation(0.0, _R2, _R2),
}


def qubit_field(n) -> np.ndarray:
    """n . sigma on the qubit (2x2)."""
    v = as_orientation(n).vector
    return sum(c * p for c, p in zip(v, PAULIS))


@dataclass(frozen=True)
class CollectiveOperator:
    orientation: Orientation
    matrix: np.ndarray = field(repr=False)
    spectrum: HermitianEigenSystem = field(repr=False)
    projectors: dict = field(repr=False)  # eigenvalue (int) -> spectral projector

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues


@lru_cache(maxsize=256)
def _collective_operator(n: Orientation) -> CollectiveOperator:
    g = qubit_local(qubit_field(n)) + qutrit_local(SZ_QUTRIT)
    es = hermitian_eigendecompose(g)
    labels = np.rint(es.eigenvalues)
    if np.max(np.abs(labels - es.eigenvalues)) > 1e-10:
        raise NumericalError(f"collective operator spectrum {es.eigenvalues} is not integral")
    projectors = {}
    for val in SPECTRUM:
        cols = es.eigenvectors[:, labels == val]
        p = cols @ cols.conj().T
        p.flags.writeable = False
        projectors[val] = p
    if sorted(int(v) for v in labels) != [-2, -1, 0, 0, 1, 2]:
        raise NumericalError(f"unexpected collective spectrum {labels}")
    g.flags.writeable = False
    return CollectiveOperator(n, g, es, projectors)


def collective_operator(n) -> CollectiveOperator:
    """G(n) = n.sigma (x) I_3 + I_2 (x) S_z with its spectral projectors."""
    return _collective_operator(as_orientation(n))


# -- superoperators -----------------------------------------------------------

_I6 = np.eye(DIM)


def _left(a):
    return np.kron(a, _I6)


def _right(b):
    return np.kron(_I6, b.T)


def _sandwich(a, b):
    return np.kron(a, b.T)


def _anti(x):
    return _left(x) + _right(x)


@dataclass(frozen=True)
class Generator:
    orientation: Orientation
    superoperator: np.ndarray = field(repr=False)
    rate: float = 1.0

    def apply(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return (self.superoperator @ rho.reshape(DIM * DIM)).reshape(DIM, DIM)


def build_generator(n) -> Generator:
    """Liouvillian assembled term by term from the master equation.

    Three groups: the qubit double sum over n_i n_j, the qubit-qutrit cross
    terms with the nested anticommutator, and the qutrit self term.
    """
    n = as_orientation(n)
    v = n.vector
    sig = [qubit_local(p) for p in PAULIS]
    sz = qutrit_local(SZ_QUTRIT)

    qubit_part = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    for i in range(3):
        for j in range(3):
            if v[i] == 0.0 or v[j] == 0.0:
                continue
            ss = sig[i] @ sig[j]
            qubit_part += v[i] * v[j] * (_left(ss) + _right(ss) - 2.0 * _sandwich(sig[i], sig[j]))

    cross = np.zeros_like(qubit_part)
    for j in range(3):
        if v[j] == 0.0:
            continue
        ac = sig[j] @ sz + sz @ sig[j]
        cross += v[j] * (_sandwich(sig[j], sz) + _sandwich(sz, sig[j]) - 0.5 * _anti(ac))

    qutrit_part = _anti(sz @ sz) - 2.0 * _sandwich(sz, sz)

    lv = -0.25 * (qubit_part - 2.0 * cross + qutrit_part)
    lv.flags.writeable = False
    return Generator(n, lv)


def double_commutator_generator(n) -> Generator:
    """Liouvillian of rho -> -1/4 [G, [G, rho]] built directly from G."""
    n = as_orientation(n)
    g = collective_operator(n).matrix
    g2 = g @ g
    lv = -0.25 * (_left(g2) + _right(g2) - 2.0 * _sandwich(g, g))
    lv.flags.writeable = False
    return Generator(n, lv)


# -- propagators ---------------------------------------------------------------

def _check_time(tau):
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0) or not np.all(np.isfinite(tau)):
        raise NegativeTime(f"times must be finite and >= 0, got {tau}")
    return tau


def _blocks(rho, op):
    """P_a rho P_b for all spectral projectors, shape (5, 5, 6, 6)."""
    p = np.array([op.projectors[v] for v in SPECTRUM])
    return np.einsum("aij,jk,bkl->abil", p, np.asarray(rho, dtype=complex), p)


_GAPS = np.subtract.outer(np.array(SPECTRUM, float), np.array(SPECTRUM, float)) ** 2 / 4.0


def evolve_exact_many(rho0, n, taus) -> np.ndarray:
    """rho(tau) = sum_ab exp(-tau (g_a - g_b)^2 / 4) P_a rho0 P_b for each tau."""
    taus = _check_time(np.atleast_1d(taus))
    op = collective_operator(n)
    blocks = _blocks(rho0, op)
    weights = np.exp(-np.multiply.outer(taus, _GAPS))
    out = np.einsum("tab,abij->tij", weights, blocks)
    return 0.5 * (out + np.conj(np.swapaxes(out, -1, -2)))


def evolve_exact(rho0, n, tau: float) -> np.ndarray:
    if np.ndim(tau) != 0:
        raise ValueError("tau must be a scalar; use evolve_exact_many for grids")
    if tau == 0:
        _check_time(tau)
        as_orientation(n)
        return np.array(rho0, dtype=complex)
    return evolve_exact_many(rho0, n, [tau])[0]


def asymptotic_state(rho0, n) -> np.ndarray:
    """tau -> infinity limit: sum_g P_g rho0 P_g."""
    op = collective_operator(n)
    rho0 = np.asarray(rho0, dtype=complex)
    out = sum(p @ rho0 @ p for p in op.projectors.values())
    return 0.5 * (out + out.conj().T)


def evolve_superop(rho0, n, tau: float, generator: Optional[Generator] = None) -> np.ndarray:
    """exp(tau L) vec(rho0) via a dense matrix exponential.

    ``rho0`` may also be a stack of shape (k, 6, 6).
    """
    _check_time(tau)
    gen = build_generator(n) if generator is None else generator
    prop = scipy.linalg.expm(tau * gen.superoperator)
    if not np.all(np.isfinite(prop)):
        raise ConvergenceFailure("matrix exponential produced non-finite entries")
    rho0 = np.asarray(rho0, dtype=complex)
    flat = rho0.reshape(-1, DIM * DIM)
    out = (flat @ prop.T).reshape(rho0.shape)
    return out


def _rk4(lm, y, tau, steps):
    h = tau / steps
    for _ in range(steps):
        k1 = y @ lm
        k2 = (y + 0.5 * h * k1) @ lm
        k3 = (y + 0.5 * h * k2) @ lm
        k4 = (y + h * k3) @ lm
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def evolve_ode(rho0, n, tau: float, tol: float = 1e-12, max_halvings: int = 14,
               generator: Optional[Generator] = None) -> np.ndarray:
    """Classical RK4 with step halving until two successive answers agree.

    Returns the Richardson-extrapolated result of the last pair.  ``rho0``
    may be a stack of shape (k, 6, 6).
    """
    _check_time(tau)
    rho0 = np.asarray(rho0, dtype=complex)
    if tau == 0:
        return rho0.copy()
    gen = build_generator(n) if generator is None else generator
    lm = gen.superoperator.T
    y0 = rho0.reshape(-1, DIM * DIM)
    # largest rate is 4; keep h * 4 well inside the RK4 stability region
    steps = max(8, int(np.ceil(8.0 * tau)))
    coarse = _rk4(lm, y0, tau, steps)
    for _ in range(max_halvings):
        steps *= 2
        fine = _rk4(lm, y0, tau, steps)
        if np.max(np.abs(fine - coarse)) < tol:
            return (fine + (fine - coarse) / 15.0).reshape(rho0.shape)
        coarse = fine
    raise ConvergenceFailure(f"RK4 step halving did not reach tol={tol} with {steps} steps")


# -- stochastic unfolding --------------------------------------------------------

PHASE_VARIANCE_PER_TAU = 0.5  # Var(theta) = tau / 2 reproduces the 1/4 prefactor


def _phase_unitaries(n, theta) -> np.ndarray:
    """exp(i theta G) for each theta, using (n.sigma)^2 = I; shape (N, 6, 6)."""
    theta = np.asarray(theta, dtype=float)
    ns = qubit_field(n)
    ua = np.cos(theta)[:, None, None] * np.eye(DIM_A) + 1j * np.sin(theta)[:, None, None] * ns
    ub = np.exp(1j * np.multiply.outer(theta, np.diag(SZ_QUTRIT).real))
    # kron(ua, diag(ub)) per sample
    return np.einsum("nab,nj,jk->najbk", ua, ub, np.eye(DIM_B)).reshape(-1, DIM, DIM)


def _phase_average(rho0, n, theta, chunk) -> np.ndarray:
    rho0 = np.asarray(rho0, dtype=complex)
    acc = np.zeros((DIM, DIM), dtype=complex)
    for start in range(0, len(theta), chunk):
        u = _phase_unitaries(n, theta[start:start + chunk])
        acc += np.einsum("nij,jk,nlk->il", u, rho0, u.conj())
    return acc / len(theta)


def _rng(seed):
    return np.random.Generator(np.random.Philox(seed))


def stochastic_unfold(rho0, n, tau: float, trajectories: int, seed: int,
                      chunk: int = 8192) -> np.ndarray:
    """Monte Carlo average of exp(i theta G) rho0 exp(-i theta G), theta ~ N(0, tau/2).

    The draws come from one counter-based (Philox) stream keyed by ``seed``,
    so the estimate does not depend on chunking or threading.
    """
    _check_time(tau)
    if trajectories < 1:
        raise ValueError("trajectories must be >= 1")
    n = as_orientation(n)
    theta = _rng(seed).normal(0.0, np.sqrt(PHASE_VARIANCE_PER_TAU * tau), size=trajectories)
    return _phase_average(rho0, n, theta, chunk)


def stochastic_unfold_path(rho0, n, taus: Sequence[float], trajectories: int, seed: int,
                           chunk: int = 8192) -> np.ndarray:
    """Same estimator along Wiener phase paths sampled at ``taus`` (ascending)."""
    taus = _check_time(np.asarray(taus, dtype=float))
    if trajectories < 1:
        raise ValueError("trajectories must be >= 1")
    if np.any(np.diff(taus) < 0):
        raise ValueError("taus must be ascending")
    n = as_orientation(n)
    dt = np.diff(np.concatenate([[0.0], taus]))
    incr = _rng(seed).standard_normal((trajectories, len(taus))) * np.sqrt(PHASE_VARIANCE_PER_TAU * dt)
    theta = np.cumsum(incr, axis=1)
    return np.array([_phase_average(rho0, n, theta[:, k], chunk) for k in range(len(taus))])


# -- trajectories ----------------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray = field(repr=False)
    negativity: np.ndarray = field(repr=False)
    lqu: np.ndarray = field(repr=False)
    rho0: np.ndarray = field(repr=False)
    orientation: Orientation

    def __post_init__(self):
        t = np.asarray(self.times)
        if t.ndim != 1 or len(t) < 2 or np.any(np.diff(t) <= 0):
            raise ValueError("trajectory times must be strictly increasing with >= 2 points")
        for arr in (self.times, self.states, self.negativity, self.lqu, self.rho0):
            arr.flags.writeable = False

    def measure(self, name: str) -> np.ndarray:
        if name == "negativity":
            return self.negativity
        if name == "lqu":
            return self.lqu
        raise ValueError(f"unknown measure {name!r}")


def sample_trajectory(rho0, n, tau_max: float, steps: int, validate_states: bool = True) -> Trajectory:
    """Exact states and both correlation measures on a uniform grid over [0, tau_max]."""
    if not tau_max > 0:
        raise ValueError("tau_max must be > 0")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    n = as_orientation(n)
    rho0 = validate(rho0)
    times = np.linspace(0.0, float(tau_max), int(steps))
    states = evolve_exact_many(rho0, n, times)
    states[0] = rho0
    if validate_states:
        for s in states:
            validate(s)
    neg = np.array([negativity(s) for s in states])
    lq = np.array([lqu(s) for s in states])
    return Trajectory(times, states, neg, lq, np.array(rho0), n)
