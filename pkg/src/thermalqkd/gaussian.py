"""Gaussian-state core: mode-ordered states, symplectic transforms, entropies.

Conventions used throughout the package:

* quadrature ordering is interleaved, (x1, p1, x2, p2, ...);
* covariance matrices are in shot-noise units with vacuum variance = 1,
  so a thermal state of mean photon number n has variance V = 2 n + 1;
* entropies are in bits (log base 2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.constants as const

from .errors import DomainError, UnphysicalStateError

SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-9
# singular values below this fraction of the largest are treated as zero
PINV_RCOND = 1e-12

_QUAD_PROJECTORS = {
    "x": np.diag([1.0, 0.0]),
    "p": np.diag([0.0, 1.0]),
}


def symplectic_form(n_modes: int) -> np.ndarray:
    """2N x 2N symplectic form: 2x2 blocks [[0, 1], [-1, 0]] on the diagonal."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Covariance matrix, displacement vector and mode labels of a Gaussian state."""

    cov: np.ndarray
    disp: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        cov = np.array(self.cov, dtype=float)
        disp = np.array(self.disp, dtype=float)
        labels = tuple(self.labels)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise DomainError(f"covariance must be square 2N x 2N, got {cov.shape}")
        n = cov.shape[0] // 2
        if disp.shape != (2 * n,):
            raise DomainError(f"displacement length {disp.shape} does not match {n} modes")
        if len(labels) != n:
            raise DomainError(f"{len(labels)} labels for {n} modes")
        if not (np.all(np.isfinite(cov)) and np.all(np.isfinite(disp))):
            raise DomainError("covariance and displacement must be finite")
        if np.max(np.abs(cov - cov.T), initial=0.0) > SYMMETRY_TOL:
            raise DomainError("covariance must be symmetric to 1e-12")
        cov.setflags(write=False)
        disp.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "disp", disp)
        object.__setattr__(self, "labels", labels)

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    def mode_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"no mode labeled {label!r} in {self.labels}") from None

    def block(self, i: int, j: int) -> np.ndarray:
        """2x2 covariance block between modes i and j."""
        return self.cov[2 * i:2 * i + 2, 2 * j:2 * j + 2]


def _symmetrized(m: np.ndarray) -> np.ndarray:
    return (m + m.T) / 2.0


def thermal_occupation(omega_angular: float, temperature: float) -> float:
    """Bose-Einstein mean photon number 1 / (exp(hbar w / kB T) - 1).

    ``omega_angular`` is an angular frequency in rad/s.
    """
    if omega_angular <= 0.0 or temperature <= 0.0:
        raise DomainError("omega_angular and temperature must be positive")
    x = const.hbar * omega_angular / (const.k * temperature)
    if x > 700.0:  # expm1 would overflow; occupation is below every subnormal
        return 0.0
    return 1.0 / np.expm1(x)


def thermal_state(n_bar: float, disp: tuple[float, float] = (0.0, 0.0),
                  label: str = "thermal") -> GaussianState:
    """Single-mode thermal state, cov = (2 n_bar + 1) I; optionally displaced."""
    if n_bar < 0.0:
        raise DomainError("n_bar must be >= 0")
    return GaussianState((2.0 * n_bar + 1.0) * np.eye(2), np.array(disp, dtype=float), (label,))


def epr_state(nu: float, labels: tuple[str, str] = ("epr0", "epr1")) -> GaussianState:
    """Two-mode squeezed vacuum with marginal variance nu."""
    if nu < 1.0:
        raise UnphysicalStateError("EPR parameter nu must be >= 1")
    z = np.diag([1.0, -1.0])
    c = np.sqrt(nu * nu - 1.0) * z
    cov = np.block([[nu * np.eye(2), c], [c, nu * np.eye(2)]])
    return GaussianState(cov, np.zeros(4), tuple(labels))


def tensor(a: GaussianState, b: GaussianState) -> GaussianState:
    """Product state: block-diagonal covariance, concatenated displacement and labels."""
    na, nb = 2 * a.n_modes, 2 * b.n_modes
    cov = np.zeros((na + nb, na + nb))
    cov[:na, :na] = a.cov
    cov[na:, na:] = b.cov
    return GaussianState(cov, np.concatenate([a.disp, b.disp]), a.labels + b.labels)


def partial_trace(state: GaussianState, keep) -> GaussianState:
    """Restriction to the listed modes; the order given becomes the new mode order."""
    keep = list(keep)
    if not keep:
        raise DomainError("keep set must be non-empty")
    if len(set(keep)) != len(keep):
        raise DomainError("keep set has repeated modes")
    if any(k < 0 or k >= state.n_modes for k in keep):
        raise DomainError(f"mode index out of range for {state.n_modes} modes")
    idx = np.concatenate([[2 * k, 2 * k + 1] for k in keep])
    return GaussianState(state.cov[np.ix_(idx, idx)], state.disp[idx],
                         tuple(state.labels[k] for k in keep))


def beamsplitter_symplectic(eta: float, mode_i: int, mode_j: int,
                            total_modes: int) -> np.ndarray:
    """Beamsplitter of transmittance eta acting on modes (i, j) of an N-mode system.

    The 4x4 action is [[sqrt(eta) I, mu I], [-mu I, sqrt(eta) I]] with
    mu = sqrt(1 - eta): output i is the transmitted port, output j the reflected one.
    """
    if not 0.0 <= eta <= 1.0:
        raise DomainError("eta must lie in [0, 1]")
    if mode_i == mode_j:
        raise DomainError("beamsplitter needs two distinct modes")
    if not (0 <= mode_i < total_modes and 0 <= mode_j < total_modes):
        raise DomainError("mode index out of range")
    t, mu = np.sqrt(eta), np.sqrt(1.0 - eta)
    S = np.eye(2 * total_modes)
    i, j = 2 * mode_i, 2 * mode_j
    S[i:i + 2, i:i + 2] = t * np.eye(2)
    S[i:i + 2, j:j + 2] = mu * np.eye(2)
    S[j:j + 2, i:i + 2] = -mu * np.eye(2)
    S[j:j + 2, j:j + 2] = t * np.eye(2)
    return S


def apply_symplectic(state: GaussianState, S: np.ndarray) -> GaussianState:
    """Transform cov -> S cov S^T and disp -> S disp."""
    S = np.asarray(S, dtype=float)
    if S.shape != (2 * state.n_modes, 2 * state.n_modes):
        raise DomainError(f"symplectic shape {S.shape} does not match {state.n_modes} modes")
    return GaussianState(_symmetrized(S @ state.cov @ S.T), S @ state.disp, state.labels)


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """The N invariants x_k >= 0 with spectrum(i Omega cov) = {+-x_k}, ascending.

    Computed from cov^(1/2) Omega cov^(1/2), which is antisymmetric and hence
    normal, so its eigenvalues +-i x_k are perfectly conditioned.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise DomainError("covariance must be square 2N x 2N")
    if np.max(np.abs(cov - cov.T), initial=0.0) > SYMMETRY_TOL * max(1.0, np.max(np.abs(cov))):
        raise DomainError("covariance must be symmetric")
    w, u = np.linalg.eigh(cov)
    if w[0] <= 0.0:
        raise DomainError("covariance must be positive definite")
    root = (u * np.sqrt(w)) @ u.T
    k = root @ symplectic_form(cov.shape[0] // 2) @ root
    vals = np.abs(np.linalg.eigvals(k).imag)
    vals.sort()
    return (vals[0::2] + vals[1::2]) / 2.0


def g_function(x: float) -> float:
    """Entropy of one symplectic eigenvalue, in bits.

    g(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2), with g(1) = 0.
    """
    if x < 1.0 - PHYSICALITY_TOL:
        raise DomainError(f"g is defined for x >= 1, got {x}")
    if x <= 1.0:
        return 0.0  # rounding band below purity clamps to the pure value
    hi = (x + 1.0) / 2.0
    lo = (x - 1.0) / 2.0
    return float(hi * np.log2(hi) - lo * np.log2(lo))


def von_neumann_entropy(cov: np.ndarray) -> float:
    """Sum of g over the symplectic eigenvalues, in bits."""
    eigs = symplectic_eigenvalues(cov)
    if eigs[0] < 1.0 - PHYSICALITY_TOL:
        raise UnphysicalStateError(f"minimum symplectic eigenvalue {eigs[0]} < 1")
    return float(sum(g_function(float(x)) for x in eigs))


def is_physical(cov: np.ndarray, tol: float = PHYSICALITY_TOL) -> bool:
    """True when every symplectic eigenvalue is >= 1 - tol."""
    return bool(np.min(symplectic_eigenvalues(cov)) >= 1.0 - tol)


def homodyne_condition(state: GaussianState, measured_mode: int,
                       quadrature: str = "x") -> GaussianState:
    """State of the remaining modes after a homodyne measurement on one mode.

    cov' = cov_rest - C (X cov_m X)^+ C^T with X the projector onto the
    measured quadrature and ^+ the Moore-Penrose pseudo-inverse.  The
    covariance is outcome-independent; the returned displacement is the
    outcome-averaged (pre-measurement) marginal mean.
    """
    if state.n_modes < 2:
        raise DomainError("conditioning needs at least two modes")
    if quadrature not in _QUAD_PROJECTORS:
        raise DomainError("quadrature must be 'x' or 'p'")
    if not 0 <= measured_mode < state.n_modes:
        raise DomainError("measured mode out of range")
    x = _QUAD_PROJECTORS[quadrature]
    m = 2 * measured_mode
    rest = [k for k in range(state.n_modes) if k != measured_mode]
    idx = np.concatenate([[2 * k, 2 * k + 1] for k in rest])
    gamma_m = state.cov[m:m + 2, m:m + 2]
    c = state.cov[np.ix_(idx, [m, m + 1])]
    pinv = np.linalg.pinv(x @ gamma_m @ x, rcond=PINV_RCOND)
    cov = _symmetrized(state.cov[np.ix_(idx, idx)] - c @ pinv @ c.T)
    return GaussianState(cov, state.disp[idx], tuple(state.labels[k] for k in rest))
