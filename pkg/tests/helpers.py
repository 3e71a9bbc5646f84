"""Shared generators and independent oracles used across test modules."""
import numpy as np

from thermalqkd.gaussian import (
    GaussianState,
    apply_symplectic,
    beamsplitter_symplectic,
    epr_state,
    tensor,
    thermal_state,
)


def rotation_symplectic(theta: float, mode: int, total_modes: int) -> np.ndarray:
    """Single-mode phase rotation embedded in a 2N x 2N identity."""
    S = np.eye(2 * total_modes)
    c, s = np.cos(theta), np.sin(theta)
    i = 2 * mode
    S[i:i + 2, i:i + 2] = [[c, s], [-s, c]]
    return S


def squeezer_symplectic(r: float, mode: int, total_modes: int) -> np.ndarray:
    """Single-mode squeezer diag(e^r, e^-r) embedded in a 2N x 2N identity."""
    S = np.eye(2 * total_modes)
    i = 2 * mode
    S[i, i] = np.exp(r)
    S[i + 1, i + 1] = np.exp(-r)
    return S


def random_symplectic(rng: np.random.Generator, n_modes: int) -> np.ndarray:
    """Random symplectic built from beamsplitters, rotations and squeezers."""
    S = np.eye(2 * n_modes)
    for _ in range(2 * n_modes):
        kind = rng.integers(3)
        if kind == 0 and n_modes >= 2:
            i, j = rng.choice(n_modes, size=2, replace=False)
            S = beamsplitter_symplectic(rng.uniform(), int(i), int(j), n_modes) @ S
        elif kind == 1:
            S = rotation_symplectic(rng.uniform(0, 2 * np.pi), int(rng.integers(n_modes)), n_modes) @ S
        else:
            S = squeezer_symplectic(rng.uniform(-0.8, 0.8), int(rng.integers(n_modes)), n_modes) @ S
    return S


def random_physical_state(rng: np.random.Generator, n_modes: int) -> GaussianState:
    """Random physical Gaussian state: thermal product pushed through a random symplectic."""
    state = thermal_state(rng.uniform(0.0, 3.0))
    for _ in range(n_modes - 1):
        state = tensor(state, thermal_state(rng.uniform(0.0, 3.0)))
    return apply_symplectic(state, random_symplectic(rng, n_modes))


def random_correlated_pair(rng: np.random.Generator) -> GaussianState:
    """Two-mode state with generic cross correlations (EPR + passive mixing)."""
    state = epr_state(rng.uniform(1.0, 4.0))
    return apply_symplectic(state, random_symplectic(rng, 2))


def two_mode_symplectic_oracle(cov: np.ndarray) -> np.ndarray:
    """Closed form for two-mode symplectic eigenvalues from the block invariants.

    x_pm^2 = (Delta pm sqrt(Delta^2 - 4 det cov)) / 2 with
    Delta = det A + det B + 2 det C.
    """
    A = cov[0:2, 0:2]
    B = cov[2:4, 2:4]
    C = cov[0:2, 2:4]
    delta = np.linalg.det(A) + np.linalg.det(B) + 2.0 * np.linalg.det(C)
    disc = np.sqrt(max(delta * delta - 4.0 * np.linalg.det(cov), 0.0))
    return np.sqrt(np.array([(delta - disc) / 2.0, (delta + disc) / 2.0]))


def fock_series_entropy(n_bar: float) -> float:
    """Thermal-state entropy by direct Bose-Einstein series, -sum p_n log2 p_n."""
    if n_bar == 0:
        return 0.0
    # geometric p_n = n_bar^n / (n_bar+1)^(n+1); truncate once the tail is negligible
    n_terms = max(int(40 * n_bar), 200)
    n = np.arange(n_terms)
    log_p = n * np.log(n_bar) - (n + 1) * np.log(n_bar + 1.0)
    p = np.exp(log_p)
    return float(-(p * (log_p / np.log(2.0))).sum())
