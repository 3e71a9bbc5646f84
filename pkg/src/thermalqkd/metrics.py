"""Secrecy metrics for labeled Gaussian broadcast states.

Every quantity is reported in bits.  Functions here expect states whose
modes carry the labels assigned by :func:`thermalqkd.network.build_pipeline`:
"a" for the receiver at the first tap, "b" for the receiver behind the lossy
channel, "e" for the adversary's mode.  Conditional entropies use ideal
homodyne detection; Gaussian states keep Gaussian conditionals under
homodyne, so the conditioned entropy is outcome independent.
"""
from __future__ import annotations

from dataclasses import dataclass

import scipy.constants as const

from .errors import DomainError
from .gaussian import (
    GaussianState,
    homodyne_condition,
    partial_trace,
    von_neumann_entropy,
)
from .network import ProtocolParams, add_detector_noise, build_pipeline

__all__ = [
    "MetricsReport",
    "EveBounds",
    "mutual_information_ab",
    "holevo",
    "discord_b_given_a",
    "key_rates",
    "eve_energy_bounds",
    "evaluate",
]

_PARTY_LABELS = {"alice": "a", "bob": "b"}


@dataclass(frozen=True)
class MetricsReport:
    """One full secrecy evaluation at a single parameter point."""

    params: ProtocolParams
    i_ab: float
    i_be: float
    chi_be: float
    chi_ae: float
    discord_b_given_a: float
    discord_quadrature: str
    key_rate_k: float
    key_rate_k_prime: float


@dataclass(frozen=True)
class EveBounds:
    """Energy scales limiting an intercept at the broadcast source.

    ``delta_e_min`` is the smallest energy change (eV) resolvable by a
    detector that must finish within half a coherence window.
    ``vacuum_energy`` is the zero-point energy (eV) of the mode being
    monitored.  Both scale the difficulty of reading the source
    unnoticed.
    """

    coherence_time: float
    photon_energy: float
    delta_e_min: float
    vacuum_energy: float

    @property
    def ratio(self) -> float:
        """Zero-point energy over the detection floor (dimensionless)."""
        return self.vacuum_energy / self.delta_e_min


def _subsystem_entropy(state: GaussianState, labels: tuple[str, ...]) -> float:
    keep = [state.mode_index(label) for label in labels]
    return von_neumann_entropy(partial_trace(state, keep).cov)


def mutual_information_ab(state: GaussianState) -> float:
    """Quantum mutual information I(A:B) between modes "a" and "b", in bits."""
    s_a = _subsystem_entropy(state, ("a",))
    s_b = _subsystem_entropy(state, ("b",))
    s_ab = _subsystem_entropy(state, ("a", "b"))
    return s_a + s_b - s_ab


def holevo(state: GaussianState, eve_mode: str = "e",
           conditioned_on: str = "bob") -> float:
    """Holevo bound on the adversary's information about one party's key.

    The named party measures the x quadrature by homodyne; the bound is
    S(E) minus the entropy of the adversary's conditional state.
    ``conditioned_on`` accepts "bob" or "alice" (case insensitive).
    """
    party = _PARTY_LABELS.get(conditioned_on.lower())
    if party is None:
        raise DomainError(
            f"conditioned_on must be 'alice' or 'bob', got {conditioned_on!r}")
    s_e = _subsystem_entropy(state, (eve_mode,))
    joint = partial_trace(
        state, [state.mode_index(eve_mode), state.mode_index(party)])
    conditional = homodyne_condition(joint, measured_mode=1, quadrature="x")
    return s_e - von_neumann_entropy(conditional.cov)


def discord_b_given_a(state: GaussianState,
                      detail: bool = False) -> float | tuple[float, str]:
    """Gaussian quantum discord D(B|A) with homodyne measurements on "a".

    Minimizes the conditional entropy of "b" over the two quadrature
    choices for the measurement on "a".  With ``detail=True`` the
    minimizing quadrature ("x" on a tie) is returned alongside the value.
    """
    s_a = _subsystem_entropy(state, ("a",))
    s_ab = _subsystem_entropy(state, ("a", "b"))
    joint = partial_trace(
        state, [state.mode_index("a"), state.mode_index("b")])
    best_entropy, best_quad = None, None
    for quad in ("x", "p"):
        conditional = homodyne_condition(joint, measured_mode=0, quadrature=quad)
        s_cond = von_neumann_entropy(conditional.cov)
        if best_entropy is None or s_cond < best_entropy:
            best_entropy, best_quad = s_cond, quad
    value = s_a - s_ab + best_entropy
    if detail:
        return value, best_quad
    return value


def key_rates(state: GaussianState) -> tuple[float, float]:
    """Key rates (K, K') in bits per channel use.

    K charges the adversary the Holevo bound on Bob's key; K' charges
    the full quantum mutual information I(B:E) instead, a strictly more
    pessimistic accounting.
    """
    i_ab = mutual_information_ab(state)
    chi_be = holevo(state, conditioned_on="bob")
    s_b = _subsystem_entropy(state, ("b",))
    s_e = _subsystem_entropy(state, ("e",))
    s_be = _subsystem_entropy(state, ("b", "e"))
    i_be = s_b + s_e - s_be
    return i_ab - chi_be, i_ab - i_be


def eve_energy_bounds(coherence_time: float, photon_energy: float) -> EveBounds:
    """Detection-floor bounds for an intercept on a source of given coherence.

    ``coherence_time`` is in seconds; ``photon_energy`` in eV.  A
    measurement finishing within half a coherence window obeys
    dE >= hbar / coherence_time; the zero-point energy of the monitored
    mode is photon_energy / (4 pi).
    """
    if coherence_time <= 0.0:
        raise DomainError(f"coherence_time must be positive, got {coherence_time}")
    if photon_energy <= 0.0:
        raise DomainError(f"photon_energy must be positive, got {photon_energy}")
    delta_t = coherence_time / 2.0
    delta_e_min = const.hbar / (2.0 * delta_t) / const.e
    vacuum_energy = photon_energy / (4.0 * const.pi)
    return EveBounds(coherence_time=coherence_time,
                     photon_energy=photon_energy,
                     delta_e_min=delta_e_min,
                     vacuum_energy=vacuum_energy)


def evaluate(params: ProtocolParams) -> MetricsReport:
    """Run the network at one parameter point and report every metric."""
    state = add_detector_noise(
        build_pipeline(params).after_eta4, params.n_a, params.n_b)
    i_ab = mutual_information_ab(state)
    s_b = _subsystem_entropy(state, ("b",))
    s_e = _subsystem_entropy(state, ("e",))
    s_be = _subsystem_entropy(state, ("b", "e"))
    i_be = s_b + s_e - s_be
    chi_be = holevo(state, conditioned_on="bob")
    chi_ae = holevo(state, conditioned_on="alice")
    discord, quadrature = discord_b_given_a(state, detail=True)
    return MetricsReport(
        params=params,
        i_ab=i_ab,
        i_be=i_be,
        chi_be=chi_be,
        chi_ae=chi_ae,
        discord_b_given_a=discord,
        discord_quadrature=quadrature,
        key_rate_k=i_ab - chi_be,
        key_rate_k_prime=i_ab - i_be,
    )
