"""The central-broadcast beamsplitter network.

A thermal source is split three times: eta1 reflects a share to Alice and
transmits the rest onward; eta2 reflects a share to the eavesdropper (who may
inject her own mode at the free port) and transmits toward Bob; eta4 models
the lossy thermal noise channel in front of Bob.  The final four modes are
labeled (a, e, b, n): Alice, Eve, Bob and the noise-channel output.

The stage covariances are produced two independent ways, by numeric symplectic
propagation (``build_pipeline``) and by closed-form block evaluation
(``closed_form_blocks_eta2`` / ``closed_form_blocks_eta4``); tests hold the two
routes equal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChannelError, DomainError, UnphysicalStateError
from .gaussian import (
    GaussianState,
    apply_symplectic,
    beamsplitter_symplectic,
    partial_trace,
    tensor,
    thermal_state,
)


@dataclass(frozen=True)
class ProtocolParams:
    """All dial settings for one network evaluation.

    Transmittances eta1/eta2/eta4 lie in [0, 1]; v_s_x / v_s_p are the source
    quadrature variances and v_e the eavesdropper input variance (SNU, >= 1);
    epsilon is the channel excess noise and n_a / n_b the detector noise added
    to Alice's and Bob's modes (SNU, >= 0).
    """

    eta1: float = 0.5
    eta2: float = 0.5
    eta4: float = 10.0 ** -0.7
    epsilon: float = 0.01
    v_s_x: float = 200.0
    v_s_p: float = 200.0
    v_e: float = 1.0
    n_a: float = 1.0
    n_b: float = 1.0

    def __post_init__(self) -> None:
        for name in ("eta1", "eta2", "eta4"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {value}")
        if self.epsilon < 0.0:
            raise DomainError("epsilon must be >= 0")
        if self.v_s_x < 1.0 or self.v_s_p < 1.0:
            raise UnphysicalStateError("source variances must be >= 1 SNU")
        if self.v_e < 1.0:
            raise UnphysicalStateError("v_e must be >= 1 SNU")
        if self.n_a < 0.0 or self.n_b < 0.0:
            raise DomainError("detector noise must be >= 0")


@dataclass(frozen=True)
class StageOutputs:
    """States after each beamsplitter: (a, onward), (a, e, onward), (a, e, b, n)."""

    after_eta1: GaussianState
    after_eta2: GaussianState
    after_eta4: GaussianState


@dataclass(frozen=True, eq=False)
class BlockSet:
    """Named 2x2 covariance blocks of a network stage, all diagonal in (x, p).

    The eta2 stage fills (a, e, b, ea, eb, ab) with b the Bob-bound mode before
    the channel; the eta4 stage adds the noise-output blocks (n, en, an, bn).
    ``ev`` aliases ``en``.
    """

    a: np.ndarray
    e: np.ndarray
    b: np.ndarray
    ea: np.ndarray
    eb: np.ndarray
    ab: np.ndarray
    n: np.ndarray | None = None
    en: np.ndarray | None = None
    an: np.ndarray | None = None
    bn: np.ndarray | None = None

    @property
    def ev(self) -> np.ndarray | None:
        return self.en

    def assemble(self) -> np.ndarray:
        """Full symmetric covariance in mode order (a, e, b) or (a, e, b, n)."""
        four_mode = self.n is not None
        names = ["a", "e", "b", "n"] if four_mode else ["a", "e", "b"]
        cross = {("e", "a"): self.ea, ("e", "b"): self.eb, ("a", "b"): self.ab}
        if four_mode:
            cross.update({("e", "n"): self.en, ("a", "n"): self.an, ("b", "n"): self.bn})
        dim = 2 * len(names)
        out = np.zeros((dim, dim))
        pos = {name: 2 * k for k, name in enumerate(names)}
        for name in names:
            i = pos[name]
            out[i:i + 2, i:i + 2] = getattr(self, name)
        for (r, c), blk in cross.items():
            i, j = pos[r], pos[c]
            out[i:i + 2, j:j + 2] = blk
            out[j:j + 2, i:i + 2] = blk.T
        return out


def channel_noise_variance(eta4: float, epsilon: float) -> float:
    """Auxiliary-mode variance N of the thermal noise channel.

    chi = (1 - eta4)/eta4 + epsilon and N = eta4 chi / (1 - eta4), which
    simplifies to N = 1 + eta4 epsilon / (1 - eta4).
    """
    if epsilon < 0.0:
        raise DomainError("epsilon must be >= 0")
    if not 0.0 <= eta4 <= 1.0:
        raise DomainError("eta4 must lie in [0, 1]")
    if eta4 in (0.0, 1.0):
        raise DegenerateChannelError(
            f"eta4 = {eta4}: no auxiliary-mode variance is defined")
    chi = (1.0 - eta4) / eta4 + epsilon
    return eta4 * chi / (1.0 - eta4)


def _aux_variance(params: ProtocolParams) -> float:
    # transparent-channel carve-out: at eta4 = 1 with zero excess noise the
    # auxiliary mode never mixes in; its vacuum limit N = 1 keeps the closed
    # forms defined there
    if params.eta4 == 1.0 and params.epsilon == 0.0:
        return 1.0
    return channel_noise_variance(params.eta4, params.epsilon)


def _with_labels(state: GaussianState, labels: tuple[str, ...]) -> GaussianState:
    return GaussianState(state.cov, state.disp, labels)


def build_pipeline(params: ProtocolParams) -> StageOutputs:
    """Propagate the source through eta1, eta2 and eta4 numerically.

    Detector noise is NOT applied here; see :func:`add_detector_noise`.
    """
    n_aux = _aux_variance(params)

    # stage 1: anisotropic thermal source against vacuum; reflected port -> Alice
    source = GaussianState(np.diag([params.v_s_x, params.v_s_p]), np.zeros(2), ("source",))
    st = tensor(source, thermal_state(0.0, label="vac"))
    st = apply_symplectic(st, beamsplitter_symplectic(params.eta1, 0, 1, 2))
    after_eta1 = _with_labels(partial_trace(st, [1, 0]), ("a", "onward"))

    # stage 2: Eve injects her mode at eta2's free port; reflected port -> Eve
    st = tensor(after_eta1, thermal_state((params.v_e - 1.0) / 2.0, label="e_in"))
    st = apply_symplectic(st, beamsplitter_symplectic(params.eta2, 1, 2, 3))
    after_eta2 = _with_labels(partial_trace(st, [0, 2, 1]), ("a", "e", "onward"))

    # stage 3: thermal noise channel of transmittance eta4 in front of Bob
    st = tensor(after_eta2, thermal_state((n_aux - 1.0) / 2.0, label="n_in"))
    st = apply_symplectic(st, beamsplitter_symplectic(params.eta4, 2, 3, 4))
    after_eta4 = _with_labels(st, ("a", "e", "b", "n"))

    return StageOutputs(after_eta1, after_eta2, after_eta4)


def closed_form_blocks_eta2(params: ProtocolParams) -> BlockSet:
    """Closed-form 2x2 blocks of the (a, e, onward) stage."""
    eta1, eta2 = params.eta1, params.eta2
    mu1, mu2 = np.sqrt(1.0 - eta1), np.sqrt(1.0 - eta2)
    rt1, rt2 = np.sqrt(eta1), np.sqrt(eta2)
    v_e = params.v_e

    def per_quadrature(f) -> np.ndarray:
        return np.diag([f(params.v_s_x), f(params.v_s_p)])

    return BlockSet(
        a=per_quadrature(lambda v: mu1 * mu1 * v + eta1),
        e=per_quadrature(lambda v: mu2 * mu2 * (eta1 * v + mu1 * mu1) + eta2 * v_e),
        b=per_quadrature(lambda v: eta2 * (eta1 * v + mu1 * mu1) + mu2 * mu2 * v_e),
        ea=per_quadrature(lambda v: mu1 * rt1 * mu2 * (v - 1.0)),
        eb=per_quadrature(lambda v: -mu2 * rt2 * (eta1 * v + mu1 * mu1 - v_e)),
        ab=per_quadrature(lambda v: -mu1 * rt1 * rt2 * (v - 1.0)),
    )


def closed_form_blocks_eta4(params: ProtocolParams) -> BlockSet:
    """Closed-form 2x2 blocks of the final (a, e, b, n) stage."""
    stage2 = closed_form_blocks_eta2(params)
    eta4 = params.eta4
    mu4, rt4 = np.sqrt(1.0 - eta4), np.sqrt(eta4)
    n_aux = _aux_variance(params) * np.eye(2)
    return BlockSet(
        a=stage2.a,
        e=stage2.e,
        b=eta4 * stage2.b + mu4 * mu4 * n_aux,
        ea=stage2.ea,
        eb=rt4 * stage2.eb,
        ab=rt4 * stage2.ab,
        n=mu4 * mu4 * stage2.b + eta4 * n_aux,
        en=-mu4 * stage2.eb,
        an=-mu4 * stage2.ab,
        bn=mu4 * rt4 * (n_aux - stage2.b),
    )


def add_detector_noise(state: GaussianState, n_a: float, n_b: float) -> GaussianState:
    """Add n_a / n_b SNU to the diagonal blocks of the modes labeled 'a' and 'b'.

    Cross blocks and every other mode (Eve has no detector) stay untouched.
    """
    if n_a < 0.0 or n_b < 0.0:
        raise DomainError("detector noise must be >= 0")
    ia, ib = state.mode_index("a"), state.mode_index("b")
    cov = state.cov.copy()
    cov[2 * ia:2 * ia + 2, 2 * ia:2 * ia + 2] += n_a * np.eye(2)
    cov[2 * ib:2 * ib + 2, 2 * ib:2 * ib + 2] += n_b * np.eye(2)
    return GaussianState(cov, state.disp, state.labels)
