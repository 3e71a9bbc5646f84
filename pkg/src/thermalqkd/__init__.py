"""Simulator and analysis toolkit for central-broadcast QKD with thermal light.

Layers:

* :mod:`thermalqkd.gaussian` - Gaussian states, symplectic transforms, entropies;
* :mod:`thermalqkd.network` - the source / eavesdropper / noise-channel beamsplitter
  network, both numerically propagated and in closed form;
* :mod:`thermalqkd.metrics` - mutual informations, Holevo bounds, Gaussian discord,
  key rates and eavesdropper energy bounds;
* :mod:`thermalqkd.timeseries` - Monte-Carlo intensity-correlation experiment
  (field generation, splitting, bandwidth-limited detection, g2, bit slicing);
* :mod:`thermalqkd.cli` - parameter-sweep command line front end emitting CSV.
"""

__version__ = "0.1.0"

from .errors import (
    DeadDetectorError,
    DegenerateChannelError,
    DomainError,
    UnphysicalStateError,
)
from .gaussian import (
    GaussianState,
    apply_symplectic,
    beamsplitter_symplectic,
    epr_state,
    g_function,
    homodyne_condition,
    is_physical,
    partial_trace,
    symplectic_eigenvalues,
    symplectic_form,
    tensor,
    thermal_occupation,
    thermal_state,
    von_neumann_entropy,
)
from .metrics import (
    EveBounds,
    MetricsReport,
    discord_b_given_a,
    evaluate,
    eve_energy_bounds,
    holevo,
    key_rates,
    mutual_information_ab,
)
from .network import (
    BlockSet,
    ProtocolParams,
    StageOutputs,
    add_detector_noise,
    build_pipeline,
    channel_noise_variance,
    closed_form_blocks_eta2,
    closed_form_blocks_eta4,
)

__all__ = [
    "DeadDetectorError",
    "DegenerateChannelError",
    "DomainError",
    "UnphysicalStateError",
    "GaussianState",
    "apply_symplectic",
    "beamsplitter_symplectic",
    "epr_state",
    "g_function",
    "homodyne_condition",
    "is_physical",
    "partial_trace",
    "symplectic_eigenvalues",
    "symplectic_form",
    "tensor",
    "thermal_occupation",
    "thermal_state",
    "von_neumann_entropy",
    "BlockSet",
    "ProtocolParams",
    "StageOutputs",
    "add_detector_noise",
    "build_pipeline",
    "channel_noise_variance",
    "closed_form_blocks_eta2",
    "closed_form_blocks_eta4",
    "EveBounds",
    "MetricsReport",
    "discord_b_given_a",
    "evaluate",
    "eve_energy_bounds",
    "holevo",
    "key_rates",
    "mutual_information_ab",
    "__version__",
]
