"""Monte-Carlo intensity-correlation experiment on simulated light.

The field is a complex amplitude E(t) in arbitrary units with intensity
|E(t)|^2; thermal light is a complex Ornstein-Uhlenbeck process with
field autocorrelation I0 * exp(-|tau|/tau_c) (Lorentzian line), coherent
light a constant amplitude.  Detection applies a moving-window average,
optional Poisson photoelectron sampling, and additive Gaussian
electronic noise.  Every random draw is keyed to an explicit seed
through a stable hash, so identical configurations reproduce traces
bit for bit.
"""
from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import lfilter

from .errors import DeadDetectorError, DomainError

__all__ = [
    "SimConfig",
    "FieldTrace",
    "DetectorTrace",
    "G2Estimate",
    "BitStream",
    "BitComparison",
    "generate_field",
    "split_field",
    "apply_delay",
    "detect",
    "estimate_g2",
    "slice_bits",
    "ber_and_mutual_info",
    "thermality_test",
    "write_field_trace",
    "read_field_trace",
    "write_detector_csv",
]

_TRACE_MAGIC = b"THRMTRC1"
_BOOTSTRAP_DRAWS = 200
_BOOTSTRAP_SEED = 0x67B2  # fixed: resampling weights are data independent
_MAX_BOOTSTRAP_BLOCKS = 1000


def _derive_seed(base: int, *tags) -> int:
    digest = hashlib.blake2s(digest_size=8)
    digest.update(str(int(base)).encode())
    for tag in tags:
        digest.update(b"\x00" + str(tag).encode())
    return int.from_bytes(digest.digest(), "little")


def _freeze(obj, name, array):
    array.setflags(write=False)
    object.__setattr__(obj, name, array)


@dataclass(frozen=True)
class SimConfig:
    """Knobs for one simulated run.  Times in seconds, rates in Hz."""

    sample_rate: float
    duration: float
    coherence_time: float
    mean_intensity: float = 1.0
    regime: str = "thermal"
    detector_window: float | None = None  # None: one sample
    electronic_noise_sd: float = 0.0
    shot_noise: bool = False
    photons_per_intensity: float = 100.0
    rng_seed: int = 0
    path_delay: float = 0.0

    def __post_init__(self):
        for name in ("sample_rate", "duration", "coherence_time", "mean_intensity",
                     "photons_per_intensity"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be positive and finite, got {value}")
        if self.regime not in ("thermal", "coherent"):
            raise DomainError(f"regime must be 'thermal' or 'coherent', got {self.regime!r}")
        if self.sample_rate * self.coherence_time < 10.0:
            raise DomainError(
                "need at least 10 samples per coherence time, got "
                f"{self.sample_rate * self.coherence_time:.3g}")
        if self.detector_window is not None and \
                self.detector_window < 1.0 / self.sample_rate:
            raise DomainError(
                f"detector_window {self.detector_window} is below one sample")
        if not (math.isfinite(self.electronic_noise_sd) and self.electronic_noise_sd >= 0.0):
            raise DomainError(f"electronic_noise_sd must be >= 0, got {self.electronic_noise_sd}")
        if not isinstance(self.rng_seed, int) or not 0 <= self.rng_seed < 2 ** 64:
            raise DomainError(f"rng_seed must be a 64-bit unsigned int, got {self.rng_seed}")
        if not math.isfinite(self.path_delay):
            raise DomainError(f"path_delay must be finite, got {self.path_delay}")
        if self.n_samples < 2:
            raise DomainError("duration spans fewer than two samples")

    @property
    def n_samples(self) -> int:
        return int(round(self.duration * self.sample_rate))


@dataclass(frozen=True, eq=False)
class FieldTrace:
    """Complex field samples on a uniform grid."""

    samples: np.ndarray
    sample_rate: float
    seed: int

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.complex128)
        if samples.ndim != 1 or samples.size == 0:
            raise DomainError("samples must be a non-empty 1-D array")
        if not np.all(np.isfinite(samples)):
            raise DomainError("samples must be finite")
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0.0):
            raise DomainError(f"sample_rate must be positive, got {self.sample_rate}")
        _freeze(self, "samples", samples)

    @property
    def n_samples(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.n_samples / self.sample_rate


@dataclass(frozen=True, eq=False)
class DetectorTrace:
    """Intensity record after windowed integration and detector noise."""

    y: np.ndarray
    sample_rate: float
    window: float
    detector_id: str
    coherence_time: float

    def __post_init__(self):
        y = np.array(self.y, dtype=float)
        if y.ndim != 1 or y.size == 0:
            raise DomainError("y must be a non-empty 1-D array")
        if not np.all(np.isfinite(y)):
            raise DomainError("y must be finite")
        for name in ("sample_rate", "window", "coherence_time"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be positive, got {value}")
        _freeze(self, "y", y)

    @property
    def duration(self) -> float:
        return self.y.size / self.sample_rate


@dataclass(frozen=True, eq=False)
class G2Estimate:
    """Normalized second-order correlation on a lag grid."""

    lags: np.ndarray
    g2: np.ndarray
    stderr: np.ndarray
    zero_lag: float

    def __post_init__(self):
        lags = np.array(self.lags, dtype=float)
        g2 = np.array(self.g2, dtype=float)
        stderr = np.array(self.stderr, dtype=float)
        if not lags.size == g2.size == stderr.size:
            raise DomainError("lags, g2 and stderr must share a grid")
        _freeze(self, "lags", lags)
        _freeze(self, "g2", g2)
        _freeze(self, "stderr", stderr)


@dataclass(frozen=True, eq=False)
class BitStream:
    """Above/below-mean decisions, one per detector window."""

    bits: np.ndarray
    threshold: float
    detector_id: str

    def __post_init__(self):
        bits = np.array(self.bits, dtype=np.uint8)
        if bits.ndim != 1:
            raise DomainError("bits must be 1-D")
        _freeze(self, "bits", bits)


@dataclass(frozen=True)
class BitComparison:
    """Error rate and the two mutual-information estimates, per bit."""

    ber: float
    mi_bsc: float
    mi_plugin: float
    n_bits: int


def generate_field(config: SimConfig) -> FieldTrace:
    """Simulate the source field for one run.

    Thermal: complex AR(1) recursion matching the Ornstein-Uhlenbeck
    autocorrelation I0 * exp(-|tau|/tau_c), started from its stationary
    law.  Coherent: constant real amplitude sqrt(I0).
    """
    n = config.n_samples
    if config.regime == "coherent":
        samples = np.full(n, np.sqrt(config.mean_intensity), dtype=np.complex128)
        return FieldTrace(samples, config.sample_rate, config.rng_seed)
    rng = np.random.default_rng(_derive_seed(config.rng_seed, "field"))
    rho = float(np.exp(-1.0 / (config.sample_rate * config.coherence_time)))
    innovation_sd = np.sqrt(config.mean_intensity * (1.0 - rho * rho) / 2.0)
    noise = rng.standard_normal((n, 2)) * innovation_sd
    drive = noise[:, 0] + 1j * noise[:, 1]
    drive[0] /= np.sqrt(1.0 - rho * rho)  # stationary start
    samples = lfilter([1.0], [1.0, -rho], drive)
    return FieldTrace(samples, config.sample_rate, config.rng_seed)


def split_field(trace: FieldTrace, eta: float, seed: int,
                vacuum_intensity: float = 0.0) -> tuple[FieldTrace, FieldTrace]:
    """Beamsplitter of transmittance eta: returns (reflected, transmitted).

    transmitted = sqrt(eta) E + sqrt(1-eta) E_vac and
    reflected = sqrt(1-eta) E - sqrt(eta) E_vac, with E_vac an
    independent circular Gaussian field of mean intensity
    ``vacuum_intensity`` (zero turns the port off and conserves energy
    sample by sample).
    """
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta must lie in [0, 1], got {eta}")
    if vacuum_intensity < 0.0:
        raise DomainError(f"vacuum_intensity must be >= 0, got {vacuum_intensity}")
    root_t = np.sqrt(eta)
    root_r = np.sqrt(1.0 - eta)
    if vacuum_intensity > 0.0:
        rng = np.random.default_rng(_derive_seed(seed, "vacuum"))
        noise = rng.standard_normal((trace.n_samples, 2)) \
            * np.sqrt(vacuum_intensity / 2.0)
        vacuum = noise[:, 0] + 1j * noise[:, 1]
    else:
        vacuum = 0.0
    transmitted = root_t * trace.samples + root_r * vacuum
    reflected = root_r * trace.samples - root_t * vacuum
    return (FieldTrace(reflected, trace.sample_rate, seed),
            FieldTrace(transmitted, trace.sample_rate, seed))


def apply_delay(trace: FieldTrace, delay: float) -> FieldTrace:
    """Retard a trace by ``delay`` seconds (circular shift in whole samples).

    Meant for relative arm delays much shorter than the trace.
    """
    if not math.isfinite(delay):
        raise DomainError(f"delay must be finite, got {delay}")
    shift = int(round(delay * trace.sample_rate))
    return FieldTrace(np.roll(trace.samples, shift), trace.sample_rate, trace.seed)


def detect(trace: FieldTrace, config: SimConfig,
           detector_id: str = "det") -> DetectorTrace:
    """Bandwidth-limited intensity record of one detector.

    Y(t) is the moving average of |E|^2 over the detector window, then
    optional Poisson photoelectron sampling (mean photons_per_intensity
    per intensity unit, reported back in intensity units) and additive
    Gaussian electronic noise.  Noise streams are keyed to
    (rng_seed, detector_id) so detectors stay independent yet
    reproducible.
    """
    window_s = config.detector_window
    if window_s is None:
        window_s = 1.0 / trace.sample_rate
    window_samples = int(round(window_s * trace.sample_rate))
    if window_samples < 1:
        raise DomainError(
            f"window {window_s} s is shorter than one sample at "
            f"{trace.sample_rate} Hz")
    intensity = np.abs(trace.samples) ** 2
    if window_samples > 1:
        y = uniform_filter1d(intensity, size=window_samples)
    else:
        y = intensity
    rng = np.random.default_rng(
        _derive_seed(config.rng_seed, "detect", detector_id))
    if config.shot_noise:
        scale = config.photons_per_intensity
        y = rng.poisson(scale * y).astype(float) / scale
    if config.electronic_noise_sd > 0.0:
        y = y + rng.normal(0.0, config.electronic_noise_sd, y.size)
    return DetectorTrace(y=y, sample_rate=trace.sample_rate,
                         window=window_samples / trace.sample_rate,
                         detector_id=detector_id,
                         coherence_time=config.coherence_time)


def _block_layout(n_usable: int, coherence_time: float, sample_rate: float):
    # blocks of ~5 coherence times, at least 25 of them, capped so the
    # bootstrap count matrix stays small
    block = max(1, int(round(5.0 * coherence_time * sample_rate)))
    if n_usable // block < 25:
        block = max(1, n_usable // 25)
    if n_usable // block > _MAX_BOOTSTRAP_BLOCKS:
        block = n_usable // _MAX_BOOTSTRAP_BLOCKS
    return block, n_usable // block


def estimate_g2(trace_a: DetectorTrace, trace_b: DetectorTrace,
                max_lag: float) -> G2Estimate:
    """g2(tau) = <Y_a(t) Y_b(t+tau)> / (<Y_a><Y_b>) with bootstrap errors.

    Auto-correlation when both arguments are the same trace.  Standard
    errors come from a block bootstrap (blocks of several coherence
    times, resampled with multinomial weights), deterministic because
    the resampling weights are data independent.
    """
    if trace_a.sample_rate != trace_b.sample_rate:
        raise DomainError("traces must share a sample rate")
    if trace_a.y.size != trace_b.y.size:
        raise DomainError("traces must share a grid length")
    n = trace_a.y.size
    duration = n / trace_a.sample_rate
    if not 0.0 <= max_lag < duration / 10.0:
        raise DomainError(
            f"max_lag must lie in [0, duration/10), got {max_lag} for "
            f"a {duration:.3g} s trace")
    n_lags = int(round(max_lag * trace_a.sample_rate))
    # common t range so every lag uses the same samples as the bootstrap
    block, n_blocks = _block_layout(n - n_lags, trace_a.coherence_time,
                                    trace_a.sample_rate)
    used = block * n_blocks
    ya = trace_a.y[:used]
    yb = trace_b.y
    columns = [ya.reshape(n_blocks, block).mean(axis=1),
               yb[:used].reshape(n_blocks, block).mean(axis=1)]
    for lag in range(n_lags + 1):
        product = ya * yb[lag:lag + used]
        columns.append(product.reshape(n_blocks, block).mean(axis=1))
    stats = np.column_stack(columns)
    mean_a, mean_b = stats[:, 0].mean(), stats[:, 1].mean()
    if mean_a <= 0.0 or mean_b <= 0.0:
        raise DeadDetectorError(
            f"non-positive mean intensity ({mean_a:.3g}, {mean_b:.3g})")
    g2 = stats[:, 2:].mean(axis=0) / (mean_a * mean_b)
    rng = np.random.default_rng(_BOOTSTRAP_SEED)
    counts = rng.multinomial(n_blocks, np.full(n_blocks, 1.0 / n_blocks),
                             size=_BOOTSTRAP_DRAWS)
    resampled = counts @ stats / n_blocks
    boot = resampled[:, 2:] / (resampled[:, 0] * resampled[:, 1])[:, None]
    stderr = boot.std(axis=0, ddof=1)
    lags = np.arange(n_lags + 1) / trace_a.sample_rate
    return G2Estimate(lags=lags, g2=g2, stderr=stderr, zero_lag=float(g2[0]))


def slice_bits(trace: DetectorTrace) -> BitStream:
    """One above/below-mean bit per detector window (non-overlapping).

    The threshold is the empirical mean of the whole trace; samples are
    taken at window centres; ties fall below (strict inequality), so a
    constant trace reads all zeros.
    """
    stride = max(1, int(round(trace.window * trace.sample_rate)))
    threshold = float(trace.y.mean())
    sampled = trace.y[stride // 2::stride]
    bits = (sampled > threshold).astype(np.uint8)
    return BitStream(bits=bits, threshold=threshold,
                     detector_id=trace.detector_id)


def _binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p))


def ber_and_mutual_info(bits_a, bits_b) -> BitComparison:
    """Bit error rate plus two mutual-information estimates (bits/bit).

    ``mi_bsc`` treats the pair as a binary symmetric channel,
    1 - h2(BER); ``mi_plugin`` is the plug-in estimate from the joint
    2x2 histogram.  Accepts BitStream objects or plain arrays.
    """
    a = np.asarray(getattr(bits_a, "bits", bits_a), dtype=np.int64)
    b = np.asarray(getattr(bits_b, "bits", bits_b), dtype=np.int64)
    if a.shape != b.shape:
        raise DomainError(f"bit streams differ in length: {a.size} vs {b.size}")
    if a.size < 1000:
        raise DomainError(f"need at least 1000 bits, got {a.size}")
    ber = float(np.mean(a != b))
    joint = np.bincount(2 * a + b, minlength=4).reshape(2, 2) / a.size
    marg_a = joint.sum(axis=1)
    marg_b = joint.sum(axis=0)
    mi_plugin = 0.0
    for i in (0, 1):
        for j in (0, 1):
            if joint[i, j] > 0.0:
                mi_plugin += joint[i, j] * np.log2(
                    joint[i, j] / (marg_a[i] * marg_b[j]))
    return BitComparison(ber=ber, mi_bsc=1.0 - _binary_entropy(ber),
                         mi_plugin=float(mi_plugin), n_bits=int(a.size))


def thermality_test(trace: DetectorTrace, threshold_band: float = 3.0) -> str:
    """Check a chunk for bunching: "thermal" or "not-thermal".

    Needs at least ten coherence times of data.  The bunching excess is
    read at the first nonzero lag rather than lag zero, where detector
    self-noise (shot or electronic) would masquerade as bunching; the
    verdict is thermal when the excess clears ``threshold_band``
    standard errors.
    """
    if trace.duration < 10.0 * trace.coherence_time:
        raise DomainError(
            f"chunk of {trace.duration:.3g} s is under ten coherence times")
    estimate = estimate_g2(trace, trace, max_lag=1.0 / trace.sample_rate)
    excess = estimate.g2[-1] - 1.0
    if excess > threshold_band * estimate.stderr[-1]:
        return "thermal"
    return "not-thermal"


def write_field_trace(trace: FieldTrace, path) -> None:
    """Dump a field trace: 8-byte magic, little-endian (rate, duration,
    seed) header, then interleaved re/im float64 samples."""
    header = _TRACE_MAGIC + struct.pack(
        "<ddQ", trace.sample_rate, trace.duration, trace.seed)
    flat = np.empty(2 * trace.n_samples, dtype="<f8")
    flat[0::2] = trace.samples.real
    flat[1::2] = trace.samples.imag
    Path(path).write_bytes(header + flat.tobytes())


def read_field_trace(path) -> FieldTrace:
    """Inverse of write_field_trace, validating magic and sample count."""
    data = Path(path).read_bytes()
    if len(data) < 32 or not data.startswith(_TRACE_MAGIC):
        raise DomainError(f"{path} is not a field trace file")
    sample_rate, duration, seed = struct.unpack("<ddQ", data[8:32])
    payload = np.frombuffer(data, dtype="<f8", offset=32)
    if payload.size % 2:
        raise DomainError(f"{path} holds a half-complete sample")
    samples = payload[0::2] + 1j * payload[1::2]
    if samples.size != int(round(duration * sample_rate)):
        raise DomainError(
            f"{path} holds {samples.size} samples where the header "
            f"promises {int(round(duration * sample_rate))}")
    return FieldTrace(samples, sample_rate, seed)


def write_detector_csv(trace: DetectorTrace, path) -> None:
    """Write a detector trace as CSV: one comment line, then t,y rows."""
    lines = [
        "# thermalqkd detector trace, detector=%s, window=%.12g, "
        "sample_rate=%.12g, coherence_time=%.12g"
        % (trace.detector_id, trace.window, trace.sample_rate,
           trace.coherence_time),
        "t,y",
    ]
    times = np.arange(trace.y.size) / trace.sample_rate
    lines.extend("%.12g,%.12g" % (t, y) for t, y in zip(times, trace.y))
    Path(path).write_text("\n".join(lines) + "\n")
