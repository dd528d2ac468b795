"""Multipath delay-Doppler channel in continuous and discrete form.

Each propagation path applies a complex gain, a (possibly fractional)
delay, and a Doppler shift with the symmetric phase convention: a path
with delay ``t_D`` and Doppler ``f_D`` maps ``s(t)`` to
``alpha * s(t - t_D) * exp(j 2 pi f_D (t - t_D/2))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import next_fast_len
from scipy.linalg import toeplitz

from .otfs import BasebandSignal, DiscreteSeries, FrameConfig
from .waveforms import PulseShape, pulse_matched_autocorr

MAX_PATHS = 10

# Extra padding (in samples) for FFT-based fractional shifts, keeping
# circular wrap-around ringing away from the retained region.
_SHIFT_GUARD = 256


@dataclass(frozen=True)
class PathParams:
    """One propagation path: complex gain, delay in seconds, Doppler in Hz."""

    alpha: complex
    delay: float
    doppler: float


@dataclass(frozen=True)
class ChannelScene:
    paths: tuple[PathParams, ...]
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(self.paths))
        if not 1 <= len(self.paths) <= MAX_PATHS:
            raise ValueError(f"path count must be in [1, {MAX_PATHS}]")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")


def validate_scene(scene: ChannelScene, cfg: FrameConfig) -> None:
    """Check every path against the frame's gating and sampling limits.

    Delays must fall strictly inside the silent listening interval
    (one block period after transmission, ending one block before the
    next) and Doppler magnitudes below half the sample rate.
    """
    t_lo = cfg.block_period
    t_hi = (cfg.blocks_per_pri - 1) * cfg.block_period
    f_max = 0.5 / cfg.sample_period
    for i, p in enumerate(scene.paths):
        if not t_lo < p.delay < t_hi:
            raise ValueError(
                f"path {i}: delay {p.delay:g} outside gating interval ({t_lo:g}, {t_hi:g})"
            )
        if abs(p.doppler) >= f_max:
            raise ValueError(f"path {i}: |doppler| {abs(p.doppler):g} >= {f_max:g}")


def fractional_shift(samples: np.ndarray, shift: float, out_len: int) -> np.ndarray:
    """Delay a sampled signal by ``shift`` samples via band-limited interpolation.

    Integer shifts are realized exactly; fractional shifts use an FFT
    phase ramp on a zero-padded buffer. Returns ``out_len`` samples
    starting at the input's original origin.
    """
    samples = np.asarray(samples, dtype=complex)
    n = len(samples)
    nearest = round(shift)
    buf = np.zeros(out_len, dtype=complex)
    if abs(shift - nearest) < 1e-12:
        k = int(nearest)
        src = samples[max(0, -k) : max(0, min(n, out_len - k))]
        buf[max(0, k) : max(0, k) + len(src)] = src
        return buf
    work = next_fast_len(max(out_len, n + int(np.ceil(abs(shift)))) + _SHIFT_GUARD)
    padded = np.zeros(work, dtype=complex)
    padded[:n] = samples
    freqs = np.fft.fftfreq(work)
    shifted = np.fft.ifft(np.fft.fft(padded) * np.exp(-2j * np.pi * freqs * shift))
    buf[:] = shifted[:out_len]
    return buf


def apply_continuous_channel(
    signal: BasebandSignal,
    scene: ChannelScene,
    cfg: FrameConfig | None = None,
    enforce_gating: bool = True,
) -> BasebandSignal:
    """Sum of delayed, Doppler-shifted path copies on the oversampled grid.

    Fractional delays are realized by band-limited interpolation. The
    output grid keeps the input origin and extends far enough to hold the
    most-delayed copy. Noise is not added here; see :func:`add_awgn`.
    """
    if enforce_gating:
        if cfg is None:
            raise ValueError("frame config required to enforce delay gating")
        validate_scene(scene, cfg)
    dt = signal.dt
    max_delay = max(p.delay for p in scene.paths)
    out_len = len(signal.samples) + int(np.ceil(max(0.0, max_delay) / dt)) + 1
    t = signal.t0 + dt * np.arange(out_len)
    out = np.zeros(out_len, dtype=complex)
    for p in scene.paths:
        delayed = fractional_shift(signal.samples, p.delay / dt, out_len)
        out += p.alpha * delayed * np.exp(2j * np.pi * p.doppler * (t - p.delay / 2.0))
    return BasebandSignal(out, dt, signal.t0)


def add_awgn(signal: BasebandSignal, sigma: float, seed: int) -> BasebandSignal:
    """Add circular complex gaussian noise with per-sample std ``sigma``."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        return signal
    rng = np.random.default_rng(seed)
    n = len(signal.samples)
    noise = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * (sigma / np.sqrt(2.0))
    return BasebandSignal(signal.samples + noise, signal.dt, signal.t0)


def channel_matrix(
    delay: float, doppler: float, size: int, pulse: PulseShape, sample_period: float
) -> np.ndarray:
    """Single-path channel operator on the sample lattice.

    Diagonal half-Doppler phase ramps on both sides of a Toeplitz matrix
    whose entries are the matched-filtered pulse autocorrelation evaluated
    at ``(i - j) - delay/sample_period``. Entry (i, j) equals
    ``exp(j pi f_D (i+j) T_s) * autocorr((i-j) T_s - t_D)``.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    idx = np.arange(size)
    shift = delay / sample_period
    col = pulse_matched_autocorr(pulse, idx - shift)
    row = pulse_matched_autocorr(pulse, -idx - shift)
    toep = toeplitz(col, row)
    d = np.exp(1j * np.pi * doppler * idx * sample_period)
    return d[:, None] * toep * d[None, :]


def apply_discrete_channel(
    x_tilde: np.ndarray, scene: ChannelScene, cfg: FrameConfig
) -> DiscreteSeries:
    """Matrix form of the channel acting on the windowed sample sequence.

    The sequence is embedded at the head of a full repetition-interval
    vector, each path's operator is applied, and the result is restricted
    to the frame's observation window (absolute indices preserved).
    """
    x_tilde = np.asarray(x_tilde, dtype=complex)
    size = cfg.blocks_per_pri * cfg.grid_size
    if len(x_tilde) > size:
        raise ValueError("windowed sequence longer than the repetition interval")
    x = np.zeros(size, dtype=complex)
    x[: len(x_tilde)] = x_tilde
    y = np.zeros(size, dtype=complex)
    for p in scene.paths:
        h = channel_matrix(p.delay, p.doppler, size, cfg.pulse, cfg.sample_period)
        y += p.alpha * (h @ x)
    lo, hi = cfg.observation_window
    return DiscreteSeries(y[lo : hi + 1], start=lo)


def circulant_discrepancy(
    delay: float, doppler: float, size: int, pulse: PulseShape, sample_period: float
) -> np.ndarray:
    """Gap between the periodic-transmission operator and its circulant stand-in.

    For a transmit sequence repeating every ``size`` samples, the wrapped
    (upper-triangular) correlation terms carry an extra phase
    ``exp(-j pi f_D L T_s)`` that a plain circulant extension omits;
    the returned matrix is their difference and vanishes when the Doppler
    is zero or no pulse energy wraps.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    idx = np.arange(size)
    diff = idx[:, None] - idx[None, :]
    shift = delay / sample_period
    wrapped = pulse_matched_autocorr(pulse, (diff + size) - shift)
    phase = np.exp(-1j * np.pi * doppler * size * sample_period)
    return wrapped * (phase - 1.0)
