"""Delay-Doppler symbol placement, time-domain conversion, and frame synthesis.

Conventions used throughout the package:

* the delay-Doppler grid is N x M (Doppler rows, delay columns);
* the serialized time index is ``n*M + l`` for Doppler-block ``n`` and
  delay slot ``l``, one sample per sample period;
* synthesized signals place windowed sample ``l`` at time ``l * T_s``, so
  discrete indices map directly onto absolute time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .waveforms import (
    PulseKind,
    PulseShape,
    WindowKind,
    WindowShape,
    pulse_value,
    window_samples,
)

# Tail length, in sample periods, kept on each side when synthesizing
# pulses with unbounded support (sinc, rrc).
PULSE_TAIL_CUTOFF = 16.0


@dataclass(frozen=True, eq=False)
class DDGrid:
    """Complex symbol array on the delay-Doppler grid."""

    n_doppler: int
    m_delay: int
    symbols: np.ndarray

    def __post_init__(self):
        if self.n_doppler < 1 or self.m_delay < 1:
            raise ValueError("grid dimensions must be positive")
        sym = np.asarray(self.symbols, dtype=complex)
        if sym.shape != (self.n_doppler, self.m_delay):
            raise ValueError(
                f"symbols shape {sym.shape} != ({self.n_doppler}, {self.m_delay})"
            )
        object.__setattr__(self, "symbols", sym)


def pilot_grid(n_doppler: int, m_delay: int) -> DDGrid:
    """Unit pilot: a single 1 at delay-Doppler bin (0, 0)."""
    sym = np.zeros((n_doppler, m_delay), dtype=complex)
    sym[0, 0] = 1.0
    return DDGrid(n_doppler, m_delay, sym)


@dataclass(frozen=True)
class FrameConfig:
    """Frame geometry and waveform selection.

    ``blocks_per_pri`` counts block slots per pulse repetition interval:
    one transmitted block followed by silence. ``oversampling`` is the
    number of waveform samples per sample period used for continuous-
    domain work.
    """

    n_doppler: int = 8
    m_delay: int = 8
    blocks_per_pri: int = 6
    sample_period: float = 1.0
    oversampling: int = 8
    pulse: PulseShape = field(default_factory=lambda: PulseShape(PulseKind.RECT))
    window: WindowShape = field(default_factory=lambda: WindowShape(WindowKind.RRC, 0.25))

    def __post_init__(self):
        if self.n_doppler < 1 or self.m_delay < 1:
            raise ValueError("grid dimensions must be positive")
        if self.blocks_per_pri < 2:
            raise ValueError("blocks_per_pri must be >= 2 (transmit + listen)")
        if self.sample_period <= 0:
            raise ValueError("sample_period must be positive")
        os = self.oversampling
        if os < 1 or (os & (os - 1)) != 0:
            raise ValueError("oversampling must be a power of two")

    @property
    def grid_size(self) -> int:
        return self.n_doppler * self.m_delay

    @property
    def symbol_period(self) -> float:
        return self.m_delay * self.sample_period

    @property
    def block_period(self) -> float:
        return self.grid_size * self.sample_period

    @property
    def pri(self) -> float:
        return self.blocks_per_pri * self.block_period

    @property
    def dt(self) -> float:
        return self.sample_period / self.oversampling

    @property
    def window_length(self) -> int:
        """Sample count of the frame-budget window support."""
        return int(math.floor((1.0 + self.window.rolloff) * self.grid_size))

    @property
    def observation_window(self) -> tuple[int, int]:
        """Inclusive sample-index bounds (lo, hi) of the receive interval."""
        beta = self.window.rolloff
        nm = self.grid_size
        lo = int(math.floor((1.0 + beta) * nm))
        hi = int(math.floor((self.blocks_per_pri - (1.0 + beta)) * nm))
        return lo, hi

    @property
    def lag_range(self) -> tuple[int, int]:
        """Inclusive delay-lag bounds for fully observed correlations."""
        lo, hi = self.observation_window
        return lo, hi - self.window_length + 1


@dataclass(frozen=True, eq=False)
class BasebandSignal:
    """Oversampled complex time series."""

    samples: np.ndarray
    dt: float
    t0: float

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=complex))

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.samples))

    @property
    def duration(self) -> float:
        return self.dt * len(self.samples)

    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.dt)


@dataclass(frozen=True, eq=False)
class DiscreteSeries:
    """Complex samples with an absolute starting index on the T_s lattice."""

    values: np.ndarray
    start: int

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def stop(self) -> int:
        """One past the last absolute index."""
        return self.start + len(self.values)


def dd_to_td(grid: DDGrid) -> np.ndarray:
    """Serialize a delay-Doppler grid into the length-N*M time-domain vector.

    Per-column inverse DFT over the Doppler axis scaled by 1/sqrt(N); the
    transform preserves the Euclidean norm.
    """
    x = np.fft.ifft(grid.symbols, axis=0) * math.sqrt(grid.n_doppler)
    return x.reshape(-1)


def apply_window(
    x_td: np.ndarray, window: WindowShape, n_doppler: int, m_delay: int, extent: float = 1.0
) -> np.ndarray:
    """Multiply the periodically extended sequence by the sampled window.

    ``x_td`` has one grid period (N*M samples); it repeats with that
    period underneath the window, aligned so the nominal period sits
    centered in the widened support.
    """
    x_td = np.asarray(x_td, dtype=complex)
    nm = n_doppler * m_delay
    if x_td.shape != (nm,):
        raise ValueError(f"expected length {nm}, got {x_td.shape}")
    w = window_samples(window, n_doppler, m_delay, extent)
    pad = (len(w) - nm) // 2
    idx = (np.arange(len(w)) - pad) % nm
    return w * x_td[idx]


def _pulse_kernel(pulse: PulseShape, oversampling: int, tail_cutoff: float) -> np.ndarray:
    """Oversampled pulse taps centered on the tap array's midpoint.

    The rect pulse is sampled cell-centered (even tap count) so its jumps
    fall between samples: lattice correlations of rect pulses are then
    exact. Smooth pulses use an odd, grid-aligned tap set.
    """
    if pulse.kind is PulseKind.RECT:
        count = oversampling
    else:
        count = 2 * int(round(tail_cutoff * oversampling)) + 1
    offsets = (np.arange(count) - (count - 1) / 2.0) / oversampling
    return pulse_value(pulse, offsets)


def synthesize(
    x_tilde: np.ndarray, cfg: FrameConfig, tail_cutoff: float = PULSE_TAIL_CUTOFF
) -> BasebandSignal:
    """Superpose pulse-shaped samples into an oversampled waveform.

    Sample ``l`` of ``x_tilde`` contributes a pulse centered at time
    ``l * sample_period``. Rect pulses are exact; sinc and rrc tails are
    kept out to ``tail_cutoff`` sample periods on each side.
    """
    if cfg.oversampling < 8:
        raise ValueError("oversampling must be >= 8 for continuous-domain synthesis")
    x_tilde = np.asarray(x_tilde, dtype=complex)
    os = cfg.oversampling
    kernel = _pulse_kernel(cfg.pulse, os, tail_cutoff).astype(complex)
    up = np.zeros((len(x_tilde) - 1) * os + 1, dtype=complex)
    up[::os] = x_tilde
    samples = fftconvolve(up, kernel)
    t0 = -((len(kernel) - 1) / 2.0) * cfg.dt
    return BasebandSignal(samples, cfg.dt, t0)


def basis_waveform(
    k: int,
    l: int,
    cfg: FrameConfig,
    extent: float = 1.0,
    tail_cutoff: float = PULSE_TAIL_CUTOFF,
) -> BasebandSignal:
    """Waveform carrying the (k, l) delay-Doppler symbol.

    Windowed pulse train on the delay-``l`` lattice with a Doppler-``k``
    progressive phase, scaled by 1/sqrt(N) so that Nyquist pulse/window
    pairs give an orthonormal family under the sample-period-normalized
    inner product.
    """
    if not 0 <= k < cfg.n_doppler:
        raise IndexError(f"doppler index {k} out of range [0, {cfg.n_doppler})")
    if not 0 <= l < cfg.m_delay:
        raise IndexError(f"delay index {l} out of range [0, {cfg.m_delay})")
    nm = cfg.grid_size
    w = window_samples(cfg.window, cfg.n_doppler, cfg.m_delay, extent)
    pad = (len(w) - nm) // 2
    j = np.arange(len(w))
    jj = (j - pad) % nm
    coeff = np.zeros(len(w), dtype=complex)
    on_lattice = jj % cfg.m_delay == l
    n_block = jj[on_lattice] // cfg.m_delay
    coeff[on_lattice] = np.exp(2j * np.pi * n_block * k / cfg.n_doppler) / math.sqrt(
        cfg.n_doppler
    )
    return synthesize(w * coeff, cfg, tail_cutoff)


def orthonormality_gram(
    cfg: FrameConfig,
    subset: list[tuple[int, int]],
    extent: float = 1.0,
    tail_cutoff: float = PULSE_TAIL_CUTOFF,
) -> np.ndarray:
    """Gram matrix of basis waveforms under trapezoidal quadrature.

    Inner products are normalized by the sample period, matching the
    matched-filter convention, so Nyquist pulse/window pairs give the
    identity. The returned matrix is Hermitian by construction.
    """
    if not subset:
        raise ValueError("subset must be nonempty")
    rows = [basis_waveform(k, l, cfg, extent, tail_cutoff).samples for k, l in subset]
    s = np.vstack(rows)
    gram = (s @ s.conj().T) * (cfg.dt / cfg.sample_period)
    return 0.5 * (gram + gram.conj().T)


def assemble_frame(signal: BasebandSignal, cfg: FrameConfig) -> BasebandSignal:
    """Embed one transmitted block at the start of a silent repetition interval.

    The output covers the block (tails included) followed by zeros through
    the full repetition interval; ``cfg.pri / cfg.sample_period`` gives the
    slot count at the sample-period rate.
    """
    n_slots = cfg.blocks_per_pri * cfg.grid_size * cfg.oversampling
    if signal.duration > cfg.pri:
        raise ValueError(
            f"signal duration {signal.duration:g} exceeds repetition interval {cfg.pri:g}"
        )
    out = np.zeros(n_slots + len(signal.samples), dtype=complex)
    out[: len(signal.samples)] = signal.samples
    return BasebandSignal(out, signal.dt, signal.t0)
