"""Matched filtering, discrete cross-ambiguity, and fine ambiguity surfaces."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .channel import fractional_shift
from .otfs import PULSE_TAIL_CUTOFF, BasebandSignal, DiscreteSeries, FrameConfig, _pulse_kernel
from .waveforms import PulseShape

SURFACE_SCHEMA = "otfs-radar/surface/v1"


@dataclass(frozen=True, eq=False)
class AmbiguitySurface:
    """Complex surface over (Doppler, delay) with uniform bins.

    Row ``r`` corresponds to Doppler ``(k_start + r) * doppler_bin`` and
    column ``c`` to delay ``(l_start + c) * delay_bin``.
    """

    values: np.ndarray
    doppler_bin: float
    delay_bin: float
    k_start: int
    l_start: int

    def __post_init__(self):
        if self.doppler_bin <= 0 or self.delay_bin <= 0:
            raise ValueError("bin sizes must be positive")
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 2:
            raise ValueError("surface values must be 2-D")
        object.__setattr__(self, "values", vals)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    def doppler_axis(self) -> np.ndarray:
        return (self.k_start + np.arange(self.shape[0])) * self.doppler_bin

    def delay_axis(self) -> np.ndarray:
        return (self.l_start + np.arange(self.shape[1])) * self.delay_bin

    def crop_doppler(self, n_rows: int) -> "AmbiguitySurface":
        """Keep the first ``n_rows`` Doppler rows (requires k_start == 0)."""
        if self.k_start != 0:
            raise ValueError("crop_doppler expects a surface starting at bin 0")
        if not 1 <= n_rows <= self.shape[0]:
            raise ValueError("n_rows out of range")
        return AmbiguitySurface(
            self.values[:n_rows], self.doppler_bin, self.delay_bin, 0, self.l_start
        )


def matched_filter_sample(
    received: BasebandSignal,
    pulse: PulseShape,
    cfg: FrameConfig,
    tail_cutoff: float = PULSE_TAIL_CUTOFF,
) -> DiscreteSeries:
    """Correlate the received waveform with the pulse and sample each slot.

    Output value ``l`` is the sample-period-normalized inner product of the
    waveform with the pulse centered at ``l * sample_period``, reported for
    the frame's observation window with absolute indices kept.
    """
    lo, hi = cfg.observation_window
    dt = received.dt
    kernel = _pulse_kernel(pulse, cfg.oversampling, tail_cutoff).astype(complex)
    half_span = (len(kernel) - 1) / 2.0  # half-integer for even tap counts

    first_needed = lo * cfg.sample_period - half_span * dt
    last_needed = hi * cfg.sample_period + half_span * dt
    t_last = received.t0 + dt * (len(received.samples) - 1)
    if first_needed < received.t0 - 1e-9 or last_needed > t_last + 1e-9:
        raise ValueError("received signal does not cover the observation window")

    # even-symmetric taps make correlation equal convolution up to indexing
    conv = fftconvolve(received.samples, kernel)
    out = np.empty(hi - lo + 1, dtype=complex)
    for i, l in enumerate(range(lo, hi + 1)):
        pos = (l * cfg.sample_period - received.t0) / dt + half_span
        c = round(pos)
        if abs(pos - c) > 1e-6:
            raise ValueError("sample grid is not aligned with the slot lattice")
        out[i] = conv[int(c)]
    out *= dt / cfg.sample_period
    return DiscreteSeries(out, start=lo)


def cross_ambiguity(
    y: DiscreteSeries, x_tilde: np.ndarray, cfg: FrameConfig
) -> AmbiguitySurface:
    """Discrete cross-ambiguity of received samples against the reference.

    For each delay lag the windowed product sequence is folded into the
    grid length and DFT'd, giving all N*M Doppler bins at spacing equal to
    one over the block duration. Only lags whose full reference support is
    covered by ``y`` are produced, so unobserved samples are never read.
    """
    x_tilde = np.asarray(x_tilde, dtype=complex)
    lw = len(x_tilde)
    nm = cfg.grid_size
    if len(y) < lw:
        raise ValueError("received series shorter than the reference support")
    lag_lo = y.start
    lag_hi = y.start + len(y) - lw
    n_lags = lag_hi - lag_lo + 1

    windows = np.lib.stride_tricks.sliding_window_view(y.values, lw)[:n_lags]
    products = windows * np.conj(x_tilde)[None, :]

    folded_len = int(math.ceil(lw / nm)) * nm
    padded = np.zeros((n_lags, folded_len), dtype=complex)
    padded[:, :lw] = products
    folded = padded.reshape(n_lags, -1, nm).sum(axis=1)
    spectrum = np.fft.fft(folded, axis=1) / math.sqrt(nm)

    return AmbiguitySurface(
        spectrum.T,
        doppler_bin=1.0 / cfg.block_period,
        delay_bin=cfg.sample_period,
        k_start=0,
        l_start=lag_lo,
    )


def cross_ambiguity_direct(
    y: DiscreteSeries, x_tilde: np.ndarray, cfg: FrameConfig
) -> AmbiguitySurface:
    """Quadratic-cost reference implementation of :func:`cross_ambiguity`."""
    x_tilde = np.asarray(x_tilde, dtype=complex)
    lw = len(x_tilde)
    nm = cfg.grid_size
    lag_lo = y.start
    lag_hi = y.start + len(y) - lw
    lp = np.arange(lw)
    vals = np.zeros((nm, lag_hi - lag_lo + 1), dtype=complex)
    for c, lag in enumerate(range(lag_lo, lag_hi + 1)):
        seg = y.values[lag - y.start : lag - y.start + lw]
        for k in range(nm):
            vals[k, c] = np.sum(
                seg * np.conj(x_tilde) * np.exp(-2j * np.pi * k * lp / nm)
            ) / math.sqrt(nm)
    return AmbiguitySurface(
        vals, 1.0 / cfg.block_period, cfg.sample_period, 0, lag_lo
    )


def _uniform_step(grid: np.ndarray, name: str) -> float:
    if len(grid) < 2:
        raise ValueError(f"{name} grid needs at least two points")
    steps = np.diff(grid)
    step = steps[0]
    if np.any(np.abs(steps - step) > 1e-9 * max(abs(step), 1e-30)):
        raise ValueError(f"{name} grid must be uniform")
    return float(step)


def fine_ambiguity(
    signal: BasebandSignal, tau_grid: np.ndarray, nu_grid: np.ndarray
) -> AmbiguitySurface:
    """Symmetric-form continuous ambiguity on a fine delay-Doppler grid.

    Evaluates the correlation of the signal against copies offset by
    ``+/- tau/2`` in time and ``nu`` in frequency, using band-limited
    fractional shifts and trapezoidal quadrature at the signal's
    resolution. Rows are Doppler, columns delay.
    """
    tau_grid = np.asarray(tau_grid, dtype=float)
    nu_grid = np.asarray(nu_grid, dtype=float)
    dt = signal.dt
    if np.max(np.abs(tau_grid)) >= signal.duration:
        raise ValueError("delay grid exceeds the signal support")
    tau_step = _uniform_step(tau_grid, "delay")
    nu_step = _uniform_step(nu_grid, "doppler")

    t = signal.times()
    kernel = np.exp(-2j * np.pi * np.outer(nu_grid, t))
    vals = np.empty((len(nu_grid), len(tau_grid)), dtype=complex)
    n = len(signal.samples)
    for c, tau in enumerate(tau_grid):
        delayed = fractional_shift(signal.samples, tau / dt, n)
        prod = signal.samples * np.conj(delayed)
        col = kernel @ prod * dt
        vals[:, c] = col * np.exp(1j * np.pi * nu_grid * tau)

    k_start = int(round(nu_grid[0] / nu_step))
    l_start = int(round(tau_grid[0] / tau_step))
    return AmbiguitySurface(vals, abs(nu_step), abs(tau_step), k_start, l_start)


def export_surface(surface: AmbiguitySurface, csv_path: str, meta: dict | None = None) -> None:
    """Write a surface as CSV rows (k, l, re, im, abs) plus a JSON sidecar.

    ``k`` and ``l`` are absolute bin indices; the sidecar records bin
    sizes and index origins so consumers can reconstruct physical axes.
    """
    rows, cols = surface.shape
    lines = [f"# schema: {SURFACE_SCHEMA}", "k,l,re,im,abs"]
    vals = surface.values
    mags = np.abs(vals)
    for r in range(rows):
        k = surface.k_start + r
        for c in range(cols):
            l = surface.l_start + c
            v = vals[r, c]
            lines.append(f"{k},{l},{v.real:.17g},{v.imag:.17g},{mags[r, c]:.17g}")
    _atomic_write(csv_path, "\n".join(lines) + "\n")

    sidecar = {
        "schema": SURFACE_SCHEMA,
        "doppler_bin": surface.doppler_bin,
        "delay_bin": surface.delay_bin,
        "k_start": surface.k_start,
        "l_start": surface.l_start,
        "rows": rows,
        "cols": cols,
    }
    if meta:
        sidecar.update(meta)
    _atomic_write(
        os.path.splitext(csv_path)[0] + ".json",
        json.dumps(sidecar, sort_keys=True, indent=2) + "\n",
    )


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)
