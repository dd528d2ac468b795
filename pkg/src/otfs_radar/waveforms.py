"""Pulse shapes, window functions, and their correlations.

All time arguments are normalized by the sample period and all Doppler
arguments by one Doppler bin (the reciprocal of the block duration), so
every function here is dimensionless and pure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class PulseKind(str, enum.Enum):
    RECT = "rect"
    SINC = "sinc"
    RRC = "rrc"


class WindowKind(str, enum.Enum):
    RECT = "rect"
    RRC = "rrc"


@dataclass(frozen=True)
class PulseShape:
    """Pulse-shaping filter selector; ``beta`` is the roll-off, used only by RRC."""

    kind: PulseKind
    beta: float = 0.0

    def __post_init__(self):
        if self.kind is PulseKind.RRC and not 0.0 < self.beta <= 1.0:
            raise ValueError(f"rrc pulse roll-off must be in (0, 1], got {self.beta}")


@dataclass(frozen=True)
class WindowShape:
    """Window selector; rect ignores ``beta``, rrc requires roll-off in (0, 1]."""

    kind: WindowKind
    beta: float = 0.0

    def __post_init__(self):
        if self.kind is WindowKind.RRC and not 0.0 < self.beta <= 1.0:
            raise ValueError(f"rrc window roll-off must be in (0, 1], got {self.beta}")

    @property
    def rolloff(self) -> float:
        """Effective excess-bandwidth ratio (0 for the rectangular window)."""
        return self.beta if self.kind is WindowKind.RRC else 0.0


def _asarray(x):
    return np.asarray(x, dtype=float)


def _maybe_scalar(out, x):
    if np.isscalar(x) or getattr(x, "ndim", 1) == 0:
        return float(out)
    return out


def raised_cosine_spectrum(x, beta: float):
    """Raised-cosine spectral shape at normalized frequency ``x``.

    Flat at 1 inside |x| < (1-beta)/2, cosine roll-off out to (1+beta)/2,
    zero beyond. Even and continuous in ``x``.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"roll-off must be in (0, 1], got {beta}")
    ax = np.abs(_asarray(x))
    lo = (1.0 - beta) / 2.0
    hi = (1.0 + beta) / 2.0
    out = np.zeros_like(ax)
    out[ax < lo] = 1.0
    m = (ax >= lo) & (ax <= hi)
    out[m] = 0.5 * (1.0 + np.cos(np.pi / beta * (ax[m] - lo)))
    return _maybe_scalar(out, x)


def _rrc_impulse(x, beta: float):
    """Time-domain square-root raised-cosine impulse response.

    Closed form with analytic values at the two removable singularities
    (x = 0 and |x| = 1/(4 beta)).
    """
    shape = np.shape(x)
    x = np.atleast_1d(_asarray(x))
    out = np.empty_like(x)
    four_bx = 4.0 * beta * np.abs(x)

    at_zero = np.abs(x) < 1e-12
    at_pole = np.abs(four_bx - 1.0) < 1e-8
    regular = ~(at_zero | at_pole)

    out[at_zero] = 1.0 - beta + 4.0 * beta / np.pi
    q = np.pi / (4.0 * beta)
    out[at_pole] = (beta / math.sqrt(2.0)) * (
        (1.0 + 2.0 / np.pi) * math.sin(q) + (1.0 - 2.0 / np.pi) * math.cos(q)
    )

    xr = x[regular]
    num = np.sin(np.pi * xr * (1.0 - beta)) + 4.0 * beta * xr * np.cos(
        np.pi * xr * (1.0 + beta)
    )
    den = np.pi * xr * (1.0 - (4.0 * beta * xr) ** 2)
    out[regular] = num / den
    return out.reshape(shape)


def pulse_value(shape: PulseShape, t):
    """Evaluate the pulse at time ``t`` (normalized by the sample period)."""
    ts = _asarray(t)
    if shape.kind is PulseKind.RECT:
        ax = np.abs(ts)
        out = np.where(ax < 0.5, 1.0, 0.0)
        out = np.where(ax == 0.5, 0.5, out)
    elif shape.kind is PulseKind.SINC:
        out = np.sinc(ts)
    else:
        out = _rrc_impulse(ts, shape.beta)
    return _maybe_scalar(out, t)


def pulse_matched_autocorr(shape: PulseShape, tau):
    """Autocorrelation of the pulse after matched filtering, at lag ``tau``.

    Normalized so the zero-lag value is 1; every supported shape satisfies
    the Nyquist property (zero at all nonzero integer lags).
    """
    ts = _asarray(tau)
    if shape.kind is PulseKind.RECT:
        out = np.maximum(0.0, 1.0 - np.abs(ts))
    elif shape.kind is PulseKind.SINC:
        out = np.sinc(ts)
    else:
        out = _rc_impulse(ts, shape.beta)
    return _maybe_scalar(out, tau)


def _rc_impulse(x, beta: float):
    """Raised-cosine time pulse sinc(x) cos(pi b x)/(1-(2 b x)^2), poles handled."""
    shape = np.shape(x)
    x = np.atleast_1d(_asarray(x))
    den = 1.0 - (2.0 * beta * x) ** 2
    at_pole = np.abs(den) < 1e-8
    safe_den = np.where(at_pole, 1.0, den)
    out = np.sinc(x) * np.cos(np.pi * beta * x) / safe_den
    pole_val = (np.pi / 4.0) * np.sinc(1.0 / (2.0 * beta))
    out[at_pole] = pole_val
    return out.reshape(shape)


def window_samples(
    window: WindowShape, n_doppler: int, m_delay: int, extent: float = 1.0
) -> np.ndarray:
    """Sample the window on the sample-period lattice, support re-indexed to 0.

    Rect gives ``n_doppler * m_delay`` ones. Rrc samples the time-domain
    square-root raised-cosine whose spectrum occupies exactly one Doppler
    bin; the kept length is ``floor(extent * (1+beta) * N * M)`` samples
    centered on the peak. ``extent=1`` is the frame-budget truncation used
    by the radar pipeline; larger extents retain more of the slowly
    decaying tails for waveform-characterization work. Values may be
    negative or exceed 1.
    """
    if n_doppler < 1 or m_delay < 1:
        raise ValueError("grid dimensions must be positive")
    nm = n_doppler * m_delay
    if window.kind is WindowKind.RECT:
        return np.ones(nm)
    if extent < 1.0:
        raise ValueError("extent must be >= 1")
    period = (1.0 + window.beta) * nm  # samples per window symbol period
    length = int(math.floor(extent * period))
    offsets = np.arange(length) - length // 2
    return _rrc_impulse(offsets / period, window.beta)


def window_autocorr_linear(nu):
    """Triangular Doppler interpolation profile: 1-|nu| inside one bin, else 0."""
    ns = _asarray(nu)
    out = np.maximum(0.0, 1.0 - np.abs(ns))
    return _maybe_scalar(out, nu)


def window_autocorr_rrc(nu, beta_w: float):
    """Closed-form spectral autocorrelation of the RRC window.

    ``nu`` is Doppler normalized by one bin; the form is piecewise over
    [0, 1] with constants a = (1-beta)/(2(1+beta)) and
    b = pi(1+beta)/(2 beta), extended to negative ``nu`` by even symmetry.
    Peaks at 1/(1+beta) and vanishes for |nu| >= 1. Verified against
    :func:`numeric_spectrum_autocorr` for roll-offs up to 0.5; the branch
    ordering assumes beta_w <= 0.5.
    """
    if not 0.0 < beta_w < 1.0:
        raise ValueError(f"roll-off must be in (0, 1), got {beta_w}")
    a = (1.0 - beta_w) / (2.0 * (1.0 + beta_w))
    b = np.pi * (1.0 + beta_w) / (2.0 * beta_w)
    v = np.abs(_asarray(nu))

    branch1 = (
        0.5 * np.cos(b * v) * (1.0 - 2.0 * v - 2.0 * a)
        + np.sin(b - b * v - 2.0 * b * a) / (2.0 * b)
        - 3.0 / (2.0 * b) * np.sin(-b * v)
        + 2.0 * a
        - v
    )
    branch2 = 2.0 / b * np.sin(b / 2.0 - b * a) + 2.0 * a - v
    branch3 = (
        2.0 / b * (np.sin(b / 2.0 - b * a) - np.sin(-2.0 * b * a + b * v))
        + 1.0 / (4.0 * b) * (np.sin(-2.0 * b * a + b * v) - np.sin(2.0 * b * (a - v) + b * v))
        + 0.5 * np.cos(b * v - 2.0 * b * a) * (-2.0 * a + v)
    )
    branch4 = 0.5 * (np.sin(b - b * v) / b + np.cos(-2.0 * b * a + b * v) * (1.0 - v))

    out = np.select(
        [v <= -a + 0.5, v <= 2.0 * a, v <= a + 0.5, v <= 1.0],
        [branch1, branch2, branch3, branch4],
        default=0.0,
    )
    return _maybe_scalar(out, nu)


def _window_autocorr_rrc_scalar(nu: float, beta_w: float) -> float:
    # math-only fast path for optimizer inner loops
    a = (1.0 - beta_w) / (2.0 * (1.0 + beta_w))
    b = math.pi * (1.0 + beta_w) / (2.0 * beta_w)
    v = abs(nu)
    if v <= -a + 0.5:
        return (
            0.5 * math.cos(b * v) * (1.0 - 2.0 * v - 2.0 * a)
            + math.sin(b - b * v - 2.0 * b * a) / (2.0 * b)
            - 3.0 / (2.0 * b) * math.sin(-b * v)
            + 2.0 * a
            - v
        )
    if v <= 2.0 * a:
        return 2.0 / b * math.sin(b / 2.0 - b * a) + 2.0 * a - v
    if v <= a + 0.5:
        return (
            2.0 / b * (math.sin(b / 2.0 - b * a) - math.sin(-2.0 * b * a + b * v))
            + 1.0 / (4.0 * b) * (math.sin(-2.0 * b * a + b * v) - math.sin(2.0 * b * (a - v) + b * v))
            + 0.5 * math.cos(b * v - 2.0 * b * a) * (-2.0 * a + v)
        )
    if v <= 1.0:
        return 0.5 * (math.sin(b - b * v) / b + math.cos(-2.0 * b * a + b * v) * (1.0 - v))
    return 0.0


def _pulse_autocorr_scalar(shape: PulseShape, tau: float) -> float:
    if shape.kind is PulseKind.RECT:
        return max(0.0, 1.0 - abs(tau))
    if shape.kind is PulseKind.SINC:
        if tau == 0.0:
            return 1.0
        return math.sin(math.pi * tau) / (math.pi * tau)
    beta = shape.beta
    den = 1.0 - (2.0 * beta * tau) ** 2
    if abs(den) < 1e-8:
        return (math.pi / 4.0) * float(np.sinc(1.0 / (2.0 * beta)))
    if tau == 0.0:
        return 1.0
    return math.sin(math.pi * tau) / (math.pi * tau) * math.cos(math.pi * beta * tau) / den


def numeric_spectrum_autocorr(nu: float, beta_w: float, step: float = 1.0 / 8192.0) -> float:
    """Quadrature cross-check for :func:`window_autocorr_rrc`.

    Integrates the product of the unit-support square-root raised-cosine
    spectrum with a Doppler-shifted copy of itself on a fixed fine grid.
    Deterministic; independent of the closed form it validates.
    """
    if not 0.0 < beta_w < 1.0:
        raise ValueError(f"roll-off must be in (0, 1), got {beta_w}")
    n = int(round(1.0 / step)) + 1
    x = np.linspace(-0.5, 0.5, n)
    f1 = np.sqrt(raised_cosine_spectrum((1.0 + beta_w) * x, beta_w))
    f2 = np.sqrt(raised_cosine_spectrum((1.0 + beta_w) * (x - nu), beta_w))
    return float(np.trapezoid(f1 * f2, x))
