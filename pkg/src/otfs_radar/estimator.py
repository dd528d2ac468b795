"""Coarse bin detection and fractional delay/Doppler/gain refinement.

The coarse stage screens ambiguity-surface peaks with a local-maximum
filter and a cell-averaging constant-false-alarm-rate test. The fine
stage fits a separable two-factor surface model to the 2x2 magnitude
patch around a detected bin by derivative-free least squares.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .receiver import AmbiguitySurface
from .waveforms import (
    PulseKind,
    PulseShape,
    WindowKind,
    WindowShape,
    _pulse_autocorr_scalar,
    _window_autocorr_rrc_scalar,
    pulse_matched_autocorr,
    window_autocorr_linear,
    window_autocorr_rrc,
)


class InterpKind(str, enum.Enum):
    LINEAR = "linear"
    RRC_AUTOCORR = "rrc"


@dataclass(frozen=True)
class InterpolationModel:
    """Separable surface model: pulse autocorrelation times Doppler profile.

    ``LINEAR`` uses the triangular Doppler profile; ``RRC_AUTOCORR`` the
    closed-form spectral autocorrelation of the RRC window at roll-off
    ``beta_w``.
    """

    kind: InterpKind
    beta_w: float = 0.25
    pulse: PulseShape = field(default_factory=lambda: PulseShape(PulseKind.RECT))

    def __post_init__(self):
        if self.kind is InterpKind.RRC_AUTOCORR and not 0.0 < self.beta_w < 1.0:
            raise ValueError(f"roll-off must be in (0, 1), got {self.beta_w}")

    @classmethod
    def for_window(cls, window: WindowShape, pulse: PulseShape) -> "InterpolationModel":
        """Model matching a frame's window: rrc windows get the closed form."""
        if window.kind is WindowKind.RRC:
            return cls(InterpKind.RRC_AUTOCORR, window.beta, pulse)
        return cls(InterpKind.LINEAR, 0.0, pulse)


@dataclass(frozen=True)
class Candidate:
    k_bin: int
    delay_lag: int
    magnitude: float


@dataclass(frozen=True)
class PathEstimate:
    """Integer bins plus fractional refinements and fitted gain."""

    k_bin: int
    l_bin: int
    eps_f: float
    eps_t: float
    alpha: float
    converged: bool = True


@dataclass(frozen=True)
class FractionalFit:
    alpha: float
    eps_t: float
    eps_f: float
    converged: bool
    residual: float


def in_validity_region(tau: float, nu: float) -> bool:
    """Whether (tau, nu) lies inside the separable model's trusted region."""
    return abs(tau) <= 1.0 and abs(nu) <= 1.0


def model_ambiguity(model: InterpolationModel, tau, nu):
    """Separable model value at normalized delay ``tau`` and Doppler ``nu``.

    Clamped to zero outside the unit validity region; use
    :func:`in_validity_region` to detect clamping.
    """
    p = pulse_matched_autocorr(model.pulse, tau)
    if model.kind is InterpKind.LINEAR:
        w = window_autocorr_linear(nu)
    else:
        w = window_autocorr_rrc(nu, model.beta_w)
    out = p * w
    mask = (np.abs(np.asarray(tau, dtype=float)) > 1.0) | (
        np.abs(np.asarray(nu, dtype=float)) > 1.0
    )
    out = np.where(mask, 0.0, out)
    if np.isscalar(tau) and np.isscalar(nu):
        return float(out)
    return out


def _model_scalar(model: InterpolationModel, tau: float, nu: float) -> float:
    if abs(tau) > 1.0 or abs(nu) > 1.0:
        return 0.0
    p = _pulse_autocorr_scalar(model.pulse, tau)
    if model.kind is InterpKind.LINEAR:
        w = max(0.0, 1.0 - abs(nu))
    else:
        w = _window_autocorr_rrc_scalar(nu, model.beta_w)
    return p * w


def objective(
    patch: np.ndarray,
    alpha: float,
    eps_t: float,
    eps_f: float,
    model: InterpolationModel,
) -> float:
    """Total squared error between the 2x2 magnitudes and the scaled model.

    ``patch[i, j]`` pairs its first index with the delay fraction and its
    second with the Doppler fraction: the model term for entry (i, j) is
    ``alpha * model(i - eps_t, j - eps_f)``.
    """
    total = 0.0
    for i in (0, 1):
        p = _pulse_autocorr_scalar(model.pulse, i - eps_t)
        for j in (0, 1):
            if model.kind is InterpKind.LINEAR:
                w = max(0.0, 1.0 - abs(j - eps_f))
            else:
                w = _window_autocorr_rrc_scalar(j - eps_f, model.beta_w)
            r = float(patch[i, j]) - alpha * p * w
            total += r * r
    return total


def _scan_fractions(
    patch: np.ndarray,
    model: InterpolationModel,
    et_vals: np.ndarray,
    ef_vals: np.ndarray,
) -> tuple[float, float, float, float]:
    best = (math.inf, 0.0, 0.0, 0.0)
    for et in et_vals:
        p0 = _pulse_autocorr_scalar(model.pulse, -et)
        p1 = _pulse_autocorr_scalar(model.pulse, 1.0 - et)
        for ef in ef_vals:
            if model.kind is InterpKind.LINEAR:
                w0, w1 = 1.0 - ef, ef
            else:
                w0 = _window_autocorr_rrc_scalar(ef, model.beta_w)
                w1 = _window_autocorr_rrc_scalar(1.0 - ef, model.beta_w)
            m = ((p0 * w0, p0 * w1), (p1 * w0, p1 * w1))
            mm = sum(v * v for row in m for v in row)
            if mm <= 0.0:
                continue
            am = sum(patch[i][j] * m[i][j] for i in (0, 1) for j in (0, 1))
            alpha = max(0.0, am / mm)
            loss = sum(
                (patch[i][j] - alpha * m[i][j]) ** 2 for i in (0, 1) for j in (0, 1)
            )
            if loss < best[0]:
                best = (loss, alpha, float(et), float(ef))
    return best


def _grid_seed(patch: np.ndarray, model: InterpolationModel) -> tuple[float, float, float]:
    """Best (alpha, eps_t, eps_f) over a coarse-then-refined fraction grid.

    For fixed fractions the optimal gain is the closed-form projection of
    the data onto the model patch, so the scan stays cheap and lands the
    simplex polish in the right basin even where the loss surface is
    nearly flat along one fraction.
    """
    coarse = np.linspace(0.0, 1.0, 21)
    _, alpha, et, ef = _scan_fractions(patch, model, coarse, coarse)
    for span in (0.06, 0.008):
        fine_t = np.clip(np.linspace(et - span, et + span, 13), 0.0, 1.0)
        fine_f = np.clip(np.linspace(ef - span, ef + span, 13), 0.0, 1.0)
        _, alpha, et, ef = _scan_fractions(patch, model, fine_t, fine_f)
    return alpha, et, ef


def fractional_estimate(patch: np.ndarray, model: InterpolationModel) -> FractionalFit:
    """Least-squares fit of (gain, delay fraction, Doppler fraction).

    Derivative-free simplex descent with box bounds, restarted from the
    four interior corners of the fraction square plus a coarse-grid seed;
    the lowest-residual start wins. A fit that never converges is returned
    flagged with the best point found.
    """
    patch = np.asarray(patch, dtype=float)
    if patch.shape != (2, 2):
        raise ValueError(f"expected a 2x2 magnitude patch, got {patch.shape}")

    peak = _model_scalar(model, 0.0, 0.0)
    alpha0 = float(patch[0, 0]) / peak if peak > 0 else 1.0

    def fun(x):
        return objective(patch, x[0], x[1], x[2], model)

    corner_opts = {"xatol": 1e-9, "fatol": 1e-12, "maxiter": 2000, "maxfev": 4000}
    polish_opts = {"xatol": 1e-10, "fatol": 1e-24, "maxiter": 4000, "maxfev": 8000}
    starts = [(alpha0, et0, ef0, corner_opts) for et0 in (0.25, 0.75) for ef0 in (0.25, 0.75)]
    starts.append((*_grid_seed(patch, model), polish_opts))

    best = None
    any_success = False
    bounds = [(0.0, None), (0.0, 1.0), (0.0, 1.0)]
    for a0, et0, ef0, opts in starts:
        # a vertex sitting exactly on a bound degenerates the initial simplex
        x0 = np.array([a0, min(max(et0, 1e-3), 1.0 - 1e-3), min(max(ef0, 1e-3), 1.0 - 1e-3)])
        res = minimize(fun, x0, method="Nelder-Mead", bounds=bounds, options=opts)
        any_success = any_success or bool(res.success)
        if best is None or res.fun < best.fun:
            best = res
    alpha, eps_t, eps_f = best.x
    return FractionalFit(
        alpha=float(alpha),
        eps_t=float(min(max(eps_t, 0.0), 1.0)),
        eps_f=float(min(max(eps_f, 0.0), 1.0)),
        converged=any_success,
        residual=float(best.fun),
    )


def _neighborhood(mags: np.ndarray, row: int, col: int) -> np.ndarray:
    """5x5 neighbor magnitudes (center excluded); Doppler wraps, delay clips."""
    n_rows, n_cols = mags.shape
    vals = []
    for dr in range(-2, 3):
        r = (row + dr) % n_rows
        for dc in range(-2, 3):
            if dr == 0 and dc == 0:
                continue
            c = col + dc
            if 0 <= c < n_cols:
                vals.append(mags[r, c])
    return np.asarray(vals)


def coarse_estimate(
    surface: AmbiguitySurface, max_paths: int, cfar_factor: float = 1.0
) -> list[Candidate]:
    """Screen the surface for path candidates.

    Keeps the ``max_paths`` largest magnitudes, then discards cells that
    are not the maximum of their 5x5 neighborhood or that fail the
    cell-averaging test (magnitude strictly above ``cfar_factor`` times
    the neighbor mean). Survivors are sorted by descending magnitude with
    ties broken by ascending (delay, Doppler).
    """
    if max_paths < 1:
        raise ValueError("max_paths must be >= 1")
    mags = surface.magnitude()
    n_rows, n_cols = mags.shape

    flat = mags.ravel()
    rows, cols = np.unravel_index(np.arange(flat.size), mags.shape)
    order = np.lexsort((rows, cols, -flat))
    survivors: list[Candidate] = []
    for idx in order[:max_paths]:
        r, c = int(rows[idx]), int(cols[idx])
        value = mags[r, c]
        neigh = _neighborhood(mags, r, c)
        if len(neigh) and value < neigh.max():
            continue
        if not value > cfar_factor * neigh.mean():
            continue
        survivors.append(
            Candidate(
                k_bin=surface.k_start + r,
                delay_lag=surface.l_start + c,
                magnitude=float(value),
            )
        )
    survivors.sort(key=lambda cand: (-cand.magnitude, cand.delay_lag, cand.k_bin))
    return survivors


def extract_patch(surface: AmbiguitySurface, k_bin: int, l_bin: int) -> np.ndarray:
    """2x2 magnitude patch anchored at (k_bin, l_bin), fit-oriented.

    The returned patch advances along delay on its first axis and Doppler
    on its second, matching :func:`objective`; the Doppler axis wraps
    circularly (aliases of the discrete spectrum are exact).
    """
    mags = surface.magnitude()
    n_rows, n_cols = mags.shape
    r = k_bin - surface.k_start
    c = l_bin - surface.l_start
    if not 0 <= r < n_rows:
        raise IndexError("doppler bin outside surface")
    if not 0 <= c < n_cols - 1:
        raise IndexError("delay lag outside surface (needs lag+1)")
    patch = np.empty((2, 2))
    for i in (0, 1):  # delay offset
        for j in (0, 1):  # doppler offset
            patch[i, j] = mags[(r + j) % n_rows, c + i]
    return patch


def best_anchor_patch(
    surface: AmbiguitySurface, k_bin: int, l_bin: int
) -> tuple[int, int, np.ndarray]:
    """Choose the 2x2 anchor around a detected peak with the most energy.

    A detected integer peak may sit on either side of the true fractional
    position; of the four candidate anchors touching the peak, the one
    whose patch captures the largest total magnitude is returned.
    """
    n_rows = surface.shape[0]
    best = None
    for dk in (0, -1):
        for dl in (0, -1):
            k = (k_bin + dk - surface.k_start) % n_rows + surface.k_start
            l = l_bin + dl
            try:
                patch = extract_patch(surface, k, l)
            except IndexError:
                continue
            score = patch.sum()
            if best is None or score > best[0]:
                best = (score, k, l, patch)
    if best is None:
        raise IndexError("no valid anchor around the detected bin")
    return best[1], best[2], best[3]


def rmse(estimates, truths) -> float:
    """Root mean square error between matched estimate/truth sequences."""
    est = np.asarray(estimates, dtype=float)
    tru = np.asarray(truths, dtype=float)
    if est.shape != tru.shape:
        raise ValueError(f"length mismatch: {est.shape} vs {tru.shape}")
    if est.size == 0:
        raise ValueError("rmse of empty sequences")
    return float(np.sqrt(np.mean((est - tru) ** 2)))
