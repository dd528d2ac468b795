"""Experiment drivers: Monte Carlo runs, sweeps, ambiguity map export, config IO.

Every output artifact is a pure function of (config, master seed):
per-trial random streams are derived from the master seed with
spawn keys, CSV floats use fixed repr formatting, and files are written
atomically.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace

import numpy as np

from . import channel as chan
from . import estimator as est
from . import otfs, receiver
from .waveforms import PulseKind, PulseShape, WindowKind, WindowShape

MONTECARLO_SCHEMA = "otfs-radar/montecarlo/v1"
SWEEP_SCHEMA = "otfs-radar/sweep/v1"
ESTIMATES_SCHEMA = "otfs-radar/estimates/v1"

# Window extent used when exporting fine ambiguity maps. The frame-budget
# truncation leaves enough edge energy to paint ripples onto the Doppler
# profile; map export keeps the slowly decaying window tails instead so
# the surfaces characterize the waveform design rather than the clipping.
MAP_WINDOW_EXTENT = 40.0

# Minimum Chebyshev bin separation (Doppler circular) between drawn paths,
# so 5x5 local-maximum neighborhoods never overlap.
MIN_BIN_SEPARATION = 3

_SCENE_RETRIES = 1000


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    frame: otfs.FrameConfig = field(default_factory=otfs.FrameConfig)
    path_counts: tuple[int, ...] = (1, 2, 3, 4, 5)
    n_sim: int = 100
    models: tuple[est.InterpKind, ...] = (est.InterpKind.LINEAR, est.InterpKind.RRC_AUTOCORR)
    input_mode: str = "exact"  # "exact" or "pipeline"
    seed: int = 0
    output_dir: str = "out"
    noise_sigma: float = 0.0
    cfar_factor: float = 1.0
    max_paths: int = chan.MAX_PATHS

    def __post_init__(self):
        if self.n_sim < 1:
            raise ConfigError("n_sim must be >= 1")
        if self.input_mode not in ("exact", "pipeline"):
            raise ConfigError(f"unknown input_mode {self.input_mode!r}")
        if not self.path_counts:
            raise ConfigError("path_counts must be nonempty")
        if any(p < 1 for p in self.path_counts):
            raise ConfigError("path counts must be >= 1")
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be >= 0")
        if self.max_paths < 1:
            raise ConfigError("max_paths must be >= 1")


@dataclass(frozen=True)
class PathTruth:
    k_bin: int
    l_bin: int
    eps_f: float
    eps_t: float
    alpha: float


def truth_model(cfg: ExperimentConfig) -> est.InterpolationModel:
    """Surface model implied by the frame's window and pulse."""
    return est.InterpolationModel.for_window(cfg.frame.window, cfg.frame.pulse)


def fit_model(cfg: ExperimentConfig, kind: est.InterpKind) -> est.InterpolationModel:
    beta = cfg.frame.window.rolloff if kind is est.InterpKind.RRC_AUTOCORR else 0.0
    if kind is est.InterpKind.RRC_AUTOCORR and beta == 0.0:
        beta = 0.25
    return est.InterpolationModel(kind, beta, cfg.frame.pulse)


# ---------------------------------------------------------------------------
# scene generation
# ---------------------------------------------------------------------------


def _circular_chebyshev(k1, k2, l1, l2, n_doppler):
    dk = abs(k1 - k2) % n_doppler
    dk = min(dk, n_doppler - dk)
    return max(dk, abs(l1 - l2))


def draw_truths(
    rng: np.random.Generator,
    cfg: ExperimentConfig,
    n_paths: int,
    integer_bins: bool = False,
    alpha_range: tuple[float, float] = (0.5, 1.0),
) -> list[PathTruth]:
    """Draw non-colliding path truths inside the frame's gated bin ranges.

    Doppler integer bins live in [0, N); delay lags inside the fully
    observed lag interval with one-bin margins. Two paths collide when
    their bins are closer than ``MIN_BIN_SEPARATION`` (Chebyshev, Doppler
    circular) or when their delay bins share a residue class modulo M:
    the lattice pilot repeats every M delay samples, so same-residue
    paths alias into each other's correlation chains.
    """
    frame = cfg.frame
    lag_lo, lag_hi = frame.lag_range
    l_lo, l_hi = lag_lo + 2, lag_hi - 3
    if l_hi < l_lo:
        raise ConfigError("frame too short for gated delay draws")
    if n_paths > frame.m_delay:
        raise ConfigError("cannot place more paths than delay residue classes")
    truths: list[PathTruth] = []
    for _ in range(n_paths):
        for attempt in range(_SCENE_RETRIES):
            k = int(rng.integers(0, frame.n_doppler))
            l = int(rng.integers(l_lo, l_hi + 1))
            if all(
                _circular_chebyshev(k, t.k_bin, l, t.l_bin, frame.n_doppler)
                >= MIN_BIN_SEPARATION
                and (l - t.l_bin) % frame.m_delay != 0
                for t in truths
            ):
                break
        else:
            raise RuntimeError(
                f"could not place {n_paths} separated paths in "
                f"[{l_lo}, {l_hi}] x [0, {frame.n_doppler}) after {_SCENE_RETRIES} draws"
            )
        eps_f = 0.0 if integer_bins else float(rng.uniform(0.0, 1.0))
        eps_t = 0.0 if integer_bins else float(rng.uniform(0.0, 1.0))
        alpha = float(rng.uniform(*alpha_range))
        truths.append(PathTruth(k, l, eps_f, eps_t, alpha))
    return truths


def scene_from_truths(
    truths: list[PathTruth], cfg: ExperimentConfig, seed: int
) -> chan.ChannelScene:
    frame = cfg.frame
    paths = tuple(
        chan.PathParams(
            alpha=complex(t.alpha),
            delay=(t.l_bin + t.eps_t) * frame.sample_period,
            doppler=(t.k_bin + t.eps_f) / (frame.n_doppler * frame.symbol_period),
        )
        for t in truths
    )
    return chan.ChannelScene(paths, noise_sigma=cfg.noise_sigma, seed=seed)


def exact_patch(truth: PathTruth, gen: est.InterpolationModel) -> np.ndarray:
    """Noise-free 2x2 magnitudes generated directly from the surface model."""
    patch = np.empty((2, 2))
    for i in (0, 1):
        for j in (0, 1):
            patch[i, j] = truth.alpha * est.model_ambiguity(
                gen, i - truth.eps_t, j - truth.eps_f
            )
    return np.abs(patch)


# ---------------------------------------------------------------------------
# pipeline simulation
# ---------------------------------------------------------------------------


def simulate_surface(
    scene: chan.ChannelScene, cfg: ExperimentConfig
) -> receiver.AmbiguitySurface:
    """Transmit the pilot frame through the scene and form the folded surface.

    The full Doppler spectrum repeats every N bins for the lattice pilot,
    so the returned surface is cropped to the N unambiguous rows.
    """
    frame = cfg.frame
    grid = otfs.pilot_grid(frame.n_doppler, frame.m_delay)
    x_tilde = otfs.apply_window(
        otfs.dd_to_td(grid), frame.window, frame.n_doppler, frame.m_delay
    )
    block = otfs.assemble_frame(otfs.synthesize(x_tilde, frame), frame)
    received = chan.apply_continuous_channel(block, scene, frame)
    if scene.noise_sigma > 0:
        received = chan.add_awgn(received, scene.noise_sigma, scene.seed)
    y = receiver.matched_filter_sample(received, frame.pulse, frame)
    surface = receiver.cross_ambiguity(y, x_tilde, frame)
    return surface.crop_doppler(frame.n_doppler)


def associate(
    candidates: list[est.Candidate], truths: list[PathTruth], n_doppler: int
) -> tuple[list[tuple[est.Candidate, PathTruth]], int, int]:
    """Greedy nearest-bin matching; pairs farther than one bin are failures.

    Returns (matched pairs, missed truths, false alarms).
    """
    remaining = list(truths)
    pairs = []
    false_alarms = 0
    for cand in candidates:
        best = None
        for t in remaining:
            d = _circular_chebyshev(cand.k_bin, t.k_bin, cand.delay_lag, t.l_bin, n_doppler)
            if best is None or d < best[0]:
                best = (d, t)
        if best is not None and best[0] <= 1:
            pairs.append((cand, best[1]))
            remaining.remove(best[1])
        else:
            false_alarms += 1
    return pairs, len(remaining), false_alarms


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def _trial_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def run_montecarlo(cfg: ExperimentConfig, out_path: str | None = None) -> list[dict]:
    """Aggregate estimation error over random scenes, per path count and model.

    In ``exact`` mode each path's 2x2 input is generated from the frame's
    own surface model (bins known); ``pipeline`` mode runs the synthesized
    frame through the channel, matched filter, surface, and candidate
    screening before fitting. Errors are measured on absolute fractional
    positions so anchor disagreements count at face value.
    """
    rows: list[dict] = []
    gen = truth_model(cfg)
    for n_paths in cfg.path_counts:
        per_model: dict[est.InterpKind, dict[str, list[float]]] = {
            kind: {"alpha": [], "eps_t": [], "eps_f": [], "truth_a": [], "truth_t": [], "truth_f": []}
            for kind in cfg.models
        }
        counts = {kind: {"matched": 0, "missed": 0, "false": 0} for kind in cfg.models}
        for trial in range(cfg.n_sim):
            rng = _trial_rng(cfg.seed, n_paths, trial)
            truths = draw_truths(rng, cfg, n_paths)
            if cfg.input_mode == "exact":
                patches = [(t, exact_patch(t, gen), t.k_bin, t.l_bin) for t in truths]
                for kind in cfg.models:
                    model = fit_model(cfg, kind)
                    acc = per_model[kind]
                    counts[kind]["matched"] += len(patches)
                    for t, patch, kb, lb in patches:
                        fit = est.fractional_estimate(patch, model)
                        acc["alpha"].append(fit.alpha)
                        acc["truth_a"].append(t.alpha)
                        acc["eps_t"].append(lb + fit.eps_t)
                        acc["truth_t"].append(t.l_bin + t.eps_t)
                        acc["eps_f"].append(kb + fit.eps_f)
                        acc["truth_f"].append(t.k_bin + t.eps_f)
            else:
                scene = scene_from_truths(truths, cfg, seed=trial)
                surface = simulate_surface(scene, cfg)
                cands = est.coarse_estimate(surface, n_paths, cfg.cfar_factor)
                pairs, missed, false = associate(cands, truths, cfg.frame.n_doppler)
                for kind in cfg.models:
                    model = fit_model(cfg, kind)
                    acc = per_model[kind]
                    counts[kind]["matched"] += len(pairs)
                    counts[kind]["missed"] += missed
                    counts[kind]["false"] += false
                    for cand, t in pairs:
                        kb, lb, patch = est.best_anchor_patch(
                            surface, cand.k_bin, cand.delay_lag
                        )
                        fit = est.fractional_estimate(patch, model)
                        acc["alpha"].append(fit.alpha)
                        acc["truth_a"].append(t.alpha)
                        acc["eps_t"].append(lb + fit.eps_t)
                        acc["truth_t"].append(t.l_bin + t.eps_t)
                        n = cfg.frame.n_doppler
                        pos = kb + fit.eps_f
                        tpos = t.k_bin + t.eps_f
                        # wrap Doppler error to the nearest alias
                        diff = (pos - tpos + n / 2) % n - n / 2
                        acc["eps_f"].append(tpos + diff)
                        acc["truth_f"].append(tpos)
        for kind in cfg.models:
            acc = per_model[kind]
            rows.append(
                {
                    "paths": n_paths,
                    "model": kind.value,
                    "rmse_alpha": est.rmse(acc["alpha"], acc["truth_a"]),
                    "rmse_eps_t": est.rmse(acc["eps_t"], acc["truth_t"]),
                    "rmse_eps_f": est.rmse(acc["eps_f"], acc["truth_f"]),
                    "n_matched": counts[kind]["matched"],
                    "n_missed": counts[kind]["missed"],
                    "n_false": counts[kind]["false"],
                }
            )
    if out_path:
        header = "paths,model,rmse_alpha,rmse_eps_t,rmse_eps_f,n_matched,n_missed,n_false"
        lines = [f"# schema: {MONTECARLO_SCHEMA}", header]
        for r in rows:
            lines.append(
                f"{r['paths']},{r['model']},{r['rmse_alpha']:.17g},"
                f"{r['rmse_eps_t']:.17g},{r['rmse_eps_f']:.17g},"
                f"{r['n_matched']},{r['n_missed']},{r['n_false']}"
            )
        receiver._atomic_write(out_path, "\n".join(lines) + "\n")
        _write_meta(out_path, cfg, MONTECARLO_SCHEMA)
    return rows


def sweep_eps_f(
    cfg: ExperimentConfig, kind: est.InterpKind, out_path: str | None = None
) -> list[dict]:
    """Doppler-fraction sweep at zero delay fraction, noise free.

    The 2x2 inputs come from the frame's own surface model with unit gain;
    each grid point is fitted with the requested interpolation and the
    signed estimate error recorded.
    """
    gen = truth_model(cfg)
    model = fit_model(cfg, kind)
    rows = []
    for step in range(1, 100):
        eps_f = step / 100.0
        truth = PathTruth(k_bin=0, l_bin=0, eps_f=eps_f, eps_t=0.0, alpha=1.0)
        fit = est.fractional_estimate(exact_patch(truth, gen), model)
        rows.append(
            {
                "eps_f_true": eps_f,
                "eps_f_hat": fit.eps_f,
                "error": fit.eps_f - eps_f,
            }
        )
    if out_path:
        lines = [f"# schema: {SWEEP_SCHEMA}", "eps_f_true,eps_f_hat,error"]
        for r in rows:
            lines.append(
                f"{r['eps_f_true']:.17g},{r['eps_f_hat']:.17g},{r['error']:.17g}"
            )
        receiver._atomic_write(out_path, "\n".join(lines) + "\n")
        _write_meta(out_path, cfg, SWEEP_SCHEMA, extra={"model": kind.value})
    return rows


MAP_COMBOS = tuple(
    (pk, wk)
    for pk in (PulseKind.RECT, PulseKind.SINC, PulseKind.RRC)
    for wk in (WindowKind.RECT, WindowKind.RRC)
)


def export_ambiguity_maps(
    cfg: ExperimentConfig, out_dir: str, grid_points: int = 101, rolloff: float = 0.25
) -> list[str]:
    """Fine ambiguity surfaces of the pilot for six pulse/window pairings.

    Grids span five sample periods in delay and five Doppler bins in
    frequency on each side. Files are named ``ambiguity_<pulse>_<window>``.
    """
    os.makedirs(out_dir, exist_ok=True)
    frame0 = cfg.frame
    ts = frame0.sample_period
    tb = frame0.block_period
    tau_grid = np.linspace(-5.0 * ts, 5.0 * ts, grid_points)
    nu_grid = np.linspace(-5.0 / tb, 5.0 / tb, grid_points)
    written = []
    for pk, wk in MAP_COMBOS:
        pulse = PulseShape(pk, rolloff if pk is PulseKind.RRC else 0.0)
        window = WindowShape(wk, rolloff if wk is WindowKind.RRC else 0.0)
        frame = replace(frame0, pulse=pulse, window=window)
        grid = otfs.pilot_grid(frame.n_doppler, frame.m_delay)
        extent = MAP_WINDOW_EXTENT if wk is WindowKind.RRC else 1.0
        x_tilde = otfs.apply_window(
            otfs.dd_to_td(grid), window, frame.n_doppler, frame.m_delay, extent
        )
        signal = otfs.synthesize(x_tilde, frame)
        surface = receiver.fine_ambiguity(signal, tau_grid, nu_grid)
        path = os.path.join(out_dir, f"ambiguity_{pk.value}_{wk.value}.csv")
        receiver.export_surface(
            surface, path, meta={"pulse": pk.value, "window": wk.value, "rolloff": rolloff}
        )
        written.append(path)
    return written


def run_estimate(
    cfg: ExperimentConfig, scene: chan.ChannelScene, out_path: str | None = None
) -> list[est.PathEstimate]:
    """Detect and refine paths for one explicit scene (full pipeline)."""
    surface = simulate_surface(scene, cfg)
    cands = est.coarse_estimate(surface, cfg.max_paths, cfg.cfar_factor)
    results = []
    rows = []
    for cand in cands:
        kb, lb, patch = est.best_anchor_patch(surface, cand.k_bin, cand.delay_lag)
        for kind in cfg.models:
            fit = est.fractional_estimate(patch, fit_model(cfg, kind))
            pe = est.PathEstimate(
                k_bin=kb,
                l_bin=lb,
                eps_f=fit.eps_f,
                eps_t=fit.eps_t,
                alpha=fit.alpha,
                converged=fit.converged,
            )
            results.append(pe)
            rows.append((kb, lb, fit, kind))
    if out_path:
        lines = [
            f"# schema: {ESTIMATES_SCHEMA}",
            "trial,path,k_hat,l_hat,eps_t_hat,eps_f_hat,alpha_hat,model_kind",
        ]
        for i, (kb, lb, fit, kind) in enumerate(rows):
            lines.append(
                f"0,{i},{kb},{lb},{fit.eps_t:.17g},{fit.eps_f:.17g},"
                f"{fit.alpha:.17g},{kind.value}"
            )
        receiver._atomic_write(out_path, "\n".join(lines) + "\n")
        _write_meta(out_path, cfg, ESTIMATES_SCHEMA)
    return results


# ---------------------------------------------------------------------------
# config and scene files
# ---------------------------------------------------------------------------


def _parse_kv_lines(text: str, path: str) -> list[tuple[int, str, str]]:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        entries.append((lineno, key.strip().lower(), value.strip()))
    return entries


def _to_int(value, path, lineno):
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{path}:{lineno}: expected integer, got {value!r}") from None


def _to_float(value, path, lineno):
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{path}:{lineno}: expected number, got {value!r}") from None


def _parse_path_counts(value, path, lineno):
    value = value.strip()
    if "-" in value and "," not in value:
        lo, hi = value.split("-", 1)
        return tuple(range(_to_int(lo, path, lineno), _to_int(hi, path, lineno) + 1))
    return tuple(_to_int(v, path, lineno) for v in value.split(","))


_PULSES = {p.value: p for p in PulseKind}
_WINDOWS = {w.value: w for w in WindowKind}
_MODELS = {"linear": est.InterpKind.LINEAR, "rrc": est.InterpKind.RRC_AUTOCORR}


def parse_config(path: str) -> ExperimentConfig:
    """Read a key = value experiment file; unknown keys are rejected.

    An empty file yields the defaults (8x8 grid, 6 block slots, eightfold
    oversampling, rectangular pulse with an RRC window at 25% roll-off).
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()

    frame_kw: dict = {}
    exp_kw: dict = {}
    pulse_kind, pulse_beta = PulseKind.RECT, 0.25
    window_kind, window_beta = WindowKind.RRC, 0.25

    for lineno, key, value in _parse_kv_lines(text, path):
        if key == "n":
            frame_kw["n_doppler"] = _to_int(value, path, lineno)
        elif key == "m":
            frame_kw["m_delay"] = _to_int(value, path, lineno)
        elif key == "u":
            frame_kw["blocks_per_pri"] = _to_int(value, path, lineno)
        elif key == "oversampling":
            frame_kw["oversampling"] = _to_int(value, path, lineno)
        elif key == "sample_period":
            frame_kw["sample_period"] = _to_float(value, path, lineno)
        elif key == "pulse":
            if value not in _PULSES:
                raise ConfigError(f"{path}:{lineno}: unknown pulse {value!r}")
            pulse_kind = _PULSES[value]
        elif key == "pulse_beta":
            pulse_beta = _to_float(value, path, lineno)
        elif key == "window":
            if value not in _WINDOWS:
                raise ConfigError(f"{path}:{lineno}: unknown window {value!r}")
            window_kind = _WINDOWS[value]
        elif key == "window_beta":
            window_beta = _to_float(value, path, lineno)
        elif key == "n_sim":
            exp_kw["n_sim"] = _to_int(value, path, lineno)
        elif key == "path_counts":
            exp_kw["path_counts"] = _parse_path_counts(value, path, lineno)
        elif key == "models":
            kinds = []
            for name in value.split(","):
                name = name.strip().lower()
                if name not in _MODELS:
                    raise ConfigError(f"{path}:{lineno}: unknown model {name!r}")
                kinds.append(_MODELS[name])
            exp_kw["models"] = tuple(kinds)
        elif key == "input_mode":
            exp_kw["input_mode"] = value.lower()
        elif key == "seed":
            exp_kw["seed"] = _to_int(value, path, lineno)
        elif key == "output_dir":
            exp_kw["output_dir"] = value
        elif key == "noise_sigma":
            exp_kw["noise_sigma"] = _to_float(value, path, lineno)
        elif key == "cfar_factor":
            exp_kw["cfar_factor"] = _to_float(value, path, lineno)
        elif key == "max_paths":
            exp_kw["max_paths"] = _to_int(value, path, lineno)
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")

    try:
        pulse = PulseShape(pulse_kind, pulse_beta if pulse_kind is PulseKind.RRC else 0.0)
        window = WindowShape(
            window_kind, window_beta if window_kind is WindowKind.RRC else 0.0
        )
        frame = otfs.FrameConfig(pulse=pulse, window=window, **frame_kw)
        return ExperimentConfig(frame=frame, **exp_kw)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def parse_scene(path: str) -> chan.ChannelScene:
    """Read a scene file: ``path = alpha_re alpha_im t_d f_d`` lines plus
    optional ``noise_sigma`` and ``seed`` keys."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    paths = []
    noise_sigma = 0.0
    seed = 0
    for lineno, key, value in _parse_kv_lines(text, path):
        if key == "path":
            parts = value.split()
            if len(parts) != 4:
                raise ConfigError(
                    f"{path}:{lineno}: path needs 'alpha_re alpha_im t_d f_d'"
                )
            re_, im_, td, fd = (_to_float(v, path, lineno) for v in parts)
            paths.append(chan.PathParams(complex(re_, im_), td, fd))
        elif key == "noise_sigma":
            noise_sigma = _to_float(value, path, lineno)
        elif key == "seed":
            seed = _to_int(value, path, lineno)
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    if not paths:
        raise ConfigError(f"{path}: scene has no paths")
    return chan.ChannelScene(tuple(paths), noise_sigma=noise_sigma, seed=seed)


def _write_meta(out_path: str, cfg: ExperimentConfig, schema: str, extra: dict | None = None):
    frame = cfg.frame
    meta = {
        "schema": schema,
        "n": frame.n_doppler,
        "m": frame.m_delay,
        "u": frame.blocks_per_pri,
        "oversampling": frame.oversampling,
        "sample_period": frame.sample_period,
        "pulse": frame.pulse.kind.value,
        "pulse_beta": frame.pulse.beta,
        "window": frame.window.kind.value,
        "window_beta": frame.window.beta,
        "n_sim": cfg.n_sim,
        "path_counts": list(cfg.path_counts),
        "models": [k.value for k in cfg.models],
        "input_mode": cfg.input_mode,
        "seed": cfg.seed,
        "noise_sigma": cfg.noise_sigma,
    }
    if extra:
        meta.update(extra)
    receiver._atomic_write(
        os.path.splitext(out_path)[0] + ".json",
        json.dumps(meta, sort_keys=True, indent=2) + "\n",
    )


# ---------------------------------------------------------------------------
# self test
# ---------------------------------------------------------------------------


def run_selftest(verbose: bool = True) -> bool:
    """Quick oracle checks used by the command-line ``selftest``."""
    from .waveforms import numeric_spectrum_autocorr, pulse_matched_autocorr, window_autocorr_rrc

    checks: list[tuple[str, bool]] = []

    nus = np.linspace(-1.0, 1.0, 401)
    worst = 0.0
    for beta in (0.1, 0.25, 0.5):
        closed = window_autocorr_rrc(nus, beta)
        oracle = np.array([numeric_spectrum_autocorr(v, beta) for v in nus])
        worst = max(worst, float(np.max(np.abs(closed - oracle))))
    checks.append((f"window autocorr closed form vs quadrature (max dev {worst:.2e})", worst <= 1e-6))

    ks = np.arange(1, 11)
    ok = True
    for shape in (
        PulseShape(PulseKind.RECT),
        PulseShape(PulseKind.SINC),
        PulseShape(PulseKind.RRC, 0.25),
    ):
        vals = np.abs(pulse_matched_autocorr(shape, ks))
        ok &= bool(np.all(vals < 1e-9)) and abs(pulse_matched_autocorr(shape, 0) - 1) < 1e-12
    checks.append(("pulse autocorrelations satisfy the integer-zero property", ok))

    delta = chan.circulant_discrepancy(3.0, 0.0, 32, PulseShape(PulseKind.RRC, 0.25), 1.0)
    checks.append(("circulant stand-in exact at zero doppler", float(np.max(np.abs(delta))) == 0.0))

    rng = np.random.default_rng(0)
    grid = otfs.DDGrid(8, 8, rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)))
    x = otfs.dd_to_td(grid)
    checks.append(
        (
            "time-domain conversion preserves energy",
            abs(np.linalg.norm(x) - np.linalg.norm(grid.symbols)) < 1e-12,
        )
    )

    all_ok = all(ok for _, ok in checks)
    if verbose:
        for name, ok in checks:
            print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return all_ok
