"""Windowed OTFS pulse-radar simulation and delay-Doppler estimation toolkit."""

from .channel import (
    MAX_PATHS,
    ChannelScene,
    PathParams,
    add_awgn,
    apply_continuous_channel,
    apply_discrete_channel,
    channel_matrix,
    circulant_discrepancy,
    fractional_shift,
    validate_scene,
)
from .estimator import (
    Candidate,
    FractionalFit,
    InterpKind,
    InterpolationModel,
    PathEstimate,
    coarse_estimate,
    fractional_estimate,
    model_ambiguity,
    objective,
    rmse,
)
from .harness import (
    ExperimentConfig,
    export_ambiguity_maps,
    parse_config,
    parse_scene,
    run_estimate,
    run_montecarlo,
    run_selftest,
    sweep_eps_f,
)
from .otfs import (
    BasebandSignal,
    DDGrid,
    DiscreteSeries,
    FrameConfig,
    apply_window,
    assemble_frame,
    basis_waveform,
    dd_to_td,
    orthonormality_gram,
    pilot_grid,
    synthesize,
)
from .receiver import (
    AmbiguitySurface,
    cross_ambiguity,
    export_surface,
    fine_ambiguity,
    matched_filter_sample,
)
from .waveforms import (
    PulseKind,
    PulseShape,
    WindowKind,
    WindowShape,
    numeric_spectrum_autocorr,
    pulse_matched_autocorr,
    pulse_value,
    raised_cosine_spectrum,
    window_autocorr_linear,
    window_autocorr_rrc,
    window_samples,
)

__version__ = "0.1.0"
