import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from otfs_radar import (
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

RRC_PULSE = PulseShape(PulseKind.RRC, 0.25)


class TestRaisedCosineSpectrum:
    def test_flat_region(self):
        assert raised_cosine_spectrum(0.0, 0.25) == 1.0

    def test_outer_band_edge(self):
        assert raised_cosine_spectrum((1 + 0.25) / 2, 0.25) == 0.0

    def test_half_power_point(self):
        assert raised_cosine_spectrum(0.5, 0.25) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("beta", [0.0, -0.1, 1.5])
    def test_rolloff_domain(self, beta):
        with pytest.raises(ValueError):
            raised_cosine_spectrum(0.3, beta)

    @given(st.floats(-2, 2), st.floats(0.01, 1.0))
    def test_even(self, x, beta):
        assert raised_cosine_spectrum(x, beta) == raised_cosine_spectrum(-x, beta)

    def test_continuity_at_branch_edges(self):
        beta = 0.25
        for edge in ((1 - beta) / 2, (1 + beta) / 2):
            lo = raised_cosine_spectrum(edge - 1e-12, beta)
            hi = raised_cosine_spectrum(edge + 1e-12, beta)
            assert abs(lo - hi) < 1e-9


class TestPulseValue:
    def test_sinc_center(self):
        assert pulse_value(PulseShape(PulseKind.SINC), 0.0) == 1.0

    @pytest.mark.parametrize("k", [1, -1, 2, 5, -7])
    def test_sinc_zeros(self, k):
        assert pulse_value(PulseShape(PulseKind.SINC), k) == pytest.approx(0.0, abs=1e-15)

    def test_rect_convention(self):
        shape = PulseShape(PulseKind.RECT)
        assert pulse_value(shape, 0.3) == 1.0
        assert pulse_value(shape, 0.5) == 0.5
        assert pulse_value(shape, -0.5) == 0.5
        assert pulse_value(shape, 0.7) == 0.0

    def test_rrc_pole_matches_neighbor_limit(self):
        # one-sided neighbor averages with Richardson extrapolation give the
        # removable-singularity limit; the closed form must agree
        t0 = 1.0 / (4 * 0.25)

        def avg(h):
            return 0.5 * (pulse_value(RRC_PULSE, t0 + h) + pulse_value(RRC_PULSE, t0 - h))

        limit = (4 * avg(1e-4) - avg(2e-4)) / 3
        assert pulse_value(RRC_PULSE, t0) == pytest.approx(limit, abs=1e-9)

    def test_rrc_center_value(self):
        beta = 0.25
        assert pulse_value(RRC_PULSE, 0.0) == pytest.approx(1 - beta + 4 * beta / np.pi)


class TestPulseMatchedAutocorr:
    def test_rect_peak(self):
        assert pulse_matched_autocorr(PulseShape(PulseKind.RECT), 0.0) == 1.0

    @pytest.mark.parametrize("tau", [1.0, -1.0])
    def test_rect_support_edge(self, tau):
        assert pulse_matched_autocorr(PulseShape(PulseKind.RECT), tau) == 0.0

    def test_rrc_against_convolution_oracle(self):
        # trapezoidal convolution of the impulse response with its reverse
        tau = 0.5
        h = 1.0 / 256.0
        t = np.arange(-40.0, 40.0 + tau + h, h)
        oracle = np.trapezoid(
            pulse_value(RRC_PULSE, t) * pulse_value(RRC_PULSE, t - tau), t
        )
        assert pulse_matched_autocorr(RRC_PULSE, tau) == pytest.approx(
            float(oracle), abs=1e-6
        )

    @pytest.mark.parametrize(
        "shape",
        [PulseShape(PulseKind.RECT), PulseShape(PulseKind.SINC), RRC_PULSE],
    )
    def test_nyquist_property(self, shape):
        ks = np.arange(1, 11)
        assert np.all(np.abs(pulse_matched_autocorr(shape, ks)) < 1e-9)
        assert np.all(np.abs(pulse_matched_autocorr(shape, -ks)) < 1e-9)
        assert pulse_matched_autocorr(shape, 0) == pytest.approx(1.0, abs=1e-12)

    @given(st.floats(-3, 3))
    def test_even(self, tau):
        for shape in (PulseShape(PulseKind.RECT), PulseShape(PulseKind.SINC), RRC_PULSE):
            assert pulse_matched_autocorr(shape, tau) == pulse_matched_autocorr(shape, -tau)


class TestWindowSamples:
    def test_rect_is_all_ones(self):
        w = window_samples(WindowShape(WindowKind.RECT), 8, 8)
        assert w.shape == (64,)
        assert np.all(w == 1.0)

    def test_rrc_frame_budget_length(self):
        w = window_samples(WindowShape(WindowKind.RRC, 0.25), 8, 8)
        assert len(w) == int(np.floor(1.25 * 64)) == 80

    def test_rrc_peak_exceeds_one(self):
        w = window_samples(WindowShape(WindowKind.RRC, 0.25), 8, 8)
        assert w.max() > 1.0

    def test_frame_budget_truncation_stays_positive(self):
        # the impulse response first crosses zero outside the frame-budget
        # support (near x = 0.94 of the symbol period at 25% roll-off), so
        # the truncated samples stay positive for all roll-offs
        w = window_samples(WindowShape(WindowKind.RRC, 0.25), 8, 8)
        assert w.min() > 0.0

    def test_negative_values_with_extended_support(self):
        w = window_samples(WindowShape(WindowKind.RRC, 0.25), 8, 8, extent=2.5)
        assert w.min() < 0.0


class TestWindowAutocorrLinear:
    @pytest.mark.parametrize("nu,expected", [(0.0, 1.0), (1.0, 0.0), (0.5, 0.5)])
    def test_triangle(self, nu, expected):
        assert window_autocorr_linear(nu) == expected


class TestWindowAutocorrRrc:
    def test_outer_boundary(self):
        assert window_autocorr_rrc(1.0, 0.25) == pytest.approx(0.0, abs=1e-12)

    def test_peak_value(self):
        assert window_autocorr_rrc(0.0, 0.25) == pytest.approx(0.8, abs=1e-12)
        assert numeric_spectrum_autocorr(0.0, 0.25) == pytest.approx(0.8, abs=1e-6)

    def test_point_against_oracle(self):
        assert window_autocorr_rrc(0.4, 0.25) == pytest.approx(
            numeric_spectrum_autocorr(0.4, 0.25), abs=1e-6
        )

    @pytest.mark.parametrize("beta", [0.1, 0.25, 0.5])
    def test_closed_form_tracks_oracle(self, beta):
        nus = np.linspace(-1.0, 1.0, 2001)
        closed = window_autocorr_rrc(nus, beta)
        oracle = np.array([numeric_spectrum_autocorr(v, beta) for v in nus])
        assert np.max(np.abs(closed - oracle)) <= 1e-6

    def test_branch_continuity(self):
        beta = 0.25
        a = (1 - beta) / (2 * (1 + beta))
        for edge in (-a + 0.5, 2 * a, a + 0.5, 1.0):
            lo = window_autocorr_rrc(edge - 1e-12, beta)
            hi = window_autocorr_rrc(edge + 1e-12, beta)
            assert abs(lo - hi) < 1e-9

    @given(st.floats(-1.5, 1.5), st.floats(0.05, 0.95))
    @settings(max_examples=60)
    def test_even(self, nu, beta):
        assert window_autocorr_rrc(nu, beta) == window_autocorr_rrc(-nu, beta)

    @pytest.mark.parametrize("fn", [window_autocorr_linear, lambda v: window_autocorr_rrc(v, 0.25)])
    def test_peak_at_zero_and_non_increasing(self, fn):
        grid = np.arange(0.0, 1.0 + 1e-12, 0.001)
        vals = np.array([fn(v) for v in grid])
        assert vals[0] == max(vals)
        assert np.all(np.diff(vals) <= 1e-12)

    def test_rolloff_domain(self):
        with pytest.raises(ValueError):
            window_autocorr_rrc(0.3, 1.0)


class TestNumericSpectrumAutocorr:
    def test_disjoint_supports(self):
        assert numeric_spectrum_autocorr(1.5, 0.25) == 0.0

    def test_symmetric(self):
        assert numeric_spectrum_autocorr(0.3, 0.25) == pytest.approx(
            numeric_spectrum_autocorr(-0.3, 0.25), abs=1e-12
        )


class TestShapeValidation:
    def test_rrc_pulse_needs_rolloff(self):
        with pytest.raises(ValueError):
            PulseShape(PulseKind.RRC, 0.0)

    def test_rrc_window_needs_rolloff(self):
        with pytest.raises(ValueError):
            WindowShape(WindowKind.RRC, 1.5)

    def test_rect_window_rolloff_is_zero(self):
        assert WindowShape(WindowKind.RECT).rolloff == 0.0
