import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from otfs_radar import (
    DDGrid,
    FrameConfig,
    PulseKind,
    PulseShape,
    WindowKind,
    WindowShape,
    apply_window,
    assemble_frame,
    basis_waveform,
    dd_to_td,
    orthonormality_gram,
    pilot_grid,
    synthesize,
)

complex_grids = hnp.arrays(
    np.complex128,
    (4, 4),
    elements=st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
)


class TestPilotGrid:
    def test_single_impulse(self):
        g = pilot_grid(8, 8)
        assert g.symbols[0, 0] == 1.0
        assert np.count_nonzero(g.symbols) == 1

    def test_degenerate_size(self):
        assert pilot_grid(1, 1).symbols.tolist() == [[1.0]]

    def test_unit_energy(self):
        assert np.sum(np.abs(pilot_grid(8, 8).symbols) ** 2) == 1.0

    def test_bad_dims(self):
        with pytest.raises(ValueError):
            DDGrid(0, 4, np.zeros((0, 4)))


class TestDDToTD:
    def test_pilot_expansion(self):
        x = dd_to_td(pilot_grid(8, 8))
        expected = np.zeros(64, dtype=complex)
        expected[::8] = 1 / np.sqrt(8)
        np.testing.assert_allclose(x, expected, atol=1e-15)

    def test_single_tone(self):
        sym = np.zeros((8, 8), dtype=complex)
        sym[1, 2] = 1.0
        x = dd_to_td(DDGrid(8, 8, sym))
        n = np.arange(8)
        np.testing.assert_allclose(
            x[8 * n + 2], np.exp(2j * np.pi * n / 8) / np.sqrt(8), atol=1e-14
        )
        mask = np.ones(64, dtype=bool)
        mask[8 * n + 2] = False
        assert np.max(np.abs(x[mask])) < 1e-15

    @given(complex_grids)
    @settings(max_examples=40, deadline=None)
    def test_energy_preserving(self, sym):
        x = dd_to_td(DDGrid(4, 4, sym))
        assert np.linalg.norm(x) == pytest.approx(np.linalg.norm(sym), abs=1e-12)

    def test_inverse_recovers_grid(self):
        rng = np.random.default_rng(1)
        sym = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        x = dd_to_td(DDGrid(8, 8, sym))
        back = np.fft.fft(x.reshape(8, 8), axis=0) / np.sqrt(8)
        np.testing.assert_allclose(back, sym, atol=1e-12)


class TestApplyWindow:
    def test_rect_window_identity(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        out = apply_window(x, WindowShape(WindowKind.RECT), 8, 8)
        np.testing.assert_array_equal(out, x)

    def test_rrc_window_length(self):
        x = dd_to_td(pilot_grid(8, 8))
        out = apply_window(x, WindowShape(WindowKind.RRC, 0.25), 8, 8)
        assert len(out) == 80

    def test_zero_in_zero_out(self):
        out = apply_window(np.zeros(64), WindowShape(WindowKind.RRC, 0.25), 8, 8)
        assert np.all(out == 0)

    def test_periodic_extension(self):
        from otfs_radar import window_samples

        window = WindowShape(WindowKind.RRC, 0.25)
        x = np.arange(1, 65, dtype=complex)
        out = apply_window(x, window, 8, 8)
        w = window_samples(window, 8, 8)
        pad = (len(w) - 64) // 2
        expected = w * x[(np.arange(len(w)) - pad) % 64]
        np.testing.assert_allclose(out, expected, atol=1e-15)


class TestSynthesize:
    def test_single_rect_pulse(self):
        cfg = FrameConfig(pulse=PulseShape(PulseKind.RECT), window=WindowShape(WindowKind.RECT))
        x = np.zeros(64, dtype=complex)
        x[0] = 1.0
        s = synthesize(x, cfg)
        t = s.times()
        inside = np.abs(t) < 0.5 * cfg.sample_period
        np.testing.assert_allclose(s.samples[inside], 1.0, atol=1e-12)
        outside = np.abs(t) > 0.5 * cfg.sample_period
        np.testing.assert_allclose(s.samples[outside], 0.0, atol=1e-12)

    def test_energy_matches_sequence_norm(self):
        # tail truncation dominates at the default cutoff; extend it so the
        # quadrature itself is what gets checked
        cfg = FrameConfig(pulse=PulseShape(PulseKind.SINC), window=WindowShape(WindowKind.RECT))
        rng = np.random.default_rng(3)
        x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        s = synthesize(x, cfg, tail_cutoff=128.0)
        expected = np.sum(np.abs(x) ** 2) * cfg.sample_period
        assert s.energy() == pytest.approx(expected, rel=1e-3)

    def test_pilot_rect_staircase(self):
        cfg = FrameConfig(pulse=PulseShape(PulseKind.RECT), window=WindowShape(WindowKind.RECT))
        x = dd_to_td(pilot_grid(8, 8))
        s = synthesize(x, cfg)
        # non-overlapping rect pulses reproduce the sequence as levels
        for l in (0, 8, 16):
            idx = int(round((l * cfg.sample_period - s.t0) / s.dt))
            assert s.samples[idx] == pytest.approx(x[l], abs=1e-12)

    def test_linearity(self):
        cfg = FrameConfig(pulse=PulseShape(PulseKind.RRC, 0.25), window=WindowShape(WindowKind.RECT))
        rng = np.random.default_rng(4)
        x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        y = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        a, b = 2.0 - 1j, 0.3 + 0.7j
        lhs = synthesize(a * x + b * y, cfg).samples
        rhs = a * synthesize(x, cfg).samples + b * synthesize(y, cfg).samples
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestBasisWaveform:
    def test_pilot_matches_synthesis_chain(self):
        cfg = FrameConfig(pulse=PulseShape(PulseKind.RECT), window=WindowShape(WindowKind.RRC, 0.25))
        h00 = basis_waveform(0, 0, cfg)
        chain = synthesize(
            apply_window(dd_to_td(pilot_grid(8, 8)), cfg.window, 8, 8), cfg
        )
        np.testing.assert_allclose(h00.samples, chain.samples, atol=1e-12)
        assert h00.t0 == chain.t0

    def test_expansion_matches_synthesis_chain(self):
        # weighting every basis waveform by its symbol reproduces the
        # windowed synthesis of the whole grid
        cfg = FrameConfig(
            n_doppler=4,
            m_delay=4,
            pulse=PulseShape(PulseKind.SINC),
            window=WindowShape(WindowKind.RRC, 0.25),
        )
        rng = np.random.default_rng(5)
        sym = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        acc = None
        for k in range(4):
            for l in range(4):
                h = basis_waveform(k, l, cfg)
                acc = sym[k, l] * h.samples if acc is None else acc + sym[k, l] * h.samples
        chain = synthesize(
            apply_window(dd_to_td(DDGrid(4, 4, sym)), cfg.window, 4, 4), cfg
        )
        np.testing.assert_allclose(acc, chain.samples, atol=1e-9)

    def test_unit_energy_sinc_rect(self):
        cfg = FrameConfig(oversampling=16, pulse=PulseShape(PulseKind.SINC), window=WindowShape(WindowKind.RECT))
        h = basis_waveform(3, 5, cfg, tail_cutoff=512.0)
        energy = float(np.sum(np.abs(h.samples) ** 2) * cfg.dt / cfg.sample_period)
        assert energy == pytest.approx(1.0, abs=2e-3)

    def test_rrc_window_support(self):
        cfg = FrameConfig(pulse=PulseShape(PulseKind.RECT), window=WindowShape(WindowKind.RRC, 0.25))
        h = basis_waveform(0, 0, cfg)
        assert h.duration == pytest.approx(
            1.25 * cfg.block_period + cfg.sample_period, rel=0.05
        )

    def test_index_bounds(self):
        cfg = FrameConfig()
        with pytest.raises(IndexError):
            basis_waveform(8, 0, cfg)
        with pytest.raises(IndexError):
            basis_waveform(0, 8, cfg)


class TestOrthonormalityGram:
    def test_hermitian(self):
        cfg = FrameConfig(
            n_doppler=4, m_delay=4, pulse=PulseShape(PulseKind.SINC), window=WindowShape(WindowKind.RECT)
        )
        subset = [(k, l) for k in range(4) for l in range(4)]
        g = orthonormality_gram(cfg, subset, tail_cutoff=64.0)
        np.testing.assert_allclose(g, g.conj().T, atol=1e-12)

    def test_sinc_rect_small_grid_identity(self):
        cfg = FrameConfig(
            n_doppler=4,
            m_delay=4,
            oversampling=16,
            pulse=PulseShape(PulseKind.SINC),
            window=WindowShape(WindowKind.RECT),
        )
        subset = [(k, l) for k in range(4) for l in range(4)]
        g = orthonormality_gram(cfg, subset, tail_cutoff=512.0)
        assert np.max(np.abs(g - np.eye(16))) < 2e-3

    def test_rrc_window_off_diagonal(self):
        # ideal-window theory: orthogonal family scaled by (1 + rolloff)
        cfg = FrameConfig(
            oversampling=16, pulse=PulseShape(PulseKind.SINC), window=WindowShape(WindowKind.RRC, 0.25)
        )
        subset = [(k, 3) for k in range(8)]
        g = orthonormality_gram(cfg, subset, extent=16.0, tail_cutoff=512.0)
        offdiag = np.abs(g - np.diag(np.diag(g)))
        assert offdiag.max() < 2e-3
        np.testing.assert_allclose(np.diag(g).real, 1.25, atol=5e-3)

    def test_rect_rect_off_diagonals_reported(self, capsys):
        cfg = FrameConfig(
            n_doppler=4, m_delay=4, pulse=PulseShape(PulseKind.RECT), window=WindowShape(WindowKind.RECT)
        )
        subset = [(k, l) for k in range(4) for l in range(4)]
        g = orthonormality_gram(cfg, subset)
        off = np.abs(g - np.diag(np.diag(g)))
        print(f"rect pulse + rect window: max off-diagonal |G| = {off.max():.3e}")
        assert g.shape == (16, 16)

    def test_empty_subset_rejected(self):
        with pytest.raises(ValueError):
            orthonormality_gram(FrameConfig(), [])


class TestAssembleFrame:
    def test_slot_count(self):
        cfg = FrameConfig()
        assert cfg.pri / cfg.sample_period == 384

    def test_silent_interval_zero(self):
        cfg = FrameConfig(pulse=PulseShape(PulseKind.RECT))
        x = apply_window(dd_to_td(pilot_grid(8, 8)), cfg.window, 8, 8)
        frame = assemble_frame(synthesize(x, cfg), cfg)
        t = frame.times()
        silent = t > 1.30 * cfg.block_period
        assert np.all(frame.samples[silent] == 0)

    def test_observation_window_bounds(self):
        cfg = FrameConfig()
        assert cfg.observation_window == (80, 304)

    def test_rejects_overly_long_signal(self):
        cfg = FrameConfig()
        from otfs_radar import BasebandSignal

        too_long = BasebandSignal(np.zeros(10_000), cfg.dt, 0.0)
        with pytest.raises(ValueError):
            assemble_frame(too_long, cfg)


class TestFrameConfig:
    def test_derived_periods(self):
        cfg = FrameConfig(sample_period=0.5)
        assert cfg.symbol_period == 4.0
        assert cfg.block_period == 32.0
        assert cfg.pri == 192.0

    def test_oversampling_power_of_two(self):
        with pytest.raises(ValueError):
            FrameConfig(oversampling=12)

    def test_needs_listen_interval(self):
        with pytest.raises(ValueError):
            FrameConfig(blocks_per_pri=1)
