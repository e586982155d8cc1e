"""Spontaneous rates, two-photon states, Schmidt metrics, contrast sweep."""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np
import pytest

from braggsim import fwm, model, quantum
from braggsim.constants import HBAR

REF = model.GratingSpec(period=320e-9, duty_cycle=0.5, n_periods=2000,
                        n_lo=2.414, delta_n=3.4985e-3)
SMALL = replace(REF, n_periods=240)
PARAMS = model.NonlinearParams(gamma=200.0, coupled_pump_power=1.29e-3,
                               coupled_signal_power=1.23e-3)
PULSE = model.PumpPulse(model.PulseShape.TOPHAT, 1e-9, 1e-3, REF.bragg_wavelength)
SIGNAL_WIN = model.CollectionWindow(center_wavelength=1560.05e-9,
                                    width=2 * math.pi * 1e10)
IDLER_WIN = model.CollectionWindow(
    center_wavelength=fwm.idler_wavelength(REF.bragg_wavelength, 1560.05e-9),
    width=2 * math.pi * 1e10)

RING = model.RingSpec(radius=15e-6, lambda_p=1534.55e-9, lambda_s=1544.27e-9,
                      lambda_i=1524.94e-9, quality_factor=40000.0)
RING_PULSE = model.PumpPulse(model.PulseShape.GAUSSIAN, 23.334e-12, 1e-3,
                             1534.55e-9)


def small_state(n_points=41, gamma=200.0):
    params = model.NonlinearParams(gamma=gamma, coupled_pump_power=1.29e-3,
                                   coupled_signal_power=1.23e-3)
    return quantum.two_photon_state_bw(SMALL, params, PULSE, SIGNAL_WIN,
                                       IDLER_WIN, n_points=n_points)


# --------------------------------------------------------------------------
# stimulated-to-spontaneous conversion


class TestSpontFromStim:
    def test_unit_conversion_ratio(self):
        # with P_stim/P_s = 1, lambda_i = 1560 nm and a 2pi x 10 GHz window
        # the spontaneous power is pinned by constants alone
        spec = model.GratingSpec(period=320e-9, duty_cycle=0.5, n_periods=5000,
                                 n_lo=2.414, delta_n=0.0)
        w_p = model.omega_from_wavelength(1546.08e-9)
        w_s = model.omega_from_wavelength(
            fwm.idler_wavelength(1546.08e-9, 1560.0e-9))
        stim = fwm.stimulated_idler(spec, PARAMS, w_p, w_s)
        assert stim.overlap.omega_i == pytest.approx(
            model.omega_from_wavelength(1560.0e-9), rel=1e-12)
        window = model.CollectionWindow(1560.0e-9, 2 * math.pi * 1e10)
        sp = quantum.spont_from_stim(stim, stim.idler_power, window)
        assert sp.spont_power == pytest.approx(8.0008e-9, rel=5e-4)
        assert sp.rate == pytest.approx(window.width, rel=1e-12)

    def test_rate_identity(self):
        stim = fwm.stimulated_idler(REF, PARAMS,
                                    model.omega_from_wavelength(REF.bragg_wavelength),
                                    model.omega_from_wavelength(1560.05e-9))
        sp = quantum.spont_from_stim(stim, PARAMS.coupled_signal_power, SIGNAL_WIN)
        assert sp.rate == pytest.approx(
            SIGNAL_WIN.width * stim.idler_power / PARAMS.coupled_signal_power,
            rel=1e-12)
        assert sp.bandwidth == SIGNAL_WIN.width
        # the normalized rates inherit the stimulated-to-spontaneous scale
        assert sp.rate_per_mw2 / stim.rate_per_mw2 == pytest.approx(
            sp.rate / stim.idler_rate, rel=1e-12)

    def test_rejects_nonpositive_signal_power(self):
        stim = fwm.stimulated_idler(REF, PARAMS,
                                    model.omega_from_wavelength(REF.bragg_wavelength),
                                    model.omega_from_wavelength(1560.05e-9))
        with pytest.raises(model.InvalidArgument):
            quantum.spont_from_stim(stim, 0.0, SIGNAL_WIN)


# --------------------------------------------------------------------------
# waveguide two-photon state


class TestWaveguideState:
    def test_jsd_normalization(self):
        st = small_state()
        total = np.sum(st.jsd) * st.signal_grid.spacing * st.idler_grid.spacing
        assert total == pytest.approx(1.0, abs=1e-9)
        assert st.amplitude is not None and not st.is_zero

    def test_amplitude_matches_envelope_times_overlap(self):
        # public-surface check of the tabulated amplitude against the
        # elementwise overlap evaluator
        st = small_state(n_points=21)
        w1 = st.signal_grid.points
        w2 = st.idler_grid.points
        pp = (w1[:, None] + w2[None, :]) / 2.0
        j = fwm.overlap_elements(SMALL, pp.ravel(),
                                 np.broadcast_to(w1[:, None], pp.shape).ravel(),
                                 np.broadcast_to(w2[None, :], pp.shape).ravel())
        g = PULSE.envelope_squared_spectrum(w1[:, None] + w2[None, :]
                                            - 2 * PULSE.center_omega)
        phi = (math.sqrt(2 * math.pi) * 200.0 * HBAR * PULSE.center_omega
               * g * j.reshape(pp.shape))
        np.testing.assert_allclose(st.amplitude, phi, rtol=1e-9)

    def test_cw_limit_rate_identity(self):
        # a pulse much longer than the inverse collection bandwidth gives
        # beta_sq = width * duration * (gamma P0 |J|)^2; the finite windows
        # truncate the sinc side lobes of the pump convolution, so the exact
        # value sits a few percent below that product
        st = small_state(81)
        w_p = model.omega_from_wavelength(SMALL.bragg_wavelength)
        w_s = SIGNAL_WIN.center_omega
        j = fwm.overlap_integral(SMALL, w_p, w_s).magnitude
        expected = SIGNAL_WIN.width * PULSE.duration \
            * (200.0 * PULSE.peak_power * j) ** 2
        assert 0.90 < st.beta_sq / expected < 1.0

    def test_grid_refinement_stability(self):
        b41 = small_state(41).beta_sq
        b81 = small_state(81).beta_sq
        assert abs(b81 - b41) / b81 < 0.02

    def test_anti_diagonal_ridge(self):
        st = small_state(81)
        assert quantum.ridge_width_ratio(st) < 0.2

    def test_zero_gamma_gives_zero_state(self):
        st = small_state(n_points=11, gamma=0.0)
        assert st.is_zero and st.beta_sq == 0.0
        assert not np.any(st.jsd)
        with pytest.raises(model.InvalidArgument):
            quantum.schmidt_analysis(st)
        with pytest.raises(model.InvalidArgument):
            quantum.ridge_width_ratio(st)
        with pytest.raises(model.InvalidArgument):
            quantum.principal_axis_ratio(st)

    def test_pair_probability_limit(self):
        with pytest.raises(model.InvalidArgument, match="first-order"):
            small_state(n_points=11, gamma=2e5)

    def test_windows_must_straddle_the_stripe(self):
        far = model.CollectionWindow(1565.0e-9, 2 * math.pi * 1e10)
        with pytest.raises(model.InvalidArgument, match="stripe"):
            quantum.two_photon_state_bw(SMALL, PARAMS, PULSE, SIGNAL_WIN, far,
                                        n_points=11)

    def test_window_on_the_pump_line_rejected(self):
        on_pump = model.CollectionWindow(REF.bragg_wavelength, 2 * math.pi * 1e10)
        with pytest.raises(model.InvalidArgument, match="pump"):
            quantum.two_photon_state_bw(SMALL, PARAMS, PULSE, on_pump, on_pump,
                                        n_points=11)

    def test_short_pulse_warns(self):
        short = model.PumpPulse(model.PulseShape.TOPHAT, 1e-11, 1e-3,
                                REF.bragg_wavelength)
        with pytest.warns(UserWarning, match="long-pulse"):
            quantum.two_photon_state_bw(SMALL, PARAMS, short, SIGNAL_WIN,
                                        IDLER_WIN, n_points=11)


# --------------------------------------------------------------------------
# microring two-photon state


class TestRingState:
    def test_reference_values(self, ring_state):
        # frozen regression at the default 201-point grids
        assert ring_state.beta_sq == pytest.approx(7.43717459e-4, rel=1e-6)
        rep = quantum.schmidt_analysis(ring_state)
        assert rep.amplitude_based
        assert rep.purity == pytest.approx(0.87639, abs=5e-4)
        assert quantum.principal_axis_ratio(ring_state) == pytest.approx(
            1.8137, abs=5e-3)

    def test_grids_track_the_resonances(self, ring_state):
        w_s0 = RING.resonance_omega("signal")
        g_s = RING.linewidth("signal")
        pts = ring_state.signal_grid.points
        assert pts[0] == pytest.approx(w_s0 - 6 * g_s, rel=1e-12)
        assert pts[-1] == pytest.approx(w_s0 + 6 * g_s, rel=1e-12)

    def test_pair_probability_grows_with_pulse_duration(self):
        betas = []
        for scale in (0.7, 1.0, 1.3):
            pulse = model.PumpPulse(model.PulseShape.GAUSSIAN,
                                    scale * 23.334e-12, 1e-3, 1534.55e-9)
            betas.append(quantum.two_photon_state_ring(
                RING, PARAMS, pulse, n_points=101).beta_sq)
        assert betas[0] < betas[1] < betas[2]

    def test_purity_falls_with_pulse_duration(self):
        purities = []
        for scale in (0.7, 1.3):
            pulse = model.PumpPulse(model.PulseShape.GAUSSIAN,
                                    scale * 23.334e-12, 1e-3, 1534.55e-9)
            st = quantum.two_photon_state_ring(RING, PARAMS, pulse, n_points=101)
            purities.append(quantum.schmidt_analysis(st).purity)
        assert purities[0] > purities[1]

    def test_narrow_resonances_factorize_the_state(self):
        # with an exactly energy-matched triplet, raising Q narrows the
        # Lorentzians against the fixed pump bandwidth and the state
        # approaches a product state
        lam_i = 1.0 / (2.0 / 1534.55e-9 - 1.0 / 1544.27e-9)
        matched = model.RingSpec(radius=15e-6, lambda_p=1534.55e-9,
                                 lambda_s=1544.27e-9, lambda_i=lam_i,
                                 quality_factor=40000.0)
        sharp = model.RingSpec(radius=15e-6, lambda_p=1534.55e-9,
                               lambda_s=1544.27e-9, lambda_i=lam_i,
                               quality_factor=640000.0)
        p_base = quantum.schmidt_analysis(quantum.two_photon_state_ring(
            matched, PARAMS, RING_PULSE, n_points=101)).purity
        p_sharp = quantum.schmidt_analysis(quantum.two_photon_state_ring(
            sharp, PARAMS, RING_PULSE, n_points=101)).purity
        assert p_sharp > p_base
        assert p_sharp > 0.90

    def test_energy_violating_triplet_warns(self):
        off = model.RingSpec(radius=15e-6, lambda_p=1534.55e-9,
                             lambda_s=1544.27e-9, lambda_i=1525.44e-9,
                             quality_factor=40000.0)
        zero = model.NonlinearParams(gamma=0.0, coupled_pump_power=1e-3,
                                     coupled_signal_power=1e-3)
        with pytest.warns(UserWarning, match="energy conservation"):
            quantum.two_photon_state_ring(off, zero, RING_PULSE, n_points=11)


# --------------------------------------------------------------------------
# Schmidt decomposition on synthetic states


def _state_from_amplitude(amp, grid1, grid2):
    power = np.abs(amp) ** 2
    total = float(np.sum(power)) * grid1.spacing * grid2.spacing
    return quantum.TwoPhotonState(
        beta_sq=1e-6, jsd=power / total, signal_grid=grid1, idler_grid=grid2,
        amplitude=amp)


def _grids(n1=24, n2=24):
    g1 = model.grid_around_omega(1.207e15, 8e10, n1)
    g2 = model.grid_around_omega(1.230e15, 8e10, n2)
    return g1, g2


def test_schmidt_rank_one_state():
    rng = np.random.default_rng(7)
    g1, g2 = _grids()
    a = rng.normal(size=24) + 1j * rng.normal(size=24)
    b = rng.normal(size=24) + 1j * rng.normal(size=24)
    rep = quantum.schmidt_analysis(_state_from_amplitude(np.outer(a, b), g1, g2))
    assert rep.amplitude_based
    assert rep.purity == pytest.approx(1.0, abs=1e-9)
    assert rep.schmidt_number == pytest.approx(1.0, abs=1e-9)
    assert rep.schmidt_coefficients[0] == pytest.approx(1.0, abs=1e-9)


def test_schmidt_two_mode_state():
    n = 30
    g1, g2 = _grids(n, n)
    i = np.arange(n)
    u1 = math.sqrt(2 / (n + 1)) * np.sin(math.pi * 1 * (i + 1) / (n + 1))
    u2 = math.sqrt(2 / (n + 1)) * np.sin(math.pi * 2 * (i + 1) / (n + 1))
    amp = math.sqrt(0.8) * np.outer(u1, u1) + math.sqrt(0.2) * np.outer(u2, u2)
    rep = quantum.schmidt_analysis(_state_from_amplitude(amp, g1, g2))
    np.testing.assert_allclose(rep.schmidt_coefficients[:2],
                               [math.sqrt(0.8), math.sqrt(0.2)], rtol=1e-9)
    assert rep.purity == pytest.approx(0.68, abs=1e-9)
    assert rep.schmidt_number == pytest.approx(1 / 0.68, rel=1e-9)


def test_schmidt_exchange_invariance():
    rng = np.random.default_rng(11)
    g1, g2 = _grids(18, 18)
    amp = rng.normal(size=(18, 18)) + 1j * rng.normal(size=(18, 18))
    a = quantum.schmidt_analysis(_state_from_amplitude(amp, g1, g2))
    b = quantum.schmidt_analysis(_state_from_amplitude(amp.T.copy(), g2, g1))
    assert a.purity == pytest.approx(b.purity, rel=1e-12)


def test_schmidt_density_only_fallback():
    g1, g2 = _grids()
    p = np.abs(np.outer(np.hanning(24) + 0.1, np.hanning(24) + 0.1))
    total = float(np.sum(p)) * g1.spacing * g2.spacing
    st = quantum.TwoPhotonState(beta_sq=1e-6, jsd=p / total,
                                signal_grid=g1, idler_grid=g2)
    rep = quantum.schmidt_analysis(st)
    assert not rep.amplitude_based
    # the sqrt of a separable density is still separable
    assert rep.purity == pytest.approx(1.0, abs=1e-9)


# --------------------------------------------------------------------------
# density-shape metrics on synthetic ridges


def _gaussian_ridge_state(sigma_u, sigma_v, n=121):
    g1, g2 = _grids(n, n)
    d1 = g1.points - g1.points[(n - 1) // 2]
    d2 = g2.points - g2.points[(n - 1) // 2]
    u = (d1[:, None] + d2[None, :]) / math.sqrt(2)
    v = (d1[:, None] - d2[None, :]) / math.sqrt(2)
    p = np.exp(-u ** 2 / (2 * sigma_u ** 2) - v ** 2 / (2 * sigma_v ** 2))
    total = float(np.sum(p)) * g1.spacing * g2.spacing
    return quantum.TwoPhotonState(beta_sq=1e-6, jsd=p / total,
                                  signal_grid=g1, idler_grid=g2)


def test_ridge_width_ratio_recovers_aspect():
    # ridge FWHM must span enough histogram bins to avoid binning bias
    w = 8e10
    st = _gaussian_ridge_state(w / 20, w / 5)
    assert quantum.ridge_width_ratio(st) == pytest.approx(0.25, rel=0.12)
    round_st = _gaussian_ridge_state(w / 12, w / 12)
    assert quantum.ridge_width_ratio(round_st) == pytest.approx(1.0, rel=0.1)


def test_principal_axis_ratio_recovers_aspect():
    w = 8e10
    st = _gaussian_ridge_state(w / 50, w / 10)
    assert quantum.principal_axis_ratio(st) == pytest.approx(5.0, rel=0.05)
    round_st = _gaussian_ridge_state(w / 12, w / 12)
    assert quantum.principal_axis_ratio(round_st) == pytest.approx(1.0, rel=0.02)
    assert quantum.principal_axis_ratio(st) >= 1.0


# --------------------------------------------------------------------------
# index-contrast sweep


class TestContrastSweep:
    def test_inverse_square_law(self):
        rep = quantum.contrast_sweep(REF, 12.0, [2e-3, 4e-3, 8e-3], PARAMS,
                                     PULSE, SIGNAL_WIN)
        assert not rep.single_point
        assert rep.slope == pytest.approx(-2.0, abs=0.05)
        periods = rep.sweep.column("n_periods")
        assert np.all(np.diff(periods) < 0)
        rates = rep.sweep.column("pair_rate_per_s")
        assert np.all(np.diff(rates) < 0)

    def test_single_point(self):
        rep = quantum.contrast_sweep(REF, 12.0, [3e-3], PARAMS, PULSE,
                                     SIGNAL_WIN)
        assert rep.single_point and rep.slope is None
        assert rep.sweep.x.size == 1

    def test_contrast_domain(self):
        with pytest.raises(model.InvalidArgument):
            quantum.contrast_sweep(REF, 12.0, [2e-4], PARAMS, PULSE, SIGNAL_WIN)
        with pytest.raises(model.InvalidArgument):
            quantum.contrast_sweep(REF, 12.0, [2e-2], PARAMS, PULSE, SIGNAL_WIN)
