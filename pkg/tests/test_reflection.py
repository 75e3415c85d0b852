import math

import numpy as np
import pytest

from brl.dynamics import SourceLaw
from brl.errors import WindowTooNarrow
from brl.lattice import LatticeConfig
from brl.params import ModelParams
from brl.reflection import (
    ReflectionScenario,
    ReflectionVerdict,
    SinusoidalWave,
    phase_matched_free_motion,
    reflected_field,
    resonance_check,
    resonant_incident,
    verify_rejection,
)

P = ModelParams(omega=1.0, gamma=0.25, gamma0=1.0, alpha0=1.0, alpha1=0.0, c=1.0, x0=0.0)


# --- scenario invariants ---------------------------------------------------------

def test_transient_requires_derivative_readout():
    with pytest.raises(ValueError):
        ReflectionScenario(incident=math.sin, const0=0.5, alpha01=1.0, params=P)


def test_alpha01_forced_by_annihilation():
    p = ModelParams(alpha0=0.6, alpha1=0.4)
    sc = ReflectionScenario.for_params(p, math.sin, const0=2.0)
    assert sc.alpha01 == pytest.approx(1.5)
    with pytest.raises(ValueError):
        ReflectionScenario(incident=math.sin, const0=2.0, alpha01=0.3, params=p)


def test_annihilation_identity():
    # (alpha0 + alpha1 d/dt)(const0 * exp(-(alpha0/alpha1) t)) = 0
    p = ModelParams(alpha0=0.7, alpha1=0.35)
    sc = ReflectionScenario.for_params(p, math.sin, const0=1.3)
    for t in (0.0, 0.5, 2.0, 7.7):
        value = sc.const0 * math.exp(-sc.alpha01 * t)
        derivative = -sc.alpha01 * value
        assert p.alpha0 * value + p.alpha1 * derivative == pytest.approx(0.0, abs=1e-12)


# --- reflected field branches ------------------------------------------------------

def incident_wave():
    return resonant_incident(P, amplitude=1.0)


def test_shadow_region_is_dark():
    sc = ReflectionScenario.for_params(P, incident_wave())
    for t, x in [(3.0, -1.0), (10.0, -4.0), (2.0, -0.5)]:
        assert t - abs(x - P.x0) / P.c >= 0.0
        assert reflected_field(sc, t, x) == 0.0


def test_source_point_continuity():
    p = ModelParams(omega=1.0, gamma=0.25, alpha0=0.5, alpha1=0.5, c=1.0, x0=0.3)
    sc = ReflectionScenario.for_params(p, resonant_incident(p, 1.0), const0=0.8)
    for t in (0.5, 2.0, 9.0):
        expected = sc.const0 * math.exp(-sc.alpha01 * t)
        assert reflected_field(sc, t, p.x0) == pytest.approx(expected, abs=1e-14)
        # approaching from both sides agrees (image term cancels the incident)
        eps = 1e-9
        assert reflected_field(sc, t, p.x0 - eps) == pytest.approx(expected, abs=1e-6)
        assert reflected_field(sc, t, p.x0 + eps) == pytest.approx(expected, abs=1e-6)


def test_ahead_of_wavefront_unchanged():
    sc = ReflectionScenario.for_params(P, incident_wave())
    wave = sc.incident
    for t, x in [(1.0, 5.0), (0.0, 2.0), (3.0, -8.0)]:
        assert t - abs(x - P.x0) / P.c < 0.0
        assert reflected_field(sc, t, x) == wave(t + x / P.c)


def test_mirror_identity_in_front_of_source():
    sc = ReflectionScenario.for_params(P, incident_wave())
    wave = sc.incident
    rng = np.random.default_rng(11)
    for _ in range(200):
        t = float(rng.uniform(0.0, 20.0))
        x = float(rng.uniform(P.x0, P.x0 + 0.99 * P.c * t)) if t > 0 else P.x0
        lhs = reflected_field(sc, t, x) + wave(t - x / P.c + 2 * P.x0 / P.c) - wave(t + x / P.c)
        assert lhs == pytest.approx(0.0, abs=1e-14)  # const0 = 0 scenario


def test_shadow_identity_random_samples():
    sc = ReflectionScenario.for_params(P, incident_wave())
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(10_000):
        t = float(rng.uniform(0.0, 30.0))
        x = float(rng.uniform(P.x0 - 25.0, P.x0))
        if t - abs(x - P.x0) / P.c >= 0.0:
            worst = max(worst, abs(reflected_field(sc, t, x)))
    assert worst == 0.0


# --- resonance condition --------------------------------------------------------------

def test_resonance_single_matching_line():
    assert resonance_check(P, [(P.omega, 1.0)]) is ReflectionVerdict.COMPLETE_REFLECTION


def test_resonance_extra_harmonic_spoils():
    spectrum = [(P.omega, 1.0), (2.0 * P.omega, 0.1)]
    assert resonance_check(P, spectrum) is ReflectionVerdict.NOT_COMPLETE


def test_resonance_detuned_line_spoils():
    assert resonance_check(P, [(0.999 * P.omega, 1.0)]) is ReflectionVerdict.NOT_COMPLETE


def test_resonance_allows_constant_offset_and_silent_lines():
    spectrum = [(0.0, 5.0), (P.omega, 1.0), (3.0 * P.omega, 0.0)]
    assert resonance_check(P, spectrum) is ReflectionVerdict.COMPLETE_REFLECTION


def test_resonance_empty_spectrum_not_complete():
    assert resonance_check(P, []) is ReflectionVerdict.NOT_COMPLETE


# --- phase matching ---------------------------------------------------------------------

def test_phase_matching_law_b_flattens_readout():
    wave = incident_wave()
    a_s, a_c = phase_matched_free_motion(P, SourceLaw.law_b(), wave.amplitude, wave.frequency)
    assert a_s == 0.0
    assert a_c == pytest.approx(-wave.amplitude * wave.frequency / (2 * P.gamma * P.gamma0))
    # with q = a_c cos(w t) free motion and Q = 0: 2*gamma*F_src must equal
    # d/dt u01(t, x0) = B w cos(w t)
    for t in (0.0, 0.7, 2.0):
        q = a_s * math.sin(P.omega * t) + a_c * math.cos(P.omega * t)
        f_src = P.gamma0 * (0.0 - q)
        assert 2 * P.gamma * f_src == pytest.approx(
            wave.amplitude * wave.frequency * math.cos(wave.frequency * t), abs=1e-12
        )


def test_phase_matching_law_a_flattens_readout():
    p = ModelParams(omega=1.2, gamma=0.4, gamma2=0.6, gamma3=0.8, alpha0=1.0, alpha1=0.0,
                    c=1.0, x0=0.5)
    wave = resonant_incident(p, amplitude=0.7)
    a_s, a_c = phase_matched_free_motion(p, SourceLaw.law_a(), wave.amplitude, wave.frequency)
    w = wave.frequency
    for t in (0.0, 0.9, 3.3):
        q = a_s * math.sin(w * t) + a_c * math.cos(w * t)
        qdot = w * (a_s * math.cos(w * t) - a_c * math.sin(w * t))
        f_src = -p.gamma2 * q + p.gamma3 * qdot
        assert 2 * p.gamma * f_src == pytest.approx(
            wave.amplitude * w * math.cos(w * t), abs=1e-12
        )


def test_phase_matching_rejects_uncoupled():
    with pytest.raises(ValueError):
        phase_matched_free_motion(
            ModelParams(gamma=0.5, gamma2=0.0, gamma3=0.0), SourceLaw.law_a(), 1.0, 1.0
        )
    with pytest.raises(ValueError):
        phase_matched_free_motion(ModelParams(alpha1=0.5), SourceLaw.law_b(), 1.0, 1.0)


# --- lattice rejection runs ----------------------------------------------------------------

def small_cfg(p):
    return LatticeConfig.from_cfl(p, -16.0, 16.0, 1601, cfl=1.0)


def test_rejection_zero_incident_machine_zero():
    sc = ReflectionScenario.for_params(P, SinusoidalWave(amplitude=0.0, frequency=P.omega))
    report = verify_rejection(sc, P, small_cfg(P), 8.0)
    assert report.max_q_readout == 0.0
    assert report.shadow_residual == 0.0


def test_rejection_resonant_small_readout():
    sc = ReflectionScenario.for_params(P, resonant_incident(P, 1.0))
    report = verify_rejection(sc, P, small_cfg(P), 8.0)
    assert report.max_q_readout <= 1e-2
    assert report.shadow_residual <= 1e-2


def test_rejection_off_resonant_control():
    sc_res = ReflectionScenario.for_params(P, resonant_incident(P, 1.0))
    sc_off = ReflectionScenario.for_params(P, resonant_incident(P, 1.0, frequency=1.3 * P.omega))
    res = verify_rejection(sc_res, P, small_cfg(P), 8.0)
    off = verify_rejection(sc_off, P, small_cfg(P), 8.0)
    assert off.max_q_readout >= 10.0 * res.max_q_readout


def test_rejection_law_a_scenario():
    p = ModelParams(omega=1.0, gamma=0.3, gamma2=0.5, gamma3=0.7, alpha0=1.0, alpha1=0.0,
                    c=1.0, x0=0.0)
    sc = ReflectionScenario.for_params(p, resonant_incident(p, 1.0))
    report = verify_rejection(sc, p, small_cfg(p), 8.0, law=SourceLaw.law_a())
    assert report.max_q_readout <= 2e-2


def test_rejection_needs_wide_window():
    sc = ReflectionScenario.for_params(P, resonant_incident(P, 1.0))
    cfg = LatticeConfig.from_cfl(P, -10.0, 10.0, 801, cfl=1.0)
    with pytest.raises(WindowTooNarrow):
        verify_rejection(sc, P, cfg, 8.0)


def test_rejection_requires_sinusoid():
    sc = ReflectionScenario.for_params(P, math.sin)
    with pytest.raises(TypeError):
        verify_rejection(sc, P, small_cfg(P), 8.0)
