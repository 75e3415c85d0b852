import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brl.analysis import (
    ROOT_RESIDUAL_TOL,
    RootRegime,
    Stability,
    concentrated_memory_constants,
    habitual_self_acceleration,
    memory_cubic_constant,
    model_b_constants,
    wide_memory_roots,
)
from brl.errors import DegenerateCubic, OverdampedRegime
from brl.params import InitialState, ModelParams


def cubic_params(omega: float, b: float) -> ModelParams:
    """Parameters whose wide-memory cubic is lam**3 + omega**2*lam - b."""
    return ModelParams(omega=omega, gamma=1.0, gamma1=1.0, alpha0=1.0, gamma2=0.5 * b)


def oracle_roots(omega: float, b: float) -> np.ndarray:
    """Companion-matrix eigenvalue oracle, independent of the closed form."""
    return np.roots([1.0, 0.0, omega * omega, -b])


# --- canonical cubic lam**3 + lam - 2 = (lam - 1)(lam**2 + lam + 2) ----------

def test_canonical_cubic_real_root():
    roots = wide_memory_roots(cubic_params(1.0, 2.0))
    assert roots.lambda1 == pytest.approx(1.0, abs=1e-14)


def test_canonical_cubic_complex_pair():
    roots = wide_memory_roots(cubic_params(1.0, 2.0))
    assert roots.lambda2.real == pytest.approx(-0.5, abs=1e-14)
    assert roots.lambda2.imag == pytest.approx(math.sqrt(7.0) / 2.0, rel=1e-14)
    assert roots.lambda3 == roots.lambda2.conjugate()


def test_canonical_cubic_matches_companion_oracle():
    roots = wide_memory_roots(cubic_params(1.0, 2.0))
    oracle = oracle_roots(1.0, 2.0)
    real = oracle[np.abs(oracle.imag) < 1e-12].real
    assert roots.lambda1 == pytest.approx(float(real[0]), abs=1e-10)
    upper = oracle[oracle.imag > 1e-12]
    assert roots.lambda2 == pytest.approx(complex(upper[0]), abs=1e-10)


def test_tiny_constant_perturbative_root():
    # first-order perturbation of lam**3 + lam = b: lam1 ~ b, Re lam2 ~ -b/2
    roots = wide_memory_roots(cubic_params(1.0, 1e-9))
    assert roots.lambda1 == pytest.approx(1e-9, rel=1e-6)
    assert roots.lambda2.real == pytest.approx(-5e-10, rel=1e-6)
    oracle = oracle_roots(1.0, 1e-9)
    real = oracle[np.abs(oracle.imag) < 1e-15].real
    assert roots.lambda1 == pytest.approx(float(real[0]), rel=1e-8)


def test_degenerate_cubic_rejected():
    with pytest.raises(DegenerateCubic):
        wide_memory_roots(ModelParams(gamma2=0.0))


def test_negative_constant_gives_decaying_regime():
    roots = wide_memory_roots(cubic_params(1.0, -2.0))
    assert roots.lambda1 == pytest.approx(-1.0, abs=1e-14)
    assert roots.regime is RootRegime.DECAYING_ONLY


@settings(max_examples=60, deadline=None)
@given(
    omega=st.floats(0.1, 10.0),
    log_b=st.floats(-4.0, 3.0),
    sign=st.sampled_from([-1.0, 1.0]),
)
def test_vieta_identities_hold(omega, log_b, sign):
    b = sign * 10.0**log_b
    roots = wide_memory_roots(cubic_params(omega, b))
    assert roots.lambda1 + 2.0 * roots.lambda2.real == pytest.approx(0.0, abs=1e-10 * abs(roots.lambda1))
    assert roots.lambda1 * abs(roots.lambda2) ** 2 == pytest.approx(b, rel=1e-10)
    # exactly one root with positive real part, and it is the real one (b > 0)
    if b > 0:
        assert roots.lambda1 > 0.0
        assert roots.lambda2.real < 0.0
        assert roots.regime is RootRegime.SELF_ACCELERATING


@settings(max_examples=40, deadline=None)
@given(omega=st.floats(0.1, 10.0), log_b=st.floats(-4.0, 3.0))
def test_root_residuals_scaled(omega, log_b):
    b = 10.0**log_b
    roots = wide_memory_roots(cubic_params(omega, b))
    w2 = omega * omega
    scale = max(1.0, abs(b))
    for lam in (complex(roots.lambda1), roots.lambda2):
        assert abs(lam**3 + w2 * lam - b) <= ROOT_RESIDUAL_TOL * scale


# --- habitual-case self-acceleration ----------------------------------------

def test_habitual_stable_when_discriminant_negative():
    # gamma2 = 0 and k3 < omega: discriminant k3**2 - omega**2 < 0
    p = ModelParams(omega=2.0, gamma=0.5, gamma1=1.0, gamma2=0.0, gamma3=1.0,
                    alpha0=0.0, alpha1=1.0)
    assert habitual_self_acceleration(p) is Stability.STABLE


def test_habitual_self_accelerating_example():
    # omega=1, all couplings 1: discriminant = 1 - 1 + 2 = 2, -1 + sqrt(2) >= 0
    p = ModelParams(omega=1.0, gamma=1.0, gamma1=1.0, gamma2=1.0, gamma3=1.0,
                    alpha0=0.0, alpha1=1.0)
    assert habitual_self_acceleration(p) is Stability.SELF_ACCELERATING


def test_habitual_stable_with_large_damping():
    # gamma2 = 0, k3 > omega: discriminant >= 0 but -k3 + sqrt(k3**2 - omega**2) < 0
    p = ModelParams(omega=1.0, gamma=1.0, gamma1=1.0, gamma2=0.0, gamma3=50.0,
                    alpha0=0.0, alpha1=1.0)
    assert habitual_self_acceleration(p) is Stability.STABLE


# --- concentrated-memory constants ------------------------------------------

def test_concentrated_memory_example():
    p = ModelParams(omega=1.0, gamma=1.0, gamma1=1.0, gamma2=0.0, gamma3=1.0,
                    alpha0=1.0, alpha1=0.0)
    k = concentrated_memory_constants(p, InitialState(q0=1.0, v0=0.0))
    assert k.q_limit == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert k.omega_g == pytest.approx(math.sqrt(3.0), rel=1e-15)
    assert k.decay_rate == 0.0
    assert k.c_cos == pytest.approx(1.0 / 3.0, rel=1e-14)


def test_concentrated_memory_zero_initial_position():
    p = ModelParams(gamma2=0.0)
    k = concentrated_memory_constants(p, InitialState(q0=0.0, v0=1.0))
    assert k.q_limit == 0.0
    assert k.c_cos == 0.0


def test_concentrated_memory_no_readout_weight():
    p = ModelParams(omega=2.0, gamma=1.0, gamma1=1.0, gamma2=0.0, gamma3=1.0,
                    alpha0=0.0, alpha1=0.5)
    k = concentrated_memory_constants(p, InitialState(q0=1.0))
    assert k.q_limit == 0.0
    assert k.omega_g == pytest.approx(math.sqrt(4.0 - 0.25), rel=1e-15)


def test_concentrated_memory_overdamped_rejected():
    p = ModelParams(omega=0.1, gamma=1.0, gamma1=1.0, gamma2=0.0, gamma3=1.0,
                    alpha0=0.0, alpha1=5.0)
    with pytest.raises(OverdampedRegime):
        concentrated_memory_constants(p, InitialState(q0=1.0))


@settings(max_examples=40, deadline=None)
@given(
    g1=st.floats(0.1, 2.0), a0=st.floats(0.1, 2.0),
    g=st.floats(0.1, 2.0), g3=st.floats(0.1, 2.0),
    omega=st.floats(0.2, 3.0), q0=st.floats(0.1, 5.0),
)
def test_concentrated_limit_fraction_in_unit_interval(g1, a0, g, g3, omega, q0):
    p = ModelParams(omega=omega, gamma=g, gamma1=g1, gamma2=0.0, gamma3=g3,
                    alpha0=a0, alpha1=0.0)
    k = concentrated_memory_constants(p, InitialState(q0=q0))
    assert 0.0 < k.q_limit / q0 < 1.0


# --- law-B constants ----------------------------------------------------------

def test_model_b_constants_example():
    p = ModelParams(omega=1.0, gamma=0.1, gamma0=1.0, alpha0=1.0, alpha1=0.0)
    k = model_b_constants(p, InitialState(q0=0.0, v0=1.0))
    assert k.omega_gamma == pytest.approx(math.sqrt(0.99), rel=1e-15)
    assert k.q_limit == pytest.approx(0.2, rel=1e-15)


def test_model_b_constants_zero_velocity():
    p = ModelParams(omega=1.0, gamma=0.1)
    assert model_b_constants(p, InitialState(v0=0.0)).q_limit == 0.0


def test_model_b_constants_uncoupled():
    p = ModelParams(omega=1.5, gamma=0.0)
    k = model_b_constants(p, InitialState(v0=1.0))
    assert k.omega_gamma == pytest.approx(1.5)
    assert k.q_limit == 0.0


def test_model_b_constants_overdamped_rejected():
    with pytest.raises(OverdampedRegime):
        model_b_constants(ModelParams(omega=0.5, gamma=0.5), InitialState())


def test_model_b_constants_requires_reduced_readout():
    with pytest.raises(ValueError):
        model_b_constants(ModelParams(alpha1=0.5), InitialState())


def test_memory_cubic_constant_composition():
    p = ModelParams(gamma1=2.0, alpha0=3.0, gamma=0.5, gamma2=4.0)
    assert memory_cubic_constant(p) == pytest.approx(2.0 * 2.0 * 3.0 * 0.5 * 4.0)
