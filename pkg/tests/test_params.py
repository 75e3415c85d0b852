import math

import pytest

from brl.errors import NonFiniteParameter, NonPositiveOmega, NonPositiveWaveSpeed
from brl.params import InitialState, ModelParams, validate_params


def test_valid_params_returned_unchanged():
    p = ModelParams(omega=1.0, c=1.0, gamma=1.0, gamma0=1.0, gamma1=1.0,
                    gamma2=1.0, gamma3=1.0, alpha0=1.0, alpha1=0.0, x0=0.0)
    assert validate_params(p) is p


def test_zero_wave_speed_rejected():
    with pytest.raises(NonPositiveWaveSpeed, match="'c'"):
        validate_params(ModelParams(c=0.0))


def test_negative_wave_speed_rejected():
    with pytest.raises(NonPositiveWaveSpeed):
        validate_params(ModelParams(c=-2.0))


def test_nan_omega_rejected_as_nonfinite():
    with pytest.raises(NonFiniteParameter, match="'omega'"):
        validate_params(ModelParams(omega=math.nan))


def test_nonpositive_omega_rejected():
    with pytest.raises(NonPositiveOmega, match="'omega'"):
        validate_params(ModelParams(omega=0.0))


@pytest.mark.parametrize("field", ["gamma", "gamma2", "alpha1", "x0"])
def test_infinite_parameter_names_offending_field(field):
    with pytest.raises(NonFiniteParameter, match=field):
        validate_params(ModelParams(**{field: math.inf}))


def test_initial_state_defaults_quiescent():
    init = InitialState(q0=1.0, v0=-0.5)
    assert init.field_init is None
    assert init.q0 == 1.0 and init.v0 == -0.5
