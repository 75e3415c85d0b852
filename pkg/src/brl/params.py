"""Physical constants and initial data of the coupled oscillator-field system.

The system under study is a harmonic oscillator q(t) coupled to a 1D scalar
field u(t, x) through a point source at x0:

    q''(t)  = -omega**2 * q(t) + f_compl(t, q, Q)
    u_tt    = c**2 * u_xx - 4*gamma*c*delta(x - x0)*F_src(t, q, Q) + f1(t, x)
    Q(t)    = alpha0*u(t, x0) + alpha1*u_t(t, x0)

`gamma` scales the point source, `gamma0..gamma3` are the coupling constants
read by the two source laws (see brl.dynamics.SourceLaw), and (alpha0, alpha1)
weight the field readout Q.  Positions are dimensionless, which pins the delta
normalization  integral(delta(x - x0) f(x) dx) = f(x0)  without unit juggling.

Parameters are plain double-precision scalars; the only enforced physics is
c > 0, omega > 0 and finiteness.  Construction is unchecked so that invalid
values can be built and fed to validate_params, which is the single gate used
by every solver entry point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import TYPE_CHECKING

from .errors import NonFiniteParameter, NonPositiveOmega, NonPositiveWaveSpeed

if TYPE_CHECKING:  # pragma: no cover
    from .field import WaveInitialData


@dataclass(frozen=True)
class ModelParams:
    """All constants of the coupled system.

    omega   -- oscillator angular frequency (> 0)
    gamma   -- field coupling strength (4*gamma*c*displacement is a force density)
    gamma0..gamma3 -- coupling-law constants; each law reads only its own subset
    alpha0  -- weight of u(t, x0) in the readout Q
    alpha1  -- weight of u_t(t, x0) in the readout Q
    c       -- wave propagation speed (> 0)
    x0      -- dimensionless source position
    """

    omega: float = 1.0
    gamma: float = 1.0
    gamma0: float = 1.0
    gamma1: float = 1.0
    gamma2: float = 1.0
    gamma3: float = 1.0
    alpha0: float = 1.0
    alpha1: float = 0.0
    c: float = 1.0
    x0: float = 0.0


@dataclass(frozen=True)
class InitialState:
    """Initial oscillator data plus an optional initial field excitation.

    field_init is either None (field starts identically quiescent) or a
    WaveInitialData whose profile functions must be evaluable on the whole
    simulated spatial window.
    """

    q0: float = 0.0
    v0: float = 0.0
    field_init: "WaveInitialData | None" = None


def validate_params(p: ModelParams) -> ModelParams:
    """Return p unchanged if every invariant holds, else raise naming the field.

    Checks, in order: finiteness of every parameter, c > 0, omega > 0.
    """
    for f in fields(p):
        value = getattr(p, f.name)
        if not math.isfinite(value):
            raise NonFiniteParameter(f"parameter {f.name!r} is not finite: {value!r}")
    if p.c <= 0.0:
        raise NonPositiveWaveSpeed(f"parameter 'c' must be > 0, got {p.c!r}")
    if p.omega <= 0.0:
        raise NonPositiveOmega(f"parameter 'omega' must be > 0, got {p.omega!r}")
    return p
