"""Reduced point dynamics of the coupled oscillator-field system.

Once the field is expressed through its retarded integral, the readout

    Q(t) = (alpha0 + alpha1 * d/dt) ( -2*gamma * integral_0^t F_src(tau) dtau
                                      + u01(t, x0) )

closes the oscillator equation on q(t) alone.  Two coupling laws are covered:

law A:  F_src = -gamma2*q + gamma3*q',   f_compl = gamma1*Q + f0(t)

    q'' = -omega**2 q
          - 2*gamma1*alpha0*gamma * integral_0^t (-gamma2*q + gamma3*q') dtau
          - 2*gamma1*alpha1*gamma * (-gamma2*q + gamma3*q')
          + gamma1*(alpha0 + alpha1 d/dt) u01(t, x0) + f0(t)

    The running integral is carried as an extra state variable m(t), so the
    system integrates as a first-order ODE in (q, q', m) with classical RK4
    and keeps its O(dt**4) global order.  Sub-cases: alpha0 = 0 is an
    ordinary damped oscillator ("habitual"); gamma2 = 0 collapses the memory
    onto t = 0 and relaxes to a displaced equilibrium proportional to q(0);
    gamma3 = 0, alpha1 = 0 ("wide memory") grows exponentially at the real
    cubic root lambda1 > 0.

law B:  F_src = gamma0*(Q - q),   f_compl = omega**2 * Q + f0(t)

    Eliminating Q yields a constant-coefficient ODE whose inhomogeneity
    contains the rank-one term 2*gamma*gamma0*alpha0*q'(0) -- a frozen
    functional of the initial data, NOT zero:

    (1 + 2*gamma*gamma0*alpha1) q'' + 2*gamma*gamma0*alpha0 q' + omega**2 q
        = 2*gamma*gamma0*alpha0*q'(0)
          + omega**2 * (alpha0*u01(t, x0) + alpha1*u01'(t, x0))
          + (1 + 2*gamma*gamma0*alpha1) f0(t)
          + 2*gamma*gamma0*alpha0 * integral_0^t f0 dtau

    (The field drive carries the readout weights: for alpha0 = 1, alpha1 = 0
    it is plain omega**2*u01, but a general readout forces the operator
    through the elimination -- dropping it breaks the readout/trajectory
    self-consistency, which the cross-route tests check.)

    In the reduced case (gamma0 = 1, alpha0 = 1, alpha1 = 0, f0 = 0, u01 = 0)
    the solution is the closed form model_b_closed, relaxing to
    (2*gamma/omega**2) * q'(0).  Note the constant limit function itself does
    not satisfy the equation with its own (vanishing) initial derivative --
    the memory of v0 lives in the inhomogeneity, not in the state.

The insulated readout route integrates Q directly: with
Qd = Q - u01(t, x0) and D01 = alpha0 + alpha1 d/dt,

    (1 + 2*gamma*gamma0*alpha1) Qd'' + 2*gamma*gamma0*alpha0 Qd'
        + omega**2 Qd
      = 2*gamma*gamma0 * ( alpha0*v0 + alpha0*integral_0^t f0
                           + alpha1*f0(t) - alpha0*u01'(t) - alpha1*u01''(t) )
        + (D01 - I)(d^2/dt^2 + omega**2) u01(t, x0)

with initial data constrained by the readout definition (see
integrate_insulated_q); the (D01 - I) correction again vanishes for the
alpha0 = 1, alpha1 = 0 readout.  Time derivatives of the source integral are
always expanded analytically; only externally supplied u01 drives are
differenced numerically (central, O(dt**2)).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .analysis import concentrated_memory_constants, model_b_constants, wide_memory_roots
from .errors import (
    InvalidStep,
    SingularInitialData,
    SingularMassFactor,
    UnstableBlowup,
)
from .field import SourceHistory, WaveInitialData, u01_at_source
from .params import InitialState, ModelParams, validate_params

#: Abort threshold for |q| before floating overflow.
BLOWUP_LIMIT = 1e300

Drive = Callable[[float], float]


class LawVariant(enum.Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class SourceLaw:
    """Which point-source/complementary-force pair closes the system.

    Law A reads gamma1, gamma2, gamma3; law B reads gamma0.  The external
    drive f0 rides along so a law fully specifies the right-hand sides.
    """

    variant: LawVariant
    f0: Drive | None = None

    @classmethod
    def law_a(cls, f0: Drive | None = None) -> "SourceLaw":
        return cls(LawVariant.A, f0)

    @classmethod
    def law_b(cls, f0: Drive | None = None) -> "SourceLaw":
        return cls(LawVariant.B, f0)

    def f_src(self, p: ModelParams, q: float, qdot: float, big_q: float) -> float:
        if self.variant is LawVariant.A:
            return -p.gamma2 * q + p.gamma3 * qdot
        return p.gamma0 * (big_q - q)

    def f_compl(self, p: ModelParams, t: float, q: float, big_q: float) -> float:
        drive = self.f0(t) if self.f0 is not None else 0.0
        if self.variant is LawVariant.A:
            return p.gamma1 * big_q + drive
        return p.omega * p.omega * big_q + drive


class EffectiveRegime(enum.Enum):
    HABITUAL = "habitual"
    CONCENTRATED_MEMORY = "concentrated_memory"
    WIDE_MEMORY = "wide_memory"
    GENERAL_A = "general_a"
    REDUCED_B = "reduced_b"


@dataclass(frozen=True)
class EffectiveCoefficients:
    """Named scalars of the effective equation for reporting and stepping.

    For law A the equation reads
        q'' + damping*q' + stiffness*q = memory terms + drives
    with damping = 2*gamma1*alpha1*gamma*gamma3 and
    stiffness = omega**2 - 2*gamma1*alpha1*gamma*gamma2; the memory weights
    are 2*gamma1*alpha0*gamma*gamma2 (running integral of q) and
    2*gamma1*alpha0*gamma*gamma3 (initial-instant term).  For law B
    mass_factor = 1 + 2*gamma*gamma0*alpha1 multiplies q'' and must be
    positive.
    """

    regime: EffectiveRegime
    mass_factor: float
    damping: float
    stiffness: float
    memory_integral_weight: float
    memory_initial_weight: float


def classify_effective(p: ModelParams, law: SourceLaw) -> EffectiveCoefficients:
    validate_params(p)
    if law.variant is LawVariant.B:
        mass = 1.0 + 2.0 * p.gamma * p.gamma0 * p.alpha1
        if mass <= 0.0:
            raise SingularMassFactor(
                f"1 + 2*gamma*gamma0*alpha1 = {mass!r} <= 0 for the reduced law-B equation"
            )
        return EffectiveCoefficients(
            regime=EffectiveRegime.REDUCED_B,
            mass_factor=mass,
            damping=2.0 * p.gamma * p.gamma0 * p.alpha0,
            stiffness=p.omega * p.omega,
            memory_integral_weight=0.0,
            memory_initial_weight=2.0 * p.gamma * p.gamma0 * p.alpha0,
        )
    if p.alpha0 == 0.0:
        regime = EffectiveRegime.HABITUAL
    elif p.gamma2 == 0.0:
        regime = EffectiveRegime.CONCENTRATED_MEMORY
    elif p.gamma3 == 0.0 and p.alpha1 == 0.0:
        regime = EffectiveRegime.WIDE_MEMORY
    else:
        regime = EffectiveRegime.GENERAL_A
    return EffectiveCoefficients(
        regime=regime,
        mass_factor=1.0,
        damping=2.0 * p.gamma1 * p.alpha1 * p.gamma * p.gamma3,
        stiffness=p.omega * p.omega - 2.0 * p.gamma1 * p.alpha1 * p.gamma * p.gamma2,
        memory_integral_weight=2.0 * p.gamma1 * p.alpha0 * p.gamma * p.gamma2,
        memory_initial_weight=2.0 * p.gamma1 * p.alpha0 * p.gamma * p.gamma3,
    )


@dataclass(frozen=True)
class PointHistory:
    """Sampled trajectories on a uniform grid, plus the shared source history."""

    t_grid: np.ndarray
    q: np.ndarray
    qdot: np.ndarray
    big_q: np.ndarray
    src: SourceHistory

    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])


def _grid_steps(T: float, dt: float) -> int:
    if dt <= 0.0:
        raise InvalidStep(f"dt must be > 0, got {dt!r}")
    n = int(round(T / dt))
    if n < 1 or T < dt:
        raise InvalidStep(f"horizon T={T!r} must cover at least one step dt={dt!r}")
    return n


def _central_diff(samples: np.ndarray, dt: float) -> np.ndarray:
    """O(dt**2) derivative of uniformly sampled data, one-sided at the ends."""
    d = np.empty_like(samples)
    if samples.size < 3:
        d[:] = (samples[-1] - samples[0]) / dt
        return d
    d[1:-1] = (samples[2:] - samples[:-2]) / (2.0 * dt)
    d[0] = (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * dt)
    d[-1] = (3.0 * samples[-1] - 4.0 * samples[-2] + samples[-3]) / (2.0 * dt)
    return d


def _sample_drive(f: Drive | None, t_grid: np.ndarray) -> np.ndarray:
    if f is None:
        return np.zeros_like(t_grid)
    return np.array([f(t) for t in t_grid])


def reduce_to_point(
    q_hist: PointHistory,
    data: WaveInitialData | None,
    p: ModelParams,
    law: SourceLaw,
) -> np.ndarray:
    """Recompute the readout Q(t) from a trajectory via the retarded formula.

    The time derivative of the source integral is expanded analytically as
    F_src(t); only the u01 samples are differenced numerically (central,
    O(dt**2)).  For law B the history's own Q enters F_src, making this a
    self-consistency check rather than a solver.
    """
    validate_params(p)
    t = q_hist.t_grid
    dt = q_hist.dt
    f_src = np.array(
        [
            law.f_src(p, q_hist.q[i], q_hist.qdot[i], q_hist.big_q[i])
            for i in range(t.size)
        ]
    )
    cum = SourceHistory.from_samples(dt, f_src).cum_integral
    u01_fn = u01_at_source(data, p)
    u01v = np.array([u01_fn(ti) for ti in t])
    du01 = _central_diff(u01v, dt)
    g2 = 2.0 * p.gamma
    return p.alpha0 * (-g2 * cum + u01v) + p.alpha1 * (-g2 * f_src + du01)


def _field_drive(init: InitialState, p: ModelParams) -> Drive | None:
    """On-source drive implied by the initial field data (None if quiescent)."""
    drive = u01_at_source(init.field_init, p)
    from .field import _zero_drive

    return None if drive is _zero_drive else drive


def _numeric_dot(f: Drive, t: float, h: float) -> float:
    if t >= h:
        return (f(t + h) - f(t - h)) / (2.0 * h)
    return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h)


def _numeric_ddot(f: Drive, t: float, h: float) -> float:
    if t >= h:
        return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)
    return (2.0 * f(t) - 5.0 * f(t + h) + 4.0 * f(t + 2.0 * h) - f(t + 3.0 * h)) / (h * h)


def _numeric_dddot(f: Drive, t: float, h: float) -> float:
    if t >= 2.0 * h:
        return (f(t + 2 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2 * h)) / (2.0 * h**3)
    # one-sided, O(h): only the measure-zero start of a run lands here
    return (-f(t) + 3.0 * f(t + h) - 3.0 * f(t + 2 * h) + f(t + 3 * h)) / (h**3)


def integrate_model_a(
    p: ModelParams,
    init: InitialState,
    f0: Drive | None,
    T: float,
    dt: float,
    u01: Drive | None = None,
    u01_dot: Drive | None = None,
) -> PointHistory:
    """RK4 trajectory of the law-A effective equation on a uniform grid.

    The memory integral m(t) = integral_0^t (-gamma2*q + gamma3*q') dtau is a
    third state variable, so the global error is O(dt**4) on smooth drives.
    u01 is the on-source drive t -> u01(t, x0); when absent it is derived
    from init.field_init (quiescent and cheap if that is None too, quadrature
    per evaluation otherwise -- pass an analytic u01 to skip the quadrature).
    Its time derivative comes from u01_dot when supplied, else from central
    differences with step dt.
    """
    validate_params(p)
    n = _grid_steps(T, dt)
    if u01 is None and init.field_init is not None:
        u01 = _field_drive(init, p)

    w2 = p.omega * p.omega
    ka = 2.0 * p.gamma1 * p.alpha0 * p.gamma   # weight of the running integral
    kb = 2.0 * p.gamma1 * p.alpha1 * p.gamma   # weight of the instantaneous term
    g2, g3 = p.gamma2, p.gamma3
    a0w, a1w, g1 = p.alpha0, p.alpha1, p.gamma1

    def drive(t: float) -> float:
        s = f0(t) if f0 is not None else 0.0
        if u01 is not None:
            s += g1 * a0w * u01(t)
            if a1w != 0.0:
                du = u01_dot(t) if u01_dot is not None else _numeric_dot(u01, t, dt)
                s += g1 * a1w * du
        return s

    q_arr = np.empty(n + 1)
    v_arr = np.empty(n + 1)
    m_arr = np.empty(n + 1)
    q, v, m = float(init.q0), float(init.v0), 0.0
    q_arr[0], v_arr[0], m_arr[0] = q, v, m

    half = 0.5 * dt
    sixth = dt / 6.0
    for i in range(n):
        t = i * dt
        if abs(q) > BLOWUP_LIMIT:
            raise UnstableBlowup(f"|q| exceeded 1e300 at t={t!r}")
        d1 = drive(t)
        dh = drive(t + half)
        d2 = drive(t + dt)

        k1q = v
        k1v = -w2 * q - ka * m - kb * (-g2 * q + g3 * v) + d1
        k1m = -g2 * q + g3 * v

        q1, v1, m1 = q + half * k1q, v + half * k1v, m + half * k1m
        k2q = v1
        k2v = -w2 * q1 - ka * m1 - kb * (-g2 * q1 + g3 * v1) + dh
        k2m = -g2 * q1 + g3 * v1

        q2, v2, m2 = q + half * k2q, v + half * k2v, m + half * k2m
        k3q = v2
        k3v = -w2 * q2 - ka * m2 - kb * (-g2 * q2 + g3 * v2) + dh
        k3m = -g2 * q2 + g3 * v2

        q3, v3, m3 = q + dt * k3q, v + dt * k3v, m + dt * k3m
        k4q = v3
        k4v = -w2 * q3 - ka * m3 - kb * (-g2 * q3 + g3 * v3) + d2
        k4m = -g2 * q3 + g3 * v3

        q += sixth * (k1q + 2.0 * (k2q + k3q) + k4q)
        v += sixth * (k1v + 2.0 * (k2v + k3v) + k4v)
        m += sixth * (k1m + 2.0 * (k2m + k3m) + k4m)
        q_arr[i + 1], v_arr[i + 1], m_arr[i + 1] = q, v, m
    if abs(q) > BLOWUP_LIMIT:
        raise UnstableBlowup(f"|q| exceeded 1e300 at t={T!r}")

    t_grid = dt * np.arange(n + 1)
    f_src = -g2 * q_arr + g3 * v_arr
    if u01 is not None:
        u01v = np.array([u01(t) for t in t_grid])
        du01 = (
            np.array([u01_dot(t) for t in t_grid])
            if u01_dot is not None
            else _central_diff(u01v, dt)
        )
    else:
        u01v = np.zeros(n + 1)
        du01 = u01v
    gg = 2.0 * p.gamma
    big_q = p.alpha0 * (-gg * m_arr + u01v) + p.alpha1 * (-gg * f_src + du01)
    return PointHistory(
        t_grid=t_grid,
        q=q_arr,
        qdot=v_arr,
        big_q=big_q,
        src=SourceHistory.from_samples(dt, f_src),
    )


def model_a_closed_concentrated(p: ModelParams, init: InitialState, t):
    """Closed-form law-A trajectory when the memory sits on t = 0 only.

    q(t) = q_limit + exp(-r*t) * (C_c*cos(omega_g*t) + C_s*sin(omega_g*t))
    with the constants of concentrated_memory_constants; C_s is fixed by
    matching q'(0) = v0, which differentiating the ansatz gives as
    C_s = (v0 + r*C_c) / omega_g.  Requires gamma2 = 0 and no drives.
    """
    if p.gamma2 != 0.0:
        raise ValueError(
            f"concentrated-memory closed form requires gamma2 = 0, got {p.gamma2!r}"
        )
    k = concentrated_memory_constants(p, init)
    c_sin = (init.v0 + k.decay_rate * k.c_cos) / k.omega_g
    t = np.asarray(t, dtype=float)
    osc = k.c_cos * np.cos(k.omega_g * t) + c_sin * np.sin(k.omega_g * t)
    out = k.q_limit + np.exp(-k.decay_rate * t) * osc
    return float(out) if out.ndim == 0 else out


def model_a_wide_admissible(p: ModelParams, c2: complex, t):
    """Exact wide-memory trajectory built from an admissible root combination.

    q(t) = C1*exp(lambda1*t) + 2*Re(C2*exp(lambda2*t)) where the running
    integral's constant of integration must vanish:
    C1/lambda1 + 2*Re(C2/lambda2) = 0, enforced here by construction via
    C1 = -lambda1 * 2*Re(C2/lambda2).
    """
    roots = wide_memory_roots(p)
    c2 = complex(c2)
    c1 = -roots.lambda1 * 2.0 * (c2 / roots.lambda2).real
    t = np.asarray(t, dtype=float)
    out = c1 * np.exp(roots.lambda1 * t) + 2.0 * (c2 * np.exp(roots.lambda2 * t)).real
    return float(out) if out.ndim == 0 else out


def integrate_model_b(
    p: ModelParams,
    init: InitialState,
    f0: Drive | None,
    T: float,
    dt: float,
    u01: Drive | None = None,
    u01_dot: Drive | None = None,
) -> PointHistory:
    """RK4 trajectory of the law-B effective ODE on a uniform grid.

    The rank-one inhomogeneity 2*gamma*gamma0*alpha0*v0 is frozen at
    initialization; the drive integral rides along as a third RK4 state so
    the order stays O(dt**4) with f0 present.  The field drive enters through
    the full readout, omega**2 * (alpha0*u01 + alpha1*u01') -- eliminating Q
    from the coupled system forces the readout operator onto u01, even though
    it collapses to plain omega**2*u01 in the alpha0 = 1, alpha1 = 0 case the
    closed form covers.  Q is recovered afterwards from the oscillator
    equation, Q = q + (q'' - f0)/omega**2.  As in integrate_model_a, an absent
    u01 is derived from init.field_init.
    """
    validate_params(p)
    coeff = classify_effective(p, SourceLaw.law_b(f0))
    n = _grid_steps(T, dt)
    if u01 is None and init.field_init is not None:
        u01 = _field_drive(init, p)

    mass = coeff.mass_factor
    kd = coeff.damping                      # 2*gamma*gamma0*alpha0
    w2 = p.omega * p.omega
    rank_one = kd * float(init.v0)

    def f0_at(t: float) -> float:
        return f0(t) if f0 is not None else 0.0

    def u01_at(t: float) -> float:
        if u01 is None:
            return 0.0
        value = p.alpha0 * u01(t)
        if p.alpha1 != 0.0:
            du = u01_dot(t) if u01_dot is not None else _numeric_dot(u01, t, dt)
            value += p.alpha1 * du
        return value

    q_arr = np.empty(n + 1)
    v_arr = np.empty(n + 1)
    fint_arr = np.empty(n + 1)
    q, v, fint = float(init.q0), float(init.v0), 0.0
    q_arr[0], v_arr[0], fint_arr[0] = q, v, fint

    half = 0.5 * dt
    sixth = dt / 6.0
    for i in range(n):
        t = i * dt
        if abs(q) > BLOWUP_LIMIT:
            raise UnstableBlowup(f"|q| exceeded 1e300 at t={t!r}")
        fa, fh, fb = f0_at(t), f0_at(t + half), f0_at(t + dt)
        ua, uh, ub = u01_at(t), u01_at(t + half), u01_at(t + dt)

        k1v = (rank_one + w2 * ua + mass * fa + kd * fint - kd * v - w2 * q) / mass
        k1q, k1f = v, fa

        q1, v1, f1 = q + half * k1q, v + half * k1v, fint + half * k1f
        k2v = (rank_one + w2 * uh + mass * fh + kd * f1 - kd * v1 - w2 * q1) / mass
        k2q, k2f = v1, fh

        q2, v2, f2 = q + half * k2q, v + half * k2v, fint + half * k2f
        k3v = (rank_one + w2 * uh + mass * fh + kd * f2 - kd * v2 - w2 * q2) / mass
        k3q, k3f = v2, fh

        q3, v3, f3 = q + dt * k3q, v + dt * k3v, fint + dt * k3f
        k4v = (rank_one + w2 * ub + mass * fb + kd * f3 - kd * v3 - w2 * q3) / mass
        k4q, k4f = v3, fb

        q += sixth * (k1q + 2.0 * (k2q + k3q) + k4q)
        v += sixth * (k1v + 2.0 * (k2v + k3v) + k4v)
        fint += sixth * (k1f + 2.0 * (k2f + k3f) + k4f)
        q_arr[i + 1], v_arr[i + 1], fint_arr[i + 1] = q, v, fint
    if abs(q) > BLOWUP_LIMIT:
        raise UnstableBlowup(f"|q| exceeded 1e300 at t={T!r}")

    t_grid = dt * np.arange(n + 1)
    f0v = _sample_drive(f0, t_grid)
    u01v = np.array([u01_at(t) for t in t_grid])  # readout-weighted samples
    accel = (rank_one + w2 * u01v + mass * f0v + kd * fint_arr - kd * v_arr - w2 * q_arr) / mass
    big_q = q_arr + (accel - f0v) / w2
    f_src = p.gamma0 * (big_q - q_arr)
    return PointHistory(
        t_grid=t_grid,
        q=q_arr,
        qdot=v_arr,
        big_q=big_q,
        src=SourceHistory.from_samples(dt, f_src),
    )


def model_b_closed(p: ModelParams, init: InitialState, t):
    """Closed-form law-B trajectory in the reduced case (no drives, quiescent field).

    q(t) = exp(-gamma*t) * (cos(w*t) + gamma*sin(w*t)/w) * (q0 - L)
           + exp(-gamma*t) * sin(w*t)/w * v0 + L,
    with w = omega_gamma and L = (2*gamma/omega**2) * v0.  Satisfies
    q(0) = q0 and q'(0) = v0 exactly.
    """
    k = model_b_constants(p, init)
    w = k.omega_gamma
    t = np.asarray(t, dtype=float)
    env = np.exp(-p.gamma * t)
    sin_w = np.sin(w * t)
    out = (
        env * (np.cos(w * t) + p.gamma * sin_w / w) * (init.q0 - k.q_limit)
        + env * sin_w / w * init.v0
        + k.q_limit
    )
    return float(out) if out.ndim == 0 else out


def limit_paradox_residual(p: ModelParams, v0: float, q_inf: float | None = None) -> float:
    """Residual of a constant trial function in the reduced law-B equation.

    The probed constant defaults to 2*gamma*v0 -- the naive velocity-scaled
    limit (the actual limit carries an extra 1/omega**2; the two agree only
    at omega = 1).  For any constant the left side collapses to
    omega**2 * q_inf while the right side keeps the rank-one term 2*gamma*v0
    of the ORIGINAL initial data, so the residual is exactly

        omega**2 * q_inf - 2*gamma*v0,

    nonzero in general: the constant does not solve the equation it is the
    limit of, because its own initial derivative is zero.
    """
    validate_params(p)
    if q_inf is None:
        q_inf = 2.0 * p.gamma * v0
    qddot = 0.0
    qdot = 0.0
    lhs = qddot + 2.0 * p.gamma * qdot + p.omega * p.omega * q_inf
    rhs = 2.0 * p.gamma * v0
    return lhs - rhs


def insulated_q_rhs(
    p: ModelParams,
    init: InitialState,
    t: float,
    f0: Drive | None = None,
    u01: Drive | None = None,
    h: float = 1e-6,
    f0_integral: float | None = None,
) -> float:
    """Inhomogeneity of the insulated readout equation at time t.

    2*gamma*gamma0 * ( alpha0*v0 + alpha0*If0(t) + alpha1*f0(t)
                       - alpha0*u01'(t) - alpha1*u01''(t) )
      + (alpha0 - 1)*(u01'' + omega**2*u01) + alpha1*(u01''' + omega**2*u01')

    where If0 is the running drive integral (quadrature over [0, t] unless
    f0_integral supplies it) and the u01 derivatives are central differences
    with step h.  The second line is forced by eliminating q from the coupled
    system with a general readout; it vanishes in the alpha0 = 1, alpha1 = 0
    case (and of course whenever u01 does).
    """
    validate_params(p)
    gg = 2.0 * p.gamma * p.gamma0
    s = p.alpha0 * float(init.v0)
    if f0 is not None:
        if f0_integral is None:
            from .quadrature import adaptive_simpson

            f0_integral = adaptive_simpson(f0, 0.0, t) if t > 0.0 else 0.0
        s += p.alpha0 * f0_integral + p.alpha1 * f0(t)
    out = gg * s
    if u01 is not None:
        w2 = p.omega * p.omega
        du = _numeric_dot(u01, t, h)
        ddu = _numeric_ddot(u01, t, h)
        out -= gg * p.alpha0 * du
        out += (p.alpha0 - 1.0) * (ddu + w2 * u01(t))
        if p.alpha1 != 0.0:
            dddu = _numeric_dddot(u01, t, h)
            out -= gg * p.alpha1 * ddu
            out += p.alpha1 * (dddu + w2 * du)
    return out


def insulated_q_initial_data(
    p: ModelParams,
    init: InitialState,
    u01: Drive | None = None,
    h: float = 1e-6,
) -> tuple[float, float]:
    """Constrained (Q(0), Q'(0)) implied by the readout definition.

    Solving the readout at t = 0 for Q(0), with mass = 1 + 2*gamma*gamma0*alpha1:

        Q(0)  = [alpha0*u01(0) + alpha1*u01'(0) + 2*gamma*gamma0*alpha1*q0] / mass
        Q'(0) = [alpha0*(-2*gamma*gamma0*(Q(0) - q0) + u01'(0))
                 + alpha1*(2*gamma*gamma0*v0 + u01''(0))] / mass

    Raises SingularInitialData when mass vanishes.
    """
    validate_params(p)
    gg = 2.0 * p.gamma * p.gamma0
    mass = 1.0 + gg * p.alpha1
    if mass == 0.0 or abs(mass) < 1e-14:
        raise SingularInitialData(
            f"1 + 2*gamma*gamma0*alpha1 = {mass!r}: Q(0) equation unsolvable"
        )
    if u01 is not None:
        u0 = u01(0.0)
        du0 = _numeric_dot(u01, 0.0, h)
        ddu0 = _numeric_ddot(u01, 0.0, h)
    else:
        u0 = du0 = ddu0 = 0.0
    q_at_0 = (p.alpha0 * u0 + p.alpha1 * du0 + gg * p.alpha1 * init.q0) / mass
    qdot_at_0 = (
        p.alpha0 * (-gg * (q_at_0 - init.q0) + du0)
        + p.alpha1 * (gg * init.v0 + ddu0)
    ) / mass
    return q_at_0, qdot_at_0


def integrate_insulated_q(
    p: ModelParams,
    init: InitialState,
    f0: Drive | None,
    T: float,
    dt: float,
    u01: Drive | None = None,
) -> np.ndarray:
    """Integrate the insulated second-order equation for Q and return Q samples.

    Only the t = 0 oscillator data (q0, v0) enters -- the whole trajectory is
    not needed.  The drive integral is a third RK4 state; u01 derivatives are
    central differences with step dt.  An absent u01 is derived from
    init.field_init.  Returns Q = Qd + u01 on the grid.
    """
    validate_params(p)
    n = _grid_steps(T, dt)
    if u01 is None and init.field_init is not None:
        u01 = _field_drive(init, p)
    gg = 2.0 * p.gamma * p.gamma0
    mass = 1.0 + gg * p.alpha1
    q0_init, qdot0_init = insulated_q_initial_data(p, init, u01, h=dt)

    om2 = p.omega * p.omega
    kd = gg * p.alpha0
    base = p.alpha0 * float(init.v0)

    def f0_at(t: float) -> float:
        return f0(t) if f0 is not None else 0.0

    if u01 is not None:
        def u01_dot_at(t: float) -> float:
            return _numeric_dot(u01, t, dt)

        def u01_ddot_at(t: float) -> float:
            return _numeric_ddot(u01, t, dt)

        u01_0 = u01(0.0)
        du01_0 = u01_dot_at(0.0)
    else:
        u01_dot_at = u01_ddot_at = None
        u01_0 = du01_0 = 0.0

    def rhs_inhom(t: float, fint: float) -> float:
        s = gg * (base + p.alpha0 * fint + p.alpha1 * f0_at(t))
        if u01 is not None:
            du = u01_dot_at(t)
            ddu = u01_ddot_at(t)
            s -= gg * p.alpha0 * du
            # readout-operator correction; zero for alpha0 = 1, alpha1 = 0
            s += (p.alpha0 - 1.0) * (ddu + om2 * u01(t))
            if p.alpha1 != 0.0:
                s -= gg * p.alpha1 * ddu
                s += p.alpha1 * (_numeric_dddot(u01, t, dt) + om2 * du)
        return s

    qd_arr = np.empty(n + 1)
    qd = q0_init - u01_0
    w = qdot0_init - du01_0
    fint = 0.0
    qd_arr[0] = qd

    half = 0.5 * dt
    sixth = dt / 6.0
    for i in range(n):
        t = i * dt
        fa, fh, fb = f0_at(t), f0_at(t + half), f0_at(t + dt)

        k1q = w
        k1w = (rhs_inhom(t, fint) - kd * w - om2 * qd) / mass
        k1f = fa

        q1, w1, f1 = qd + half * k1q, w + half * k1w, fint + half * k1f
        k2q = w1
        k2w = (rhs_inhom(t + half, f1) - kd * w1 - om2 * q1) / mass
        k2f = fh

        q2, w2, f2 = qd + half * k2q, w + half * k2w, fint + half * k2f
        k3q = w2
        k3w = (rhs_inhom(t + half, f2) - kd * w2 - om2 * q2) / mass
        k3f = fh

        q3, w3, f3 = qd + dt * k3q, w + dt * k3w, fint + dt * k3f
        k4q = w3
        k4w = (rhs_inhom(t + dt, f3) - kd * w3 - om2 * q3) / mass
        k4f = fb

        qd += sixth * (k1q + 2.0 * (k2q + k3q) + k4q)
        w += sixth * (k1w + 2.0 * (k2w + k3w) + k4w)
        fint += sixth * (k1f + 2.0 * (k2f + k3f) + k4f)
        qd_arr[i + 1] = qd

    t_grid = dt * np.arange(n + 1)
    u01v = _sample_drive(u01, t_grid)
    return qd_arr + u01v


def pure_oscillator(p: ModelParams, init: InitialState, t):
    """Undriven, uncoupled oscillator: q0*cos(omega*t) + v0*sin(omega*t)/omega."""
    t = np.asarray(t, dtype=float)
    out = init.q0 * np.cos(p.omega * t) + init.v0 * np.sin(p.omega * t) / p.omega
    return float(out) if out.ndim == 0 else out
