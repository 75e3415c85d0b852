"""Closed-form machinery for the driven 1D wave equation on the whole line.

For  u_tt = c**2 u_xx + f  with f = -4*gamma*c*delta(x - x0)*F_src(t) + f1(t, x)
the solution splits into three explicitly known pieces:

* the homogeneous part from initial data,

      u0(t, x) = (u(0, x+ct) + u(0, x-ct))/2
                 + 1/(2c) * integral_{x-ct}^{x+ct} u_t(0, xi) dxi,

* the distributed forcing f1, entering only through any primitive ft1 of f1
  in x (the combination ft1(tau, x+c(t-tau)) - ft1(tau, x-c(t-tau)) does not
  depend on which primitive was chosen),

* and the point source, whose Heaviside primitive collapses the space-time
  integral into a pure retarded-time lookup:

      u(t, x) = -2*gamma * integral_0^{t - |x-x0|/c} F_src(tau) dtau
                  * step(t - |x-x0|/c)
                + u01(t, x),

  where u01 collects the two source-free pieces.  Evaluating at x = x0 shows
  that u(t, x0) - u01(t, x0) is just -2*gamma times the running source
  integral, so the whole field is a translate of the on-source history:
  u(t, x) - u01(t, x) = (u - u01)(t - |x-x0|/c, x0).

Quadratures use adaptive Simpson at 1e-10 absolute tolerance; retarded-time
lookups between time-grid samples interpolate the trapezoid cumulative
integral linearly, keeping the overall reconstruction O(dt**2).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .errors import BoundaryCase, HistoryTooShort
from .params import ModelParams
from .quadrature import adaptive_simpson


def heaviside(xi: float) -> int:
    """Unit step with the convention step(0) = 1."""
    return 1 if xi >= 0.0 else 0


def step_difference(
    t: float, tau: float, x: float, p: ModelParams, on_boundary: str = "raise"
) -> int:
    """Sign of the step-function bracket at emission time tau for observer (t, x).

    Returns 1 when tau precedes the retarded time t - |x-x0|/c, 0 between the
    retarded and advanced times, and -1 past the advanced time t + |x-x0|/c.

    tau exactly on either critical value is excluded by hypothesis; with
    on_boundary="raise" (default) it raises BoundaryCase, with
    on_boundary="heaviside" the bracket is evaluated directly with the
    step(0) = 1 convention, which lands on the middle-region value.
    """
    r = abs(x - p.x0) / p.c
    lo, hi = t - r, t + r
    if tau == lo or tau == hi:
        if on_boundary == "heaviside":
            return heaviside(x + p.c * (t - tau) - p.x0) - heaviside(
                x - p.c * (t - tau) - p.x0
            )
        raise BoundaryCase(
            f"tau={tau!r} sits exactly on a light-cone boundary of (t={t!r}, x={x!r})"
        )
    if tau < lo:
        return 1
    if tau < hi:
        return 0
    return -1


def _zero_profile(x: float) -> float:
    return 0.0


@dataclass(frozen=True)
class WaveInitialData:
    """Initial field data as callables, plus an optional forcing primitive.

    u0, v0 give u(0, x) and u_t(0, x); they must be total on the simulated
    window (the homogeneous formula samples them on characteristics x +- c*t,
    off any fixed grid).  f1_primitive, when present, is a primitive in x of
    the distributed forcing f1(t, x).
    """

    u0: Callable[[float], float] = dc_field(default=_zero_profile)
    v0: Callable[[float], float] = dc_field(default=_zero_profile)
    f1_primitive: Callable[[float, float], float] | None = None

    @classmethod
    def zero(cls) -> "WaveInitialData":
        """Quiescent field: u(0, .) = u_t(0, .) = 0, no distributed forcing."""
        return cls()

    @property
    def is_zero(self) -> bool:
        return (
            self.u0 is _zero_profile
            and self.v0 is _zero_profile
            and self.f1_primitive is None
        )


@dataclass(frozen=True)
class SourceHistory:
    """Point-source samples F_src(tau) on a uniform grid with its running integral.

    cum_integral is the trapezoid cumulative sum of f_src (cum_integral[0] = 0),
    frozen at construction; retarded-field lookups interpolate it linearly.
    """

    t_grid: np.ndarray
    f_src: np.ndarray
    cum_integral: np.ndarray

    @classmethod
    def from_samples(cls, dt: float, f_src: np.ndarray) -> "SourceHistory":
        f = np.asarray(f_src, dtype=float)
        if f.ndim != 1 or f.size < 2:
            raise ValueError("f_src must be a 1D array with at least two samples")
        if dt <= 0.0:
            raise ValueError(f"dt must be > 0, got {dt!r}")
        t = dt * np.arange(f.size)
        cum = np.concatenate(([0.0], np.cumsum(0.5 * dt * (f[1:] + f[:-1]))))
        return cls(t_grid=t, f_src=f, cum_integral=cum)

    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])

    def cum_at(self, t: float) -> float:
        """Linearly interpolated running integral at time t (0 <= t <= end)."""
        if t < 0.0:
            raise ValueError(f"cum_at queried at negative time {t!r}")
        t_end = float(self.t_grid[-1])
        dt = self.dt
        if t > t_end + 1e-9 * dt:
            raise HistoryTooShort(
                f"retarded time {t!r} exceeds stored history ending at {t_end!r}"
            )
        t = min(t, t_end)
        j = min(int(t / dt), self.t_grid.size - 2)
        theta = t / dt - j
        return float((1.0 - theta) * self.cum_integral[j] + theta * self.cum_integral[j + 1])


@dataclass(frozen=True)
class FieldSnapshot:
    """Field samples u(t, .) on a spatial grid at one instant."""

    t: float
    x_grid: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x_grid, dtype=float)
        if x.ndim != 1 or x.size == 0:
            raise ValueError("x_grid must be a nonempty 1D array")
        if x.size > 1 and not np.all(np.diff(x) > 0.0):
            raise ValueError("x_grid must be strictly increasing")


def homogeneous_solution(data: WaveInitialData, t: float, x: float, c: float) -> float:
    """Source-free solution from initial data via the half-sum plus velocity integral."""
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    if data.is_zero:
        return 0.0
    half_sum = 0.5 * (data.u0(x + c * t) + data.u0(x - c * t))
    if t == 0.0:
        return half_sum
    return half_sum + adaptive_simpson(data.v0, x - c * t, x + c * t) / (2.0 * c)


def u01(data: WaveInitialData, t: float, x: float, c: float) -> float:
    """Homogeneous part plus the retarded contribution of the distributed forcing.

    With ft1 = data.f1_primitive this adds
    1/(2c) * integral_0^t [ft1(tau, x + c(t-tau)) - ft1(tau, x - c(t-tau))] dtau;
    absent a primitive the term is zero.
    """
    base = homogeneous_solution(data, t, x, c)
    ft1 = data.f1_primitive
    if ft1 is None or t == 0.0:
        return base

    def integrand(tau: float) -> float:
        return ft1(tau, x + c * (t - tau)) - ft1(tau, x - c * (t - tau))

    return base + adaptive_simpson(integrand, 0.0, t) / (2.0 * c)


def retarded_field(
    src: SourceHistory, data: WaveInitialData, t: float, x: float, p: ModelParams
) -> float:
    """Full field u(t, x): gated retarded source integral plus u01.

    For t < |x - x0|/c the source part is ungated and the result is exactly
    u01(t, x).  Raises HistoryTooShort when the retarded time exceeds the
    stored history.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    t_ret = t - abs(x - p.x0) / p.c
    base = u01(data, t, x, p.c)
    if t_ret < 0.0:
        return base
    return -2.0 * p.gamma * src.cum_at(t_ret) + base


def field_snapshot(
    src: SourceHistory,
    data: WaveInitialData,
    t: float,
    x_grid: np.ndarray,
    p: ModelParams,
) -> FieldSnapshot:
    """Evaluate retarded_field on every grid point and package the result."""
    x_grid = np.asarray(x_grid, dtype=float)
    u = np.array([retarded_field(src, data, t, x, p) for x in x_grid])
    return FieldSnapshot(t=t, x_grid=x_grid, u=u)


def u01_at_source(data: WaveInitialData | None, p: ModelParams) -> Callable[[float], float]:
    """Adapt initial data into the on-source drive t -> u01(t, x0).

    None (or fully quiescent data) maps to the zero callable, which lets the
    effective integrators skip the term entirely.
    """
    if data is None or data.is_zero:
        return _zero_drive
    return lambda t: u01(data, t, p.x0, p.c)


def _zero_drive(t: float) -> float:
    return 0.0
