"""Algebraic analysis of the effective dynamics: roots, regimes, derived constants.

Everything here is closed-form bookkeeping for the reduced point equations:

* wide memory (law A with gamma3 = 0, alpha1 = 0): the running integral of q
  turns the characteristic equation into the cubic

      lam**3 + omega**2 * lam - b = 0,     b = 2*gamma1*alpha0*gamma*gamma2.

  Because omega**2 > 0 the cubic is strictly increasing, so it always has one
  real root lam1 (sign of b) and a conjugate pair lam2, conj(lam2).  Factoring
  out lam1 gives Re(lam2) = -lam1/2 and |lam2|**2 = lam1**2 + omega**2, which
  makes the sum/product identities lam1 + 2*Re(lam2) = 0 and
  lam1*|lam2|**2 = b hold by construction up to the accuracy of lam1 itself.
  lam1 > 0 whenever b > 0: the coupled system self-accelerates.

* concentrated memory (law A with gamma2 = 0): the memory collapses onto the
  initial instant, giving a damped oscillation around a displaced equilibrium

      q_limit = [2*g / (omega**2 + 2*g)] * q(0),   g = gamma1*alpha0*gamma*gamma3,

  with ring frequency omega_g = sqrt(omega**2 + 2*g - r**2) and decay rate
  r = gamma1*alpha1*gamma*gamma3.

* law B reduced case (gamma0 = 1, alpha0 = 1, alpha1 = 0): an ordinary damped
  oscillator with ring frequency omega_gamma = sqrt(omega**2 - gamma**2)
  relaxing to q_limit = (2*gamma/omega**2) * v0 -- a displaced equilibrium set
  by the initial *velocity*.

Overdamped radicands are rejected (OverdampedRegime) rather than silently
extended to hyperbolic branches.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateCubic, OverdampedRegime
from .params import InitialState, ModelParams, validate_params

#: Scaled residual bound guaranteed for each root returned by wide_memory_roots.
ROOT_RESIDUAL_TOL = 1e-12


class RootRegime(enum.Enum):
    """Long-time behaviour implied by the cubic's real root."""

    DECAYING_ONLY = "decaying_only"
    SELF_ACCELERATING = "self_accelerating"


class Stability(enum.Enum):
    """Verdict of the habitual-case self-acceleration test."""

    STABLE = "stable"
    SELF_ACCELERATING = "self_accelerating"


@dataclass(frozen=True)
class CharacteristicRoots:
    """Roots of lam**3 + omega**2*lam - b with b = 2*gamma1*alpha0*gamma*gamma2.

    lambda1 is the unique real root; lambda2 the complex root with Im > 0
    (its conjugate is the third root and is stored implicitly).
    """

    lambda1: float
    lambda2: complex
    regime: RootRegime

    @property
    def lambda3(self) -> complex:
        return self.lambda2.conjugate()


def memory_cubic_constant(p: ModelParams) -> float:
    """Constant term b = 2*gamma1*alpha0*gamma*gamma2 of the wide-memory cubic."""
    return 2.0 * p.gamma1 * p.alpha0 * p.gamma * p.gamma2


def wide_memory_roots(p: ModelParams) -> CharacteristicRoots:
    """Solve lam**3 + omega**2*lam = b and classify the growth regime.

    The real root comes from the hyperbolic-sine closed form for a depressed
    cubic with positive linear coefficient (numerically stable for b spanning
    many orders of magnitude), then two Newton polishes tighten it to a scaled
    residual below ROOT_RESIDUAL_TOL.  The conjugate pair follows exactly from
    the quadratic cofactor.

    Raises DegenerateCubic when b = 0 (pure oscillator; no distinguished real
    root to report).
    """
    validate_params(p)
    b = memory_cubic_constant(p)
    if b == 0.0:
        raise DegenerateCubic(
            "2*gamma1*alpha0*gamma*gamma2 = 0: the memory term vanishes and the "
            "cubic degenerates to the pure oscillator"
        )
    w2 = p.omega * p.omega

    # Depressed cubic t**3 + w2*t + qc = 0 with qc = -b; w2 > 0 gives exactly
    # one real root: t = -2*sqrt(w2/3)*sinh(asinh(1.5*qc*sqrt(3/w2)/w2)/3).
    s = math.sqrt(w2 / 3.0)
    arg = (-1.5 * b / w2) * math.sqrt(3.0 / w2)
    lam1 = -2.0 * s * math.sinh(math.asinh(arg) / 3.0)
    for _ in range(2):  # Newton polish; the cubic is monotone so this is safe
        f = lam1 * lam1 * lam1 + w2 * lam1 - b
        lam1 -= f / (3.0 * lam1 * lam1 + w2)

    # Quadratic cofactor lam**2 + lam1*lam + (lam1**2 + w2); its discriminant
    # -(3*lam1**2 + 4*w2) is always negative, so the pair is genuinely complex.
    lam2 = complex(-0.5 * lam1, 0.5 * math.sqrt(3.0 * lam1 * lam1 + 4.0 * w2))

    scale = max(1.0, abs(b))
    for lam in (complex(lam1), lam2):
        residual = abs(lam * lam * lam + w2 * lam - b)
        if residual > ROOT_RESIDUAL_TOL * scale:  # pragma: no cover - defensive
            raise ArithmeticError(
                f"cubic root residual {residual:.3e} exceeds {ROOT_RESIDUAL_TOL:.0e}*{scale:.3e}"
            )

    regime = RootRegime.SELF_ACCELERATING if lam1 > 0.0 else RootRegime.DECAYING_ONLY
    return CharacteristicRoots(lambda1=lam1, lambda2=lam2, regime=regime)


def habitual_self_acceleration(p: ModelParams) -> Stability:
    """Classify the habitual case (alpha0 = 0), where the dynamics is an ODE.

    The characteristic polynomial lam**2 + 2*k3*lam + (omega**2 - 2*k2) with
    k3 = gamma1*alpha1*gamma*gamma3 and k2 = gamma1*alpha1*gamma*gamma2 has a
    nonnegative real root -- i.e. the oscillator self-accelerates -- exactly
    when both

        k3**2 - omega**2 + 2*k2 >= 0      and
        -k3 + sqrt(k3**2 - omega**2 + 2*k2) >= 0.
    """
    validate_params(p)
    k3 = p.gamma1 * p.alpha1 * p.gamma * p.gamma3
    disc = k3 * k3 - p.omega * p.omega + 2.0 * p.gamma1 * p.alpha1 * p.gamma * p.gamma2
    if disc >= 0.0 and -k3 + math.sqrt(disc) >= 0.0:
        return Stability.SELF_ACCELERATING
    return Stability.STABLE


@dataclass(frozen=True)
class ConcentratedMemory:
    """Derived constants of the concentrated-memory closed form."""

    omega_g: float      # ring frequency of the displaced oscillation
    decay_rate: float   # gamma1*alpha1*gamma*gamma3
    q_limit: float      # displaced equilibrium reached as t -> +inf
    c_cos: float        # cosine amplitude, q(0) - q_limit


def concentrated_memory_constants(p: ModelParams, init: InitialState) -> ConcentratedMemory:
    """Constants of the law-A closed form when the memory sits on t = 0 only.

    Requires the underdamped regime omega**2 + 2*g > r**2 where
    g = gamma1*alpha0*gamma*gamma3 and r = gamma1*alpha1*gamma*gamma3; the
    hyperbolic branch is not modelled and raises OverdampedRegime.
    """
    validate_params(p)
    g = p.gamma1 * p.alpha0 * p.gamma * p.gamma3
    r = p.gamma1 * p.alpha1 * p.gamma * p.gamma3
    radicand = p.omega * p.omega + 2.0 * g - r * r
    if radicand <= 0.0:
        raise OverdampedRegime(
            f"omega**2 + 2*gamma1*alpha0*gamma*gamma3 - decay_rate**2 = {radicand!r} <= 0"
        )
    q_limit = (2.0 * g / (p.omega * p.omega + 2.0 * g)) * init.q0
    return ConcentratedMemory(
        omega_g=math.sqrt(radicand),
        decay_rate=r,
        q_limit=q_limit,
        c_cos=init.q0 - q_limit,
    )


@dataclass(frozen=True)
class ModelBConstants:
    """Derived constants of the reduced law-B closed form."""

    omega_gamma: float  # ring frequency sqrt(omega**2 - gamma**2)
    q_limit: float      # (2*gamma/omega**2) * v0


def model_b_constants(p: ModelParams, init: InitialState) -> ModelBConstants:
    """Ring frequency and plastic limit of law B in its reduced case.

    Only the simplified readout gamma0 = 1, alpha0 = 1, alpha1 = 0 is covered
    by the closed form; other values are rejected outright.  The underdamped
    condition omega > |gamma| is required (OverdampedRegime otherwise).
    """
    validate_params(p)
    if not (p.gamma0 == 1.0 and p.alpha0 == 1.0 and p.alpha1 == 0.0):
        raise ValueError(
            "model_b_constants covers only gamma0 = 1, alpha0 = 1, alpha1 = 0; "
            f"got gamma0={p.gamma0!r}, alpha0={p.alpha0!r}, alpha1={p.alpha1!r}"
        )
    radicand = p.omega * p.omega - p.gamma * p.gamma
    if radicand <= 0.0:
        raise OverdampedRegime(f"omega**2 - gamma**2 = {radicand!r} <= 0")
    return ModelBConstants(
        omega_gamma=math.sqrt(radicand),
        q_limit=2.0 * p.gamma * init.v0 / (p.omega * p.omega),
    )
