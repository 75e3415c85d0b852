"""Adaptive Simpson quadrature used by the closed-form field formulas.

A deliberately small, deterministic integrator: classic recursive Simpson
with Richardson acceptance (|S_left + S_right - S_whole| <= 15*tol) and a
hard cap on function evaluations so pathological integrands fail loudly
instead of spinning.
"""

from __future__ import annotations

from typing import Callable

from .errors import QuadratureCapExceeded

#: Absolute tolerance used by the field formulas.
DEFAULT_TOL = 1e-10

#: Hard cap on integrand evaluations per call.
MAX_EVALS = 2**20


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    max_evals: int = MAX_EVALS,
) -> float:
    """Integrate f over [a, b] to absolute tolerance tol.

    Signed interval: a > b returns the negated integral.  Raises
    QuadratureCapExceeded after max_evals integrand calls.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0

    evals = 0

    def call(x: float) -> float:
        nonlocal evals
        evals += 1
        if evals > max_evals:
            raise QuadratureCapExceeded(
                f"adaptive Simpson exceeded {max_evals} evaluations on [{a}, {b}]"
            )
        return f(x)

    def simpson(lo: float, hi: float, flo: float, fmid: float, fhi: float) -> float:
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        fl = call(0.5 * (lo + mid))
        fr = call(0.5 * (mid + hi))
        left = simpson(lo, mid, flo, fl, fmid)
        right = simpson(mid, hi, fmid, fr, fhi)
        delta = left + right - whole
        # depth floor guards against accidental early acceptance on
        # symmetric integrands whose first split cancels exactly.
        if depth >= 2 and abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0
        if hi - lo <= 1e-15 * max(abs(lo), abs(hi), 1.0):
            return left + right
        half = 0.5 * eps
        return recurse(lo, mid, flo, fl, fmid, left, half, depth + 1) + recurse(
            mid, hi, fmid, fr, fhi, right, half, depth + 1
        )

    fa, fm, fb = call(a), call(0.5 * (a + b)), call(b)
    whole = simpson(a, b, fa, fm, fb)
    return sign * recurse(a, b, fa, fm, fb, whole, tol, 0)
