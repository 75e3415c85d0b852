"""Release-gating acceptance suite.

One test per criterion; each prints its PASS/FAIL line (run with -s to watch)
and asserts the criterion held at its pinned tolerance.  The same criterion
functions back `brl verify`, so this module and the CLI cannot drift apart.

BRL_TOLERANCE_SCALE > 1 relaxes magnitude tolerances (and runtime budgets)
for slow machines; convergence-order windows are never scaled.
"""

from brl.acceptance import (
    criterion_1_vieta,
    criterion_2_plastic_limit,
    criterion_3_wide_growth,
    criterion_4_model_b_oracle,
    criterion_5_limit_paradox,
    criterion_6_lattice_agreement,
    criterion_7_causality,
    criterion_8_rejection,
    criterion_9_cross_route,
    criterion_10_determinism,
    tolerance_scale,
)

SCALE = tolerance_scale()


def _check(result):
    print(result.line())
    assert result.passed, result.line()


def test_criterion_1_vieta_suite():
    _check(criterion_1_vieta(SCALE))


def test_criterion_2_concentrated_plastic_limit():
    _check(criterion_2_plastic_limit(SCALE))


def test_criterion_3_wide_memory_growth():
    _check(criterion_3_wide_growth(SCALE))


def test_criterion_4_model_b_closed_oracle():
    _check(criterion_4_model_b_oracle(SCALE))


def test_criterion_5_limit_function_paradox():
    _check(criterion_5_limit_paradox(SCALE))


def test_criterion_6_retarded_lattice_agreement():
    _check(criterion_6_lattice_agreement(SCALE))


def test_criterion_7_causality():
    _check(criterion_7_causality(SCALE))


def test_criterion_8_complete_reflection():
    _check(criterion_8_rejection(SCALE))


def test_criterion_9_insulated_cross_route():
    _check(criterion_9_cross_route(SCALE))


def test_criterion_10_determinism_roundtrip():
    _check(criterion_10_determinism(SCALE))
