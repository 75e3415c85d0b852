"""brl: a desk-scale lab for 1D oscillator-field point-interaction models.

Closed-form retarded fields, effective equations of motion with memory, and
an independent lattice oracle that cross-checks every analytic result.
"""

from .analysis import (
    CharacteristicRoots,
    ConcentratedMemory,
    ModelBConstants,
    RootRegime,
    Stability,
    concentrated_memory_constants,
    habitual_self_acceleration,
    model_b_constants,
    wide_memory_roots,
)
from .dynamics import (
    EffectiveCoefficients,
    EffectiveRegime,
    LawVariant,
    PointHistory,
    SourceLaw,
    classify_effective,
    integrate_insulated_q,
    integrate_model_a,
    integrate_model_b,
    limit_paradox_residual,
    model_a_closed_concentrated,
    model_a_wide_admissible,
    model_b_closed,
    reduce_to_point,
)
from .errors import BrlError
from .field import (
    FieldSnapshot,
    SourceHistory,
    WaveInitialData,
    field_snapshot,
    heaviside,
    homogeneous_solution,
    retarded_field,
    step_difference,
    u01,
)
from .lattice import LatticeConfig, convergence_study, run_coupled
from .params import InitialState, ModelParams, validate_params
from .reflection import (
    ReflectionScenario,
    ReflectionVerdict,
    RejectionReport,
    SinusoidalWave,
    reflected_field,
    resonance_check,
    verify_rejection,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
