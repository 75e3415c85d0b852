"""Exception types shared across the package."""


class BrlError(Exception):
    """Base class for every model or simulation error raised by brl."""


class NonPositiveWaveSpeed(BrlError):
    """Wave speed c must be strictly positive."""


class NonPositiveOmega(BrlError):
    """Oscillator frequency omega must be strictly positive."""


class NonFiniteParameter(BrlError):
    """A model parameter is NaN or infinite."""


class DegenerateCubic(BrlError):
    """The wide-memory cubic degenerates to the pure oscillator (zero constant term)."""


class OverdampedRegime(BrlError):
    """Requested closed form only covers the underdamped (oscillatory) branch."""


class BoundaryCase(BrlError):
    """Retarded-time argument sits exactly on a light-cone boundary."""


class HistoryTooShort(BrlError):
    """Retarded time exceeds the stored source history."""


class InvalidStep(BrlError):
    """Nonpositive time step, or horizon shorter than one step."""


class UnstableBlowup(BrlError):
    """|q| exceeded 1e300 during integration; trajectory abandoned before overflow."""


class SingularMassFactor(BrlError):
    """Effective mass factor 1 + 2*gamma*gamma0*alpha1 is not positive."""


class SingularInitialData(BrlError):
    """Constrained initial data for the insulated readout equation is unsolvable."""


class CflViolation(BrlError):
    """Courant number c*dt/dx exceeds 1; explicit wave scheme would be unstable."""


class WindowTooNarrow(BrlError):
    """Boundary signals would reach the source (or a probed region) within the horizon."""


class QuadratureCapExceeded(BrlError):
    """Adaptive quadrature hit its hard evaluation cap before converging."""
