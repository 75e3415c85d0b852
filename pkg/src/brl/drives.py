"""External drive presets for the oscillator equation.

A drive is any callable t -> f0(t); these are the stock shapes the CLI and
tests reach for.  None is accepted everywhere downstream and means "no drive".
"""

from __future__ import annotations

import math
from typing import Callable

Drive = Callable[[float], float]


def zero_drive() -> Drive:
    return lambda t: 0.0


def sinusoid_drive(amplitude: float, frequency: float, phase: float = 0.0) -> Drive:
    return lambda t: amplitude * math.sin(frequency * t + phase)


def gauss_pulse_drive(amplitude: float, center: float, width: float) -> Drive:
    if width <= 0.0:
        raise ValueError(f"pulse width must be > 0, got {width!r}")
    return lambda t: amplitude * math.exp(-0.5 * ((t - center) / width) ** 2)


PRESETS = {
    "zero": lambda cfg: zero_drive(),
    "sinusoid": lambda cfg: sinusoid_drive(
        cfg.get("drive_amplitude", 1.0),
        cfg.get("drive_frequency", 1.0),
        cfg.get("drive_phase", 0.0),
    ),
    "gauss_pulse": lambda cfg: gauss_pulse_drive(
        cfg.get("drive_amplitude", 1.0),
        cfg.get("drive_center", 0.0),
        cfg.get("drive_width", 1.0),
    ),
}


def make_drive(name: str, cfg: dict | None = None) -> Drive:
    """Instantiate a preset drive by name from a flat parameter dict."""
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown drive preset {name!r}; available: {sorted(PRESETS)}"
        ) from None
    return factory(cfg or {})
