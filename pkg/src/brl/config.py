"""Flat key = value run configuration: parser, presets, RunConfig assembly.

The config format is one `key = value` pair per line with `#` comments,
chosen for zero-dependency parsing and clean diffs.  A complete annotated
example ships in the README; unknown keys are rejected so typos fail loudly.
Precedence when assembling a run: preset defaults < config file < CLI flags.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .drives import PRESETS as DRIVE_PRESETS, make_drive
from .dynamics import SourceLaw
from .errors import BrlError
from .lattice import LatticeConfig
from .params import InitialState, ModelParams


class ConfigError(BrlError):
    """Malformed configuration file or inconsistent run options."""


_FLOAT_KEYS = {
    "omega", "gamma", "gamma0", "gamma1", "gamma2", "gamma3",
    "alpha0", "alpha1", "c", "x0",
    "q0", "v0",
    "drive_amplitude", "drive_frequency", "drive_phase", "drive_center", "drive_width",
    "horizon", "dt",
    "lattice_x_min", "lattice_x_max", "lattice_cfl",
    "snapshot_x_min", "snapshot_x_max",
    "incident_amplitude", "incident_frequency_factor",
}
_INT_KEYS = {"lattice_nx", "snapshot_nx"}
_STR_KEYS = {"model", "drive", "outputs", "snapshot_times"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS

_VALID_OUTPUTS = ("trajectory", "snapshots", "roots", "reflection")

_PARAM_KEYS = (
    "omega", "gamma", "gamma0", "gamma1", "gamma2", "gamma3",
    "alpha0", "alpha1", "c", "x0",
)

DEFAULTS: dict[str, Any] = {
    "model": "B",
    "omega": 1.0, "gamma": 0.1,
    "gamma0": 1.0, "gamma1": 1.0, "gamma2": 0.0, "gamma3": 1.0,
    "alpha0": 1.0, "alpha1": 0.0,
    "c": 1.0, "x0": 0.0,
    "q0": 1.0, "v0": 1.0,
    "drive": "zero",
    "horizon": 20.0, "dt": 1e-3,
    "outputs": "trajectory",
    "snapshot_times": "",
    "snapshot_x_min": -10.0, "snapshot_x_max": 10.0, "snapshot_nx": 201,
    "lattice_x_min": -24.0, "lattice_x_max": 24.0, "lattice_nx": 2401,
    "lattice_cfl": 1.0,
    "incident_amplitude": 1.0, "incident_frequency_factor": 1.0,
}

PRESETS: dict[str, dict[str, Any]] = {
    "pure_oscillator": {
        "model": "A", "gamma1": 0.0, "q0": 1.0, "v0": 0.0, "horizon": 20.0,
    },
    "a_habitual": {
        "model": "A", "alpha0": 0.0, "alpha1": 1.0,
        "gamma": 0.2, "gamma2": 0.0, "gamma3": 1.0, "q0": 1.0, "v0": 0.0,
        "horizon": 30.0,
    },
    "a_concentrated": {
        "model": "A", "alpha0": 1.0, "alpha1": 0.5,
        "gamma": 0.5, "gamma2": 0.0, "gamma3": 1.0, "q0": 1.0, "v0": 0.0,
        "horizon": 80.0, "dt": 2e-3,
    },
    "a_wide": {
        "model": "A", "alpha0": 1.0, "alpha1": 0.0,
        "gamma": 0.5, "gamma2": 1.0, "gamma3": 0.0, "q0": 1.0, "v0": 0.0,
        "horizon": 30.0, "dt": 2e-3,
    },
    "b_reduced": {
        "model": "B", "gamma0": 1.0, "alpha0": 1.0, "alpha1": 0.0,
        "gamma": 0.1, "q0": 1.0, "v0": 1.0, "horizon": 60.0, "dt": 2e-3,
    },
    "reflect_resonant": {
        "model": "B", "gamma": 0.25, "omega": 1.0,
        "incident_amplitude": 1.0, "incident_frequency_factor": 1.0,
        "horizon": 12.0,
        "lattice_x_min": -24.0, "lattice_x_max": 24.0, "lattice_nx": 2401,
        "outputs": "reflection",
    },
    "reflect_off_resonant": {
        "model": "B", "gamma": 0.25, "omega": 1.0,
        "incident_amplitude": 1.0, "incident_frequency_factor": 1.3,
        "horizon": 12.0,
        "lattice_x_min": -24.0, "lattice_x_max": 24.0, "lattice_nx": 2401,
        "outputs": "reflection",
    },
}


def parse_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    """Parse `key = value` lines into a typed dict; comments and blanks skipped."""
    out: dict[str, Any] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            if key in _FLOAT_KEYS:
                out[key] = float(value)
            elif key in _INT_KEYS:
                out[key] = int(value)
            else:
                out[key] = value
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {value!r}") from exc
    return out


@dataclass(frozen=True)
class RunConfig:
    """Everything one simulation run needs, already typed and validated."""

    model: str
    params: ModelParams
    init: InitialState
    drive_name: str
    drive_settings: dict[str, float]
    horizon: float
    dt: float
    outputs: tuple[str, ...]
    snapshot_times: tuple[float, ...] = ()
    snapshot_grid: tuple[float, float, int] = (-10.0, 10.0, 201)
    lattice: LatticeConfig | None = None
    incident_amplitude: float = 1.0
    incident_frequency_factor: float = 1.0

    def law(self) -> SourceLaw:
        f0 = make_drive(self.drive_name, self.drive_settings)
        if self.drive_name == "zero":
            f0 = None
        return SourceLaw.law_a(f0) if self.model == "A" else SourceLaw.law_b(f0)


def build_run_config(settings: dict[str, Any]) -> RunConfig:
    """Merge settings over the defaults and assemble a validated RunConfig."""
    merged = dict(DEFAULTS)
    merged.update(settings)

    model = merged["model"].strip().upper()
    if model not in ("A", "B"):
        raise ConfigError(f"model must be A or B, got {merged['model']!r}")

    drive = merged["drive"].strip()
    if drive not in DRIVE_PRESETS:
        raise ConfigError(f"unknown drive preset {drive!r}; available: {sorted(DRIVE_PRESETS)}")

    outputs = tuple(s.strip() for s in merged["outputs"].split(",") if s.strip())
    if not outputs:
        raise ConfigError("outputs must list at least one artifact")
    for out in outputs:
        if out not in _VALID_OUTPUTS:
            raise ConfigError(f"unknown output {out!r}; valid: {_VALID_OUTPUTS}")

    times_text = merged["snapshot_times"].strip()
    snapshot_times = tuple(float(s) for s in times_text.split(",") if s.strip()) if times_text else ()

    params = ModelParams(**{k: merged[k] for k in _PARAM_KEYS})
    init = InitialState(q0=merged["q0"], v0=merged["v0"])

    lattice = None
    if {"lattice_x_min", "lattice_x_max", "lattice_nx"} <= merged.keys():
        lattice = LatticeConfig.from_cfl(
            params,
            merged["lattice_x_min"],
            merged["lattice_x_max"],
            merged["lattice_nx"],
            cfl=merged["lattice_cfl"],
        )

    drive_settings = {
        k: merged[k]
        for k in ("drive_amplitude", "drive_frequency", "drive_phase", "drive_center", "drive_width")
        if k in merged
    }

    if merged["dt"] <= 0.0 or merged["horizon"] < merged["dt"]:
        raise ConfigError(
            f"need dt > 0 and horizon >= dt, got dt={merged['dt']!r}, horizon={merged['horizon']!r}"
        )

    return RunConfig(
        model=model,
        params=params,
        init=init,
        drive_name=drive,
        drive_settings=drive_settings,
        horizon=merged["horizon"],
        dt=merged["dt"],
        outputs=outputs,
        snapshot_times=snapshot_times,
        snapshot_grid=(merged["snapshot_x_min"], merged["snapshot_x_max"], merged["snapshot_nx"]),
        lattice=lattice,
        incident_amplitude=merged["incident_amplitude"],
        incident_frequency_factor=merged["incident_frequency_factor"],
    )


def load_settings(preset: str | None, config_path: str | None) -> dict[str, Any]:
    """Layer preset defaults under an optional config file."""
    settings: dict[str, Any] = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; available: {sorted(PRESETS)}")
        settings.update(PRESETS[preset])
    if config_path is not None:
        from pathlib import Path

        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"config file not found: {config_path}")
        settings.update(parse_config_text(path.read_text(), source=str(path)))
    return settings
