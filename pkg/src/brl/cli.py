"""Command-line front end: simulate, roots, reflect, sweep, verify.

Exit codes: 0 success, 2 usage/config problems, 3 numerical failures
(blow-up, unstable configurations, overdamped closed forms and the like).
All numeric file output goes through brl.csvio at 17 significant digits, so
identical configurations produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import csvio
from .analysis import (
    concentrated_memory_constants,
    habitual_self_acceleration,
    model_b_constants,
    wide_memory_roots,
)
from .config import (
    ConfigError,
    PRESETS,
    RunConfig,
    build_run_config,
    load_settings,
)
from .csvio import format_float
from .dynamics import (
    EffectiveRegime,
    classify_effective,
    integrate_model_a,
    integrate_model_b,
)
from .errors import BrlError, DegenerateCubic, OverdampedRegime
from .field import WaveInitialData, field_snapshot
from .fitting import fit_log_slope
from .params import validate_params
from .reflection import ReflectionScenario, resonant_incident, verify_rejection


def _integrate(run: RunConfig):
    law = run.law()
    if run.model == "A":
        return law, integrate_model_a(
            run.params, run.init, law.f0, run.horizon, run.dt
        )
    return law, integrate_model_b(run.params, run.init, law.f0, run.horizon, run.dt)


def _summary_lines(run: RunConfig, hist) -> list[str]:
    p = run.params
    law = run.law()
    coeff = classify_effective(p, law)
    tail = hist.t_grid >= 0.75 * float(hist.t_grid[-1])

    lines = [
        f"model = {run.model}",
        f"regime = {coeff.regime.value}",
        f"final_t = {format_float(float(hist.t_grid[-1]))}",
        f"final_q = {format_float(float(hist.q[-1]))}",
        f"max_abs_q = {format_float(float(np.max(np.abs(hist.q))))}",
    ]

    q_limit = None
    if coeff.regime is EffectiveRegime.CONCENTRATED_MEMORY:
        try:
            q_limit = concentrated_memory_constants(p, run.init).q_limit
        except (OverdampedRegime, BrlError):
            lines.append("plastic_limit = unavailable (overdamped)")
    elif coeff.regime is EffectiveRegime.REDUCED_B:
        try:
            q_limit = model_b_constants(p, run.init).q_limit
        except (OverdampedRegime, ValueError):
            lines.append("plastic_limit = unavailable (non-reduced or overdamped)")
    if q_limit is not None:
        lines.append(f"plastic_limit = {format_float(q_limit)}")
        lines.append(
            f"final_gap_to_limit = {format_float(abs(float(hist.q[-1]) - q_limit))}"
        )

    rate = fit_log_slope(hist.t_grid[tail], hist.q[tail] - (q_limit or 0.0))
    lines.append(f"fitted_rate_final_quarter = {format_float(rate)}")

    if coeff.regime is EffectiveRegime.WIDE_MEMORY:
        try:
            roots = wide_memory_roots(p)
            lines.append(f"lambda1 = {format_float(roots.lambda1)}")
            lines.append(
                f"lambda2 = {format_float(roots.lambda2.real)} "
                f"+ {format_float(roots.lambda2.imag)}i"
            )
            lines.append(f"root_regime = {roots.regime.value}")
        except DegenerateCubic:
            lines.append("lambda1 = unavailable (degenerate cubic)")
    return lines


def simulate_run(run: RunConfig, out: Path) -> None:
    """Produce the artifacts requested by the run config under `out`."""
    out.mkdir(parents=True, exist_ok=True)
    law, hist = _integrate(run)

    if "trajectory" in run.outputs:
        csvio.write_history(out / "trajectory.csv", hist)

    if "snapshots" in run.outputs and run.snapshot_times:
        x_lo, x_hi, nx = run.snapshot_grid
        grid = np.linspace(x_lo, x_hi, nx)
        data = (
            run.init.field_init
            if run.init.field_init is not None
            else WaveInitialData.zero()
        )
        for k, t_snap in enumerate(run.snapshot_times):
            snap = field_snapshot(hist.src, data, t_snap, grid, run.params)
            csvio.write_snapshot(out / f"snapshot_{k:03d}.csv", snap)

    if "roots" in run.outputs:
        try:
            roots = wide_memory_roots(run.params)
            text = (
                f"lambda1 = {format_float(roots.lambda1)}\n"
                f"lambda2 = {format_float(roots.lambda2.real)} "
                f"+ {format_float(roots.lambda2.imag)}i\n"
                f"regime = {roots.regime.value}\n"
            )
        except DegenerateCubic as exc:
            text = f"degenerate: {exc}\n"
        (out / "roots.txt").write_text(text, newline="\n")

    (out / "summary.txt").write_text("\n".join(_summary_lines(run, hist)) + "\n", newline="\n")


def cmd_simulate(args: argparse.Namespace) -> int:
    run = _load_run(args)
    out = Path(args.out)
    simulate_run(run, out)
    print(f"wrote {', '.join(sorted(f.name for f in out.iterdir()))} to {out}")
    return 0


def cmd_roots(args: argparse.Namespace) -> int:
    run = _load_run(args)
    p = validate_params(run.params)
    roots = wide_memory_roots(p)
    print(f"lambda1 = {format_float(roots.lambda1)}")
    print(
        f"lambda2 = {format_float(roots.lambda2.real)} + {format_float(roots.lambda2.imag)}i"
    )
    print("lambda3 = conj(lambda2)")
    print(f"regime = {roots.regime.value}")
    print(f"habitual stability = {habitual_self_acceleration(p).value}")
    return 0


def cmd_reflect(args: argparse.Namespace) -> int:
    run = _load_run(args)
    p = run.params
    if run.lattice is None:
        raise ConfigError("reflect needs lattice_* keys in the configuration")
    frequency = run.incident_frequency_factor * p.omega
    sc = ReflectionScenario.for_params(
        p, resonant_incident(p, run.incident_amplitude, frequency)
    )
    report = verify_rejection(sc, p, run.lattice, run.horizon, run.law())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csvio.write_rejection(out / "rejection.csv", report)
    print(report.verdict_line())
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    run_settings = load_settings(args.preset, args.config)
    values = _sweep_values(args)
    if not values:
        raise ConfigError("sweep range is empty")
    param = args.param
    rows = []
    for value in values:
        settings = dict(run_settings)
        settings[param] = value
        run = build_run_config(settings)
        _, hist = _integrate(run)
        tail = hist.t_grid >= 0.75 * float(hist.t_grid[-1])
        stability = habitual_self_acceleration(run.params)
        rows.append(
            (
                value,
                float(hist.q[-1]),
                float(np.max(np.abs(hist.q))),
                fit_log_slope(hist.t_grid[tail], hist.q[tail]),
                1.0 if stability.name == "SELF_ACCELERATING" else 0.0,
            )
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    header = f"{param},final_q,max_abs_q,fitted_rate,self_accelerating"
    lines = [header]
    for row in rows:
        lines.append(",".join(format_float(v) for v in row))
    path.write_text("\n".join(lines) + "\n", newline="\n")
    print(f"wrote {len(rows)} rows to {path}")
    return 0


def _sweep_values(args: argparse.Namespace) -> list[float]:
    if args.values:
        return [float(v) for v in args.values.split(",") if v.strip()]
    if args.start is None or args.stop is None or args.count is None:
        raise ConfigError("sweep needs either --values or --start/--stop/--count")
    if args.count < 1:
        return []
    if args.count == 1:
        return [args.start]
    step = (args.stop - args.start) / (args.count - 1)
    return [args.start + k * step for k in range(args.count)]


def cmd_verify(args: argparse.Namespace) -> int:
    from .acceptance import run_all

    only = None
    if args.only:
        only = [int(tok) for tok in args.only.split(",") if tok.strip()]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    results = run_all(only=only, out_dir=out)
    lines = [r.line() for r in results]
    for line in lines:
        print(line)
    n_pass = sum(r.passed for r in results)
    tally = f"{n_pass}/{len(results)} criteria passed"
    print(tally)
    (out / "report.txt").write_text("\n".join(lines + [tally]) + "\n", newline="\n")
    return 0 if n_pass == len(results) else 1


def _load_run(args: argparse.Namespace) -> RunConfig:
    settings = load_settings(getattr(args, "preset", None), getattr(args, "config", None))
    if getattr(args, "dt", None) is not None:
        settings["dt"] = args.dt
    if getattr(args, "horizon", None) is not None:
        settings["horizon"] = args.horizon
    return build_run_config(settings)


def _add_run_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="path to a key = value configuration file")
    sub.add_argument("--preset", help=f"named preset, one of {sorted(PRESETS)}")
    sub.add_argument("--out", default="out", help="output directory (created if missing)")
    sub.add_argument("--dt", type=float, help="time step override")
    sub.add_argument("--horizon", type=float, help="horizon override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brl",
        description="Oscillator-field point-interaction lab: simulate, analyse, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate a model and write CSV artifacts")
    _add_run_options(sim)
    sim.set_defaults(func=cmd_simulate)

    roots = sub.add_parser("roots", help="characteristic roots of the wide-memory cubic")
    _add_run_options(roots)
    roots.set_defaults(func=cmd_roots)

    refl = sub.add_parser("reflect", help="run a complete-reflection lattice check")
    _add_run_options(refl)
    refl.set_defaults(func=cmd_reflect)

    sweep = sub.add_parser("sweep", help="grid sweep over one named parameter")
    _add_run_options(sweep)
    sweep.add_argument("--param", required=True, help="configuration key to sweep")
    sweep.add_argument("--values", help="comma-separated explicit values")
    sweep.add_argument("--start", type=float)
    sweep.add_argument("--stop", type=float)
    sweep.add_argument("--count", type=int)
    sweep.set_defaults(func=cmd_sweep)

    verify = sub.add_parser("verify", help="run the acceptance suite")
    verify.add_argument("--only", help="comma-separated criterion indices (default: all)")
    verify.add_argument("--out", default="verify_out")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BrlError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
