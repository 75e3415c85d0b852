"""CSV serialization for trajectories, snapshots and study tables.

Every number is written with 17 significant digits so parsing and re-emitting
a file reproduces it byte for byte; line endings are fixed to "\\n".  These
are the wire formats consumed by external plotting, so schemas are frozen:

    point history      t,q,qdot,Q
    field snapshot     x,u
    convergence table  dx,dt,max_err,observed_order
    rejection report   t,Q,shadow_max
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

from .dynamics import PointHistory
from .field import FieldSnapshot, SourceHistory
from .lattice import ConvergenceRow
from .reflection import RejectionReport


def format_float(x: float) -> str:
    return f"{x:.17g}"


def _write_table(path: Path, header: str, columns: Iterable[np.ndarray]) -> None:
    cols = [np.asarray(c, dtype=float) for c in columns]
    lines = [header]
    for row in zip(*cols):
        lines.append(",".join(format_float(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", newline="\n")


def _read_table(path: Path, expected_header: str) -> list[np.ndarray]:
    text = Path(path).read_text()
    lines = [ln for ln in text.split("\n") if ln]
    if not lines or lines[0] != expected_header:
        raise ValueError(
            f"{path}: expected header {expected_header!r}, got {lines[:1]!r}"
        )
    ncol = expected_header.count(",") + 1
    data = np.array(
        [[float(v) for v in ln.split(",")] for ln in lines[1:]], dtype=float
    ).reshape(-1, ncol)
    return [data[:, k] for k in range(ncol)]


def write_history(path: Path, hist: PointHistory) -> None:
    _write_table(path, "t,q,qdot,Q", (hist.t_grid, hist.q, hist.qdot, hist.big_q))


def read_history(path: Path) -> PointHistory:
    t, q, qdot, big_q = _read_table(path, "t,q,qdot,Q")
    dt = float(t[1] - t[0])
    law_free_src = SourceHistory.from_samples(dt, np.zeros_like(q))
    return PointHistory(t_grid=t, q=q, qdot=qdot, big_q=big_q, src=law_free_src)


def write_snapshot(path: Path, snap: FieldSnapshot) -> None:
    _write_table(path, "x,u", (snap.x_grid, snap.u))


def read_snapshot(path: Path, t: float = 0.0) -> FieldSnapshot:
    x, u = _read_table(path, "x,u")
    return FieldSnapshot(t=t, x_grid=x, u=u)


def write_convergence(path: Path, rows: list[ConvergenceRow]) -> None:
    _write_table(
        path,
        "dx,dt,max_err,observed_order",
        (
            [r.dx for r in rows],
            [r.dt for r in rows],
            [r.max_err for r in rows],
            [r.observed_order for r in rows],
        ),
    )


def read_convergence(path: Path) -> list[ConvergenceRow]:
    dx, dt, err, order = _read_table(path, "dx,dt,max_err,observed_order")
    return [
        ConvergenceRow(dx=float(a), dt=float(b), max_err=float(c), observed_order=float(d))
        for a, b, c, d in zip(dx, dt, err, order)
    ]


def write_rejection(path: Path, report: RejectionReport) -> None:
    _write_table(
        path, "t,Q,shadow_max", (report.t_grid, report.q_readout, report.shadow_max)
    )


def reemit(path_in: Path, path_out: Path) -> None:
    """Parse any brl CSV and write it back; output must be byte-identical."""
    text = Path(path_in).read_text()
    lines = [ln for ln in text.split("\n") if ln]
    header = lines[0]
    cols = list(
        zip(*[[float(v) for v in ln.split(",")] for ln in lines[1:]])
    )
    _write_table(Path(path_out), header, [np.array(c) for c in cols])
