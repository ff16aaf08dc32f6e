"""Flat-file outputs: CSV tables, the key=value geometry report, and SVG figures."""

from __future__ import annotations

import csv
from typing import IO, Iterable, Sequence

import numpy as np

from .conserved import conserved_series, lrl_vector
from .dynamics import KeplerSystem, Trajectory, unwrapped_angles
from .euclid import ellipse_geometry, residual_series
from .hodograph import predicted_center, predicted_radius
from .newton import NewtonReport
from .vector import Vec3, plane_frame

__all__ = [
    "fmt",
    "write_csv",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "write_conserved_csv",
    "write_residuals_csv",
    "write_hodograph_csv",
    "write_newton_csv",
    "geometry_report",
    "orbit_svg",
]

TRAJECTORY_HEADER = ("t", "rx", "ry", "rz", "vx", "vy", "vz")
CONSERVED_HEADER = ("t", "H", "Lx", "Ly", "Lz", "Kx", "Ky", "Kz")
RESIDUALS_HEADER = ("t", "gardener", "polar_conic", "t_drift")
HODOGRAPH_HEADER = ("theta", "vx", "vy", "vz")
NEWTON_HEADER = ("t", "s", "rx", "ry", "ratio_formula", "ratio_numeric", "Q")


def fmt(x: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    return format(float(x) + 0.0, ".17g")


def write_csv(fp: IO[str], header: Sequence[str], columns: Iterable[np.ndarray]) -> None:
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(header)
    table = np.column_stack(list(columns))
    for row in table:
        w.writerow([fmt(x) for x in row])


def write_trajectory_csv(traj: Trajectory, fp: IO[str]) -> None:
    write_csv(fp, TRAJECTORY_HEADER, [traj.t, traj.r, traj.v])


def read_trajectory_csv(fp: IO[str], system: KeplerSystem) -> Trajectory:
    rows = list(csv.reader(fp))
    if tuple(rows[0]) != TRAJECTORY_HEADER:
        raise ValueError(f"unexpected trajectory header {rows[0]!r}")
    data = np.array(rows[1:], dtype=float)
    dt = data[1, 0] - data[0, 0] if len(data) > 1 else 0.0
    return Trajectory(system, dt, data[:, 1:4], data[:, 4:7])


def write_conserved_csv(traj: Trajectory, fp: IO[str]) -> None:
    q = conserved_series(traj)
    write_csv(fp, CONSERVED_HEADER, [traj.t, q["H"], q["L"], q["K"]])


def write_residuals_csv(traj: Trajectory, fp: IO[str]) -> None:
    res = residual_series(traj)
    write_csv(
        fp, RESIDUALS_HEADER, [traj.t, res["gardener"], res["polar_conic"], res["t_drift"]]
    )


def write_hodograph_csv(traj: Trajectory, fp: IO[str]) -> None:
    write_csv(fp, HODOGRAPH_HEADER, [unwrapped_angles(traj), traj.v])


def write_newton_csv(report: NewtonReport, fp: IO[str]) -> None:
    s = report.samples
    write_csv(
        fp,
        NEWTON_HEADER,
        [
            np.array([x.t for x in s]),
            np.array([x.s for x in s]),
            np.array([x.r.x for x in s]),
            np.array([x.r.y for x in s]),
            np.array([x.ratio_formula for x in s]),
            np.array([x.ratio_numeric for x in s]),
            np.array([x.Q for x in s]),
        ],
    )


def _vec(v: Vec3) -> str:
    return ",".join(fmt(c) for c in v)


def geometry_report(sys: KeplerSystem, traj: Trajectory) -> str:
    """key=value block for the orbit of the trajectory's first sample."""
    state = traj.state(0)
    geom = ellipse_geometry(sys, state)
    q = conserved_series(traj)
    K = lrl_vector(sys, state)
    lines = [
        ("a", fmt(geom.a)),
        ("b", fmt(geom.b)),
        ("c", fmt(geom.c)),
        ("e", fmt(geom.eccentricity)),
        ("T", fmt(geom.period)),
        ("H", fmt(q["H"][0])),
        ("L", fmt(np.linalg.norm(q["L"][0]))),
        ("K", fmt(K.norm())),
        ("t", _vec(geom.focus2)),
    ]
    return "".join(f"{k}={v}\n" for k, v in lines)


def _svg_circle(cx, cy, r, style):
    return f'<circle cx="{cx:.4f}" cy="{cy:.4f}" r="{r:.4f}" {style}/>'


def _svg_path(xs, ys, style):
    pts = " ".join(f"{x:.4f},{y:.4f}" for x, y in zip(xs, ys))
    return f'<polyline points="{pts}" {style}/>'


def _svg_dot(x, y, label):
    return (
        f'<circle cx="{x:.4f}" cy="{y:.4f}" r="3" fill="black"/>'
        f'<text x="{x + 5:.4f}" y="{y - 5:.4f}" font-size="12">{label}</text>'
    )


class _Panel:
    """Maps plane coordinates into a square SVG box, y pointing up."""

    def __init__(self, x0: float, size: float, extent: float, cx: float, cy: float):
        self.x0, self.size = x0, size
        self.k = 0.45 * size / extent
        self.cx, self.cy = cx, cy

    def __call__(self, x, y):
        return (
            self.x0 + self.size / 2 + self.k * (np.asarray(x) - self.cx),
            self.size / 2 - self.k * (np.asarray(y) - self.cy),
        )


def orbit_svg(sys: KeplerSystem, traj: Trajectory, max_points: int = 2000) -> str:
    """Static two-panel figure.

    Left: orbit, the circle of radius -k/H about the center and both foci.
    Right: hodograph, its quarter-turned and shifted copy D, and the origin.
    """
    state = traj.state(0)
    geom = ellipse_geometry(sys, state)
    L = sys.m * np.cross(traj.r[0], traj.v[0])
    frame = plane_frame(Vec3.of(L))
    u, w = np.array(frame.u.tuple()), np.array(frame.w.tuple())
    stride = max(1, len(traj) // max_points)
    R = traj.r[::stride]
    V = traj.v[::stride]
    size = 400.0
    big = 2.0 * geom.a
    left = _Panel(0.0, size, big, 0.0, 0.0)

    hc = predicted_center(sys, state)
    hr = predicted_radius(sys, state)
    hx, hy = frame.coords(hc)
    ext = max(abs(hx), abs(hy)) + hr
    right = _Panel(size, size, ext, 0.0, 0.0)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {2 * size:.0f} {size:.0f}" '
        f'width="{2 * size:.0f}" height="{size:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{size}" y1="0" x2="{size}" y2="{size}" stroke="#ccc"/>',
    ]
    ox, oy = left(0.0, 0.0)
    parts.append(_svg_circle(ox, oy, left.k * big, 'fill="none" stroke="#888" stroke-dasharray="4 3"'))
    xs, ys = left(R @ u, R @ w)
    parts.append(_svg_path(xs, ys, 'fill="none" stroke="#1f4e9c" stroke-width="1.5"'))
    tx, ty = left(*frame.coords(geom.focus2))
    parts.append(_svg_dot(ox, oy, "0"))
    parts.append(_svg_dot(tx, ty, "t"))
    parts.append('<text x="10" y="20" font-size="14">orbit E, circle C</text>')

    ox2, oy2 = right(0.0, 0.0)
    cx2, cy2 = right(hx, hy)
    parts.append(_svg_circle(cx2, cy2, right.k * hr, 'fill="none" stroke="#888"'))
    parts.append(_svg_circle(ox2, oy2, right.k * hr, 'fill="none" stroke="#2a8a3a" stroke-dasharray="4 3"'))
    vx, vy = right(V @ u, V @ w)
    parts.append(_svg_path(vx, vy, 'fill="none" stroke="#b03030" stroke-width="1.5"'))
    parts.append(_svg_dot(ox2, oy2, "0"))
    parts.append(_svg_dot(cx2, cy2, "c"))
    parts.append(f'<text x="{size + 10}" y="20" font-size="14">hodograph H, circle D</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

