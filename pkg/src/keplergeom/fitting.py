"""Least-squares circle and conic fits used as independent geometric oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CollinearPoints, KeplerError

__all__ = ["fit_circle_2d", "fit_conic_2d", "ConicFit"]


def fit_circle_2d(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Kasa algebraic fit refined by one Gauss-Newton step on geometric distance.

    Returns ``(cx, cy, radius)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 3:
        raise CollinearPoints(f"need at least 3 points, got {len(x)}")
    # centering and scaling keep the normal system well conditioned
    x0, y0 = x.mean(), y.mean()
    scale = max(np.abs(x - x0).max(), np.abs(y - y0).max())
    if scale == 0.0:
        raise CollinearPoints("all points coincide")
    xs, ys = (x - x0) / scale, (y - y0) / scale

    A = np.column_stack([2.0 * xs, 2.0 * ys, np.ones_like(xs)])
    rhs = xs * xs + ys * ys
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        raise CollinearPoints("points are collinear; circle is undefined")
    (cx, cy, c), *_ = np.linalg.lstsq(A, rhs, rcond=None)
    rad = math.sqrt(c + cx * cx + cy * cy)

    dx, dy = xs - cx, ys - cy
    dist = np.hypot(dx, dy)
    J = np.column_stack([-dx / dist, -dy / dist, -np.ones_like(dist)])
    step, *_ = np.linalg.lstsq(J, -(dist - rad), rcond=None)
    cx, cy, rad = cx + step[0], cy + step[1], rad + step[2]
    return x0 + scale * cx, y0 + scale * cy, scale * rad


@dataclass(frozen=True)
class ConicFit:
    center: tuple[float, float]
    a: float
    b: float
    angle: float  # direction of the major axis, radians
    max_residual: float  # max algebraic residual of the normalized conic


def fit_conic_2d(x: np.ndarray, y: np.ndarray) -> ConicFit:
    """Direct least-squares fit of ``A x^2 + B xy + C y^2 + D x + E y + F = 0``.

    The coefficient vector is the right singular vector of the smallest
    singular value of the (normalized) design matrix. Only ellipses are
    accepted.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 5:
        raise KeplerError(f"need at least 5 points for a conic, got {len(x)}")
    x0, y0 = x.mean(), y.mean()
    scale = max(np.abs(x - x0).max(), np.abs(y - y0).max())
    xs, ys = (x - x0) / scale, (y - y0) / scale

    D = np.column_stack([xs * xs, xs * ys, ys * ys, xs, ys, np.ones_like(xs)])
    _, _, vt = np.linalg.svd(D, full_matrices=False)
    A, B, C, Dc, E, F = vt[-1]
    if B * B - 4.0 * A * C >= 0.0:
        raise KeplerError("fitted conic is not an ellipse")

    M = np.array([[A, B / 2.0], [B / 2.0, C]])
    cx, cy = np.linalg.solve(2.0 * M, [-Dc, -E])
    # value of the quadratic form at the center
    Fc = F + 0.5 * (Dc * cx + E * cy)
    evals, evecs = np.linalg.eigh(M)
    semi = np.sqrt(-Fc / evals)
    i_major = int(np.argmax(semi))
    major = evecs[:, i_major]
    resid = np.abs(D @ vt[-1]).max() / np.linalg.norm(vt[-1])
    return ConicFit(
        center=(x0 + scale * cx, y0 + scale * cy),
        a=float(scale * semi.max()),
        b=float(scale * semi.min()),
        angle=float(math.atan2(major[1], major[0])),
        max_residual=float(resid),
    )
