"""Velocity-space picture: the hodograph circle and its rotated copy.

The velocity ``v`` of a bound or unbound Kepler orbit moves on a circle of
radius ``k/L`` centred at ``i K/(m L)``, where ``i`` is the quarter turn about
``L/|L|``. The rotation axis is always the instantaneous ``L``, so clockwise
orbits need no special case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .conserved import angular_momentum, conserved_series, energy, lrl_vector
from .dynamics import KeplerSystem, OrbitState, Trajectory, unwrapped_angles
from .errors import DegenerateOrbit, NotBound
from .fitting import fit_circle_2d
from .vector import PlaneFrame, Vec3, quarter_turn

__all__ = [
    "HodographFit",
    "predicted_center",
    "predicted_radius",
    "fit_circle",
    "membership_residual",
    "dv_dtheta_residual",
    "construct_D_residual",
    "tangency_residual",
    "scaling_lambda_check",
    "lambda_factor",
]


@dataclass(frozen=True)
class HodographFit:
    center: Vec3
    radius: float
    max_residual: float


def _L(sys: KeplerSystem, state: OrbitState) -> Vec3:
    L = angular_momentum(state, sys.m)
    if L.norm() == 0.0:
        raise DegenerateOrbit("radial orbit (L = 0): hodograph is undefined")
    return L


def predicted_center(sys: KeplerSystem, state: OrbitState) -> Vec3:
    L = _L(sys, state)
    Ln = L.norm()
    return quarter_turn(lrl_vector(sys, state), L / Ln) / (sys.m * Ln)


def predicted_radius(sys: KeplerSystem, state: OrbitState) -> float:
    return sys.k / _L(sys, state).norm()


def fit_circle(velocities: Sequence[Vec3] | np.ndarray, frame: PlaneFrame) -> HodographFit:
    """Least-squares circle through velocity points in the plane of *frame*."""
    V = np.array([tuple(v) for v in velocities], dtype=float)
    V = V.reshape(-1, 3)
    u, w = np.array(frame.u.tuple()), np.array(frame.w.tuple())
    x, y = V @ u, V @ w
    cx, cy, rad = fit_circle_2d(x, y)
    resid = np.abs(np.hypot(x - cx, y - cy) - rad).max()
    return HodographFit(frame.point(cx, cy), float(rad), float(resid))


def _traj_L(traj: Trajectory) -> tuple[np.ndarray, float]:
    L = traj.system.m * np.cross(traj.r[0], traj.v[0])
    Ln = float(np.linalg.norm(L))
    if Ln == 0.0:
        raise DegenerateOrbit("radial orbit (L = 0): hodograph is undefined")
    return L, Ln


def membership_residual(traj: Trajectory) -> float:
    """Max of ``||v - i K0/(m L0)| - k/L0|`` over samples, normalized by ``k/L0``.

    Uses the initial state's prediction, so it measures how well the
    integrated velocities stay on the predicted circle.
    """
    s0 = traj.state(0)
    c = np.array(predicted_center(traj.system, s0).tuple())
    rad = predicted_radius(traj.system, s0)
    dist = np.linalg.norm(traj.v - c, axis=1)
    return float(np.abs(dist - rad).max() / rad)


def dv_dtheta_residual(traj: Trajectory) -> float:
    """Central-difference ``dv/dtheta`` against ``-k r/(|r| L)``, normalized by ``k/L``."""
    if len(traj) < 3:
        raise DegenerateOrbit("need at least 3 samples for central differences")
    sys = traj.system
    H = energy(sys, traj.state(0))
    if H >= 0.0:
        raise NotBound(H)
    _, Ln = _traj_L(traj)
    theta = unwrapped_angles(traj)
    dv = (traj.v[2:] - traj.v[:-2]) / (theta[2:] - theta[:-2])[:, None]
    r = traj.r[1:-1]
    expected = -(sys.k / Ln) * r / np.linalg.norm(r, axis=1)[:, None]
    return float(np.linalg.norm(dv - expected, axis=1).max() / (sys.k / Ln))


def construct_D_residual(sys: KeplerSystem, traj: Trajectory) -> float:
    """Rotate the hodograph clockwise and shift by ``-K/(mL)``; distance from ``k/L``.

    Also checks ``k r/(rL) + K/(mL) = -i v`` sample by sample. Returns the
    larger of the two, relative to ``k/L``.
    """
    H = energy(sys, traj.state(0))
    if H >= 0.0:
        raise NotBound(H)
    L0, Ln = _traj_L(traj)
    axis = L0 / Ln
    K = conserved_series(traj)["K"]
    rad = sys.k / Ln
    # clockwise quarter turn: -axis x v
    mapped = -np.cross(axis, traj.v) - K / (sys.m * Ln)
    circle = np.abs(np.linalg.norm(mapped, axis=1) - rad).max()
    r = traj.r
    lhs = (sys.k / Ln) * r / np.linalg.norm(r, axis=1)[:, None] + K / (sys.m * Ln)
    ident = np.linalg.norm(lhs + np.cross(axis, traj.v), axis=1).max()
    return float(max(circle, ident) / rad)


def tangency_residual(sys: KeplerSystem, traj: Trajectory) -> float:
    """Max ``|v_hat . d_hat|`` with ``d`` running from ``-K/(mL)`` to ``k r/(rL)``."""
    H = energy(sys, traj.state(0))
    if H >= 0.0:
        raise NotBound(H)
    _, Ln = _traj_L(traj)
    K = conserved_series(traj)["K"]
    r = traj.r
    d = (sys.k / Ln) * r / np.linalg.norm(r, axis=1)[:, None] + K / (sys.m * Ln)
    d_hat = d / np.linalg.norm(d, axis=1)[:, None]
    v_hat = traj.v / np.linalg.norm(traj.v, axis=1)[:, None]
    return float(np.abs(np.einsum("ij,ij->i", v_hat, d_hat)).max())


def scaling_lambda_check(sys: KeplerSystem, state: OrbitState) -> float:
    """Max relative discrepancy of the two scaling relations with ``lambda = -L/H``.

    ``-lambda K/(mL) = K/(mH)`` and ``lambda k/L = -k/H``.
    """
    L = _L(sys, state)
    H = energy(sys, state)
    if H >= 0.0:
        raise NotBound(H)
    Ln = L.norm()
    lam = -Ln / H
    K = lrl_vector(sys, state)
    t = K / (sys.m * H)
    lhs = K * (-lam / (sys.m * Ln))
    two_a = -sys.k / H
    foci = (lhs - t).norm() / max(t.norm(), two_a)
    axis = abs(lam * sys.k / Ln - two_a) / two_a
    return max(foci, axis)


def lambda_factor(sys: KeplerSystem, state: OrbitState) -> float:
    H = energy(sys, state)
    if H >= 0.0:
        raise NotBound(H)
    return -_L(sys, state).norm() / H

