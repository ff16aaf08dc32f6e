"""The reflection construction of the second focus and the orbit ellipse it yields.

Given a bound state, the position is pushed radially out to the circle of
radius ``-k/H`` (point ``s``) and mirrored in the tangent line of the orbit.
The mirror image is the second focus ``t``; the gardener identity
``|t - r| + |r| = -k/H`` then makes the orbit an ellipse with major axis
``2a = -k/H``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .conserved import angular_momentum, conserved_series, energy, lrl_vector
from .dynamics import (
    KeplerSystem,
    OrbitState,
    Trajectory,
    analytic_period,
    default_dt,
    integrate,
    measure_period,
)
from .errors import DegenerateOrbit, KeplerError, NotBound
from .fitting import fit_conic_2d
from .vector import ZERO, Vec3, cross, dot, plane_frame

__all__ = [
    "Line3",
    "EllipseGeometry",
    "Kepler3Row",
    "projection_s",
    "tangent_line",
    "normal_vector",
    "reflect_in_tangent",
    "gardener_residual",
    "ellipse_geometry",
    "polar_conic_residual",
    "kepler3_check",
    "conic_fit_check",
    "residual_series",
]

# |K| below this fraction of k*m counts as a circular orbit
CIRCULAR_K = 1e-12


@dataclass(frozen=True)
class Line3:
    point: Vec3
    direction: Vec3

    def __post_init__(self):
        if abs(self.direction.norm() - 1.0) > 1e-12:
            raise KeplerError("Line3 direction must be a unit vector")


@dataclass(frozen=True)
class EllipseGeometry:
    a: float
    b: float
    c: float
    focus1: Vec3
    focus2: Vec3
    center: Vec3
    eccentricity: float
    period: float


class Kepler3Row(NamedTuple):
    a: float
    T_measured: float
    ratio: float


def _bound_energy(sys: KeplerSystem, state: OrbitState) -> float:
    H = energy(sys, state)
    if H >= 0.0:
        raise NotBound(H)
    return H


def _require_plane(sys: KeplerSystem, state: OrbitState) -> Vec3:
    L = angular_momentum(state, sys.m)
    if L.norm() == 0.0:
        raise DegenerateOrbit("radial orbit (L = 0): no tangent/normal pair")
    return L


def projection_s(sys: KeplerSystem, state: OrbitState) -> Vec3:
    """Radial projection of r onto the circle of radius ``-k/H`` about the center."""
    _require_plane(sys, state)
    H = _bound_energy(sys, state)
    return state.r * (-sys.k / (state.r.norm() * H))


def tangent_line(state: OrbitState) -> Line3:
    vn = state.v.norm()
    if vn == 0.0:
        raise DegenerateOrbit("zero velocity has no tangent direction")
    return Line3(state.r, state.v / vn)


def normal_vector(sys: KeplerSystem, state: OrbitState) -> Vec3:
    """``n = p x L``, perpendicular to the tangent line inside the orbital plane."""
    L = _require_plane(sys, state)
    return cross(state.v * sys.m, L)


def reflect_in_tangent(sys: KeplerSystem, state: OrbitState) -> Vec3:
    """Mirror image of ``s`` in the tangent line: ``s - 2((s - r).n) n / n^2``."""
    s = projection_s(sys, state)
    n = normal_vector(sys, state)
    return s - n * (2.0 * dot(s - state.r, n) / dot(n, n))


def gardener_residual(sys: KeplerSystem, state: OrbitState) -> float:
    """``|t - r| + |r| - (-k/H)`` with t from the reflection construction."""
    H = _bound_energy(sys, state)
    t = reflect_in_tangent(sys, state)
    return (t - state.r).norm() + state.r.norm() + sys.k / H


def ellipse_geometry(sys: KeplerSystem, state: OrbitState) -> EllipseGeometry:
    _require_plane(sys, state)
    H = _bound_energy(sys, state)
    K = lrl_vector(sys, state)
    a = -sys.k / (2.0 * H)
    Kn = K.norm()
    if Kn < CIRCULAR_K * sys.k * sys.m:
        c, ecc, focus2 = 0.0, 0.0, ZERO
    else:
        c = Kn / (2.0 * sys.m * abs(H))
        ecc = Kn / (sys.m * sys.k)
        focus2 = K / (sys.m * H)
    b = math.sqrt(max(a * a - c * c, 0.0))
    return EllipseGeometry(
        a=a,
        b=b,
        c=c,
        focus1=ZERO,
        focus2=focus2,
        center=focus2 / 2.0,
        eccentricity=ecc,
        period=analytic_period(sys, a),
    )


def polar_conic_residual(sys: KeplerSystem, state: OrbitState) -> float:
    """``r (1 + e cos theta) - L^2/(m k)``, theta measured from K."""
    L = _require_plane(sys, state)
    _bound_energy(sys, state)
    K = lrl_vector(sys, state)
    rn = state.r.norm()
    p = dot(L, L) / (sys.m * sys.k)
    Kn = K.norm()
    if Kn < CIRCULAR_K * sys.k * sys.m:
        return rn - p
    ecc = Kn / (sys.m * sys.k)
    frame = plane_frame(L)
    # signed angle about L; only its cosine enters
    theta = math.atan2(dot(cross(K, state.r), frame.axis), dot(K, state.r))
    return rn * (1.0 + ecc * math.cos(theta)) - p


def kepler3_check(
    sys: KeplerSystem,
    states: Sequence[OrbitState],
    periods: float = 1.2,
) -> list[Kepler3Row]:
    """Integrate each state (RK4, default step), measure T and return ``T^2/a^3``."""
    rows = []
    for state in states:
        H = _bound_energy(sys, state)
        a = -sys.k / (2.0 * H)
        dt = default_dt(sys, state)
        n = int(math.ceil(periods * analytic_period(sys, a) / dt))
        T = measure_period(integrate(sys, state, dt, n, "rk4"))
        rows.append(Kepler3Row(a, T, T * T / a**3))
    return rows


def conic_fit_check(traj: Trajectory) -> tuple[float, float]:
    """Relative errors of (a, b) from a conic fit of raw positions vs the formulas."""
    geom = ellipse_geometry(traj.system, traj.state(0))
    s0 = traj.state(0)
    frame = plane_frame(angular_momentum(s0, traj.system.m))
    x = traj.r @ np.array(frame.u.tuple())
    y = traj.r @ np.array(frame.w.tuple())
    fit = fit_conic_2d(x, y)
    return abs(fit.a - geom.a) / geom.a, abs(fit.b - geom.b) / geom.b


def residual_series(traj: Trajectory) -> dict[str, np.ndarray]:
    """Per-sample gardener, polar-conic and second-focus drift residuals.

    Vectorized equivalents of :func:`gardener_residual` and
    :func:`polar_conic_residual`; ``t_drift`` is ``|t_i - t_0|``.
    """
    sys = traj.system
    m, k = sys.m, sys.k
    q = conserved_series(traj)
    H, L, K = q["H"], q["L"], q["K"]
    if np.any(H >= 0.0):
        raise NotBound(float(H.max()))
    r = traj.r
    rn = np.linalg.norm(r, axis=1)
    s = r * (-k / (rn * H))[:, None]
    n = m * np.cross(traj.v, L)
    nn = np.einsum("ij,ij->i", n, n)
    if np.any(nn == 0.0):
        raise DegenerateOrbit("radial orbit (L = 0): no tangent/normal pair")
    proj = np.einsum("ij,ij->i", s - r, n) / nn
    t = s - 2.0 * proj[:, None] * n
    gardener = np.linalg.norm(t - r, axis=1) + rn + k / H
    # r (1 + e cos theta) = r + r.K/(m k)
    polar = rn + np.einsum("ij,ij->i", r, K) / (m * k) - np.einsum("ij,ij->i", L, L) / (m * k)
    t_drift = np.linalg.norm(t - t[0], axis=1)
    return {"t": t, "gardener": gardener, "polar_conic": polar, "t_drift": t_drift}
