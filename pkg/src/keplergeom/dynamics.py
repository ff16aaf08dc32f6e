"""Equation of motion for the attractive inverse-square field and its integrators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InsufficientCoverage, KeplerError, NotBound, SingularPosition
from .vector import Vec3, cross, dot, plane_frame

__all__ = [
    "KeplerSystem",
    "OrbitState",
    "Trajectory",
    "acceleration",
    "step_rk4",
    "step_verlet",
    "integrate",
    "measure_period",
    "analytic_period",
    "default_dt",
    "METHODS",
]

# abort when |r| drops below this fraction of the bound-motion radius -k/H
CLOSE_APPROACH = 1e-9
STEPS_PER_PERIOD = 10_000
# minimum steps per periapsis time scale sqrt(r_p^3 m / k)
STEPS_PER_PERIAPSIS = 100


@dataclass(frozen=True)
class KeplerSystem:
    """Particle mass ``m`` and attractive coupling ``k`` (force ``-k r/r^3``)."""

    m: float = 1.0
    k: float = 1.0

    def __post_init__(self):
        for name in ("m", "k"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0.0):
                raise KeplerError(f"{name} must be finite and > 0, got {name}={val!r}")


@dataclass(frozen=True)
class OrbitState:
    r: Vec3
    v: Vec3

    def __post_init__(self):
        if self.r.norm() == 0.0:
            raise SingularPosition("position at the force center r=(0,0,0)")


def acceleration(sys: KeplerSystem, r: Vec3) -> Vec3:
    rn = r.norm()
    if rn == 0.0:
        raise SingularPosition("acceleration evaluated at r=(0,0,0)")
    return r * (-sys.k / (sys.m * rn**3))


def _accel(mu: float, x: float, y: float, z: float) -> tuple[float, float, float]:
    r2 = x * x + y * y + z * z
    if r2 == 0.0:
        raise SingularPosition("acceleration evaluated at r=(0,0,0)")
    f = -mu / (r2 * math.sqrt(r2))
    return f * x, f * y, f * z


def _rk4(mu, x, y, z, vx, vy, vz, h):
    h2 = 0.5 * h
    a1x, a1y, a1z = _accel(mu, x, y, z)
    x2, y2, z2 = x + h2 * vx, y + h2 * vy, z + h2 * vz
    v2x, v2y, v2z = vx + h2 * a1x, vy + h2 * a1y, vz + h2 * a1z
    a2x, a2y, a2z = _accel(mu, x2, y2, z2)
    x3, y3, z3 = x + h2 * v2x, y + h2 * v2y, z + h2 * v2z
    v3x, v3y, v3z = vx + h2 * a2x, vy + h2 * a2y, vz + h2 * a2z
    a3x, a3y, a3z = _accel(mu, x3, y3, z3)
    x4, y4, z4 = x + h * v3x, y + h * v3y, z + h * v3z
    v4x, v4y, v4z = vx + h * a3x, vy + h * a3y, vz + h * a3z
    a4x, a4y, a4z = _accel(mu, x4, y4, z4)
    h6 = h / 6.0
    return (
        x + h6 * (vx + 2.0 * v2x + 2.0 * v3x + v4x),
        y + h6 * (vy + 2.0 * v2y + 2.0 * v3y + v4y),
        z + h6 * (vz + 2.0 * v2z + 2.0 * v3z + v4z),
        vx + h6 * (a1x + 2.0 * a2x + 2.0 * a3x + a4x),
        vy + h6 * (a1y + 2.0 * a2y + 2.0 * a3y + a4y),
        vz + h6 * (a1z + 2.0 * a2z + 2.0 * a3z + a4z),
    )


def _verlet(mu, x, y, z, vx, vy, vz, h):
    ax, ay, az = _accel(mu, x, y, z)
    h2 = 0.5 * h
    hx, hy, hz = vx + h2 * ax, vy + h2 * ay, vz + h2 * az
    x, y, z = x + h * hx, y + h * hy, z + h * hz
    ax, ay, az = _accel(mu, x, y, z)
    return x, y, z, hx + h2 * ax, hy + h2 * ay, hz + h2 * az


METHODS = {"rk4": _rk4, "verlet": _verlet}


def _step(kernel, sys: KeplerSystem, state: OrbitState, dt: float) -> OrbitState:
    out = kernel(sys.k / sys.m, *state.r, *state.v, dt)
    return OrbitState(Vec3(*out[:3]), Vec3(*out[3:]))


def step_rk4(sys: KeplerSystem, state: OrbitState, dt: float) -> OrbitState:
    """One classical fourth-order Runge-Kutta step."""
    return _step(_rk4, sys, state, dt)


def step_verlet(sys: KeplerSystem, state: OrbitState, dt: float) -> OrbitState:
    """One velocity-Verlet step (symplectic, time-reversible, second order).

    A negative *dt* steps backwards in time.
    """
    return _step(_verlet, sys, state, dt)


class Trajectory:
    """Uniformly sampled solution ``t_i = i*dt``, stored as numpy arrays.

    ``t`` has shape (N,), ``r`` and ``v`` shape (N, 3). Iterating yields
    ``(t, OrbitState)`` pairs.
    """

    def __init__(self, system: KeplerSystem, dt: float, r: np.ndarray, v: np.ndarray):
        self.system = system
        self.dt = float(dt)
        self.r = np.asarray(r, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.t = np.arange(len(self.r)) * self.dt

    def __len__(self) -> int:
        return len(self.t)

    def head(self, n: int) -> Trajectory:
        """The first *n* samples."""
        return Trajectory(self.system, self.dt, self.r[:n], self.v[:n])

    def state(self, i: int) -> OrbitState:
        return OrbitState(Vec3.of(self.r[i]), Vec3.of(self.v[i]))

    @property
    def samples(self) -> list[tuple[float, OrbitState]]:
        return list(self)

    def __iter__(self) -> Iterator[tuple[float, OrbitState]]:
        for i in range(len(self)):
            yield float(self.t[i]), self.state(i)


def _energy(sys: KeplerSystem, state: OrbitState) -> float:
    return 0.5 * sys.m * dot(state.v, state.v) - sys.k / state.r.norm()


def _chord_dist2(p, q) -> float:
    """Squared distance from the origin to the segment between two sampled positions.

    Catches steps that jump across the center without landing near it.
    """
    px, py, pz = p[0], p[1], p[2]
    dx, dy, dz = q[0] - px, q[1] - py, q[2] - pz
    dd = dx * dx + dy * dy + dz * dz
    lam = 0.0 if dd == 0.0 else min(1.0, max(0.0, -(px * dx + py * dy + pz * dz) / dd))
    x, y, z = px + lam * dx, py + lam * dy, pz + lam * dz
    return x * x + y * y + z * z


def integrate(
    sys: KeplerSystem,
    state0: OrbitState,
    dt: float,
    n_steps: int,
    method: str = "rk4",
) -> Trajectory:
    if not dt > 0.0:
        raise KeplerError(f"dt must be > 0, got dt={dt!r}")
    if n_steps < 1:
        raise KeplerError(f"n_steps must be >= 1, got n_steps={n_steps!r}")
    try:
        kernel = METHODS[method]
    except KeyError:
        raise KeplerError(f"unknown integrator {method!r}; choose from {sorted(METHODS)}") from None

    H = _energy(sys, state0)
    scale = -sys.k / H if H < 0.0 else state0.r.norm()
    rmin2 = (CLOSE_APPROACH * scale) ** 2

    mu = sys.k / sys.m
    out = np.empty((n_steps + 1, 6))
    s = (*state0.r, *state0.v)
    out[0] = s
    for i in range(1, n_steps + 1):
        try:
            s = kernel(mu, *s, dt)
        except SingularPosition as exc:
            raise SingularPosition(f"step {i}: {exc}", step=i) from None
        d2 = _chord_dist2(out[i - 1], s)
        if d2 < rmin2:
            raise SingularPosition(
                f"step {i}: close approach |r|={math.sqrt(d2)!r} < {CLOSE_APPROACH}*{scale!r}",
                step=i,
            )
        out[i] = s
    if not np.all(np.isfinite(out)):
        raise SingularPosition("integration produced non-finite values")
    return Trajectory(sys, dt, out[:, :3], out[:, 3:])


def analytic_period(sys: KeplerSystem, a: float) -> float:
    """Period of a bound orbit with semi-major axis *a*: ``2 pi sqrt(m a^3 / k)``."""
    if not a > 0.0:
        raise KeplerError(f"semi-major axis must be > 0, got a={a!r}")
    return 2.0 * math.pi * math.sqrt(sys.m * a**3 / sys.k)


def default_dt(sys: KeplerSystem, state: OrbitState) -> float:
    """``T_est / 10^4``, ``T_est`` from the semi-major axis ``-k/(2H)``.

    For highly eccentric orbits (e > 0.84) the step is further capped at
    1/100 of the periapsis time scale, which uniform T/10^4 under-resolves.
    """
    H = _energy(sys, state)
    if H >= 0.0:
        raise NotBound(H)
    a = -sys.k / (2.0 * H)
    dt = analytic_period(sys, a) / STEPS_PER_PERIOD
    L = sys.m * cross(state.r, state.v)
    L2 = dot(L, L)
    # periapsis from a and the semi-latus rectum L^2/(m k)
    ecc = math.sqrt(max(0.0, 1.0 - L2 / (sys.m * sys.k * a)))
    r_p = a * (1.0 - ecc)
    if r_p > 0.0:
        dt = min(dt, math.sqrt(sys.m * r_p**3 / sys.k) / STEPS_PER_PERIAPSIS)
    return dt


def unwrapped_angles(traj: Trajectory) -> np.ndarray:
    """Accumulated in-plane angle of r, measured from r(0), counterclockwise about L(0)."""
    s0 = traj.state(0)
    frame = plane_frame(cross(s0.r, s0.v))
    u = s0.r.unit()
    w = cross(frame.axis, u)
    x = traj.r @ np.array(u.tuple())
    y = traj.r @ np.array(w.tuple())
    return np.unwrap(np.arctan2(y, x))


def measure_period(traj: Trajectory) -> float:
    """Time for the accumulated angle to advance by 2pi, linearly interpolated."""
    H = _energy(traj.system, traj.state(0))
    if H >= 0.0:
        raise NotBound(H)
    theta = unwrapped_angles(traj)
    target = 2.0 * math.pi
    idx = np.nonzero(theta >= target)[0]
    if len(idx) == 0:
        raise InsufficientCoverage(
            f"angle reached only {theta[-1]!r} rad over {len(traj)} samples; need 2pi"
        )
    i = int(idx[0])
    frac = (target - theta[i - 1]) / (theta[i] - theta[i - 1])
    return float(traj.t[i - 1] + frac * traj.dt)
