"""Energy, angular momentum, the LRL vector, and the conserved second focus."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import KeplerSystem, OrbitState, Trajectory
from .errors import NotBound, SingularPosition
from .vector import Vec3, cross, dot

__all__ = [
    "ConservedSet",
    "DriftReport",
    "energy",
    "angular_momentum",
    "lrl_vector",
    "focal_point_t",
    "conserved_set",
    "conserved_series",
    "drift_report",
]


@dataclass(frozen=True)
class ConservedSet:
    H: float
    L: Vec3
    K: Vec3
    t_point: Vec3 | None


@dataclass(frozen=True)
class DriftReport:
    max_rel_dH: float
    max_rel_dL: float
    max_rel_dK: float
    series: dict[str, np.ndarray] | None = None


def energy(sys: KeplerSystem, state: OrbitState) -> float:
    rn = state.r.norm()
    if rn == 0.0:
        raise SingularPosition("energy evaluated at r=(0,0,0)")
    return 0.5 * sys.m * dot(state.v, state.v) - sys.k / rn


def angular_momentum(state: OrbitState, m: float) -> Vec3:
    return cross(state.r, state.v * m)


def lrl_vector(sys: KeplerSystem, state: OrbitState) -> Vec3:
    """``K = p x L - k m r/|r|``; points to periapsis with length ``k m e``."""
    rn = state.r.norm()
    if rn == 0.0:
        raise SingularPosition("LRL vector evaluated at r=(0,0,0)")
    p = state.v * sys.m
    return cross(p, cross(state.r, p)) - state.r * (sys.k * sys.m / rn)


def focal_point_t(sys: KeplerSystem, state: OrbitState) -> Vec3:
    """Second focus of the orbit, ``K/(m H)``. Bound orbits only."""
    H = energy(sys, state)
    if H >= 0.0:
        raise NotBound(H)
    return lrl_vector(sys, state) / (sys.m * H)


def conserved_set(sys: KeplerSystem, state: OrbitState) -> ConservedSet:
    H = energy(sys, state)
    K = lrl_vector(sys, state)
    return ConservedSet(
        H=H,
        L=angular_momentum(state, sys.m),
        K=K,
        t_point=K / (sys.m * H) if H < 0.0 else None,
    )


def conserved_series(traj: Trajectory) -> dict[str, np.ndarray]:
    """Vectorized H (N,), L (N,3), K (N,3) along a trajectory."""
    m, k = traj.system.m, traj.system.k
    r, v = traj.r, traj.v
    rn = np.linalg.norm(r, axis=1)
    H = 0.5 * m * np.einsum("ij,ij->i", v, v) - k / rn
    L = m * np.cross(r, v)
    K = m * np.cross(v, L) - (k * m / rn)[:, None] * r
    return {"H": H, "L": L, "K": K}


def drift_report(traj: Trajectory, keep_series: bool = False) -> DriftReport:
    """Max relative deviation of H, L, K from their initial values.

    Each deviation is divided by ``max(|Q(0)|, k m)`` so that vanishing
    quantities (K on a circular orbit) stay well defined.
    """
    q = conserved_series(traj)
    floor = traj.system.k * traj.system.m
    H, L, K = q["H"], q["L"], q["K"]
    dH = np.abs(H - H[0]) / max(abs(H[0]), floor)
    dL = np.linalg.norm(L - L[0], axis=1) / max(np.linalg.norm(L[0]), floor)
    dK = np.linalg.norm(K - K[0], axis=1) / max(np.linalg.norm(K[0]), floor)
    series = {"H": dH, "L": dL, "K": dK} if keep_series else None
    return DriftReport(float(dH.max()), float(dL.max()), float(dK.max()), series)
