"""Verification suites behind ``kepler-geom verify``.

Each check yields a :class:`Check` with the measured residual and the
tolerance it is held to. Nothing here prints; formatting lives in the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conserved import angular_momentum, conserved_series, drift_report, energy
from .dynamics import (
    KeplerSystem,
    OrbitState,
    Trajectory,
    analytic_period,
    default_dt,
    integrate,
)
from .errors import NotBound
from .euclid import conic_fit_check, ellipse_geometry, kepler3_check, residual_series
from .hodograph import (
    construct_D_residual,
    dv_dtheta_residual,
    fit_circle,
    membership_residual,
    predicted_center,
    predicted_radius,
    scaling_lambda_check,
    tangency_residual,
)
from .newton import CenteredEllipse, newton_report, ratio_theorem_residual
from .vector import plane_frame

__all__ = ["Check", "orbit_checks", "kepler3_checks", "newton_checks", "run_all"]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    tol: float
    # "le": pass iff value <= tol; "band": pass iff |value - 4| <= tol (order study)
    kind: str = "le"

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        if self.kind == "band":
            return abs(self.value - 4.0) <= self.tol
        return self.value <= self.tol


def simulate(
    sys: KeplerSystem,
    state: OrbitState,
    periods: float,
    dt: float | None = None,
    method: str = "rk4",
) -> Trajectory:
    """Integrate *periods* orbital periods; ``dt=None`` picks the default step."""
    H = energy(sys, state)
    if H >= 0.0:
        raise NotBound(H)
    if dt is None:
        dt = default_dt(sys, state)
    T = analytic_period(sys, -sys.k / (2.0 * H))
    n = max(1, int(math.ceil(periods * T / dt)))
    return integrate(sys, state, dt, n, method)


def orbit_checks(
    sys: KeplerSystem,
    state: OrbitState,
    periods: float = 10.0,
    dt: float | None = None,
    method: str = "rk4",
) -> list[Check]:
    traj = simulate(sys, state, periods, dt, method)
    H = energy(sys, state)
    a = -sys.k / (2.0 * H)
    T = analytic_period(sys, a)
    one = traj.head(int(math.ceil(T / traj.dt)) + 1)
    out: list[Check] = []

    d = drift_report(traj)
    out += [
        Check("conserved", "max rel drift H", d.max_rel_dH, 1e-8),
        Check("conserved", "max rel drift L", d.max_rel_dL, 1e-8),
        Check("conserved", "max rel drift K", d.max_rel_dK, 1e-8),
    ]

    q = conserved_series(traj)
    K_over_mH = q["K"] / (sys.m * q["H"])[:, None]
    res = residual_series(traj)
    two_a = 2.0 * a
    out += [
        Check("euclid", "|reflection - K/mH| / 2a", float(np.abs(res["t"] - K_over_mH).max() / two_a), 1e-9),
        Check("euclid", "gardener / 2a", float(np.abs(res["gardener"]).max() / two_a), 1e-9),
        Check("euclid", "second focus drift / 2a", float(res["t_drift"].max() / two_a), 1e-8),
        Check("euclid", "polar conic / a", float(np.abs(res["polar_conic"]).max() / a), 1e-9),
    ]
    if np.linalg.norm(q["K"][0]) >= 1e-12 * sys.k * sys.m:
        ea, eb = conic_fit_check(one)
        out.append(Check("euclid", "conic fit (a, b) rel error", max(ea, eb), 1e-6))
    geom = ellipse_geometry(sys, state)
    Ln = angular_momentum(state, sys.m).norm()
    out.append(
        Check(
            "euclid",
            "area law |pi a b - L T/2m| rel",
            abs(math.pi * geom.a * geom.b - Ln * geom.period / (2.0 * sys.m))
            / (math.pi * geom.a * geom.b),
            1e-9,
        )
    )

    frame = plane_frame(angular_momentum(state, sys.m))
    fit = fit_circle(one.v, frame)
    c_pred = predicted_center(sys, state)
    r_pred = predicted_radius(sys, state)
    out += [
        Check("hodograph", "fit residual / (k/L)", fit.max_residual / r_pred, 1e-8),
        Check("hodograph", "|fit center - iK/mL| / (k/L)", (fit.center - c_pred).norm() / r_pred, 1e-7),
        Check("hodograph", "fit radius rel error", abs(fit.radius - r_pred) / r_pred, 1e-7),
        Check("hodograph", "pointwise membership / (k/L)", membership_residual(one), 1e-9),
        Check("hodograph", "circle D residual", construct_D_residual(sys, one), 1e-9),
        Check("hodograph", "tangency |v.d|", tangency_residual(sys, one), 1e-9),
        Check("hodograph", "lambda = -L/H identities", scaling_lambda_check(sys, state), 1e-12),
    ]

    coarse = simulate(sys, state, 1.0, 2.0 * traj.dt, method)
    fine = simulate(sys, state, 1.0, traj.dt, method)
    order = dv_dtheta_residual(coarse) / dv_dtheta_residual(fine)
    out.append(Check("hodograph", "dv/dtheta residual ratio (dt -> dt/2)", order, 0.5, "band"))
    return out


def kepler3_checks(sys: KeplerSystem, states: list[OrbitState]) -> list[Check]:
    target = 4.0 * math.pi**2 * sys.m / sys.k
    rows = kepler3_check(sys, states)
    out = [
        Check("kepler3", f"T^2/a^3 rel error (a={r.a:.6g})", abs(r.ratio - target) / target, 1e-4)
        for r in rows
    ]
    ratios = [r.ratio for r in rows]
    out.append(Check("kepler3", "ratio spread rel", (max(ratios) - min(ratios)) / target, 1e-4))
    return out


def newton_checks(a: float, b: float, n_samples: int = 4096) -> list[Check]:
    ell = CenteredEllipse.from_axes(a, b)
    rep = newton_report(ell, n_samples)
    out = [
        Check("newton", "||e - r| - a| / a", rep.max_e_residual, 1e-10),
        Check("newton", "||d - e| - |e - f|| / a", rep.max_lemma_de_ef, 1e-10),
        Check("newton", "||f - r| - |b - r|| / a", rep.max_lemma_fr_br, 1e-10),
        Check("newton", "areal speed about c rel", rep.max_areal_center, 1e-8),
        Check("newton", "areal speed about d rel", rep.max_areal_focus, 1e-8),
        Check("newton", "inverse-square spread", rep.inverse_square_spread, 1e-4),
    ]
    if ell.focal_distance > 0.0:
        n = max(64, n_samples // 16)
        order = ratio_theorem_residual(ell, n) / ratio_theorem_residual(ell, 2 * n)
        out.append(Check("newton", "ratio residual order (n -> 2n)", order, 0.5, "band"))
    return out


def scaled_states(state: OrbitState, factors=(0.5, 1.0, 2.0)) -> list[OrbitState]:
    """Copies of *state* with semi-major axis scaled by each factor (same shape)."""
    return [OrbitState(state.r * f, state.v / math.sqrt(f)) for f in factors]


def run_all(
    sys: KeplerSystem,
    state: OrbitState,
    periods: float = 10.0,
    dt: float | None = None,
    method: str = "rk4",
    newton_axes: tuple[float, float] = (1.0, math.sqrt(0.75)),
    n_samples: int = 4096,
) -> list[Check]:
    checks = orbit_checks(sys, state, periods, dt, method)
    checks += kepler3_checks(sys, scaled_states(state))
    checks += newton_checks(*newton_axes, n_samples)
    return checks

