"""Acceptance criteria 1-9, one PASS/FAIL line each.

Lines print as the tests run (visible with ``-s``) and again in the
terminal summary. Tolerances here are the contract; do not loosen them.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, ECCENTRICITIES, periapsis_state
from keplergeom.conserved import (
    angular_momentum,
    conserved_series,
    drift_report,
    energy,
    focal_point_t,
)
from keplergeom.dynamics import KeplerSystem, OrbitState, default_dt, integrate
from keplergeom.euclid import conic_fit_check, kepler3_check, reflect_in_tangent, residual_series
from keplergeom.hodograph import (
    construct_D_residual,
    dv_dtheta_residual,
    fit_circle,
    membership_residual,
    predicted_center,
    predicted_radius,
    scaling_lambda_check,
    tangency_residual,
)
from keplergeom.newton import CenteredEllipse, newton_report, ratio_theorem_residual
from keplergeom.suites import simulate
from keplergeom.vector import Vec3, plane_frame

UNIT = KeplerSystem(1.0, 1.0)
N_SAMPLES = 10_000


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def family_sample(e: float):
    """10^4 samples spread over one full period of the orbit."""
    st = periapsis_state(e)
    traj = simulate(UNIT, st, 1.0)
    stride = max(1, (len(traj) - 1) // (N_SAMPLES - 1))
    idx = np.arange(0, len(traj), stride)[:N_SAMPLES]
    return st, traj, idx


@pytest.fixture(scope="module")
def family():
    t0 = time.perf_counter()
    out = {e: family_sample(e) for e in ECCENTRICITIES}
    return out, time.perf_counter() - t0


def test_1_reflection_equals_lrl_focus(family):
    orbits, t_int = family
    t0 = time.perf_counter()
    worst = 0.0
    for e, (st, traj, idx) in orbits.items():
        two_a = -UNIT.k / energy(UNIT, st)
        res = residual_series(traj)
        q = conserved_series(traj)
        target = q["K"] / (UNIT.m * q["H"])[:, None]
        worst = max(worst, np.linalg.norm(res["t"][idx] - target[idx], axis=1).max() / two_a)
        # the scalar construction, checked on a subset
        for i in idx[:: len(idx) // 50]:
            s = traj.state(int(i))
            gap = (reflect_in_tangent(UNIT, s) - focal_point_t(UNIT, s)).norm()
            worst = max(worst, gap / two_a)
        assert len(idx) == N_SAMPLES
    elapsed = t_int + time.perf_counter() - t0
    report(1, worst <= 1e-9 and elapsed < 10.0,
           f"max |reflect - K/mH|/2a = {worst:.2e} (tol 1e-9), {elapsed:.2f} s (< 10 s)")


def test_2_gardener(family):
    orbits, _ = family
    worst = 0.0
    for st, traj, idx in orbits.values():
        two_a = -UNIT.k / energy(UNIT, st)
        worst = max(worst, np.abs(residual_series(traj)["gardener"][idx]).max() / two_a)
    report(2, worst <= 1e-9, f"max ||t-r| + |r| - 2a| / 2a = {worst:.2e} (tol 1e-9)")


def _verlet_trend(st: OrbitState, periods: float):
    traj = simulate(UNIT, st, periods, method="verlet")
    H = conserved_series(traj)["H"]
    dH = (H - H[0]) / abs(H[0])
    n = len(dH)
    tenth = n // 10
    early, late = np.abs(dH[:tenth]).max(), np.abs(dH[-tenth:]).max()
    slope = np.polyfit(traj.t, dH, 1)[0]
    return float(np.abs(dH).max()), float(early), float(late), float(slope * traj.t[-1])


def test_3_conservation():
    worst = 0.0
    for e in ECCENTRICITIES:
        d = drift_report(simulate(UNIT, periapsis_state(e), 10.0))
        worst = max(worst, d.max_rel_dH, d.max_rel_dL, d.max_rel_dK)
    amp, early, late, trend = _verlet_trend(periapsis_state(0.36), 100.0)
    bounded = late <= 1.5 * early and abs(trend) <= 0.1 * amp
    report(3, worst <= 1e-8 and bounded,
           f"RK4 max rel drift {worst:.2e} (tol 1e-8); Verlet 100 periods: "
           f"|dH| first/last tenth {early:.2e}/{late:.2e}, linear trend {trend:.1e}")


def test_4_kepler_third_law():
    states = [OrbitState(Vec3(a, 0, 0), Vec3(0, 0.9 / math.sqrt(a), 0)) for a in (0.5, 1.0, 2.0)]
    # scale so that the semi-major axes are exactly 0.5, 1, 2
    a1 = -1.0 / (2 * energy(UNIT, states[1]))
    states = [OrbitState(s.r / a1, s.v * math.sqrt(a1)) for s in states]
    rows = kepler3_check(UNIT, states)
    target = 4 * math.pi**2
    worst = max(abs(r.ratio - target) / target for r in rows)
    axes = ", ".join(f"{r.a:.3g}" for r in rows)
    ok = worst <= 1e-4 and all(abs(r.a - a) < 1e-12 for r, a in zip(rows, (0.5, 1.0, 2.0)))
    report(4, ok, f"a = {axes}: max |T^2/a^3 - 4pi^2| / 4pi^2 = {worst:.2e} (tol 1e-4)")


def test_5_hodograph(family):
    orbits, _ = family
    worst = dict(center=0.0, radius=0.0, member=0.0, D=0.0, tangency=0.0, lam=0.0)
    for st, traj, _ in orbits.values():
        kL = predicted_radius(UNIT, st)
        fit = fit_circle(traj.v, plane_frame(angular_momentum(st, UNIT.m)))
        worst["center"] = max(worst["center"], (fit.center - predicted_center(UNIT, st)).norm() / kL)
        worst["radius"] = max(worst["radius"], abs(fit.radius - kL) / kL)
        worst["member"] = max(worst["member"], membership_residual(traj))
        worst["D"] = max(worst["D"], construct_D_residual(UNIT, traj))
        worst["tangency"] = max(worst["tangency"], tangency_residual(UNIT, traj))
        worst["lam"] = max(worst["lam"], scaling_lambda_check(UNIT, st))
    tol = dict(center=1e-7, radius=1e-7, member=1e-9, D=1e-9, tangency=1e-9, lam=1e-12)
    ok = all(worst[k] <= tol[k] for k in tol)
    detail = ", ".join(f"{k} {worst[k]:.1e}/{tol[k]:.0e}" for k in tol)
    report(5, ok, detail)


def test_6_dv_dtheta_order():
    ratios = []
    for e in (0.0, 0.36, 0.7):
        st = periapsis_state(e)
        dt = default_dt(UNIT, st)
        coarse = dv_dtheta_residual(simulate(UNIT, st, 1.0, 2 * dt))
        fine = dv_dtheta_residual(simulate(UNIT, st, 1.0, dt))
        ratios.append(coarse / fine)
    circ = dv_dtheta_residual(integrate(UNIT, periapsis_state(0.0), 1e-4, 63000))
    ok = all(abs(r - 4.0) <= 0.5 for r in ratios) and circ <= 1e-6
    shown = ", ".join(f"{r:.3f}" for r in ratios)
    report(6, ok, f"residual ratio under dt halving (e=0, 0.36, 0.7): {shown}; circular dt=1e-4: {circ:.1e}")


def test_7_newton():
    t0 = time.perf_counter()
    worst_e = worst_lemma = worst_spread = 0.0
    orders = []
    for ecc in (0.0, 0.25, 0.5, 0.75):
        ell = CenteredEllipse.from_axes(1.0, math.sqrt(1 - ecc**2))
        rep = newton_report(ell, 4096)
        worst_e = max(worst_e, rep.max_e_residual)
        worst_lemma = max(worst_lemma, rep.max_lemma_de_ef, rep.max_lemma_fr_br)
        worst_spread = max(worst_spread, rep.inverse_square_spread)
        if ecc > 0:
            orders.append(ratio_theorem_residual(ell, 256) / ratio_theorem_residual(ell, 512))
    elapsed = time.perf_counter() - t0
    ok = (
        worst_e <= 1e-10
        and worst_lemma <= 1e-10
        and worst_spread <= 1e-4
        and all(abs(o - 4.0) <= 0.5 for o in orders)
        and elapsed < 5.0
    )
    shown = ", ".join(f"{o:.3f}" for o in orders)
    report(7, ok, f"|e-r|=a {worst_e:.1e}, lemmas {worst_lemma:.1e}, spread {worst_spread:.1e}, "
                  f"ratio order {shown}, {elapsed:.2f} s (< 5 s)")


def test_8_conic_cross_oracle(family):
    orbits, _ = family
    worst = 0.0
    for _, traj, _ in orbits.values():
        worst = max(worst, *conic_fit_check(traj))
    report(8, worst <= 1e-6, f"max rel error of fitted (a, b) = {worst:.2e} (tol 1e-6)")


def test_9_cli_determinism():
    cmd = [sys.executable, "-m", "keplergeom", "verify"]
    t0 = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True)
    elapsed = time.perf_counter() - t0
    second = subprocess.run(cmd, capture_output=True)
    same = first.stdout == second.stdout
    ok = same and first.returncode == 0 and elapsed < 60.0
    report(9, ok, f"byte-identical={same}, exit={first.returncode}, verify took {elapsed:.2f} s (< 60 s)")
