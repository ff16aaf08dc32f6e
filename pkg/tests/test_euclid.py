import math

import numpy as np
import pytest

from conftest import ECCENTRICITIES, periapsis_state
from keplergeom.conserved import angular_momentum, energy, focal_point_t, lrl_vector
from keplergeom.dynamics import KeplerSystem, OrbitState, default_dt, integrate
from keplergeom.errors import DegenerateOrbit, KeplerError, NotBound
from keplergeom.euclid import (
    Line3,
    conic_fit_check,
    ellipse_geometry,
    gardener_residual,
    kepler3_check,
    normal_vector,
    polar_conic_residual,
    projection_s,
    reflect_in_tangent,
    residual_series,
    tangent_line,
)
from keplergeom.vector import Vec3, dot

HYPER = OrbitState(Vec3(1, 0, 0), Vec3(0, 2, 0))
RADIAL = OrbitState(Vec3(1, 0, 0), Vec3(0.3, 0, 0))


def test_projection_s(unit, circular, slow):
    assert projection_s(unit, circular) == Vec3(2, 0, 0)
    s = projection_s(unit, slow)
    assert s.x == pytest.approx(1 / 0.68, rel=1e-15)
    assert s.x == pytest.approx(1.4705882, abs=1e-7)
    st = OrbitState(Vec3(0.3, -0.7, 0.2), Vec3(0.5, 0.4, 0.1))
    sv = projection_s(unit, st)
    assert dot(sv, st.r) == pytest.approx(sv.norm() * st.r.norm(), rel=1e-12)
    assert sv.norm() == pytest.approx(-unit.k / energy(unit, st), rel=1e-12)


def test_tangent_line(slow):
    line = tangent_line(slow)
    assert line.point == slow.r and line.direction == Vec3(0, 1, 0)
    with pytest.raises(DegenerateOrbit):
        tangent_line(OrbitState(Vec3(1, 0, 0), Vec3(0, 0, 0)))
    with pytest.raises(KeplerError):
        Line3(Vec3(0, 0, 0), Vec3(0, 2, 0))


def test_normal_vector_identities(unit):
    st = OrbitState(Vec3(0.9, 0.2, -0.1), Vec3(-0.3, 0.9, 0.2))
    n = normal_vector(unit, st)
    assert abs(dot(n, st.v)) <= 1e-12 * n.norm() * st.v.norm()
    H = energy(unit, st)
    L = angular_momentum(st, unit.m)
    expected = 2 * unit.m * (H + unit.k / st.r.norm()) * dot(L, L)
    assert dot(n, n) == pytest.approx(expected, rel=1e-10)


def test_reflection_examples(unit, circular, slow):
    t = reflect_in_tangent(unit, slow)
    assert (t - Vec3(0.36 / 0.68, 0, 0)).norm() <= 1e-12
    assert (t - focal_point_t(unit, slow)).norm() <= 1e-12
    assert reflect_in_tangent(unit, circular).norm() <= 1e-15


def test_projection_on_normal_identity(unit):
    st = OrbitState(Vec3(0.8, -0.4, 0.3), Vec3(0.2, 0.9, -0.1))
    s = projection_s(unit, st)
    n = normal_vector(unit, st)
    H = energy(unit, st)
    L = angular_momentum(st, unit.m)
    lhs = dot(s - st.r, n)
    rhs = -(H + unit.k / st.r.norm()) * dot(L, L) / H
    assert lhs == pytest.approx(rhs, rel=1e-10)


@pytest.mark.parametrize("m, k", [(1, 1), (2.5, 0.7), (0.3, 4.0)])
def test_reflection_equals_lrl_focus_random_states(m, k):
    sys_ = KeplerSystem(m, k)
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 200:
        r = Vec3.of(rng.normal(size=3))
        v = Vec3.of(rng.normal(size=3) * 0.5)
        st = OrbitState(r, v)
        if energy(sys_, st) >= 0:
            continue
        a2 = -k / energy(sys_, st)
        assert (reflect_in_tangent(sys_, st) - focal_point_t(sys_, st)).norm() <= 1e-9 * a2
        checked += 1


def test_gardener(unit, circular, slow):
    assert abs(gardener_residual(unit, slow)) <= 1e-12
    assert abs(gardener_residual(unit, circular)) <= 1e-15


def test_gardener_along_orbit(unit):
    st = periapsis_state(0.36)
    traj = integrate(unit, st, default_dt(unit, st), 10000)
    g = residual_series(traj)["gardener"]
    assert np.abs(g).max() <= 1e-9 * 2.0
    # vectorized and scalar forms agree
    for i in (0, 1234, 9999):
        assert g[i] == pytest.approx(gardener_residual(unit, traj.state(i)), abs=1e-14)


def test_ellipse_geometry_circular(unit, circular):
    g = ellipse_geometry(unit, circular)
    assert (g.a, g.b, g.c, g.eccentricity) == (1.0, 1.0, 0.0, 0.0)
    assert g.period == pytest.approx(2 * math.pi)
    assert g.focus2 == g.focus1 == Vec3(0, 0, 0)


def test_ellipse_geometry_slow(unit, slow):
    g = ellipse_geometry(unit, slow)
    assert g.a == pytest.approx(25 / 34, rel=1e-15)
    assert g.c == pytest.approx(9 / 34, rel=1e-14)
    assert g.eccentricity == pytest.approx(0.36, rel=1e-14)
    assert g.b == pytest.approx(0.6859943405700353, rel=1e-14)
    assert g.a**2 - g.b**2 - g.c**2 == pytest.approx(0.0, abs=1e-10 * g.a**2)
    assert (g.focus2 - g.focus1).norm() == pytest.approx(2 * g.c, rel=1e-10)
    assert 2 * g.a == pytest.approx(-unit.k / energy(unit, slow), rel=1e-10)
    L = angular_momentum(slow, unit.m).norm()
    assert math.pi * g.a * g.b == pytest.approx(L * g.period / (2 * unit.m), rel=1e-9)
    assert g.center == g.focus2 / 2


@pytest.mark.parametrize("fn", [projection_s, normal_vector, reflect_in_tangent,
                                gardener_residual, ellipse_geometry, polar_conic_residual])
def test_radial_orbits_refused(unit, fn):
    with pytest.raises(DegenerateOrbit):
        fn(unit, RADIAL)


@pytest.mark.parametrize("fn", [projection_s, reflect_in_tangent, gardener_residual,
                                ellipse_geometry, polar_conic_residual])
def test_unbound_refused(unit, fn):
    with pytest.raises(NotBound):
        fn(unit, HYPER)


def test_polar_conic_examples(unit, circular, slow):
    assert polar_conic_residual(unit, circular) == pytest.approx(0.0, abs=1e-15)
    # r=(1,0,0) is apoapsis: theta = pi, 1*(1 - 0.36) = 0.64 = L^2/(mk)
    assert polar_conic_residual(unit, slow) == pytest.approx(0.0, abs=1e-15)


def test_polar_conic_along_orbit(unit):
    st = periapsis_state(0.7)
    traj = integrate(unit, st, default_dt(unit, st), 10000)
    assert np.abs(residual_series(traj)["polar_conic"]).max() <= 1e-9
    for i in (17, 5000):
        assert polar_conic_residual(unit, traj.state(i)) == pytest.approx(
            residual_series(traj)["polar_conic"][i], abs=1e-14
        )


@pytest.mark.parametrize("e", ECCENTRICITIES)
def test_theorem_equivalence_family(unit, e):
    st = periapsis_state(e)
    traj = integrate(unit, st, default_dt(unit, st), 10000)
    res = residual_series(traj)
    from keplergeom.conserved import conserved_series

    q = conserved_series(traj)
    K_mH = q["K"] / (unit.m * q["H"])[:, None]
    assert np.abs(res["t"] - K_mH).max() <= 1e-9 * 2.0


def test_kepler3_examples(unit):
    states = [OrbitState(Vec3(a, 0, 0), Vec3(0, math.sqrt(1 / a), 0)) for a in (0.5, 1.0, 2.0)]
    rows = kepler3_check(unit, states)
    for row, a in zip(rows, (0.5, 1.0, 2.0)):
        assert row.a == pytest.approx(a)
        assert row.ratio == pytest.approx(4 * math.pi**2, rel=1e-4)
    assert 4 * math.pi**2 == pytest.approx(39.478418, abs=1e-6)


def test_kepler3_linear_in_mass():
    r1 = kepler3_check(KeplerSystem(1.0, 1.0), [periapsis_state(0.3)])[0].ratio
    r2 = kepler3_check(KeplerSystem(2.0, 1.0), [periapsis_state(0.3, m=2.0)])[0].ratio
    assert r2 / r1 == pytest.approx(2.0, rel=1e-4)


def test_kepler3_unbound(unit):
    with pytest.raises(NotBound):
        kepler3_check(unit, [HYPER])


@pytest.mark.parametrize("e", [0.1, 0.36, 0.7])
def test_conic_fit_oracle(unit, e):
    st = periapsis_state(e)
    traj = integrate(unit, st, default_dt(unit, st), 10000)
    ea, eb = conic_fit_check(traj)
    assert ea <= 1e-6 and eb <= 1e-6


def test_geometry_in_tilted_plane(unit):
    st = OrbitState(Vec3(0.7, 0.5, 0.4), Vec3(-0.6, 0.6, 0.2))
    traj = integrate(unit, st, default_dt(unit, st), 12000)
    ea, eb = conic_fit_check(traj)
    assert max(ea, eb) <= 1e-6
    res = residual_series(traj)
    g = ellipse_geometry(unit, st)
    assert res["t_drift"].max() <= 1e-8 * 2 * g.a
    assert (g.focus2 - lrl_vector(unit, st) / (unit.m * energy(unit, st))).norm() <= 1e-15
