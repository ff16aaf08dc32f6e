"""Two-center areal-speed comparison on an ellipse.

A point runs around an ellipse in harmonic motion (``r'' = c - r``), which
sweeps area at a constant rate about the center ``c``. Re-timing the same
path so that area is swept at the same constant rate about an interior point
``d`` changes the acceleration by the factor ``|r-e|^3 / (|r-c| |r-d|^2)``,
where ``e`` is where the line through ``c`` parallel to the tangent meets the
line ``rd``. When ``d`` is a focus, ``|r-e| = a`` and the re-timed motion is
an inverse-square attraction toward ``d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import DegenerateConfiguration, KeplerError, ParallelLines
from .vector import ZERO, Vec3, cross, dot

__all__ = [
    "CenteredEllipse",
    "TwoCenterSample",
    "ArealReparametrization",
    "NewtonReport",
    "harmonic_position",
    "harmonic_velocity",
    "construct_e",
    "construct_f",
    "ratio_formula",
    "reparametrize_equal_areal",
    "verify_inverse_square",
    "ratio_theorem_residual",
    "newton_report",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CenteredEllipse:
    center: Vec3
    u_axis: Vec3
    w_axis: Vec3

    def __post_init__(self):
        a, b = self.u_axis.norm(), self.w_axis.norm()
        if not (a >= b > 0.0):
            raise KeplerError(f"need |u_axis| >= |w_axis| > 0, got a={a!r}, b={b!r}")
        if abs(dot(self.u_axis, self.w_axis)) > 1e-12 * a * b:
            raise KeplerError("ellipse axes must be orthogonal")

    @classmethod
    def from_axes(cls, a: float, b: float, center: Vec3 = ZERO) -> CenteredEllipse:
        """Ellipse in the xy-plane with its major axis along x."""
        return cls(center, Vec3(a, 0.0, 0.0), Vec3(0.0, b, 0.0))

    @property
    def a(self) -> float:
        return self.u_axis.norm()

    @property
    def b(self) -> float:
        return self.w_axis.norm()

    @property
    def focal_distance(self) -> float:
        a, b = self.a, self.b
        return math.sqrt(max(a * a - b * b, 0.0))

    @property
    def eccentricity(self) -> float:
        return self.focal_distance / self.a

    @property
    def focus_d(self) -> Vec3:
        return self.center - self.u_axis * (self.focal_distance / self.a)

    @property
    def focus_b(self) -> Vec3:
        return self.center + self.u_axis * (self.focal_distance / self.a)

    def to_plane(self, p: Vec3) -> tuple[float, float]:
        q = p - self.center
        return dot(q, self.u_axis) / self.a, dot(q, self.w_axis) / self.b

    def from_plane(self, x, y):
        """Map in-plane coordinates (scalars or arrays) back to 3-space."""
        uh = np.array(self.u_axis.tuple()) / self.a
        wh = np.array(self.w_axis.tuple()) / self.b
        c = np.array(self.center.tuple())
        return c + np.multiply.outer(x, uh) + np.multiply.outer(y, wh)

    def contains(self, p: Vec3, margin: float = 1e-9) -> bool:
        x, y = self.to_plane(p)
        off = dot(p - self.center, cross(self.u_axis, self.w_axis)) / (self.a * self.b)
        inside = (x / self.a) ** 2 + (y / self.b) ** 2 < (1.0 - margin) ** 2
        return inside and abs(off) <= 1e-12 * self.a


@dataclass(frozen=True)
class TwoCenterSample:
    t: float
    s: float
    r: Vec3
    e_point: Vec3
    f_point: Vec3
    ratio_formula: float
    ratio_numeric: float
    Q: float


def _xy(ell: CenteredEllipse, t):
    return ell.a * np.cos(t), ell.b * np.sin(t)


def _txy(ell: CenteredEllipse, t):
    return -ell.a * np.sin(t), ell.b * np.cos(t)


def harmonic_position(ell: CenteredEllipse, t: float) -> Vec3:
    return ell.center + ell.u_axis * math.cos(t) + ell.w_axis * math.sin(t)


def harmonic_velocity(ell: CenteredEllipse, t: float) -> Vec3:
    return ell.w_axis * math.cos(t) - ell.u_axis * math.sin(t)


def _meet(px, py, qx, qy, dx, dy, tx, ty):
    """Intersection of ``p + lam*(tx, ty)`` with the line through q and d (arrays ok)."""
    Dx, Dy = dx - qx, dy - qy
    det = tx * Dy - ty * Dx
    scale = np.hypot(tx, ty) * np.hypot(Dx, Dy)
    if np.any(np.abs(det) <= 1e-14 * scale):
        raise ParallelLines("tangent direction is parallel to the line through r and d")
    lam = ((qx - px) * Dy - (qy - py) * Dx) / det
    return px + lam * tx, py + lam * ty


def _e_xy(ell, t, dx, dy):
    rx, ry = _xy(ell, t)
    tx, ty = _txy(ell, t)
    if np.any((rx == dx) & (ry == dy)):
        raise DegenerateConfiguration("r coincides with d")
    return _meet(0.0, 0.0, rx, ry, dx, dy, tx, ty)


def _f_xy(ell, t, dx, dy):
    rx, ry = _xy(ell, t)
    tx, ty = _txy(ell, t)
    if np.any((rx == dx) & (ry == dy)):
        raise DegenerateConfiguration("r coincides with d")
    return _meet(-dx, -dy, rx, ry, dx, dy, tx, ty)


def _vec(ell, x, y) -> Vec3:
    return Vec3.of(ell.from_plane(x, y))


def construct_e(ell: CenteredEllipse, t: float) -> Vec3:
    """Meet of the line through the center parallel to the tangent at r(t) with line r-d."""
    dx, dy = ell.to_plane(ell.focus_d)
    return _vec(ell, *_e_xy(ell, t, dx, dy))


def construct_f(ell: CenteredEllipse, t: float) -> Vec3:
    """Same as :func:`construct_e` but through the other focus b."""
    dx, dy = ell.to_plane(ell.focus_d)
    return _vec(ell, *_f_xy(ell, t, dx, dy))


def ratio_formula(r: Vec3, c: Vec3, d: Vec3, e_point: Vec3) -> float:
    """``|r-e|^3 / (|r-c| |r-d|^2)``."""
    re, rc, rd = (r - e_point).norm(), (r - c).norm(), (r - d).norm()
    if re == 0.0 or rc == 0.0 or rd == 0.0:
        raise DegenerateConfiguration(
            f"coincident points: |r-e|={re!r}, |r-c|={rc!r}, |r-d|={rd!r}"
        )
    return re**3 / (rc * rd * rd)


@dataclass(frozen=True)
class ArealReparametrization:
    """Tabulated ``s(t)`` making the areal speed about ``d`` equal to ``a b / 2``."""

    ellipse: CenteredEllipse
    d: Vec3
    t_nodes: np.ndarray
    s_nodes: np.ndarray
    dtds_nodes: np.ndarray

    @property
    def total(self) -> float:
        return float(self.s_nodes[-1])

    def s_of_t(self, t):
        return CubicHermiteSpline(self.t_nodes, self.s_nodes, 1.0 / self.dtds_nodes)(t)

    def t_of_s(self, s):
        return self._inverse()(s)

    def dt_ds(self, s):
        return self._inverse().derivative()(s)

    def _inverse(self) -> CubicHermiteSpline:
        return CubicHermiteSpline(self.s_nodes, self.t_nodes, self.dtds_nodes)


def _dsdt(ell, t, dx, dy):
    rx, ry = _xy(ell, t)
    ex, ey = _e_xy(ell, t, dx, dy)
    return np.hypot(rx - dx, ry - dy) / np.hypot(rx - ex, ry - ey)


def reparametrize_equal_areal(
    ell: CenteredEllipse, d: Vec3, n_samples: int
) -> ArealReparametrization:
    """Integrate ``ds/dt = |r-d| / |r-e|`` with Simpson's rule on ``n_samples`` intervals."""
    if n_samples < 16:
        raise KeplerError(f"n_samples must be >= 16, got {n_samples!r}")
    if not ell.contains(d):
        raise DegenerateConfiguration(f"d={d!r} is not strictly inside the ellipse")
    dx, dy = ell.to_plane(d)
    t = np.linspace(0.0, TWO_PI, n_samples + 1)
    h = TWO_PI / n_samples
    f = _dsdt(ell, t, dx, dy)
    fm = _dsdt(ell, t[:-1] + 0.5 * h, dx, dy)
    s = np.concatenate([[0.0], np.cumsum(h / 6.0 * (f[:-1] + 4.0 * fm + f[1:]))])
    return ArealReparametrization(ell, d, t, s, 1.0 / f)


@dataclass(frozen=True)
class _SGrid:
    s: np.ndarray
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    acc_s: np.ndarray  # (N, 2)
    acc_t: np.ndarray  # (N, 2)
    ds: float
    reparam: ArealReparametrization


def _s_grid(ell: CenteredEllipse, n_samples: int, d: Vec3 | None = None) -> _SGrid:
    d = ell.focus_d if d is None else d
    rep = reparametrize_equal_areal(ell, d, n_samples)
    S = rep.total
    s = np.arange(n_samples) * (S / n_samples)
    ds = S / n_samples
    t = rep.t_of_s(s)
    x, y = _xy(ell, t)
    P = np.column_stack([x, y])
    acc_s = (np.roll(P, -1, axis=0) - 2.0 * P + np.roll(P, 1, axis=0)) / ds**2
    h = TWO_PI / n_samples
    xp, yp = _xy(ell, t + h)
    xm, ym = _xy(ell, t - h)
    acc_t = np.column_stack([xp - 2.0 * x + xm, yp - 2.0 * y + ym]) / h**2
    return _SGrid(s, t, x, y, acc_s, acc_t, ds, rep)


def _q_values(ell: CenteredEllipse, g: _SGrid, d: Vec3) -> np.ndarray:
    dx, dy = ell.to_plane(d)
    return np.linalg.norm(g.acc_s, axis=1) * ((g.x - dx) ** 2 + (g.y - dy) ** 2)


def verify_inverse_square(ell: CenteredEllipse, n_samples: int) -> float:
    """Spread ``(max - min)/mean`` of ``|d^2r/ds^2| |r-d|^2`` on the uniform s-grid."""
    g = _s_grid(ell, n_samples)
    Q = _q_values(ell, g, ell.focus_d)
    return float((Q.max() - Q.min()) / Q.mean())


def acceleration_direction_error(ell: CenteredEllipse, n_samples: int) -> float:
    """Max angle (radians) between ``d^2r/ds^2`` and ``d - r`` on the s-grid."""
    g = _s_grid(ell, n_samples)
    dx, dy = ell.to_plane(ell.focus_d)
    to_d = np.column_stack([dx - g.x, dy - g.y])
    crs = g.acc_s[:, 0] * to_d[:, 1] - g.acc_s[:, 1] * to_d[:, 0]
    dt = np.einsum("ij,ij->i", g.acc_s, to_d)
    return float(np.abs(np.arctan2(crs, dt)).max())


def _ratio_arrays(ell: CenteredEllipse, g: _SGrid, d: Vec3):
    dx, dy = ell.to_plane(d)
    ex, ey = _e_xy(ell, g.t, dx, dy)
    re = np.hypot(g.x - ex, g.y - ey)
    rc = np.hypot(g.x, g.y)
    rd = np.hypot(g.x - dx, g.y - dy)
    formula = re**3 / (rc * rd * rd)
    numeric = np.linalg.norm(g.acc_s, axis=1) / np.linalg.norm(g.acc_t, axis=1)
    return formula, numeric, ex, ey


def ratio_theorem_residual(ell: CenteredEllipse, n_samples: int, d: Vec3 | None = None) -> float:
    """Max ``|ratio_numeric / ratio_formula - 1|`` on the uniform s-grid.

    *d* defaults to the focus; any interior point works for the ratio itself.
    """
    d = ell.focus_d if d is None else d
    g = _s_grid(ell, n_samples, d)
    formula, numeric, _, _ = _ratio_arrays(ell, g, d)
    return float(np.abs(numeric / formula - 1.0).max())


@dataclass(frozen=True)
class NewtonReport:
    ellipse: CenteredEllipse
    n_samples: int
    max_e_residual: float  # max ||e - r| - a| / a over t-nodes
    max_lemma_de_ef: float  # max ||d - e| - |e - f|| / a
    max_lemma_fr_br: float  # max ||f - r| - |b - r|| / a
    max_areal_center: float  # relative deviation from a b / 2
    max_areal_focus: float
    ratio_residual: float
    inverse_square_spread: float
    direction_error: float
    samples: list[TwoCenterSample]


def newton_report(ell: CenteredEllipse, n_samples: int) -> NewtonReport:
    a, b = ell.a, ell.b
    d = ell.focus_d
    dx, dy = ell.to_plane(d)
    bx, by = -dx, -dy

    t = np.arange(n_samples) * (TWO_PI / n_samples)
    rx, ry = _xy(ell, t)
    ex, ey = _e_xy(ell, t, dx, dy)
    fx, fy = _f_xy(ell, t, dx, dy)
    e_res = np.abs(np.hypot(ex - rx, ey - ry) - a) / a
    l1 = np.abs(np.hypot(dx - ex, dy - ey) - np.hypot(ex - fx, ey - fy)) / a
    l2 = np.abs(np.hypot(fx - rx, fy - ry) - np.hypot(bx - rx, by - ry)) / a
    vx, vy = _txy(ell, t)
    areal_c = np.abs(np.abs(rx * vy - ry * vx) - a * b) / (a * b)

    g = _s_grid(ell, n_samples)
    gx_dot, gy_dot = _txy(ell, g.t)
    dtds = g.reparam.dt_ds(g.s)
    areal_d = np.abs(
        np.abs((g.x - dx) * gy_dot - (g.y - dy) * gx_dot) * dtds - a * b
    ) / (a * b)

    formula, numeric, gex, gey = _ratio_arrays(ell, g, d)
    Q = _q_values(ell, g, d)
    to_d = np.column_stack([dx - g.x, dy - g.y])
    crs = g.acc_s[:, 0] * to_d[:, 1] - g.acc_s[:, 1] * to_d[:, 0]
    direction = np.abs(np.arctan2(crs, np.einsum("ij,ij->i", g.acc_s, to_d))).max()

    gfx, gfy = _f_xy(ell, g.t, dx, dy)
    R = ell.from_plane(g.x, g.y)
    E = ell.from_plane(gex, gey)
    F = ell.from_plane(gfx, gfy)
    samples = [
        TwoCenterSample(
            t=float(g.t[j]),
            s=float(g.s[j]),
            r=Vec3.of(R[j]),
            e_point=Vec3.of(E[j]),
            f_point=Vec3.of(F[j]),
            ratio_formula=float(formula[j]),
            ratio_numeric=float(numeric[j]),
            Q=float(Q[j]),
        )
        for j in range(n_samples)
    ]
    return NewtonReport(
        ellipse=ell,
        n_samples=n_samples,
        max_e_residual=float(e_res.max()),
        max_lemma_de_ef=float(l1.max()),
        max_lemma_fr_br=float(l2.max()),
        max_areal_center=float(areal_c.max()),
        max_areal_focus=float(areal_d.max()),
        ratio_residual=float(np.abs(numeric / formula - 1.0).max()),
        inverse_square_spread=float((Q.max() - Q.min()) / Q.mean()),
        direction_error=float(direction),
        samples=samples,
    )
