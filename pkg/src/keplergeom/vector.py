"""3-vector algebra, the in-plane quarter turn, and orbital-plane frames."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateOrbit, KeplerError

__all__ = [
    "Vec3",
    "PlaneFrame",
    "ZERO",
    "dot",
    "cross",
    "norm",
    "quarter_turn",
    "plane_frame",
    "angle_in_plane",
]

TWO_PI = 2.0 * math.pi


class Vec3:
    """Immutable real 3-vector with finite components."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x: float, y: float, z: float):
        x, y, z = float(x), float(y), float(z)
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise KeplerError(f"non-finite vector component in ({x}, {y}, {z})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    def __setattr__(self, name, value):
        raise AttributeError("Vec3 is immutable")

    @classmethod
    def of(cls, seq) -> Vec3:
        x, y, z = seq
        return cls(x, y, z)

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def __getitem__(self, i: int) -> float:
        return (self.x, self.y, self.z)[i]

    def __len__(self) -> int:
        return 3

    def __add__(self, o: Vec3) -> Vec3:
        return Vec3(self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o: Vec3) -> Vec3:
        return Vec3(self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self) -> Vec3:
        return Vec3(-self.x, -self.y, -self.z)

    def __mul__(self, s: float) -> Vec3:
        return Vec3(self.x * s, self.y * s, self.z * s)

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> Vec3:
        return Vec3(self.x / s, self.y / s, self.z / s)

    def __eq__(self, o) -> bool:
        if not isinstance(o, Vec3):
            return NotImplemented
        return self.x == o.x and self.y == o.y and self.z == o.z

    def __hash__(self) -> int:
        return hash((self.x, self.y, self.z))

    def __repr__(self) -> str:
        return f"Vec3({self.x!r}, {self.y!r}, {self.z!r})"

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def unit(self) -> Vec3:
        n = self.norm()
        if n == 0.0:
            raise DegenerateOrbit("cannot normalize the zero vector")
        return self / n

    def tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


ZERO = Vec3(0.0, 0.0, 0.0)


def dot(u: Vec3, v: Vec3) -> float:
    return u.x * v.x + u.y * v.y + u.z * v.z


def cross(u: Vec3, v: Vec3) -> Vec3:
    return Vec3(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )


def norm(v: Vec3) -> float:
    return v.norm()


def quarter_turn(v: Vec3, axis: Vec3) -> Vec3:
    """Rotate *v* by +pi/2 about *axis* (counterclockwise seen from the axis tip).

    *v* must lie in the plane perpendicular to the unit vector *axis*; the
    result is ``axis x v``.
    """
    if abs(axis.norm() - 1.0) > 1e-9:
        raise KeplerError(f"rotation axis must be a unit vector, |axis|={axis.norm()!r}")
    off = dot(v, axis)
    if abs(off) > 1e-9 * max(1.0, v.norm()):
        raise KeplerError(f"vector is not in the rotation plane: v.axis={off!r}")
    return cross(axis, v)


@dataclass(frozen=True)
class PlaneFrame:
    """Right-handed orthonormal frame (u, w, axis) of an orbital plane."""

    u: Vec3
    w: Vec3
    axis: Vec3

    def coords(self, v: Vec3) -> tuple[float, float]:
        """In-plane coordinates of *v* (the axis component is dropped)."""
        return dot(v, self.u), dot(v, self.w)

    def point(self, x: float, y: float) -> Vec3:
        return self.u * x + self.w * y


_BASIS = (Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0), Vec3(0.0, 0.0, 1.0))


def plane_frame(L: Vec3) -> PlaneFrame:
    """Frame of the plane perpendicular to *L*, with ``axis = L/|L|``.

    ``u`` comes from Gram-Schmidt on the first canonical basis vector that is
    not parallel to L (x, then y), so frames are reproducible.
    """
    n = L.norm()
    if n == 0.0:
        raise DegenerateOrbit("zero angular momentum has no orbital plane")
    axis = L / n
    for seed in _BASIS[:2]:
        if cross(seed, axis).norm() > 1e-12:
            break
    else:  # pragma: no cover - x and y cannot both be parallel to a unit vector
        seed = _BASIS[2]
    u = seed
    # two passes keep u orthogonal to axis when the seed is nearly parallel
    for _ in range(2):
        u = u - axis * dot(u, axis)
        u = u / u.norm()
    w = cross(axis, u)
    return PlaneFrame(u=u, w=w, axis=axis)


def angle_in_plane(v: Vec3, frame: PlaneFrame, origin_dir: Vec3) -> float:
    """Counterclockwise angle in [0, 2pi) from *origin_dir* to the projection of *v*."""
    ref_w = cross(frame.axis, origin_dir)
    x = dot(v, origin_dir)
    y = dot(v, ref_w)
    if x == 0.0 and y == 0.0:
        raise DegenerateOrbit("vector has no component in the orbital plane")
    ang = math.atan2(y, x)
    if ang < 0.0:
        ang += TWO_PI
    return 0.0 if ang >= TWO_PI else ang
