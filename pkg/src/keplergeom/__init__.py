"""Kepler two-body problem and numerical checks of its classical geometry.

Submodules:

- ``vector``: 3-vectors, the quarter turn about L, orbital-plane frames
- ``dynamics``: equation of motion, RK4 / velocity Verlet, period measurement
- ``conserved``: H, L, the LRL vector K and the second focus K/(mH)
- ``euclid``: the reflection construction, ellipse geometry, third law
- ``hodograph``: velocity-space circle and its rotated copy
- ``newton``: two-center areal-speed comparison on an ellipse
- ``io`` / ``cli``: CSV, report and SVG output; the ``kepler-geom`` command
"""

from .conserved import angular_momentum, energy, focal_point_t, lrl_vector
from .dynamics import KeplerSystem, OrbitState, Trajectory, integrate
from .errors import (
    CollinearPoints,
    DegenerateConfiguration,
    DegenerateOrbit,
    InsufficientCoverage,
    KeplerError,
    NotBound,
    ParallelLines,
    SingularPosition,
)
from .vector import Vec3

__all__ = [
    "Vec3",
    "KeplerSystem",
    "OrbitState",
    "Trajectory",
    "integrate",
    "energy",
    "angular_momentum",
    "lrl_vector",
    "focal_point_t",
    "KeplerError",
    "SingularPosition",
    "DegenerateOrbit",
    "NotBound",
    "InsufficientCoverage",
    "CollinearPoints",
    "ParallelLines",
    "DegenerateConfiguration",
]
