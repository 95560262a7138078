"""Semi-conformal model: stereographic projection of S^2(1) from the pole (1, 0, 0).

The image plane is x0 = 0 with coordinates (x, y).  The lines x = +-1 and
the pole line x0 = 1, x1 = 0 are excluded; they correspond to ideal
elements and every map here raises :class:`DomainError` on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .adapted import on_sphere
from .algebra import DomainError, Element
from .numeric import central_diff

TOL = 1e-12


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


def _check_x(x: float) -> None:
    if abs(x - 1.0) <= TOL or abs(x + 1.0) <= TOL:
        raise DomainError(f"x = {x} lies on an excluded line x = +-1")


def stereo(q: Element) -> PlanePoint:
    """Project q on S^2(1) from the pole: x = q1 / (1 - q0), y = q2 / (1 - q0)."""
    if not on_sphere(q, 1, tol=1e-9 * max(1.0, q.c0 * q.c0)):
        raise DomainError(f"{q!r} is not on S^2(1)")
    d = 1.0 - q.c0
    if abs(d) <= TOL:
        raise DomainError(f"{q!r} lies on the pole line x0 = 1")
    return PlanePoint(q.c1 / d, q.c2 / d)


def stereo_inv(p: PlanePoint) -> Element:
    _check_x(p.x)
    d = 1.0 - p.x * p.x
    return Element(-(1.0 + p.x * p.x) / d, 2.0 * p.x / d, 2.0 * p.y / d)


def adapted_from_plane(p: PlanePoint) -> tuple[float, float, int]:
    """Sphere coordinates (phi, u, eps) of stereo_inv(p).

    eps = +1 exactly when |x| > 1, which makes eps (x - 1)/(x + 1) positive.
    """
    _check_x(p.x)
    ratio = (p.x - 1.0) / (p.x + 1.0)
    eps = 1 if ratio > 0 else -1
    return math.log(eps * ratio), p_map(p), eps


def p_map(p: PlanePoint) -> float:
    """Base coordinate u = -2y / (1 - x)^2 of the plane point."""
    if abs(p.x - 1.0) <= TOL:
        raise DomainError("x = 1 is excluded")
    return -2.0 * p.y / (1.0 - p.x) ** 2


def conformal_factor(x: float) -> float:
    """Ratio 4 / (x^2 - 1)^2 between the sphere metric and -dx^2."""
    _check_x(x)
    return 4.0 / (x * x - 1.0) ** 2


def fiber_image(c: float, x):
    """Ordinate of the image of the fiber u = c: y = -c/2 (x - 1)^2."""
    return -0.5 * c * (x - 1.0) ** 2


def pullback_ratio(p: PlanePoint, direction, h: float | None = None) -> float:
    """Pulled-back sphere metric on ``direction`` divided by -dx^2.

    The tangent of stereo_inv is taken by central differences with a step
    shrinking near the excluded lines, then measured with x0 y0 - x1 y1.
    """
    d = np.asarray(direction, dtype=float)
    if d[0] == 0:
        raise ValueError("direction must have a non-zero x component")
    if h is None:
        h = 1e-5 * min(1.0, abs(p.x - 1.0), abs(p.x + 1.0))
    jac = central_diff(lambda q: stereo_inv(PlanePoint(q[0], q[1])).as_array(), p.as_array(), h)
    v = jac @ d
    return (v[0] * v[0] - v[1] * v[1]) / (-d[0] * d[0])
