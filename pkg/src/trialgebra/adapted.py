"""Coordinates adapted to the H1-fibration, and the semi-Euclidean spheres.

On the timelike part of G (|x|^2 > 0)::

    x0 = lam cosh(phi),  x1 = lam sinh(phi),  x2 = u lam exp(phi)

with sign(lam) = sign(x0); on the spacelike part (|x|^2 < 0) cosh and sinh
swap places and sign(lam) = sign(x1).  In both charts x0 + x1 = lam exp(phi),
so u is exactly the base coordinate ``pi1(x)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraKind, DomainError, Element, KindError, mul, norm_sq
from .fibration import TOL
from .numeric import central_diff


class Chart(enum.Enum):
    TIMELIKE = "Timelike"
    SPACELIKE = "Spacelike"


@dataclass(frozen=True)
class Adapted:
    u: float
    lam: float
    phi: float
    chart: Chart = Chart.TIMELIKE

    def __post_init__(self):
        if self.lam == 0:
            raise DomainError("lambda must be non-zero")
        object.__setattr__(self, "chart", Chart(self.chart))

    def to_dict(self) -> dict:
        return {"u": self.u, "lambda": self.lam, "phi": self.phi, "chart": self.chart.value}


@dataclass(frozen=True)
class SpherePoint:
    u: float
    phi: float
    eps: int = 1

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")

    def to_dict(self) -> dict:
        return {"u": self.u, "phi": self.phi, "eps": self.eps}


def to_adapted(x: Element) -> Adapted:
    if x.kind is not AlgebraKind.II:
        raise KindError("adapted coordinates live on the type II group")
    n = norm_sq(x)
    if abs(n) <= TOL * max(1.0, x.c0 * x.c0, x.c1 * x.c1):
        raise DomainError(f"{x!r} is a null element")
    if n > 0:
        lam = math.copysign(math.sqrt(n), x.c0)
        phi = 0.5 * math.log((x.c0 + x.c1) / (x.c0 - x.c1))
        chart = Chart.TIMELIKE
    else:
        lam = math.copysign(math.sqrt(-n), x.c1)
        phi = 0.5 * math.log((x.c1 + x.c0) / (x.c1 - x.c0))
        chart = Chart.SPACELIKE
    return Adapted(x.c2 / (lam * math.exp(phi)), lam, phi, chart)


def from_adapted(a: Adapted) -> Element:
    ch, sh = math.cosh(a.phi), math.sinh(a.phi)
    x2 = a.u * a.lam * math.exp(a.phi)
    if a.chart is Chart.TIMELIKE:
        return Element(a.lam * ch, a.lam * sh, x2)
    return Element(a.lam * sh, a.lam * ch, x2)


def structure_element(rho: float, psi: float) -> Element:
    """The element rho (cosh psi + sinh psi e1) of H1."""
    if rho == 0:
        raise DomainError("rho must be non-zero")
    return Element(rho * math.cosh(psi), rho * math.sinh(psi), 0.0)


def structure_action(rho: float, psi: float, a: Adapted) -> Adapted:
    """Left multiplication by rho (cosh psi + sinh psi e1), in adapted coordinates.

    u is unchanged, lam is scaled by rho and phi is shifted by psi.
    """
    if rho == 0:
        raise DomainError("rho must be non-zero")
    return Adapted(a.u, a.lam * rho, a.phi + psi, a.chart)


# ---------------------------------------------------------------------------
# Spheres S^2(1) and S^2(-1)


def sphere_point(p: SpherePoint) -> Element:
    """eps (cosh phi, sinh phi, u exp phi) on the unit sphere x0^2 - x1^2 = 1."""
    return Element(
        p.eps * math.cosh(p.phi),
        p.eps * math.sinh(p.phi),
        p.eps * p.u * math.exp(p.phi),
    )


def sphere_coords(x: Element) -> SpherePoint:
    """Inverse of :func:`sphere_point` for x on S^2(1)."""
    if not on_sphere(x, 1):
        raise DomainError(f"{x!r} is not on S^2(1)")
    a = to_adapted(x)
    return SpherePoint(a.u, a.phi, 1 if a.lam > 0 else -1)


def on_sphere(x: Element, r2: int = 1, tol: float = TOL) -> bool:
    if r2 not in (1, -1):
        raise ValueError("r2 must be +1 or -1")
    return abs(norm_sq(x) - r2) <= tol


def sphere_tangents(p: SpherePoint, h: float = 1e-5) -> np.ndarray:
    """Columns d r/du and d r/dphi of the sphere parametrisation, by central differences."""
    def r(q):
        return sphere_point(SpherePoint(q[0], q[1], p.eps)).as_array()

    return central_diff(r, np.array([p.u, p.phi]), h)


def gram(vectors: np.ndarray) -> np.ndarray:
    """Gram matrix of the columns of ``vectors`` under x0 y0 - x1 y1."""
    eta = np.diag([1.0, -1.0, 0.0])
    return vectors.T @ eta @ vectors


def sphere_metric_at(p: SpherePoint, h: float = 1e-5) -> np.ndarray:
    """Induced metric (g_ij) in coordinates (u, phi); expected [[0, 0], [0, -1]]."""
    return gram(sphere_tangents(p, h))


def swap_spheres(a: Element, x: Element) -> Element:
    """Carry x on S^2(1) to a*x on S^2(-1) using an element with |a|^2 = -1."""
    if abs(norm_sq(a) + 1.0) > TOL:
        raise DomainError(f"|a|^2 = {norm_sq(a)} must be -1")
    if not on_sphere(x, 1):
        raise DomainError(f"{x!r} is not on S^2(1)")
    return mul(a, x)
