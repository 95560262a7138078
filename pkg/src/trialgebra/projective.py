"""Projective model of S^2(1) on the plane alpha: y0 = 0, y3 != 0.

The sphere closes up to the hyperquadric y0^2 - y1^2 - y3^2 = 0 in P^3 and
is projected from the pole N = (1:0:0:1) onto alpha, with affine
coordinates x1 = y1/y3, x2 = y2/y3.  The polar normalisation with centre
E0 = (1:0:0:0) induces on alpha the degenerate metric
g = diag(4 / (1 + x1^2)^2, 0) and the connection

    Gamma^1_11 = Gamma^2_12 = Gamma^2_21 = -2 x1 / (1 + x1^2)
    Gamma^2_11 = 2 x2 / (1 + x1^2)

whose only curvature component (up to antisymmetry) is
R^2_{1,1,2} = -4 / (1 + x1^2)^2 in the index order of :mod:`numeric`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numeric import central_diff

ETA = np.diag([1.0, -1.0, 0.0, -1.0])

POLE = (1.0, 0.0, 0.0, 1.0)
ANTIPOLE = (1.0, 0.0, 0.0, -1.0)
E0 = (1.0, 0.0, 0.0, 0.0)
E1 = (0.0, 1.0, 0.0, 0.0)
E2 = (0.0, 0.0, 1.0, 0.0)
E3 = (0.0, 0.0, 0.0, 1.0)


class HPoint:
    """A point (y0:y1:y2:y3) of P^3; equality is up to a non-zero factor."""

    __slots__ = ("y",)
    TOL = 1e-9

    def __init__(self, *coords):
        if len(coords) == 1:
            coords = tuple(coords[0])
        y = np.array(coords, dtype=float)
        if y.shape != (4,):
            raise ValueError("a point of P^3 has four homogeneous coordinates")
        if not np.all(np.isfinite(y)) or not np.any(y):
            raise ValueError("homogeneous coordinates must be finite and not all zero")
        y.setflags(write=False)
        self.y = y

    def normalized(self) -> np.ndarray:
        """Representative whose largest-magnitude coordinate equals +1."""
        k = int(np.argmax(np.abs(self.y)))
        return self.y / self.y[k]

    def __eq__(self, other):
        if not isinstance(other, HPoint):
            return NotImplemented
        return bool(np.max(np.abs(self.normalized() - other.normalized())) <= self.TOL)

    __hash__ = None

    def affine(self) -> np.ndarray:
        """(y0, y1, y2) / y3."""
        if abs(self.y[3]) <= self.TOL * np.max(np.abs(self.y)):
            raise ZeroDivisionError("point at infinity (y3 = 0)")
        return self.y[:3] / self.y[3]

    def __repr__(self):
        return "HPoint({:g}:{:g}:{:g}:{:g})".format(*self.y)


@dataclass(frozen=True)
class AlphaPoint:
    x1: float
    x2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2])

    def homogeneous(self) -> HPoint:
        return HPoint(0.0, self.x1, self.x2, 1.0)


@dataclass(frozen=True)
class ConnectionData:
    g11: float
    gamma1_11: float
    gamma2_12: float
    gamma2_11: float
    R2_121: float
    Ric11: float


def _coords(P) -> np.ndarray:
    return P.y if isinstance(P, HPoint) else np.asarray(P, dtype=float)


def quadric_form(P, Q) -> float:
    """Symmetric bilinear form y0 z0 - y1 z1 - y3 z3 of the hyperquadric."""
    return float(_coords(P) @ ETA @ _coords(Q))


def quadric_eval(P) -> float:
    return quadric_form(P, P)


def project_to_quadric(p: AlphaPoint) -> HPoint:
    """Second intersection of the line N U with the hyperquadric, U = (0:x1:x2:1)."""
    s = p.x1 * p.x1
    return HPoint(-1.0 - s, 2.0 * p.x1, 2.0 * p.x2, 1.0 - s)


def project_from_pole(P) -> AlphaPoint:
    """Central projection of P from N onto alpha (inverse of project_to_quadric)."""
    y = _coords(P)
    Q = y[0] * np.asarray(POLE) - y  # on the line N P with y0 = 0
    if abs(Q[3]) <= 1e-12 * np.max(np.abs(Q)):
        raise ZeroDivisionError("image lies on the line at infinity y3 = 0")
    return AlphaPoint(Q[1] / Q[3], Q[2] / Q[3])


def weierstrass_X(p: AlphaPoint) -> tuple[HPoint, HPoint]:
    """Trace X = (0 : 2x1 : 2x2 : 1 - x1^2) of E0 X1 on alpha, and X / (1 + x1^2).

    (X, X) = -(1 + x1^2)^2, so the rescaled point has (X~, X~) = -1.
    """
    X = _weierstrass_vec(p.as_array(), normalize=False)
    return HPoint(X), HPoint(X / (1.0 + p.x1 * p.x1))


def _weierstrass_vec(q: np.ndarray, normalize: bool = True) -> np.ndarray:
    x1, x2 = q
    X = np.array([0.0, 2.0 * x1, 2.0 * x2, 1.0 - x1 * x1])
    return X / (1.0 + x1 * x1) if normalize else X


def metric_from_embedding(p: AlphaPoint, h: float = 1e-5) -> np.ndarray:
    """g_ij = -(d_i X~, d_j X~) with derivatives by central differences."""
    J = central_diff(_weierstrass_vec, p.as_array(), h)
    return -(J.T @ ETA @ J)


# ---------------------------------------------------------------------------
# Closed forms on alpha


def metric(q) -> np.ndarray:
    x1 = float(np.asarray(q)[0])
    return np.array([[4.0 / (1.0 + x1 * x1) ** 2, 0.0], [0.0, 0.0]])


def christoffel(q) -> np.ndarray:
    """G[k, i, j] = Gamma^k_{ij} (0-based indices)."""
    x1, x2 = (float(c) for c in np.asarray(q)[:2])
    a = -2.0 * x1 / (1.0 + x1 * x1)
    G = np.zeros((2, 2, 2))
    G[0, 0, 0] = a
    G[1, 0, 1] = G[1, 1, 0] = a
    G[1, 0, 0] = 2.0 * x2 / (1.0 + x1 * x1)
    return G


def curvature(q) -> np.ndarray:
    """Closed-form R[i, j, k, l]; only R^2_{1,1,2} = -R^2_{1,2,1} is non-zero."""
    x1 = float(np.asarray(q)[0])
    K = 4.0 / (1.0 + x1 * x1) ** 2
    R = np.zeros((2, 2, 2, 2))
    R[1, 0, 0, 1] = -K
    R[1, 0, 1, 0] = K
    return R


def curvature_component(R: np.ndarray, r: int, s: int, k: int, i: int) -> float:
    """Component with the antisymmetric pair (r, s) first, then k, upper index i (1-based).

    In that ordering the contraction over r and i gives Ricci.
    """
    return float(R[i - 1, k - 1, r - 1, s - 1])


def connection_at(p: AlphaPoint) -> ConnectionData:
    x1, x2 = p.x1, p.x2
    s = 1.0 + x1 * x1
    K = 4.0 / (s * s)
    return ConnectionData(
        g11=K,
        gamma1_11=-2.0 * x1 / s,
        gamma2_12=-2.0 * x1 / s,
        gamma2_11=2.0 * x2 / s,
        R2_121=-K,
        Ric11=K,
    )


def equiaffine_check(p: AlphaPoint, h: float = 1e-5) -> tuple[np.ndarray, np.ndarray]:
    """Traced connection Gamma^s_{ks} and the gradient of ln(1 / (1 + x1^2)^2)."""
    lhs = np.einsum("sks->k", christoffel(p.as_array()))
    rhs = central_diff(lambda q: np.log(1.0 / (1.0 + q[0] ** 2) ** 2), p.as_array(), h)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Curves


def geodesic_family(A: float, B: float, x1):
    """Parabolas x2 = A (x1^2 - 1) + B x1 (geodesics up to parametrisation)."""
    return A * (x1 * x1 - 1.0) + B * x1


def geodesic_family_slope(A: float, B: float, x1: float) -> float:
    return 2.0 * A * x1 + B


def fiber_projection(v: float, x1):
    """Image x2 = -v/2 (x1 + 1)^2 of the quadric fiber (y0 - y1) v = y2."""
    return -0.5 * v * (x1 + 1.0) ** 2


def fiber_point(v: float, phi: float, eps: int = 1) -> HPoint:
    """Point (eps cosh phi : eps sinh phi : v eps e^-phi : 1) on the quadric fiber over v."""
    y0 = eps * np.cosh(phi)
    y1 = eps * np.sinh(phi)
    return HPoint(y0, y1, v * (y0 - y1), 1.0)


def on_fiber(v: float, P, tol: float = 1e-9) -> bool:
    """Whether P satisfies both (y0 - y1) v = y2 and the quadric equation."""
    y = _coords(P)
    m = max(1.0, float(np.max(np.abs(y))))
    return abs((y[0] - y[1]) * v - y[2]) <= tol * m and abs(quadric_eval(y)) <= tol * m * m
