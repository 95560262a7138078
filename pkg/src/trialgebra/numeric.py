"""Finite differences, geodesic integration and curvature of affine connections.

A connection is any callable ``conn(p) -> G`` returning the array
``G[k, i, j] = Gamma^k_{ij}`` at the point ``p``.

Curvature uses the single convention

    R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj}
                + Gamma^i_{ks} Gamma^s_{lj} - Gamma^i_{ls} Gamma^s_{kj}

stored as ``R[i, j, k, l]``; the Ricci tensor is ``Ric[j, l] = R[i, j, i, l]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

Connection = Callable[[np.ndarray], np.ndarray]


def central_diff(f: Callable, p, h: float = 1e-5) -> np.ndarray:
    """Jacobian of ``f`` at ``p`` by central differences.

    Column i is (f(p + h e_i) - f(p - h e_i)) / (2h).  For array-valued ``f``
    the result has shape ``f(p).shape + (len(p),)``.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    p = np.atleast_1d(np.asarray(p, dtype=float))
    cols = []
    for i in range(p.size):
        dp = np.zeros_like(p)
        dp[i] = h
        fp = np.asarray(f(p + dp), dtype=float)
        fm = np.asarray(f(p - dp), dtype=float)
        cols.append((fp - fm) / (2.0 * h))
    return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class OdeState:
    position: np.ndarray
    velocity: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float)
        vel = np.asarray(self.velocity, dtype=float)
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(vel))):
            raise FloatingPointError("non-finite geodesic state")
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "velocity", vel)


def geodesic_acceleration(conn: Connection, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Coordinate acceleration -Gamma^k_ij v^i v^j of a geodesic."""
    return -np.einsum("kij,i,j->k", conn(x), v, v)


def integrate_geodesic(conn: Connection, init: OdeState, step: float, n: int) -> list[OdeState]:
    """Classical RK4 for x'' + Gamma(x)(x', x') = 0; returns n + 1 states."""
    if step <= 0:
        raise ValueError("step must be positive")

    def rhs(y):
        x, v = y[:2], y[2:]
        return np.concatenate([v, geodesic_acceleration(conn, x, v)])

    y = np.concatenate([init.position, init.velocity])
    t = init.t
    out = [init]
    for _ in range(n):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * step * k1)
        k3 = rhs(y + 0.5 * step * k2)
        k4 = rhs(y + step * k3)
        y = y + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += step
        out.append(OdeState(y[:2], y[2:], t))
    return out


def tangency_residual(conn: Connection, point, velocity, acceleration) -> float:
    """|A^1 v^2 - A^2 v^1| / |v|^2 with A the covariant acceleration of a curve.

    A = x'' + Gamma(x', x').  Zero exactly when A is parallel to the velocity,
    i.e. the curve is a geodesic up to reparametrisation.
    """
    v = np.asarray(velocity, dtype=float)
    vv = float(v @ v)
    if vv == 0:
        raise ValueError("velocity must be non-zero")
    a = np.asarray(acceleration, dtype=float) - geodesic_acceleration(conn, np.asarray(point, float), v)
    return abs(a[0] * v[1] - a[1] * v[0]) / vv


def riemann(conn: Connection, p, h: float = 1e-5) -> np.ndarray:
    """Curvature tensor R[i, j, k, l] of ``conn`` at ``p``, derivatives by central differences."""
    p = np.asarray(p, dtype=float)
    G = conn(p)
    dG = central_diff(conn, p, h)  # dG[i, a, b, k] = d_k Gamma^i_{ab}
    d_term = np.einsum("iljk->ijkl", dG) - np.einsum("ikjl->ijkl", dG)
    q_term = np.einsum("iks,slj->ijkl", G, G) - np.einsum("ils,skj->ijkl", G, G)
    return d_term + q_term


def ricci(R: np.ndarray) -> np.ndarray:
    return np.einsum("ijil->jl", R)


def covariant_derivative_metric(metric: Callable, conn: Connection, p, h: float = 1e-5) -> np.ndarray:
    """nabla_k g_ij stored as [k, i, j]."""
    p = np.asarray(p, dtype=float)
    g = metric(p)
    G = conn(p)
    dg = np.moveaxis(central_diff(metric, p, h), -1, 0)
    return dg - np.einsum("ski,sj->kij", G, g) - np.einsum("skj,is->kij", G, g)


def covariant_derivative_curvature(curvature: Callable, conn: Connection, p, h: float = 1e-5) -> np.ndarray:
    """nabla_m R^i_{jkl} stored as [m, i, j, k, l]."""
    p = np.asarray(p, dtype=float)
    R = curvature(p)
    G = conn(p)
    dR = np.moveaxis(central_diff(curvature, p, h), -1, 0)
    return (
        dR
        + np.einsum("ims,sjkl->mijkl", G, R)
        - np.einsum("smj,iskl->mijkl", G, R)
        - np.einsum("smk,ijsl->mijkl", G, R)
        - np.einsum("sml,ijks->mijkl", G, R)
    )
