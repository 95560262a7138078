"""The group G of invertible type II elements and its two principal fibrations.

The projection ``pi1`` has the cosets H1*x (H1 = invertible double numbers
a0 + a1 e1) as fibers, so left multiplication by H1 preserves every fiber
and right multiplication descends to an affine map of the base line.
``pi2`` does the same for H2 = invertible dual numbers a0 + a2 e2, which is
normal in G, and right multiplication descends to a hyperbolic (Moebius)
map fixing u = +1 and u = -1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraKind,
    DomainError,
    Element,
    KindError,
    NotInvertibleError,
    bilinear,
    conj,
    is_invertible,
    mul,
    norm_sq,
)

TOL = 1e-9


class SubgroupTag(enum.Enum):
    G = "G"
    H1 = "H1"
    H2 = "H2"
    S1 = "S1"
    S2 = "S2"


class Fibration(enum.Enum):
    H1 = "H1fib"
    H2 = "H2fib"


def _require_ii(x: Element) -> None:
    if x.kind is not AlgebraKind.II:
        raise KindError("the group G lives in the type II algebra")


def _require_group(x: Element) -> None:
    _require_ii(x)
    if not is_invertible(x):
        raise NotInvertibleError(f"{x!r} is not in G")


# ---------------------------------------------------------------------------
# Projections and fibers


def pi1(x: Element) -> float:
    """Base coordinate of the H1-fibration, c2 / (c0 + c1)."""
    _require_ii(x)
    d = x.c0 + x.c1
    if abs(d) <= TOL * max(1.0, abs(x.c0), abs(x.c1)):
        raise DomainError(f"c0 + c1 = 0 for {x!r}")
    return x.c2 / d


def left_coset_projection(x: Element) -> float:
    """c2 / (c0 - c1): constant on the cosets x*H1 (right multiplication by H1).

    Its level sets u(c0 - c1) = c2 are the fiber planes used by the
    projective model.
    """
    _require_ii(x)
    d = x.c0 - x.c1
    if abs(d) <= TOL * max(1.0, abs(x.c0), abs(x.c1)):
        raise DomainError(f"c0 - c1 = 0 for {x!r}")
    return x.c2 / d


def pi2(x: Element) -> float:
    """Base coordinate of the H2-fibration, c1 / c0.  Never equals +-1 on G."""
    _require_ii(x)
    if abs(x.c0) <= TOL * max(1.0, abs(x.c1)):
        raise DomainError(f"c0 = 0 for {x!r}")
    return x.c1 / x.c0


def fiber_contains(which, u: float, x: Element, tol: float = TOL) -> bool:
    """Whether x lies on the fiber over u: u(c0+c1) = c2 for H1, u c0 = c1 for H2."""
    which = _fibration(which)
    if which is Fibration.H1:
        return abs(u * (x.c0 + x.c1) - x.c2) <= tol
    return abs(u * x.c0 - x.c1) <= tol


def section(u: float, which=Fibration.H1) -> Element:
    """A global section of the fibration: 1 + u e2 for H1, 1 + u e1 for H2."""
    which = _fibration(which)
    if which is Fibration.H1:
        return Element(1.0, 0.0, u)
    if abs(abs(u) - 1.0) <= TOL:
        raise DomainError("u = +-1 is not in the base of the H2 fibration")
    return Element(1.0, u, 0.0)


def _fibration(which) -> Fibration:
    if isinstance(which, Fibration):
        return which
    key = str(which).upper()
    for f in Fibration:
        if key in (f.value.upper(), f.name, "F" + f.name[-1]):
            return f
    raise ValueError(f"unknown fibration {which!r}")


# ---------------------------------------------------------------------------
# Subgroups


def is_member(tag, x: Element, tol: float = TOL) -> bool:
    tag = tag if isinstance(tag, SubgroupTag) else SubgroupTag(str(tag).upper())
    _require_ii(x)
    if not is_invertible(x):
        return False
    n = norm_sq(x)
    if tag is SubgroupTag.G:
        return True
    if tag is SubgroupTag.H1:
        return abs(x.c2) <= tol
    if tag is SubgroupTag.H2:
        return abs(x.c1) <= tol
    if tag is SubgroupTag.S1:
        return abs(x.c2) <= tol and abs(n - 1.0) <= tol
    return abs(x.c1) <= tol and abs(n - 1.0) <= tol


# ---------------------------------------------------------------------------
# Matrices of left and right multiplication


def left_matrix(a: Element) -> np.ndarray:
    """Matrix L(a) with L(a) @ coeffs(x) = coeffs(a*x)."""
    _require_group(a)
    a0, a1, a2 = a.coeffs
    return np.array(
        [
            [a0, a1, 0.0],
            [a1, a0, 0.0],
            [a2, -a2, a0 + a1],
        ]
    )


def right_matrix(b: Element) -> np.ndarray:
    """Matrix R(b) with R(b) @ coeffs(x) = coeffs(x*b)."""
    _require_group(b)
    b0, b1, b2 = b.coeffs
    return np.array(
        [
            [b0, b1, 0.0],
            [b1, b0, 0.0],
            [b2, b2, b0 - b1],
        ]
    )


def det_left(a: Element) -> float:
    """Closed-form determinant (a0^2 - a1^2)(a0 + a1) of L(a)."""
    return (a.c0 * a.c0 - a.c1 * a.c1) * (a.c0 + a.c1)


# ---------------------------------------------------------------------------
# Induced maps of the base


@dataclass(frozen=True)
class AffineMap:
    """u -> alpha*u + beta."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("alpha must be non-zero")

    def __call__(self, u: float) -> float:
        return self.alpha * u + self.beta

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        return AffineMap(self.alpha * other.alpha, self.alpha * other.beta + self.beta)

    def inverse(self) -> "AffineMap":
        return AffineMap(1.0 / self.alpha, -self.beta / self.alpha)


@dataclass(frozen=True)
class HyperbolicMap:
    """u -> (u + alpha) / (alpha*u + 1), fixing u = 1 and u = -1."""

    alpha: float

    def __post_init__(self):
        if abs(abs(self.alpha) - 1.0) <= TOL:
            raise ValueError("|alpha| must differ from 1")

    def __call__(self, u: float) -> float:
        d = self.alpha * u + 1.0
        if d == 0:
            raise DomainError(f"u = {u} is sent to infinity")
        return (u + self.alpha) / d

    def compose(self, other: "HyperbolicMap") -> "HyperbolicMap":
        """self after other (rapidity addition)."""
        return HyperbolicMap((self.alpha + other.alpha) / (1.0 + self.alpha * other.alpha))

    def inverse(self) -> "HyperbolicMap":
        return HyperbolicMap(-self.alpha)


@dataclass(frozen=True)
class Involution:
    """Base map induced by a hyperbolic involution: u -> b2 - u, or u -> 1/u."""

    which: Fibration
    b2: float

    def __call__(self, u: float) -> float:
        if self.which is Fibration.H1:
            return -u + self.b2
        if u == 0:
            raise DomainError("u = 0 is not in the base of the H2 fibration")
        return 1.0 / u


def base_action(which, b: Element):
    """Map of the base induced by x -> x*b, so that map(pi(x)) = pi(x*b)."""
    which = _fibration(which)
    _require_group(b)
    if which is Fibration.H1:
        if abs(b.c0 + b.c1) <= TOL or abs(b.c0 - b.c1) <= TOL:
            raise DomainError(f"degenerate b={b!r} for the H1 fibration")
        return AffineMap((b.c0 - b.c1) / (b.c0 + b.c1), pi1(b))
    return HyperbolicMap(pi2(b))


def involution_element(b2: float) -> Element:
    """The element e1 + b2 e2 whose right multiplication is an involution."""
    return Element(0.0, 1.0, b2)


def involution_base(which, b2: float) -> tuple[np.ndarray, Involution]:
    """Right-multiplication matrix of e1 + b2 e2 and the base map it induces."""
    which = _fibration(which)
    return right_matrix(involution_element(b2)), Involution(which, b2 if which is Fibration.H1 else 0.0)


# ---------------------------------------------------------------------------
# Rotations, reflections


def _unit_modulus(a: Element, name: str) -> float:
    n = norm_sq(a)
    if abs(abs(n) - 1.0) > TOL:
        raise DomainError(f"|{name}|^2 = {n} must be +-1")
    return n


def rotate(a: Element, x: Element, b: Element, improper: bool = False) -> Element:
    """x -> a x b (proper) or a conj(x) b (improper), with |a|^2, |b|^2 = +-1.

    Scales the quadratic form by |a|^2 |b|^2, so it is a rotation when the
    product is +1 and an anti-rotation when it is -1.
    """
    _unit_modulus(a, "a")
    _unit_modulus(b, "b")
    return mul(mul(a, conj(x) if improper else x), b)


def reflect(x: Element, n: Element) -> Element:
    """Reflection in the plane orthogonal to n: x -> -n conj(x) n / |n|^2.

    For |n|^2 = 1 this is -n conj(x) n.  Dividing by |n|^2 extends the same
    map to |n|^2 = -1, so multiples of n are negated and vectors orthogonal
    to n are fixed in both cases.
    """
    nn = _unit_modulus(n, "n")
    return mul(mul(n, conj(x)), n).scale(-1.0 / nn)


def angle_invariant(a: Element, x: Element, side: str = "left") -> float:
    """Hyperbolic cosine (|a|^2 = 1) or sine (|a|^2 = -1) of the angle from x to a*x.

    Returned as (x, a x) / |x|^2, which reduces to the scalar part of a for
    every non-null x.  ``side="right"`` measures the angle from x to x*a.
    """
    _unit_modulus(a, "a")
    nx = norm_sq(x)
    if abs(nx) <= TOL:
        raise DomainError(f"{x!r} is a null vector")
    y = mul(a, x) if side == "left" else mul(x, a)
    return bilinear(x, y) / nx


def decompose_unit(a: Element) -> tuple[float, Element]:
    """Write a = cosh(phi) + a0 sinh(phi)  (|a|^2 = 1)  or  sinh(phi) + a0 cosh(phi)  (|a|^2 = -1).

    a0 is pure with |a0|^2 = -1.  For |a|^2 = 1 the representation needs
    c0 >= 1, and fails for c0 = 1 with a non-zero e2 part; both cases raise
    DomainError.  For a = 1 the pure unit e1 is returned.
    """
    n = _unit_modulus(a, "a")
    if n > 0:
        if a.c0 < 0:
            raise DomainError(f"{a!r} has c0 < 0 and is not cosh(phi) + a0 sinh(phi)")
        if abs(a.c1) <= TOL:
            if abs(a.c2) > TOL:
                raise DomainError(f"{a!r} = 1 + a2 e2 admits no decomposition")
            return 0.0, Element(0.0, 1.0, 0.0)
        phi = math.asinh(a.c1)
        return phi, Element(0.0, 1.0, a.c2 / a.c1)
    phi = math.asinh(a.c0)
    p = 1.0 if a.c1 > 0 else -1.0
    return phi, Element(0.0, p, a.c2 / math.cosh(phi))


def recompose_unit(phi: float, a0: Element, timelike: bool = True) -> Element:
    """Inverse of :func:`decompose_unit`."""
    one = Element.unit()
    if timelike:
        return one.scale(math.cosh(phi)) + a0.scale(math.sinh(phi))
    return one.scale(math.sinh(phi)) + a0.scale(math.cosh(phi))
