"""Arithmetic for the three 3-dimensional unital associative real algebras.

Elements are written x = c0 + c1 e1 + c2 e2.  The multiplication of each
kind is available twice: as a hard-coded closed form (fast path) and as a
table-driven bilinear product built from the bundled ``*.tbl`` files.  The
two are cross-checked by the test suite.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable

import numpy as np


class AlgebraError(ValueError):
    """Base class for algebraic misuse (wrong kind, inconsistent table)."""


class KindError(AlgebraError):
    """Operands belong to different algebras, or the kind lacks the operation."""


class DomainError(ValueError):
    """An argument lies outside the domain of a map (null plane, pole, ...)."""


class NotInvertibleError(DomainError):
    pass


class TableError(AlgebraError):
    """A multiplication-table file is malformed."""


class AlgebraKind(enum.Enum):
    I = "I"
    II = "II"
    III = "III"

    @classmethod
    def parse(cls, text: "str | AlgebraKind") -> "AlgebraKind":
        if isinstance(text, AlgebraKind):
            return text
        key = str(text).strip().upper()
        if key.startswith("TYPE"):
            key = key[4:]
        try:
            return cls(key)
        except ValueError:
            raise KindError(f"unknown algebra kind {text!r}") from None


class SubalgebraType(enum.Enum):
    DOUBLE = "Double"
    DUAL = "Dual"
    COMPLEX = "Complex"


@dataclass(frozen=True)
class Element:
    """A number c0 + c1 e1 + c2 e2 of one of the three algebras."""

    c0: float
    c1: float
    c2: float
    kind: AlgebraKind = AlgebraKind.II

    def __post_init__(self):
        for name in ("c0", "c1", "c2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"non-finite coefficient {name}={value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "kind", AlgebraKind.parse(self.kind))

    @classmethod
    def from_array(cls, coeffs: Iterable[float], kind=AlgebraKind.II) -> "Element":
        c0, c1, c2 = (float(c) for c in coeffs)
        return cls(c0, c1, c2, kind)

    @classmethod
    def unit(cls, kind=AlgebraKind.II) -> "Element":
        return cls(1.0, 0.0, 0.0, kind)

    @property
    def coeffs(self) -> tuple[float, float, float]:
        return (self.c0, self.c1, self.c2)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def _same(self, other: "Element") -> None:
        if other.kind is not self.kind:
            raise KindError(f"kind mismatch: {self.kind.value} vs {other.kind.value}")

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._same(other)
        return Element(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2, self.kind)

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._same(other)
        return Element(self.c0 - other.c0, self.c1 - other.c1, self.c2 - other.c2, self.kind)

    def __neg__(self):
        return Element(-self.c0, -self.c1, -self.c2, self.kind)

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul(self, other)
        if isinstance(other, (int, float)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(1.0 / other)
        return NotImplemented

    def scale(self, s: float) -> "Element":
        return Element(s * self.c0, s * self.c1, s * self.c2, self.kind)

    def max_abs_diff(self, other: "Element") -> float:
        self._same(other)
        return max(abs(a - b) for a, b in zip(self.coeffs, other.coeffs))

    def isclose(self, other: "Element", tol: float = 1e-9) -> bool:
        return self.max_abs_diff(other) <= tol

    def __repr__(self):
        return f"Element({self.c0!r}, {self.c1!r}, {self.c2!r}, kind={self.kind.value})"


# ---------------------------------------------------------------------------
# Multiplication tables

_TABLE_LINE = re.compile(
    r"""^\s*(?:e([012])|(1))\s*\*\s*(?:e([012])|(1))\s*=\s*
    (?P<a>[+-]?\s*\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*
    (?P<sb>[+-])\s*(?P<b>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*e1\s*
    (?P<sc>[+-])\s*(?P<c>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*e2\s*$""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class MulTable:
    """Structure constants ``entries[i, j] = coeffs(e_i * e_j)`` with e_0 = 1."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.shape != (3, 3, 3):
            raise TableError(f"table must have shape (3, 3, 3), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        basis = np.eye(3)
        for i in range(3):
            if not (np.array_equal(arr[0, i], basis[i]) and np.array_equal(arr[i, 0], basis[i])):
                raise TableError("table is not unital: row/column of e0 must reproduce the basis")

    @classmethod
    def parse(cls, text: str) -> "MulTable":
        """Parse lines of the form ``ei*ej = a +b e1 +c e2``.

        Blank lines and ``#`` comments are ignored.  Every one of the nine
        products must appear exactly once.
        """
        entries = np.full((3, 3, 3), np.nan)
        seen: set[tuple[int, int]] = set()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = _TABLE_LINE.match(line)
            if m is None:
                raise TableError(f"line {lineno}: cannot parse {raw!r}")
            i = int(m.group(1)) if m.group(1) is not None else 0
            j = int(m.group(3)) if m.group(3) is not None else 0
            if (i, j) in seen:
                raise TableError(f"line {lineno}: duplicate entry for e{i}*e{j}")
            seen.add((i, j))
            a = float(m.group("a").replace(" ", ""))
            b = float(m.group("sb") + m.group("b"))
            c = float(m.group("sc") + m.group("c"))
            entries[i, j] = (a, b, c)
        missing = [(i, j) for i in range(3) for j in range(3) if (i, j) not in seen]
        if missing:
            names = ", ".join(f"e{i}*e{j}" for i, j in missing)
            raise TableError(f"missing entries: {names}")
        return cls(entries)

    def dumps(self) -> str:
        lines = []
        for i in range(3):
            for j in range(3):
                a, b, c = (float(v) for v in self.entries[i, j])
                lines.append(f"e{i}*e{j} = {a:g} {b:+g} e1 {c:+g} e2")
        return "\n".join(lines) + "\n"

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Bilinear extension of the table to coefficient vectors."""
        return np.einsum("i,j,ijk->k", np.asarray(x, float), np.asarray(y, float), self.entries)

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x*y acting on coefficient columns."""
        return np.einsum("i,ijk->kj", np.asarray(x, float), self.entries)

    def is_associative(self, tol: float = 0.0) -> bool:
        basis = np.eye(3)
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    lhs = self.product(self.product(basis[i], basis[j]), basis[k])
                    rhs = self.product(basis[i], self.product(basis[j], basis[k]))
                    if np.max(np.abs(lhs - rhs)) > tol:
                        return False
        return True


_TABLE_FILES = {AlgebraKind.I: "typeI.tbl", AlgebraKind.II: "typeII.tbl", AlgebraKind.III: "typeIII.tbl"}
_TABLE_CACHE: dict[AlgebraKind, MulTable] = {}


def table(kind) -> MulTable:
    """The bundled multiplication table of ``kind``."""
    kind = AlgebraKind.parse(kind)
    if kind not in _TABLE_CACHE:
        text = resources.files(__package__).joinpath("tables", _TABLE_FILES[kind]).read_text()
        _TABLE_CACHE[kind] = MulTable.parse(text)
    return _TABLE_CACHE[kind]


# ---------------------------------------------------------------------------
# Products


def _mul_closed(kind: AlgebraKind, x, y) -> tuple[float, float, float]:
    x0, x1, x2 = x
    y0, y1, y2 = y
    if kind is AlgebraKind.II:
        return (
            x0 * y0 + x1 * y1,
            x0 * y1 + x1 * y0,
            x2 * (y0 - y1) + (x0 + x1) * y2,
        )
    if kind is AlgebraKind.I:
        return (x0 * y0, x0 * y1 + x1 * y0, x0 * y2 + x1 * y1 + x2 * y0)
    return (x0 * y0, x0 * y1 + x1 * y0, x0 * y2 + x2 * y0)


def mul(x: Element, y: Element) -> Element:
    """Product x*y via the closed form of the algebra's kind."""
    x._same(y)
    return Element(*_mul_closed(x.kind, x.coeffs, y.coeffs), kind=x.kind)


def mul_table(x: Element, y: Element) -> Element:
    """Product x*y via the bundled multiplication table."""
    x._same(y)
    return Element.from_array(table(x.kind).product(x.as_array(), y.as_array()), x.kind)


def conj(x: Element) -> Element:
    """Conjugation c0 - c1 e1 - c2 e2 (anti-automorphism of types II and III)."""
    if x.kind is AlgebraKind.I:
        raise KindError("conjugation is not an anti-automorphism of the type I algebra")
    return Element(x.c0, -x.c1, -x.c2, x.kind)


def _scale_sq(*elements: Element) -> float:
    return max([1.0] + [c * c for e in elements for c in e.coeffs])


def bilinear(x: Element, y: Element, tol: float = 1e-9) -> float:
    """The scalar product (x, y) = (x conj(y) + y conj(x)) / 2.

    The pure part of the symmetrised product must vanish; a non-zero pure
    part means the algebra or the product kernel is broken.
    """
    x._same(y)
    s = mul(x, conj(y)) + mul(y, conj(x))
    if max(abs(s.c1), abs(s.c2)) > tol * _scale_sq(x, y):
        raise AlgebraError(f"bilinear form has non-scalar part ({s.c1}, {s.c2})")
    return 0.5 * s.c0


def norm_sq(x: Element) -> float:
    """Squared modulus |x|^2 = (x, x); equals c0^2 - c1^2 for type II."""
    if x.kind is AlgebraKind.I:
        raise KindError("the type I algebra carries no scalar product")
    if x.kind is AlgebraKind.II:
        return x.c0 * x.c0 - x.c1 * x.c1
    return x.c0 * x.c0


def is_invertible(x: Element, rtol: float = 1e-12) -> bool:
    scale = max(1.0, x.c0 * x.c0 + x.c1 * x.c1 + x.c2 * x.c2)
    if x.kind is AlgebraKind.II:
        return abs(x.c0 * x.c0 - x.c1 * x.c1) >= rtol * scale
    return x.c0 * x.c0 >= rtol * scale


def inverse(x: Element) -> Element:
    if not is_invertible(x):
        raise NotInvertibleError(f"{x!r} is not invertible")
    if x.kind is AlgebraKind.II:
        n = x.c0 * x.c0 - x.c1 * x.c1
        return Element(x.c0 / n, -x.c1 / n, -x.c2 / n, x.kind)
    # types I and III: solve x*y = 1
    sol = np.linalg.solve(table(x.kind).left_matrix(x.as_array()), np.array([1.0, 0.0, 0.0]))
    return Element.from_array(sol, x.kind)


_COMPONENTS = {(1, 1): 0, (1, -1): 1, (-1, 1): 2, (-1, -1): 3}


def component_sign_pair(index: int) -> tuple[int, int]:
    """Inverse of :func:`component_index`: (sgn(c0+c1), sgn(c0-c1))."""
    for pair, idx in _COMPONENTS.items():
        if idx == index:
            return pair
    raise ValueError(f"component index must be in 0..3, got {index}")


def component_index(x: Element) -> int:
    """Connected component of the type II group containing ``x``.

    0: (+,+)  1: (+,-)  2: (-,+)  3: (-,-) for the signs of (c0+c1, c0-c1).
    Both linear forms are multiplicative, so the index of a product only
    depends on the indices of the factors.
    """
    if x.kind is not AlgebraKind.II:
        raise KindError("component_index is defined for the type II group")
    if not is_invertible(x):
        raise NotInvertibleError(f"{x!r} lies on a null plane")
    p, m = x.c0 + x.c1, x.c0 - x.c1
    return _COMPONENTS[(1 if p > 0 else -1, 1 if m > 0 else -1)]


def classify_subalgebra(v: Element, tol: float = 1e-9) -> SubalgebraType:
    """Type of the 2-dimensional subalgebra span{1, v} of the type II algebra.

    Writes v*v = alpha + beta*v and classifies by the discriminant
    beta^2 + 4 alpha of the quadratic t^2 - beta t - alpha.
    """
    if v.kind is not AlgebraKind.II:
        raise KindError("classify_subalgebra expects a type II element")
    if math.hypot(v.c1, v.c2) <= tol:
        raise AlgebraError("v is a scalar multiple of 1; span{1, v} is 1-dimensional")
    vv = mul(v, v).as_array()
    basis = np.column_stack([[1.0, 0.0, 0.0], v.as_array()])
    (alpha, beta), *_ = np.linalg.lstsq(basis, vv, rcond=None)
    residual = float(np.max(np.abs(basis @ np.array([alpha, beta]) - vv)))
    if residual > tol:
        raise AlgebraError(f"span{{1, v}} is not closed under multiplication (residual {residual:g})")
    disc = beta * beta + 4.0 * alpha
    if abs(disc) <= tol * max(1.0, beta * beta, abs(alpha)):
        return SubalgebraType.DUAL
    return SubalgebraType.DOUBLE if disc > 0 else SubalgebraType.COMPLEX
