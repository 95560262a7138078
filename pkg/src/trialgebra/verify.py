"""Randomised property suites and their JSON reports.

Every check draws from its own generator, seeded from (seed, suite, check)
through :class:`numpy.random.SeedSequence` with the PCG64 bit generator, so
reports are reproducible and do not depend on which checks ran before.

Sampling margins keep the draws away from the excluded sets: by default
coefficients lie in [-10, 10] and |c0 + c1|, |c0 - c1| >= 1e-3 wherever a
projection divides by them; plane abscissae keep |x -+ 1| >= 1e-3;
adapted scales keep |lambda| >= 0.1.  Suites that need wider margins say so;
the type I and III inverses, whose conditioning grows like 1/c0^2, use
|c0| >= 0.1.
"""

from __future__ import annotations

import json
import math
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import adapted as ad
from . import conformal as cf
from . import fibration as fb
from . import numeric as nm
from . import projective as pj
from .algebra import (
    AlgebraKind,
    Element,
    SubalgebraType,
    bilinear,
    classify_subalgebra,
    component_index,
    conj,
    inverse,
    is_invertible,
    mul,
    mul_table,
    norm_sq,
)


class UnknownSuiteError(KeyError):
    pass


# ---------------------------------------------------------------------------
# Reports


@dataclass
class CheckRecord:
    id: str
    ref: str
    status: str
    trials: int
    failures: int
    max_abs_err: float | None
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "paper_ref": self.ref,
            "status": self.status,
            "trials": self.trials,
            "failures": self.failures,
            "max_abs_err": self.max_abs_err,
            "witness": self.witness,
        }


@dataclass
class SuiteReport:
    suite: str
    seed: int
    trials: int
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(c.failures for c in self.checks)

    @property
    def max_abs_err(self) -> float:
        errs = [c.max_abs_err for c in self.checks if c.max_abs_err is not None]
        return max(errs, default=0.0)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "status": self.status,
            "failures": self.failures,
            "max_abs_err": self.max_abs_err,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.id)],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True)


def _plain(value):
    if isinstance(value, Element):
        return [value.c0, value.c1, value.c2]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


class Check:
    """Accumulates the errors of one property over many trials."""

    def __init__(self, id: str, ref: str, tol: float):
        self.id, self.ref, self.tol = id, ref, tol
        self.trials = 0
        self.failures = 0
        self.max_err = 0.0
        self.witness = None

    def observe(self, err: float, **witness) -> bool:
        self.trials += 1
        err = float(err)
        ok = math.isfinite(err) and err <= self.tol
        if math.isfinite(err):
            self.max_err = max(self.max_err, err)
        else:
            self.max_err = math.inf
        if not ok:
            self.failures += 1
            if self.witness is None:
                self.witness = _plain(dict(witness, err=err))
        return ok

    def expect(self, condition: bool, **witness) -> bool:
        return self.observe(0.0 if condition else math.inf, **witness)

    def record(self) -> CheckRecord:
        return CheckRecord(
            self.id,
            self.ref,
            "pass" if self.failures == 0 else "fail",
            self.trials,
            self.failures,
            self.max_err,
            self.witness,
        )


class NegativeControl:
    """Passes once a single violation of the property has been witnessed."""

    def __init__(self, id: str, ref: str, threshold: float):
        self.id, self.ref, self.threshold = id, ref, threshold
        self.trials = 0
        self.witness = None

    @property
    def found(self) -> bool:
        return self.witness is not None

    def observe(self, violation: float, **witness) -> None:
        self.trials += 1
        if self.witness is None and violation > self.threshold:
            self.witness = _plain(dict(witness, violation=float(violation)))

    def record(self) -> CheckRecord:
        return CheckRecord(
            self.id,
            self.ref,
            "pass" if self.found else "fail",
            self.trials,
            0 if self.found else 1,
            None,
            self.witness,
        )


class _Ctx:
    def __init__(self, suite: str, seed: int, trials: int):
        self.suite, self.seed, self.trials = suite, seed, trials
        self.items: list = []

    def rng(self, check_id: str) -> np.random.Generator:
        key = zlib.crc32(f"{self.suite}/{check_id}".encode())
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence([self.seed, key])))

    def check(self, id: str, ref: str, tol: float) -> Check:
        c = Check(id, ref, tol)
        self.items.append(c)
        return c

    def negative(self, id: str, ref: str, threshold: float) -> NegativeControl:
        c = NegativeControl(id, ref, threshold)
        self.items.append(c)
        return c


SUITES: dict[str, Callable[[_Ctx], None]] = {}


def suite(name: str):
    def register(fn):
        SUITES[name] = fn
        return fn

    return register


def suite_names() -> list[str]:
    return list(SUITES)


def run_suite(name: str, seed: int = 42, trials: int = 1000) -> SuiteReport:
    if name not in SUITES:
        raise UnknownSuiteError(name)
    if trials < 1:
        raise ValueError("trials must be positive")
    ctx = _Ctx(name, int(seed), int(trials))
    SUITES[name](ctx)
    return SuiteReport(name, int(seed), int(trials), [item.record() for item in ctx.items])


def run_suites(names, seed: int = 42, trials: int = 1000) -> list[SuiteReport]:
    return [run_suite(n, seed, trials) for n in names]


def aggregate(reports: list[SuiteReport], seed: int, trials: int) -> dict:
    return {
        "seed": seed,
        "trials": trials,
        "failures": sum(r.failures for r in reports),
        "status": "pass" if all(r.passed for r in reports) else "fail",
        "suites": [r.to_dict() for r in reports],
    }


# ---------------------------------------------------------------------------
# Samplers


def _elem(rng, kind=AlgebraKind.II, lo=-10.0, hi=10.0) -> Element:
    return Element(*rng.uniform(lo, hi, 3), kind=kind)


def _group(rng, margin=1e-3, lo=-10.0, hi=10.0) -> Element:
    """Type II element with |c0 + c1|, |c0 - c1| >= margin."""
    while True:
        x = _elem(rng, lo=lo, hi=hi)
        if abs(x.c0 + x.c1) >= margin and abs(x.c0 - x.c1) >= margin:
            return x


def _non_null(rng, rel=0.1, lo=-10.0, hi=10.0) -> Element:
    """Type II element with |x|^2 bounded away from zero relative to its size."""
    while True:
        x = _elem(rng, lo=lo, hi=hi)
        if abs(norm_sq(x)) >= rel * max(1.0, x.c0 * x.c0 + x.c1 * x.c1):
            return x


def _h1(rng, margin=1e-3) -> Element:
    while True:
        a0, a1 = rng.uniform(-10, 10, 2)
        if abs(a0 + a1) >= margin and abs(a0 - a1) >= margin:
            return Element(a0, a1, 0.0)


def _h2(rng, margin=1e-3) -> Element:
    while True:
        a0, a2 = rng.uniform(-10, 10, 2)
        if abs(a0) >= margin:
            return Element(a0, 0.0, a2)


def _unit(rng, sign=None) -> Element:
    """Element with |a|^2 = +-1: eps (cosh t, sinh t, q) or eps (sinh t, cosh t, q)."""
    if sign is None:
        sign = 1 if rng.random() < 0.5 else -1
    t = rng.uniform(-2, 2)
    q = rng.uniform(-5, 5)
    eps = 1.0 if rng.random() < 0.5 else -1.0
    if sign > 0:
        return Element(eps * math.cosh(t), eps * math.sinh(t), q)
    return Element(eps * math.sinh(t), eps * math.cosh(t), q)


def _rel(err: float, *scales: float) -> float:
    return err / max([1.0] + [abs(s) for s in scales])


def _scale(*elements: Element) -> float:
    return max([1.0] + [abs(c) for e in elements for c in e.coeffs])


# ---------------------------------------------------------------------------
# algebra


@suite("algebra.associativity")
def _associativity(ctx):
    for kind in AlgebraKind:
        c = ctx.check(f"associativity.type{kind.value}", "(xy)z = x(yz)", 1e-9)
        rng = ctx.rng(c.id)
        for _ in range(ctx.trials):
            x, y, z = (_elem(rng, kind) for _ in range(3))
            err = mul(mul(x, y), z).max_abs_diff(mul(x, mul(y, z)))
            c.observe(err / (_scale(x) * _scale(y) * _scale(z)), x=x, y=y, z=z)


@suite("algebra.unitality")
def _unitality(ctx):
    for kind in AlgebraKind:
        c = ctx.check(f"unitality.type{kind.value}", "1 x = x 1 = x", 0.0)
        rng = ctx.rng(c.id)
        one = Element.unit(kind)
        for _ in range(ctx.trials):
            x = _elem(rng, kind)
            err = max(
                mul(one, x).max_abs_diff(x),
                mul(x, one).max_abs_diff(x),
                mul_table(one, x).max_abs_diff(x),
                mul_table(x, one).max_abs_diff(x),
            )
            c.observe(err, x=x)


@suite("algebra.closed_form")
def _closed_form(ctx):
    for kind in AlgebraKind:
        c = ctx.check(f"closed_vs_table.type{kind.value}", "closed-form product vs multiplication table", 1e-12)
        rng = ctx.rng(c.id)
        for _ in range(ctx.trials):
            x, y = _elem(rng, kind), _elem(rng, kind)
            c.observe(mul(x, y).max_abs_diff(mul_table(x, y)) / (_scale(x) * _scale(y)), x=x, y=y)
    c = ctx.check("integer_exact.typeII", "xy = x0y0+x1y1 + (x0y1+x1y0)e1 + (x2(y0-y1)+(x0+x1)y2)e2", 0.0)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x = Element(*rng.integers(-1000, 1000, 3).astype(float))
        y = Element(*rng.integers(-1000, 1000, 3).astype(float))
        c.observe(mul(x, y).max_abs_diff(mul_table(x, y)), x=x, y=y)


@suite("algebra.conjugation")
def _conjugation(ctx):
    for kind in (AlgebraKind.II, AlgebraKind.III):
        c = ctx.check(f"anti_automorphism.type{kind.value}", "conj(xy) = conj(y) conj(x)", 1e-9)
        rng = ctx.rng(c.id)
        for _ in range(ctx.trials):
            x, y = _elem(rng, kind), _elem(rng, kind)
            err = conj(mul(x, y)).max_abs_diff(mul(conj(y), conj(x)))
            c.observe(err / (_scale(x) * _scale(y)), x=x, y=y)
    neg = ctx.negative("anti_automorphism_fails.typeI", "conjugation exists only for types II and III", 1e-6)
    rng = ctx.rng(neg.id)
    for _ in range(ctx.trials):
        x, y = _elem(rng, AlgebraKind.I), _elem(rng, AlgebraKind.I)
        bar = lambda e: Element(e.c0, -e.c1, -e.c2, AlgebraKind.I)  # noqa: E731
        neg.observe(bar(mul(x, y)).max_abs_diff(mul(bar(y), bar(x))), x=x, y=y)
        if neg.found:
            break
    c = ctx.check("bilinear_closed_form.typeII", "(x,y) = x0y0 - x1y1", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x, y = _elem(rng), _elem(rng)
        c.observe(_rel(abs(bilinear(x, y) - (x.c0 * y.c0 - x.c1 * y.c1)), _scale(x) * _scale(y)), x=x, y=y)


@suite("algebra.inverse")
def _inverse(ctx):
    one = Element.unit()
    c = ctx.check("two_sided_inverse.typeII", "x^-1 = conj(x) / (x0^2 - x1^2)", 1e-9)
    rng = ctx.rng(c.id)
    n = 0
    while n < ctx.trials:
        x = _elem(rng)
        if abs(norm_sq(x)) < 1e-6:
            continue
        n += 1
        xi = inverse(x)
        c.observe(max(mul(x, xi).max_abs_diff(one), mul(xi, x).max_abs_diff(one)), x=x)
    for kind in (AlgebraKind.I, AlgebraKind.III):
        c = ctx.check(f"two_sided_inverse.type{kind.value}", "inverse by linear solve", 1e-9)
        rng = ctx.rng(c.id)
        one_k = Element.unit(kind)
        n = 0
        while n < ctx.trials:
            x = _elem(rng, kind)
            if abs(x.c0) < 0.1:
                continue
            n += 1
            xi = inverse(x)
            c.observe(max(mul(x, xi).max_abs_diff(one_k), mul(xi, x).max_abs_diff(one_k)), x=x)


@suite("algebra.norm")
def _norm(ctx):
    c = ctx.check("multiplicative.typeII", "|xy|^2 = |x|^2 |y|^2", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x, y = _elem(rng), _elem(rng)
        lhs, rhs = norm_sq(mul(x, y)), norm_sq(x) * norm_sq(y)
        c.observe(abs(lhs - rhs) / (_scale(x) ** 2 * _scale(y) ** 2), x=x, y=y)


@suite("algebra.components")
def _components(ctx):
    c = ctx.check("component_table.typeII", "four connected components of G", 0.0)
    rng = ctx.rng(c.id)
    table: dict[tuple[int, int], int] = {}
    for _ in range(ctx.trials):
        x, y = _group(rng), _group(rng)
        key = (component_index(x), component_index(y))
        got = component_index(mul(x, y))
        expected = table.setdefault(key, got)
        c.expect(got == expected, x=x, y=y, table_entry=expected, got=got)


@suite("algebra.subalgebra")
def _subalgebra(ctx):
    c = ctx.check("basis_subalgebras", "R(e1) double numbers, R(e2) dual numbers", 0.0)
    c.expect(classify_subalgebra(Element(0, 1, 0)) is SubalgebraType.DOUBLE)
    c.expect(classify_subalgebra(Element(0, 0, 1)) is SubalgebraType.DUAL)
    c = ctx.check("never_complex", "every unital 2-dim subalgebra is double or dual", 0.0)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        v = _elem(rng)
        c.expect(classify_subalgebra(v) is not SubalgebraType.COMPLEX, v=v)


# ---------------------------------------------------------------------------
# fibration


@suite("fibration.h1_preserves")
def _h1_preserves(ctx):
    c = ctx.check("left_h1_fixes_pi1", "left multiplication by H1 preserves fibers", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x, a = _group(rng), _h1(rng)
        u = fb.pi1(x)
        c.observe(_rel(abs(fb.pi1(mul(a, x)) - u), u), a=a, x=x)
    c = ctx.check("fiber_membership", "u(x0 + x1) - x2 = 0 on the fiber over u", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x, a = _group(rng), _h1(rng)
        y = mul(a, x)
        u = fb.pi1(x)
        c.observe(_rel(abs(u * (y.c0 + y.c1) - y.c2), _scale(y) * max(1.0, abs(u))), a=a, x=x)
    c = ctx.check("global_section", "x -> 1 + u e2 is a section", 1e-12)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        u = rng.uniform(-10, 10)
        c.observe(abs(fb.pi1(fb.section(u)) - u), u=u)
    c = ctx.check("left_coset_projection", "x2/(x0 - x1) is constant on cosets x H1", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x, a = _group(rng), _h1(rng)
        u = fb.left_coset_projection(x)
        c.observe(_rel(abs(fb.left_coset_projection(mul(x, a)) - u), u), a=a, x=x)


@suite("fibration.h1_nonmember_breaks")
def _h1_breaks(ctx):
    neg = ctx.negative("left_nonmember_moves_fiber", "fibers preserved only if a in H1", 1e-6)
    rng = ctx.rng(neg.id)
    for _ in range(ctx.trials):
        x, a = _group(rng), _group(rng)
        if abs(a.c2) < 0.1:
            continue
        neg.observe(abs(fb.pi1(mul(a, x)) - fb.pi1(x)), a=a, x=x)
        if neg.found:
            break


@suite("fibration.h2_preserves")
def _h2_preserves(ctx):
    c = ctx.check("left_h2_fixes_pi2", "left multiplication by H2 preserves fibers", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x, a = _group(rng), _h2(rng)
        u = fb.pi2(x)
        c.observe(_rel(abs(fb.pi2(mul(a, x)) - u), u), a=a, x=x)
    c = ctx.check("right_h2_fixes_pi2", "H2 is normal: right multiplication also preserves fibers", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x, a = _group(rng), _h2(rng)
        u = fb.pi2(x)
        c.observe(_rel(abs(fb.pi2(mul(x, a)) - u), u), a=a, x=x)
    c = ctx.check("base_avoids_pm1", "pi2 never attains +-1 on G", 0.0)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x = _group(rng)
        c.expect(abs(fb.pi2(x)) != 1.0, x=x)


@suite("fibration.h2_nonmember_breaks")
def _h2_breaks(ctx):
    neg = ctx.negative("left_nonmember_moves_fiber", "fibers preserved only if a in H2", 1e-6)
    rng = ctx.rng(neg.id)
    for _ in range(ctx.trials):
        x, a = _group(rng), _group(rng)
        if abs(a.c1) < 0.1:
            continue
        neg.observe(abs(fb.pi2(mul(a, x)) - fb.pi2(x)), a=a, x=x)
        if neg.found:
            break


@suite("fibration.matrices")
def _matrices(ctx):
    c = ctx.check("matrices_reproduce_products", "L(a) x = a x, R(b) x = x b", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        a, b, x = _group(rng), _group(rng), _elem(rng)
        e1 = np.max(np.abs(fb.left_matrix(a) @ x.as_array() - mul(a, x).as_array()))
        e2 = np.max(np.abs(fb.right_matrix(b) @ x.as_array() - mul(x, b).as_array()))
        c.observe(max(e1, e2) / (_scale(x) * max(_scale(a), _scale(b))), a=a, b=b, x=x)
    c = ctx.check("faithful_representation", "L(a)L(b) = L(ab), R(a)R(b) = R(ba), [L, R] = 0", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        a, b = _group(rng), _group(rng)
        La, Lb, Ra, Rb = fb.left_matrix(a), fb.left_matrix(b), fb.right_matrix(a), fb.right_matrix(b)
        err = max(
            np.max(np.abs(La @ Lb - fb.left_matrix(mul(a, b)))),
            np.max(np.abs(Ra @ Rb - fb.right_matrix(mul(b, a)))),
            np.max(np.abs(La @ Rb - Rb @ La)),
        )
        c.observe(err / (_scale(a) * _scale(b)), a=a, b=b)
    c = ctx.check("det_left", "det L(a) = (a0^2 - a1^2)(a0 + a1)", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        a = _group(rng)
        d = fb.det_left(a)
        c.observe(_rel(abs(np.linalg.det(fb.left_matrix(a)) - d), d, _scale(a) ** 3 * 1e-3), a=a)


@suite("fibration.base_affine")
def _base_affine(ctx):
    c = ctx.check("affine_law", "u' = alpha u + beta, alpha = (b0-b1)/(b0+b1), beta = pi(b)", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x, b = _group(rng), _group(rng)
        m = fb.base_action(fb.Fibration.H1, b)
        u = fb.pi1(mul(x, b))
        c.observe(_rel(abs(m(fb.pi1(x)) - u), u, m.beta), x=x, b=b)
    c = ctx.check("homomorphism", "map(b) o map(b') = map(b' b)", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        b, bp, u = _group(rng), _group(rng), rng.uniform(-10, 10)
        lhs = fb.base_action("H1", b).compose(fb.base_action("H1", bp))(u)
        rhs = fb.base_action("H1", mul(bp, b))(u)
        c.observe(_rel(abs(lhs - rhs), rhs), b=b, bp=bp, u=u)


@suite("fibration.base_hyperbolic")
def _base_hyperbolic(ctx):
    c = ctx.check("hyperbolic_law", "u' = (u + alpha)/(alpha u + 1), alpha = pi'(b)", 1e-9)
    rng = ctx.rng(c.id)
    n = 0
    while n < ctx.trials:
        x, b = _group(rng, margin=0.1), _group(rng, margin=0.1)
        if abs(x.c0) < 0.1 or abs(b.c0) < 0.1:
            continue
        n += 1
        m = fb.base_action(fb.Fibration.H2, b)
        u = fb.pi2(mul(x, b))
        c.observe(_rel(abs(m(fb.pi2(x)) - u), u), x=x, b=b)
    c = ctx.check("fixed_points", "u = +1 and u = -1 are fixed", 1e-12)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        b = _group(rng)
        if abs(b.c0) < 1e-3:
            continue
        m = fb.base_action("H2", b)
        c.observe(max(abs(m(1.0) - 1.0), abs(m(-1.0) + 1.0)), b=b)


@suite("fibration.involutions")
def _involutions(ctx):
    c = ctx.check("square_is_identity", "R^2 = Id", 1e-12)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        b2 = rng.uniform(-10, 10)
        R, _ = fb.involution_base("H1", b2)
        c.observe(np.max(np.abs(R @ R - np.eye(3))) / max(1.0, abs(b2)), b2=b2)
    c = ctx.check("h1_base_reflection", "u' = -u + b2", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x, b2 = _group(rng), rng.uniform(-10, 10)
        _, m = fb.involution_base("H1", b2)
        u = fb.pi1(mul(x, fb.involution_element(b2)))
        c.observe(_rel(abs(m(fb.pi1(x)) - u), u), x=x, b2=b2)
    c = ctx.check("h2_base_inversion", "u' = 1/u", 1e-9)
    rng = ctx.rng(c.id)
    n = 0
    while n < ctx.trials:
        x, b2 = _group(rng), rng.uniform(-10, 10)
        if abs(x.c0) < 1e-3 or abs(x.c1) < 1e-3:
            continue
        n += 1
        _, m = fb.involution_base("H2", b2)
        u = fb.pi2(mul(x, fb.involution_element(b2)))
        c.observe(_rel(abs(m(fb.pi2(x)) - u), u), x=x, b2=b2)


@suite("fibration.h2_normal")
def _h2_normal(ctx):
    c = ctx.check("conjugates_stay_in_h2", "H2 is a normal subgroup", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        g, h = _group(rng, margin=0.1), _h2(rng)
        k = mul(mul(g, h), inverse(g))
        c.observe(abs(k.c1) / _scale(h), g=g, h=h)
    neg = ctx.negative("h1_not_normal", "H1 is not normal", 1e-6)
    rng = ctx.rng(neg.id)
    for _ in range(ctx.trials):
        g, h = _group(rng, margin=0.1), _h1(rng)
        neg.observe(abs(mul(mul(g, h), inverse(g)).c2), g=g, h=h)
        if neg.found:
            break


@suite("fibration.rotations")
def _rotations(ctx):
    c = ctx.check("norm_scaling", "|a x b|^2 = |a|^2 |b|^2 |x|^2", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        a, b, x = _unit(rng), _unit(rng), _elem(rng)
        improper = bool(rng.random() < 0.5)
        y = fb.rotate(a, x, b, improper)
        err = abs(norm_sq(y) - norm_sq(a) * norm_sq(b) * norm_sq(x))
        c.observe(err / (_scale(a) * _scale(b) * _scale(x)) ** 2, a=a, b=b, x=x, improper=improper)
    c = ctx.check("angle_invariant", "angle between x and a x does not depend on x", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(max(1, min(ctx.trials, 100))):
        a = _unit(rng)
        values = []
        for _ in range(100):
            x = _non_null(rng)
            values.append(fb.angle_invariant(a, x, "left"))
            values.append(fb.angle_invariant(a, x, "right"))
        spread = max(values) - min(values)
        c.observe(max(spread, max(abs(v - a.c0) for v in values)) / _scale(a), a=a)
    c = ctx.check("unit_decomposition", "a = cosh t + a0 sinh t or sinh t + a0 cosh t, |a0|^2 = -1", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        a = _unit(rng)
        if norm_sq(a) > 0 and a.c0 < 0:
            a = -a
        phi, a0 = fb.decompose_unit(a)
        b = fb.recompose_unit(phi, a0, norm_sq(a) > 0)
        c.observe(max(b.max_abs_diff(a), abs(a0.c0), abs(norm_sq(a0) + 1.0)) / _scale(a), a=a)


@suite("fibration.reflections")
def _reflections(ctx):
    c = ctx.check("involutive", "reflect(reflect(x, n), n) = x", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        n, x = _unit(rng), _elem(rng)
        c.observe(fb.reflect(fb.reflect(x, n), n).max_abs_diff(x) / (_scale(x) * _scale(n) ** 4), n=n, x=x)
    c = ctx.check("collinear_and_orthogonal", "x' = -n conj(x) n negates n and fixes its orthogonal plane", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        n, x, t = _unit(rng), _elem(rng), rng.uniform(-10, 10)
        xp = x - n.scale(bilinear(x, n) / norm_sq(n))
        err = max(fb.reflect(n.scale(t), n).max_abs_diff(n.scale(-t)), fb.reflect(xp, n).max_abs_diff(xp))
        c.observe(err / (_scale(x, n.scale(t)) * _scale(n) ** 4), n=n, x=x, t=t)
    c = ctx.check("rotations_from_reflections", "even (odd) products of reflections are a x b (a conj(x) b)", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        m, n, x = _unit(rng), _unit(rng), _elem(rng)
        a = mul(m, conj(n)).scale(1.0 / (norm_sq(m) * norm_sq(n)))
        b = mul(conj(n), m)
        even = fb.reflect(fb.reflect(x, n), m).max_abs_diff(fb.rotate(a, x, b))
        odd = fb.reflect(x, n).max_abs_diff(fb.rotate(n.scale(-1.0 / norm_sq(n)), x, n, improper=True))
        c.observe(max(even, odd) / (_scale(x) * (_scale(m) * _scale(n)) ** 4), m=m, n=n, x=x)


# ---------------------------------------------------------------------------
# adapted coordinates


def _adapted_sample(rng) -> ad.Adapted:
    lam = rng.uniform(0.1, 5.0) * (1 if rng.random() < 0.5 else -1)
    chart = ad.Chart.TIMELIKE if rng.random() < 0.5 else ad.Chart.SPACELIKE
    return ad.Adapted(rng.uniform(-10, 10), lam, rng.uniform(-3, 3), chart)


def _adapted_err(a: ad.Adapted, b: ad.Adapted) -> float:
    if a.chart is not b.chart:
        return math.inf
    return max(abs(a.u - b.u) / max(1.0, abs(a.u)), abs(a.lam - b.lam), abs(a.phi - b.phi))


@suite("adapted.roundtrip")
def _adapted_roundtrip(ctx):
    c = ctx.check("to_from_adapted", "x0 = lam cosh phi, x1 = lam sinh phi, x2 = u lam e^phi (and swapped)", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        a = _adapted_sample(rng)
        c.observe(_adapted_err(a, ad.to_adapted(ad.from_adapted(a))), adapted=a.to_dict())
    c = ctx.check("from_to_adapted", "sign(lam) = sign(x0) resp. sign(x1)", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        x = _non_null(rng)
        a = ad.to_adapted(x)
        sign_ok = (a.lam > 0) == ((x.c0 if a.chart is ad.Chart.TIMELIKE else x.c1) > 0)
        c.observe(ad.from_adapted(a).max_abs_diff(x) / _scale(x) if sign_ok else math.inf, x=x)
    c = ctx.check("u_is_pi1", "adapted u equals the base coordinate", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        a = _adapted_sample(rng)
        c.observe(_rel(abs(fb.pi1(ad.from_adapted(a)) - a.u), a.u), adapted=a.to_dict())


@suite("adapted.structure_action")
def _structure_action(ctx):
    c = ctx.check("action_is_left_h1", "u' = u, lam' = lam rho, phi' = phi + psi", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        a = _adapted_sample(rng)
        rho = rng.uniform(0.2, 3.0) * (1 if rng.random() < 0.5 else -1)
        psi = rng.uniform(-1.5, 1.5)
        h = ad.structure_element(rho, psi)
        expected = ad.to_adapted(mul(h, ad.from_adapted(a)))
        c.observe(_adapted_err(ad.structure_action(rho, psi, a), expected), adapted=a.to_dict(), rho=rho, psi=psi)
    c = ctx.check("sphere_subfibration", "S1 preserves S^2(1) and its fibers: eps' = eps eps1, phi' = phi + psi", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = ad.SpherePoint(rng.uniform(-10, 10), rng.uniform(-2, 2), 1 if rng.random() < 0.5 else -1)
        eps1 = 1 if rng.random() < 0.5 else -1
        psi = rng.uniform(-1, 1)
        y = mul(ad.structure_element(eps1, psi), ad.sphere_point(p))
        q = ad.sphere_coords(y) if ad.on_sphere(y, 1, 1e-9 * _scale(y) ** 2) else None
        if q is None:
            c.observe(math.inf, point=p.to_dict(), eps1=eps1, psi=psi)
            continue
        err = max(abs(q.u - p.u) / max(1.0, abs(p.u)), abs(q.phi - (p.phi + psi)), 0.0 if q.eps == p.eps * eps1 else math.inf)
        c.observe(err, point=p.to_dict(), eps1=eps1, psi=psi)
    c = ctx.check("swap_spheres", "|a|^2 = -1 maps S^2(1) onto S^2(-1)", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        a = _unit(rng, sign=-1)
        x = ad.sphere_point(ad.SpherePoint(rng.uniform(-10, 10), rng.uniform(-2, 2), 1))
        y = ad.swap_spheres(a, x)
        c.observe(abs(norm_sq(y) + 1.0) / (_scale(a) * _scale(x)) ** 2, a=a, x=x)


@suite("adapted.sphere_metric")
def _sphere_metric(ctx):
    c = ctx.check("degenerate_metric", "(g_ij) = [[0, 0], [0, -1]], ds^2 = -dphi^2", 1e-6)
    rng = ctx.rng(c.id)
    target = np.array([[0.0, 0.0], [0.0, -1.0]])
    for _ in range(ctx.trials):
        p = ad.SpherePoint(rng.uniform(-10, 10), rng.uniform(-3, 3), 1 if rng.random() < 0.5 else -1)
        g = ad.sphere_metric_at(p, 1e-5)
        c.observe(np.max(np.abs(g - target)), point=p.to_dict())
    c = ctx.check("on_sphere", "x0^2 - x1^2 = 1", 1e-12)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = ad.SpherePoint(rng.uniform(-10, 10), rng.uniform(-3, 3), 1 if rng.random() < 0.5 else -1)
        x = ad.sphere_point(p)
        c.observe(abs(norm_sq(x) - 1.0) / max(1.0, x.c0 * x.c0), point=p.to_dict())


# ---------------------------------------------------------------------------
# conformal model


def _plane_sample(rng, margin=1e-3, lo=-5.0, hi=5.0) -> cf.PlanePoint:
    while True:
        x = rng.uniform(lo, hi)
        if abs(x - 1.0) >= margin and abs(x + 1.0) >= margin:
            return cf.PlanePoint(x, rng.uniform(-10, 10))


def _sphere_sample(rng, u=None, pole_margin=1e-3) -> ad.SpherePoint:
    """Sphere point away from the pole line x0 = 1."""
    while True:
        p = ad.SpherePoint(
            rng.uniform(-10, 10) if u is None else u,
            rng.uniform(-3, 3),
            1 if rng.random() < 0.5 else -1,
        )
        if abs(1.0 - p.eps * math.cosh(p.phi)) >= pole_margin:
            return p


@suite("conformal.roundtrip")
def _conformal_roundtrip(ctx):
    c = ctx.check("plane_sphere_plane", "x = x1/(1-x0), y = x2/(1-x0) inverts x0 = -(1+x^2)/(1-x^2), ...", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _plane_sample(rng)
        q = cf.stereo(cf.stereo_inv(p))
        c.observe(max(abs(q.x - p.x), abs(q.y - p.y)) / max(1.0, abs(p.x), abs(p.y)), x=p.x, y=p.y)
    c = ctx.check("sphere_plane_sphere", "stereographic projection from (1, 0, 0)", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        s = _sphere_sample(rng)
        q = ad.sphere_point(s)
        c.observe(cf.stereo_inv(cf.stereo(q)).max_abs_diff(q) / _scale(q), point=s.to_dict())
    c = ctx.check("adapted_from_plane", "phi = ln(eps (x-1)/(x+1)), u = -2y/(1-x)^2", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _plane_sample(rng)
        phi, u, eps = cf.adapted_from_plane(p)
        q = ad.sphere_point(ad.SpherePoint(u, phi, eps))
        r = cf.stereo_inv(p)
        c.observe(q.max_abs_diff(r) / _scale(r), x=p.x, y=p.y)


@suite("conformal.p_map")
def _p_map(ctx):
    c = ctx.check("constant_on_fibers", "p = pi o f^-1, u = -2y/(1-x)^2", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        s = _sphere_sample(rng)
        p = cf.stereo(ad.sphere_point(s))
        c.observe(_rel(abs(cf.p_map(p) - s.u), s.u), point=s.to_dict())
    c = ctx.check("diagram_commutes", "p(f(x)) = pi(x)", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        s = _sphere_sample(rng)
        q = ad.sphere_point(s)
        u = fb.pi1(q)
        c.observe(_rel(abs(cf.p_map(cf.stereo(q)) - u), u), point=s.to_dict())


@suite("conformal.factor")
def _conformal_factor(ctx):
    c = ctx.check("pullback_ratio", "ds1^2 = 4/(x^2-1)^2 (-dx^2)", 1e-5)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _plane_sample(rng, margin=0.05)
        while True:
            d = rng.normal(size=2)
            if abs(d[0]) >= 0.1 * np.linalg.norm(d):
                break
        k = cf.conformal_factor(p.x)
        c.observe(abs(cf.pullback_ratio(p, d) - k) / k, x=p.x, y=p.y, direction=d)
    c = ctx.check("dphi_dx", "dphi = 2/(x^2-1) dx", 1e-6)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _plane_sample(rng, margin=0.05)
        h = 1e-5 * min(1.0, abs(p.x - 1.0), abs(p.x + 1.0))
        dphi = nm.central_diff(lambda t: cf.adapted_from_plane(cf.PlanePoint(t[0], p.y))[0], [p.x], h)[0]
        k = cf.conformal_factor(p.x)
        c.observe(abs(dphi * dphi - k) / k, x=p.x)


@suite("conformal.fibers")
def _conformal_fibers(ctx):
    c = ctx.check("fiber_parabolas", "y = -c/2 (x - 1)^2, axis x = 1, vertex (1, 0)", 1e-8)
    rng = ctx.rng(c.id)
    grid = np.linspace(-5, 5, 11)
    per = max(1, ctx.trials // len(grid))
    for u in grid:
        for _ in range(per):
            s = _sphere_sample(rng, u=float(u))
            p = cf.stereo(ad.sphere_point(s))
            c.observe(abs(p.y - cf.fiber_image(u, p.x)) / max(1.0, abs(p.y)), point=s.to_dict())


# ---------------------------------------------------------------------------
# projective model


def _alpha_sample(rng, lo=-10.0, hi=10.0) -> pj.AlphaPoint:
    return pj.AlphaPoint(rng.uniform(lo, hi), rng.uniform(lo, hi))


@suite("projective.quadric")
def _quadric(ctx):
    c = ctx.check("lift_on_quadric", "X1 = (-1-x1^2 : 2x1 : 2x2 : 1-x1^2) satisfies y0^2 - y1^2 - y3^2 = 0", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _alpha_sample(rng)
        P = pj.project_to_quadric(p)
        c.observe(abs(pj.quadric_eval(P)) / max(1.0, float(np.max(np.abs(P.y))) ** 2), x1=p.x1, x2=p.x2)
    c = ctx.check("collinear_with_pole", "N, U and X1 are collinear", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _alpha_sample(rng)
        M = np.array([pj.POLE, p.homogeneous().y, pj.project_to_quadric(p).normalized()])
        minors = [abs(np.linalg.det(M[:, cols])) for cols in ([0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3])]
        c.observe(max(minors) / max(1.0, abs(p.x1), abs(p.x2)), x1=p.x1, x2=p.x2)
    c = ctx.check("polar_basis", "N, N', E2 on the quadric; E0 inside", 0.0)
    for P in (pj.POLE, pj.ANTIPOLE, pj.E2):
        c.observe(abs(pj.quadric_eval(P)), point=P)
    c.expect(pj.quadric_eval(pj.E0) > 0, point=pj.E0)


@suite("projective.weierstrass")
def _weierstrass(ctx):
    c = ctx.check("standardization", "(X, X) = -(1 + x1^2)^2, (X~, X~) = -1", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _alpha_sample(rng)
        X, Xn = pj.weierstrass_X(p)
        s = (1.0 + p.x1 * p.x1) ** 2
        c.observe(max(abs(pj.quadric_eval(X) + s) / s, abs(pj.quadric_eval(Xn) + 1.0)), x1=p.x1, x2=p.x2)
    c = ctx.check("metric_from_embedding", "g_ij = -(d_i X~, d_j X~) = diag(4/(1+x1^2)^2, 0)", 1e-5)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _alpha_sample(rng, -5, 5)
        g = pj.metric_from_embedding(p)
        c.observe(np.max(np.abs(g - pj.metric(p.as_array()))), x1=p.x1, x2=p.x2)


@suite("projective.curvature")
def _curvature(ctx):
    c = ctx.check("curvature_from_connection", "R_121^2 = -R_211^2 = -4/(1+x1^2)^2", 1e-5)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _alpha_sample(rng, -5, 5)
        R = nm.riemann(pj.christoffel, p.as_array())
        data = pj.connection_at(p)
        err = max(
            float(np.max(np.abs(R - pj.curvature(p.as_array())))),
            abs(pj.curvature_component(R, 1, 2, 1, 2) - data.R2_121),
            abs(pj.curvature_component(R, 2, 1, 1, 2) + data.R2_121),
        )
        c.observe(err, x1=p.x1, x2=p.x2)
    c = ctx.check("ricci", "R_11 = 4/(1+x1^2)^2, Ricci symmetric", 1e-5)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _alpha_sample(rng, -5, 5)
        Ric = nm.ricci(nm.riemann(pj.christoffel, p.as_array()))
        data = pj.connection_at(p)
        err = max(abs(Ric[0, 0] - data.Ric11), abs(Ric[0, 1]), abs(Ric[1, 0]), abs(Ric[1, 1]))
        c.observe(err, x1=p.x1, x2=p.x2)
    c = ctx.check("ricci_symmetric", "Ricci tensor is symmetric", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _alpha_sample(rng, -5, 5)
        Ric = nm.ricci(nm.riemann(pj.christoffel, p.as_array()))
        c.observe(abs(Ric[0, 1] - Ric[1, 0]), x1=p.x1, x2=p.x2)
    c = ctx.check("equiaffine", "Gamma^s_ks = d_k ln(c/(1+x1^2)^2)", 1e-6)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _alpha_sample(rng, -5, 5)
        lhs, rhs = pj.equiaffine_check(p)
        c.observe(float(np.max(np.abs(lhs - rhs))), x1=p.x1, x2=p.x2)


@suite("projective.covariant_constancy")
def _covariant_constancy(ctx):
    cg = ctx.check("nabla_g", "nabla_k g_ij = 0", 1e-5)
    cr = ctx.check("nabla_R", "nabla_l R_rsk^i = 0", 1e-5)
    for x1 in np.linspace(-2, 2, 41):
        for x2 in np.linspace(-2, 2, 41):
            q = np.array([x1, x2])
            cg.observe(np.max(np.abs(nm.covariant_derivative_metric(pj.metric, pj.christoffel, q))), x1=x1, x2=x2)
            cr.observe(np.max(np.abs(nm.covariant_derivative_curvature(pj.curvature, pj.christoffel, q))), x1=x1, x2=x2)


GEODESIC_PARAMS = [(A, B) for A in (-1.0, 0.0, 1.0, 2.0) for B in (-1.0, 0.0, 1.0, 2.0)]


@suite("projective.geodesics")
def _geodesics(ctx):
    c = ctx.check("rk4_stays_on_family", "x2 = A(x1^2 - 1) + B x1 are geodesics", 1e-6)
    for A, B in GEODESIC_PARAMS:
        x1 = 0.0
        init = nm.OdeState([x1, pj.geodesic_family(A, B, x1)], [1.0, pj.geodesic_family_slope(A, B, x1)])
        traj = nm.integrate_geodesic(pj.christoffel, init, 1e-3, 1000)
        dev = max(abs(s.position[1] - pj.geodesic_family(A, B, s.position[0])) for s in traj)
        c.observe(dev, A=A, B=B)
    c = ctx.check("tangency_residual", "acceleration parallel to velocity along the family", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        (A, B), t = GEODESIC_PARAMS[rng.integers(len(GEODESIC_PARAMS))], rng.uniform(-2, 2)
        pos = [t, pj.geodesic_family(A, B, t)]
        res = nm.tangency_residual(pj.christoffel, pos, [1.0, pj.geodesic_family_slope(A, B, t)], [0.0, 2.0 * A])
        c.observe(res, A=A, B=B, t=t)
    c = ctx.check("vertical_lines", "x1 = const are geodesics", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(max(1, min(20, ctx.trials // 100))):
        x1, x2, v = rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)
        res = nm.tangency_residual(pj.christoffel, [x1, x2], [0.0, 1.0], [0.0, 0.0])
        traj = nm.integrate_geodesic(pj.christoffel, nm.OdeState([x1, x2], [0.0, v]), 1e-3, 1000)
        c.observe(max(res, max(abs(s.position[0] - x1) for s in traj)), x1=x1, x2=x2, v=v)
    neg = ctx.negative("circle_is_not_geodesic", "negative control: x1^2 + x2^2 = 1", 1e-3)
    for s in np.linspace(0, 2 * np.pi, 8, endpoint=False):
        pos = [math.cos(s), math.sin(s)]
        vel = [-math.sin(s), math.cos(s)]
        acc = [-math.cos(s), -math.sin(s)]
        neg.observe(nm.tangency_residual(pj.christoffel, pos, vel, acc), s=s)


@suite("projective.cross_model")
def _cross_model(ctx):
    c = ctx.check("lift_matches_stereo_inv", "projective and semi-conformal models agree on y3 != 0", 1e-9)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        p = _plane_sample(rng)
        lifted = pj.project_to_quadric(pj.AlphaPoint(p.x, p.y)).affine()
        q = cf.stereo_inv(p)
        c.observe(np.max(np.abs(lifted - q.as_array())) / _scale(q), x1=p.x, x2=p.y)
    c = ctx.check("fiber_parabolas", "(y0 - y1) v - y2 = 0 projects to x2 = -v/2 (x1 + 1)^2", 1e-8)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        v = rng.uniform(-5, 5)
        while True:
            phi, eps = rng.uniform(-3, 3), (1 if rng.random() < 0.5 else -1)
            if abs(1.0 - eps * math.cosh(phi)) >= 1e-3:
                break
        P = pj.fiber_point(v, phi, eps)
        a = pj.project_from_pole(P)
        on = pj.on_fiber(v, P) and abs(fb.left_coset_projection(Element(*P.affine())) - v) <= 1e-9 * max(1.0, abs(v))
        err = abs(a.x2 - pj.fiber_projection(v, a.x1)) / max(1.0, abs(a.x2))
        c.observe(err if on else math.inf, v=v, phi=phi, eps=eps)


@suite("numeric.central_diff")
def _central_diff(ctx):
    c = ctx.check("quadratic_exact", "central differences are exact on quadratics", 1e-10)
    rng = ctx.rng(c.id)
    for _ in range(ctx.trials):
        Q = rng.uniform(-1, 1, (2, 2))
        b = rng.uniform(-1, 1, 2)
        p = rng.uniform(-3, 3, 2)
        J = nm.central_diff(lambda q: q @ Q @ q + b @ q, p, 1e-4)
        c.observe(float(np.max(np.abs(J - ((Q + Q.T) @ p + b)))), p=p)
