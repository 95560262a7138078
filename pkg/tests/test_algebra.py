import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from _strategies import elements, group_elements, int_elements, scale
from trialgebra.algebra import (
    AlgebraError,
    AlgebraKind,
    Element,
    KindError,
    NotInvertibleError,
    SubalgebraType,
    bilinear,
    classify_subalgebra,
    component_index,
    component_sign_pair,
    conj,
    inverse,
    is_invertible,
    mul,
    mul_table,
    norm_sq,
)

I, II, III = AlgebraKind.I, AlgebraKind.II, AlgebraKind.III

# Basis products e_i e_j written out by hand, as (c0, c1, c2).
BASIS = {
    I: {(1, 1): (0, 0, 1), (1, 2): (0, 0, 0), (2, 1): (0, 0, 0), (2, 2): (0, 0, 0)},
    II: {(1, 1): (1, 0, 0), (1, 2): (0, 0, 1), (2, 1): (0, 0, -1), (2, 2): (0, 0, 0)},
    III: {(1, 1): (0, 0, 0), (1, 2): (0, 0, 0), (2, 1): (0, 0, 0), (2, 2): (0, 0, 0)},
}


def exact_mul(kind, x, y):
    """Bilinear extension of BASIS over the rationals."""
    out = [Fraction(0)] * 3
    for i, xi in enumerate(x):
        for j, yj in enumerate(y):
            if i == 0 or j == 0:
                out[i + j] += Fraction(xi) * Fraction(yj)
            else:
                for k, c in enumerate(BASIS[kind][(i, j)]):
                    out[k] += Fraction(xi) * Fraction(yj) * c
    return tuple(out)


def E(*c, kind=II):
    return Element(*c, kind=kind)


class TestProductExamples:
    def test_type_ii(self):
        assert mul(E(1, 2, 3), E(4, 5, 6)).coeffs == (14, 13, 15)

    @pytest.mark.parametrize("kind", list(AlgebraKind))
    def test_unit_left(self, kind):
        x = E(3, -2, 7, kind=kind)
        assert mul(Element.unit(kind), x) == x

    def test_e1_e2_anticommute(self):
        e1, e2 = E(0, 1, 0), E(0, 0, 1)
        assert mul(e1, e2).coeffs == (0, 0, 1)
        assert mul(e2, e1).coeffs == (0, 0, -1)

    def test_kind_mismatch(self):
        with pytest.raises(KindError):
            mul(E(1, 0, 0), E(1, 0, 0, kind=I))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            Element(math.nan, 0, 0)


@pytest.mark.parametrize("kind", list(AlgebraKind))
@given(data=st.data())
def test_closed_form_matches_exact_oracle(kind, data):
    x = data.draw(int_elements(kind))
    y = data.draw(int_elements(kind))
    expected = exact_mul(kind, x.coeffs, y.coeffs)
    assert mul(x, y).coeffs == tuple(float(c) for c in expected)
    assert mul_table(x, y).coeffs == tuple(float(c) for c in expected)


@pytest.mark.parametrize("kind", list(AlgebraKind))
@given(data=st.data())
def test_associative(kind, data):
    x, y, z = (data.draw(elements(kind)) for _ in range(3))
    lhs, rhs = mul(mul(x, y), z), mul(x, mul(y, z))
    assert lhs.max_abs_diff(rhs) <= 1e-9 * scale(x) * scale(y) * scale(z)


@pytest.mark.parametrize("kind", list(AlgebraKind))
@given(data=st.data())
def test_associative_exact(kind, data):
    x, y, z = (data.draw(int_elements(kind)) for _ in range(3))
    assert mul(mul(x, y), z) == mul(x, mul(y, z))


class TestConjugation:
    def test_example(self):
        assert conj(E(1, 2, 3)).coeffs == (1, -2, -3)

    @given(elements())
    def test_involution(self, x):
        assert conj(conj(x)) == x

    @pytest.mark.parametrize("kind", [II, III])
    @given(data=st.data())
    def test_anti_automorphism(self, kind, data):
        x, y = data.draw(int_elements(kind)), data.draw(int_elements(kind))
        assert conj(mul(x, y)) == mul(conj(y), conj(x))

    def test_type_i_rejected(self):
        with pytest.raises(KindError):
            conj(E(1, 1, 1, kind=I))

    def test_type_i_sign_flip_fails(self):
        # With e1^2 = e2 the naive sign flip misses 2 x1 y1 e2.
        x, y = E(0, 1, 0, kind=I), E(0, 1, 0, kind=I)
        bar = lambda e: Element(e.c0, -e.c1, -e.c2, I)  # noqa: E731
        assert bar(mul(x, y)) != mul(bar(y), bar(x))


class TestBilinear:
    def test_type_ii(self):
        assert bilinear(E(1, 2, 3), E(4, 5, 6)) == -6

    def test_unit(self):
        assert bilinear(Element.unit(), Element.unit()) == 1

    def test_type_iii(self):
        assert bilinear(E(2, 7, 9, kind=III), E(3, -1, 4, kind=III)) == 6

    @given(elements(), elements())
    def test_symmetric_closed_form(self, x, y):
        assert bilinear(x, y) == pytest.approx(x.c0 * y.c0 - x.c1 * y.c1, abs=1e-9 * scale(x, y) ** 2)
        assert bilinear(x, y) == pytest.approx(bilinear(y, x), abs=1e-12 * scale(x, y) ** 2)

    def test_type_i_has_no_norm(self):
        with pytest.raises(KindError):
            norm_sq(E(1, 0, 0, kind=I))


class TestNorm:
    @pytest.mark.parametrize("x, expected", [((2, 1, 4), 3), ((1, 1, 5), 0), ((0, 1, 0), -1)])
    def test_examples(self, x, expected):
        assert norm_sq(E(*x)) == expected

    @given(int_elements(), int_elements())
    def test_multiplicative(self, x, y):
        assert norm_sq(mul(x, y)) == norm_sq(x) * norm_sq(y)


class TestInverse:
    def test_type_ii_example(self):
        xi = inverse(E(2, 1, 4))
        assert xi.isclose(E(2 / 3, -1 / 3, -4 / 3), 1e-15)

    def test_type_iii_example(self):
        assert inverse(E(2, 3, 5, kind=III)).isclose(E(0.5, -0.75, -1.25, kind=III), 1e-15)

    @pytest.mark.parametrize("kind", list(AlgebraKind))
    def test_unit(self, kind):
        assert inverse(Element.unit(kind)) == Element.unit(kind)

    @pytest.mark.parametrize(
        "x, expected",
        [(E(1, 1, 7), False), (E(2, 1, 4), True), (E(0, 5, 5, kind=III), False), (E(0, 1, 0, kind=I), False)],
    )
    def test_is_invertible(self, x, expected):
        assert is_invertible(x) is expected

    def test_null_raises(self):
        with pytest.raises(NotInvertibleError):
            inverse(E(3, -3, 1))

    @pytest.mark.parametrize("kind", list(AlgebraKind))
    @given(data=st.data())
    def test_two_sided(self, kind, data):
        x = data.draw(elements(kind))
        if kind is II:
            assume(abs(norm_sq(x)) >= 1e-2 * scale(x) ** 2)
        else:
            assume(abs(x.c0) >= 0.1)
        one = Element.unit(kind)
        xi = inverse(x)
        assert mul(x, xi).max_abs_diff(one) <= 1e-9
        assert mul(xi, x).max_abs_diff(one) <= 1e-9

    @given(int_elements())
    def test_matches_linear_solve(self, x):
        assume(abs(norm_sq(x)) >= 1)
        L = np.array([mul(x, e).as_array() for e in (E(1, 0, 0), E(0, 1, 0), E(0, 0, 1))]).T
        expected = np.linalg.solve(L, [1.0, 0.0, 0.0])
        assert np.allclose(inverse(x).as_array(), expected, rtol=1e-9, atol=1e-12)


class TestComponents:
    @pytest.mark.parametrize("x, pair", [((1, 0, 0), (1, 1)), ((-1, 0, 0), (-1, -1)), ((0, 1, 0), (1, -1))])
    def test_examples(self, x, pair):
        assert component_sign_pair(component_index(E(*x))) == pair

    @given(group_elements(), group_elements())
    def test_product_rule(self, x, y):
        sx, sy = component_sign_pair(component_index(x)), component_sign_pair(component_index(y))
        assert component_sign_pair(component_index(mul(x, y))) == (sx[0] * sy[0], sx[1] * sy[1])

    def test_null_rejected(self):
        with pytest.raises(NotInvertibleError):
            component_index(E(1, -1, 0))

    def test_bad_index(self):
        with pytest.raises(ValueError):
            component_sign_pair(4)


class TestSubalgebras:
    def test_double(self):
        assert classify_subalgebra(E(0, 1, 0)) is SubalgebraType.DOUBLE

    def test_dual(self):
        assert classify_subalgebra(E(0, 0, 1)) is SubalgebraType.DUAL

    @given(elements())
    def test_never_complex(self, v):
        assume(math.hypot(v.c1, v.c2) > 1e-3)
        assert classify_subalgebra(v) is not SubalgebraType.COMPLEX

    @given(elements())
    def test_discriminant_is_square(self, v):
        # v^2 = 2 v0 v - (v0^2 - v1^2), so the discriminant is 4 v1^2.
        assume(abs(v.c1) > 1e-3)
        assert classify_subalgebra(v) is SubalgebraType.DOUBLE
        assume(abs(v.c2) > 1e-3)
        assert classify_subalgebra(Element(v.c0, 0.0, v.c2)) is SubalgebraType.DUAL

    def test_scalar_rejected(self):
        with pytest.raises(AlgebraError):
            classify_subalgebra(E(2, 0, 0))


def test_kind_parse():
    assert AlgebraKind.parse("ii") is II
    assert AlgebraKind.parse("TypeIII") is III
    with pytest.raises(ValueError):
        AlgebraKind.parse("IV")


@settings(max_examples=50)
@given(elements(), st.floats(-5, 5))
def test_element_arithmetic(x, s):
    assert (x + x).isclose(x.scale(2.0), 1e-12 * scale(x))
    assert (x - x) == Element(0, 0, 0)
    assert (s * x) == x.scale(s)
    assert (-x) == x.scale(-1.0)
