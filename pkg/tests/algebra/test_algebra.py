from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Rational

from folres.algebra import Frame, Jet, LocalElement, jet_inverse, monomial_times_unit, order_at_origin, substitute, truncate
from folres.algebra.poly import coefficients_in, format_poly, monomial_factor, support
from folres.exceptions import FrameMismatchError, InputError, NonUnitError
from tests.cases import frame, poly


@pytest.mark.unit
class TestFrame:
    def test_exceptional_flags_and_description(self):
        f = Frame.of(["x", "y", "z"], ["x"])

        assert f.dimension == 3
        assert f.exceptional_names == ("x",)
        assert f.describe() == "x! y z"

    def test_frames_with_same_names_share_a_ring(self):
        plain = Frame.of("xyz")
        flagged = plain.with_exceptional("y")

        assert plain.ring is flagged.ring
        assert flagged.is_exceptional("y")
        assert not plain.is_exceptional("y")

    def test_duplicate_names_rejected(self):
        with pytest.raises(InputError):
            Frame.of(["x", "x"])

    def test_unknown_variable_is_frame_mismatch(self):
        with pytest.raises(FrameMismatchError):
            Frame.of("xy").gen("z")

    def test_drop_and_insert_are_explicit_by_name(self):
        f = Frame.of("xyz", "x")

        dropped = f.drop("y")
        assert dropped.names == ("x", "z")
        assert dropped.exceptional_names == ("x",)
        assert dropped.insert("y", 1).names == ("x", "y", "z")

    def test_require_rejects_foreign_polynomials(self):
        with pytest.raises(FrameMismatchError):
            Frame.of("xy").require(Frame.of("uv").gen("u"))


@pytest.mark.unit
class TestPolynomialHelpers:
    def test_format_uses_descending_grevlex(self):
        f = frame("x y z")

        assert format_poly(poly(f, "y^2 + x*z^3 + x^4"), f) == "x^4 + x*z^3 + y^2"
        assert format_poly(poly(f, "3/2*x^2*y - z"), f) == "3/2*x^2*y - z"
        assert format_poly(f.zero, f) == "0"

    def test_order_and_truncate(self):
        f = frame("x y")
        p = poly(f, "x^3 + x*y + 2")

        assert order_at_origin(p) == 0
        assert order_at_origin(poly(f, "x^3 + x*y")) == 2
        assert order_at_origin(f.zero) is None
        assert truncate(p, 2) == poly(f, "x*y + 2")

    def test_substitute_along_chart_map(self):
        f = frame("x y z")
        images = (f.gen("x"), f.gen("y"), poly(f, "y*z"))

        assert substitute(f.gen("z"), images, f, f) == poly(f, "y*z")

    def test_monomial_factor_and_split(self):
        f = frame("x y z")
        p = poly(f, "x^2*y + x^2*y*z")

        assert monomial_factor(p, f) == (2, 1, 0)
        assert monomial_factor(p, f, ["y"]) == (0, 1, 0)
        assert monomial_times_unit(p, f) == ((2, 1, 0), poly(f, "1 + z"))
        assert monomial_times_unit(poly(f, "x + y"), f) is None
        assert monomial_times_unit(p, f, ["x", "z"]) is None
        assert monomial_times_unit(poly(f, "x^2 + x^2*y"), f, ["x"]) == ((2, 0, 0), poly(f, "1 + y"))

    def test_support_and_coefficients(self):
        f = frame("x y z")
        p = poly(f, "y^2 + x*y + z")

        assert support(p, f) == ("x", "y", "z")
        parts = coefficients_in(p, f, "y")
        assert parts == {2: f.one, 1: f.gen("x"), 0: f.gen("z")}


@pytest.mark.unit
class TestLocalElement:
    def test_fraction_is_reduced(self):
        f = frame("x y")
        one_plus_x = poly(f, "1 + x")

        a = LocalElement.of(poly(f, "x + x^2"), one_plus_x)

        assert a.is_polynomial()
        assert a == LocalElement.from_poly(f.gen("x"))

    def test_unit_inverse(self):
        f = frame("x y")
        u = LocalElement.from_poly(poly(f, "2 + y"))

        assert (u * u.unit_inverse()) == LocalElement.constant(f, 1)
        assert u.value_at_origin() == Rational(2)

    def test_non_unit_has_no_inverse(self):
        f = frame("x y")

        with pytest.raises(NonUnitError):
            LocalElement.from_poly(f.gen("x")).unit_inverse()
        with pytest.raises(NonUnitError):
            LocalElement.of(f.one, f.gen("y"))

    def test_derivative_of_fraction(self):
        f = frame("x")
        a = LocalElement.of(f.one, poly(f, "1 + x"))

        assert a.derivative(0) == LocalElement.of(poly(f, "-1"), poly(f, "1 + 2*x + x^2"))

    def test_valuation(self):
        f = frame("x y")

        assert LocalElement.from_poly(poly(f, "x^2*y + x^3")).valuation(0) == 2
        assert LocalElement.from_poly(f.zero).valuation(0) is None


@pytest.mark.unit
class TestJets:
    def test_inverse_of_unit(self):
        f = frame("x y")
        u = poly(f, "1 + x + y^2")
        inverse = jet_inverse(u, 5)

        product = Jet.of(u, 5) * inverse
        assert product.poly == f.one

    def test_inverse_needs_unit(self):
        with pytest.raises(NonUnitError):
            jet_inverse(frame("x").gen("x"), 3)

    def test_truncation_on_arithmetic(self):
        f = frame("x")
        a = Jet.of(poly(f, "1 + x"), 2)

        assert (a * a * a).poly == poly(f, "1 + 3*x + 3*x^2")
        assert (a - a).is_zero()


XYZ = Frame.of("xyz", "x")

coefficients = st.fractions(min_value=-4, max_value=4, max_denominator=3).map(lambda q: Rational(q.numerator, q.denominator))


def bounded_polys(top: int, size: int):
    """Sums of up to `size` terms with every exponent at most `top`."""
    terms = st.tuples(st.tuples(*[st.integers(min_value=0, max_value=top) for _ in range(3)]), coefficients)
    return st.lists(terms, max_size=size).map(lambda ts: sum((XYZ.monomial(e, c) for e, c in ts), XYZ.zero))


polys = bounded_polys(3, 4)
small_polys = bounded_polys(2, 3)
linear_polys = bounded_polys(1, 3)
units = st.tuples(coefficients.filter(bool), small_polys).map(lambda pair: XYZ.constant(pair[0]) + pair[1] - pair[1].const())
locals_ = st.tuples(small_polys, units).map(lambda pair: LocalElement.of(*pair))


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(a=polys, b=polys, c=polys)
def test_polynomial_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(a=locals_, b=locals_, c=locals_)
def test_local_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(a=locals_, b=locals_, index=st.integers(min_value=0, max_value=2))
def test_derivative_obeys_leibniz(a, b, index):
    assert (a * b).derivative(index) == a.derivative(index) * b + a * b.derivative(index)


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(a=small_polys, b=small_polys, images=st.tuples(linear_polys, linear_polys, linear_polys))
def test_substitute_is_a_ring_homomorphism(a, b, images):
    def pull(p):
        return substitute(p, images, XYZ, XYZ)

    assert pull(a * b) == pull(a) * pull(b)
    assert pull(a + b) == pull(a) + pull(b)
    assert pull(XYZ.one) == XYZ.one
