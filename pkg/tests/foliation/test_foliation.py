from __future__ import annotations

import pytest
from sympy import Rational

from folres.algebra import LocalElement
from folres.exceptions import FrameMismatchError, InputError, UnsupportedDerivationError
from folres.foliation import (
    CoordinateChange,
    Derivation,
    Distribution,
    SNCDivisor,
    apply_ideal,
    change_coordinates,
    check_tangent,
    eigen_blocks,
    generic_rank,
    invariant_generators,
    is_invariant,
    lie_bracket,
)
from folres.ideals import GLOBAL, LOCAL, contains_one, ideal_equal
from folres.io import parse_derivation
from tests.cases import frame, ideal, poly, tangency_case, theta


@pytest.mark.unit
class TestDerivation:
    def test_apply_and_format(self):
        f = frame("x y z")
        d = Derivation.of(f, {"x": f.gen("y"), "z": f.gen("x")})

        assert d.formatted() == "y*d/dx + x*d/dz"
        assert d.apply_poly(poly(f, "x^2 + z")) == poly(f, "2*x*y + x")
        assert Derivation.diagonal(f, [1, -1, 0]).formatted() == "x*d/dx - y*d/dy"
        assert Derivation.zero(f).formatted() == "0"

    def test_parse_matches_construction(self):
        f = frame("x y")

        assert parse_derivation("x*d/dx - y*d/dy", f) == Derivation.diagonal(f, [1, -1])
        assert parse_derivation("d/dx/(1 + y)", f).coefficient("x") == LocalElement.of(f.one, poly(f, "1 + y"))

    def test_lie_bracket(self):
        f = frame("x y")
        dx = Derivation.partial(f, "x")
        x_dy = Derivation.of(f, {"y": f.gen("x")})

        assert lie_bracket(dx, x_dy) == Derivation.partial(f, "y")
        assert lie_bracket(x_dy, dx) == -Derivation.partial(f, "y")

    def test_linear_part_and_singularity(self):
        f = frame("x y")
        d = parse_derivation("y*d/dx + (x + x^2)*d/dy", f)

        assert d.is_singular()
        assert d.linear_part().tolist() == [[0, 1], [1, 0]]
        assert not Derivation.partial(f, "x").is_singular()

    def test_polynomial_multiple_clears_unit_denominators(self):
        f = frame("x y")
        d = parse_derivation("d/dx/(1 + y) + x*d/dy", f)

        assert d.polynomial_multiple() == parse_derivation("d/dx + (x + x*y)*d/dy", f)

    def test_frames_must_match(self):
        with pytest.raises(FrameMismatchError):
            Derivation.partial(frame("x y"), "x") + Derivation.partial(frame("u v"), "u")
        with pytest.raises(InputError):
            Derivation.of(frame("x y"), {"w": 1})


@pytest.mark.unit
class TestCoordinateChange:
    def test_translation_pulls_and_pushes(self):
        f = frame("x y")
        change = CoordinateChange.translation(f, {"x": 2})

        assert change.pull(f.gen("x")) == poly(f, "x + 2")
        assert change.push_back(change.pull(poly(f, "x*y"))) == poly(f, "x*y")
        assert change.moved() == ("x",)
        assert CoordinateChange.identity(f).is_identity()

    def test_change_coordinates_straightens_a_field(self):
        f = frame("x y z")
        shear = CoordinateChange(
            f,
            (f.gen("x"), f.gen("y"), poly(f, "z + 1/2*x^2")),
            (f.gen("x"), f.gen("y"), poly(f, "z - 1/2*x^2")),
        )

        assert change_coordinates(parse_derivation("d/dx + x*d/dz", f), shear) == Derivation.partial(f, "x")

    def test_composition(self):
        f = frame("x y")
        a = CoordinateChange.translation(f, {"x": 1})
        b = CoordinateChange.translation(f, {"x": 2})

        assert a.then(b).pull(f.gen("x")) == poly(f, "x + 3")
        assert a.then(b).formatted() == {"x": "x + 3", "y": "y"}


@pytest.mark.unit
class TestDistribution:
    def test_generators_must_be_tangent_to_the_divisor(self):
        f = frame("x! y")

        with pytest.raises(InputError) as exc_info:
            Distribution.of(f, [Derivation.partial(f, "x")])
        assert exc_info.value.code == "foliation.not_tangent"

        assert check_tangent(Derivation.diagonal(f, [1, 0]), SNCDivisor.from_frame(f))

    def test_divisor_validation(self):
        with pytest.raises(InputError):
            SNCDivisor(2, (0, 0))
        with pytest.raises(InputError):
            SNCDivisor(2, (2,))
        assert SNCDivisor.of(frame("x y z"), ["z", "x"]).components == (0, 2)

    def test_leaf_dimension_is_generic_rank(self):
        f = frame("x y z")

        assert theta(f, "d/dy, d/dz").leaf_dimension == 2
        assert theta(f, "x*d/dx, x^2*d/dx").leaf_dimension == 1
        assert theta(f, "x*d/dx, 0").generators == (Derivation.diagonal(f, [1, 0, 0]),)
        assert generic_rank(f, []) == 0

    def test_regular_directions(self):
        f = frame("x y z")

        assert theta(f, "d/dz, d/dy, x*d/dx").regular_directions() == ("y", "z")
        assert theta(f, "d/dy + d/dz").regular_directions() == ()

    def test_reduced_echelon_form(self):
        f = frame("x y z")
        reduced = theta(f, "d/dx + d/dy, d/dy, x*d/dx + z*d/dz").reduced()

        assert reduced.generators == (
            Derivation.partial(f, "x"),
            Derivation.partial(f, "y"),
            Derivation.diagonal(f, [0, 0, 1]),
        )

    def test_tangent_variables(self):
        f = frame("x! y z")

        assert theta(f, "d/dy, z*d/dz").tangent_variables() == ("x", "z")


@pytest.mark.unit
class TestInvariance:
    def test_apply_ideal(self):
        f, th, i = tangency_case(3)

        assert ideal_equal(apply_ideal(th, i), ideal(f, "y, x*z^2"), GLOBAL)

    def test_monomial_ideals_are_invariant_under_diagonal_fields(self):
        f = frame("x y")
        th = theta(f, "x*d/dx - y*d/dy")

        assert is_invariant(th, ideal(f, "x*y, x^3"))
        assert not is_invariant(th, ideal(f, "x + y"))

    def test_eigen_blocks_of_a_diagonal_field(self):
        f = frame("x y")
        blocks = eigen_blocks(Derivation.diagonal(f, [1, -1]), poly(f, "x*y + x^2 + y"))

        assert [(b.eigenvalue, b.block) for b in blocks] == [
            (Rational(-1), f.gen("y")),
            (Rational(0), poly(f, "x*y")),
            (Rational(2), poly(f, "x^2")),
        ]

    def test_degree_blocks_of_a_coordinate_field(self):
        f = frame("x y")
        blocks = eigen_blocks(Derivation.partial(f, "y"), poly(f, "y^2 + x*y + x"))

        assert [(b.degree, b.block) for b in blocks] == [(0, f.gen("x")), (1, poly(f, "x*y")), (2, poly(f, "y^2"))]

    def test_eigen_blocks_need_a_recognized_field(self):
        f = frame("x y")

        with pytest.raises(UnsupportedDerivationError):
            eigen_blocks(parse_derivation("y*d/dx", f), f.gen("x"))

    def test_invariant_generators(self):
        f, _, i = tangency_case(3)

        assert ideal_equal(invariant_generators(theta(f, "d/dz"), i), ideal(f, "y^2, x"), LOCAL)
        assert contains_one(invariant_generators(theta(f, "d/dy, d/dz"), i), GLOBAL)
