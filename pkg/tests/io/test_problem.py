from __future__ import annotations

import pytest

from folres.exceptions import InputError, ParseError, UnknownVariableError
from folres.foliation import Derivation
from folres.io import load_problem, parse_problem
from tests.cases import tangency_case, tangency_text


@pytest.mark.unit
class TestParseProblem:
    def test_tangency_example(self):
        problem = parse_problem(tangency_text(3))
        f, th, i = tangency_case(3)

        assert problem.frame == f
        assert problem.theta.generators == th.generators
        assert problem.ideal.generators == i.generators
        assert problem.center is None
        assert problem.options == {}

    def test_optional_sections(self):
        problem = parse_problem(
            "vars x! y z;\ntheta d/dy, d/dz;\nideal y^2 + x*z^3;\ncenter x,z;\noptions jet_order=6, seed=3\n"
        )

        assert problem.center == ("x", "z")
        assert problem.options == {"jet_order": "6", "seed": "3"}

    def test_sections_in_any_order_with_comments(self):
        problem = parse_problem("ideal x*y;  # the ideal\ntheta x*d/dx - y*d/dy;\nvars x y;\n")

        assert problem.theta.generators == (Derivation.diagonal(problem.frame, [1, -1]),)
        assert problem.dimension == 2

    def test_canonical_text_parses_back(self):
        problem = parse_problem(tangency_text(4) + "center x,y;\n")
        again = parse_problem(problem.to_text())

        assert again.frame == problem.frame
        assert again.theta.generators == problem.theta.generators
        assert again.ideal.generators == problem.ideal.generators
        assert again.center == problem.center


@pytest.mark.unit
class TestProblemErrors:
    def test_empty_ideal(self):
        with pytest.raises(ParseError) as exc_info:
            parse_problem("vars x y;\ntheta d/dx;\nideal ;\n")
        assert "ideal required" in exc_info.value.message
        assert exc_info.value.context["line"] == 3

    def test_missing_section(self):
        with pytest.raises(ParseError) as exc_info:
            parse_problem("vars x y;\nideal x;\n")
        assert exc_info.value.context["section"] == "theta"

    def test_duplicate_section(self):
        with pytest.raises(ParseError) as exc_info:
            parse_problem("vars x y;\ntheta d/dx;\nideal x;\nideal y;\n")
        assert exc_info.value.context["line"] == 4

    def test_unknown_keyword(self):
        with pytest.raises(ParseError):
            parse_problem("vars x y;\ntheta d/dx;\nideals x;\n")

    def test_error_positions_are_in_the_file(self):
        with pytest.raises(UnknownVariableError) as exc_info:
            parse_problem("vars x y;\ntheta d/dx;\nideal x + w;\n")
        assert exc_info.value.context["line"] == 3
        assert exc_info.value.context["column"] == 11
        assert "line 3, column 11" in exc_info.value.message

    def test_bad_option(self):
        with pytest.raises(ParseError):
            parse_problem("vars x y;\ntheta d/dx;\nideal x;\noptions seed\n")

    def test_theta_must_be_tangent_to_the_divisor(self):
        with pytest.raises(InputError) as exc_info:
            parse_problem("vars x! y;\ntheta d/dx;\nideal y;\n")
        assert exc_info.value.code == "foliation.not_tangent"


@pytest.mark.unit
def test_load_problem_records_the_source(tangency_case_file):
    problem = load_problem(tangency_case_file)

    assert problem.source == str(tangency_case_file)
    assert problem.frame.exceptional_names == ("x",)


@pytest.mark.unit
def test_missing_problem_file(tmp_path):
    with pytest.raises(InputError) as exc_info:
        load_problem(tmp_path / "nope.folres")
    assert exc_info.value.code == "input.unreadable"
