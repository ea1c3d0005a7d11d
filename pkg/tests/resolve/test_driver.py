from __future__ import annotations

import pytest
from hypothesis import event, given, settings
from hypothesis import strategies as st

from folres.algebra import Frame
from folres.config import DriverOptions
from folres.exceptions import BranchBudgetExhausted, InputError, StageBudgetExhausted, SubclassAbort
from folres.foliation import Derivation, Distribution, check_monomial_form
from folres.ideals import FGIdeal, principal_monomial
from folres.resolve import resolve_local, step1_drop_type, step2_prepare, step3_drop_nu, verify_resolution
from tests.cases import frame, ideal, tangency_case, theta


def assert_resolved(result) -> None:
    report = verify_resolution(result.tree)
    assert report.is_valid, report.first_failure
    for leaf in result.tree.leaves():
        assert leaf.leaf
        assert principal_monomial(leaf.ideal) is not None
        assert check_monomial_form(leaf.theta).is_monomial


@pytest.mark.integration
class TestResolveLocal:
    @pytest.mark.parametrize("n", [3, 4])
    def test_tangency_example_resolves(self, n):
        f, th, i = tangency_case(n)
        result = resolve_local(th, i)

        assert_resolved(result)
        assert result.counters.steps["weierstrass"] >= 1
        assert result.counters.steps["step3"] >= 1
        assert result.counters.recursions >= 1
        assert result.tree.counts()["blowup"] >= 2

    def test_every_step_lowers_the_measure(self):
        f, th, i = tangency_case(3)
        result = resolve_local(th, i)

        assert result.counters.transitions
        for t in result.counters.transitions:
            if t.step == "step2":
                assert t.after[1:] <= t.before[1:], t
            else:
                assert t.after[1:] < t.before[1:], t
            assert t.after[0] == t.before[0]

    def test_fiber_predictions_hold(self):
        f, th, i = tangency_case(3)
        result = resolve_local(th, i)

        assert result.fiber_checks
        assert all(check.ok for check in result.fiber_checks)
        assert {check.subcase for check in result.fiber_checks} <= {"v_power", "mixed_term", "rank_deficient", "origin"}

    def test_blowups_carry_their_admissibility(self):
        f, th, i = tangency_case(3)
        result = resolve_local(th, i)

        blowups = [e for e in result.tree.edges if e.kind == "blowup"]
        assert blowups
        assert all(e.admissibility is not None and e.admissibility.admissible for e in blowups)

    def test_type_two_input(self):
        f = frame("x! y!")
        result = resolve_local(theta(f, "x*d/dx"), ideal(f, "x + y^2"))

        assert_resolved(result)
        assert result.counters.steps["step1"] >= 1
        assert result.tree.nodes["root"].invariant == (1, 2)

    def test_principal_input_is_the_root(self):
        f = frame("x! y")
        result = resolve_local(theta(f, "d/dy"), ideal(f, "x^3"))

        assert list(result.tree.nodes) == ["root"]
        node = result.tree.nodes["root"]
        assert node.leaf
        assert node.principal_monomial == (3, 0)
        assert node.supported_in_divisor

    def test_principal_outside_the_divisor_is_still_a_leaf(self):
        f = frame("x y")
        result = resolve_local(theta(f, "d/dx"), ideal(f, "y*(1 + x)"))

        assert result.tree.nodes["root"].supported_in_divisor is False
        report = verify_resolution(result.tree)
        assert report.is_valid
        assert report.count("WARN") == 1

    def test_same_seed_same_fiber_points(self):
        f, th, i = tangency_case(3)
        first = resolve_local(th, i, DriverOptions(seed=7))
        second = resolve_local(th, i, DriverOptions(seed=7))

        assert [c.gamma for c in first.fiber_checks] == [c.gamma for c in second.fiber_checks]

    def test_fiber_checks_can_be_skipped(self):
        f, th, i = tangency_case(3)
        result = resolve_local(th, i, DriverOptions(verify_fibers=False))

        assert result.fiber_checks == ()
        assert verify_resolution(result.tree).is_valid

    def test_stats_and_counters(self):
        f, th, i = tangency_case(3)
        result = resolve_local(th, i)

        assert "resolve" in result.stats.wall_time
        assert result.stats.wall_time.keys() == result.stats.cpu_time.keys()
        counters = result.counters.as_dict()
        assert counters["charts"] == len(result.tree.nodes)
        assert counters["transitions"] == len(result.counters.transitions)


@pytest.mark.unit
class TestSingleSteps:
    def test_step1_principalizes_the_closure(self):
        f = frame("x! y!")
        result = step1_drop_type(theta(f, "x*d/dx"), ideal(f, "x + y^2"))

        assert result.counters.steps["step1"] == 1
        leaves = result.tree.leaves()
        assert len(leaves) == 3
        assert all(leaf.leaf for leaf in leaves)
        assert {e.center.variables for e in result.tree.edges} == {("x", "y")}

    def test_step1_needs_type_two(self):
        f, th, i = tangency_case(3)

        with pytest.raises(InputError) as exc_info:
            step1_drop_type(th, i)
        assert exc_info.value.code == "resolve.wrong_type"

    def test_step2_prepares_the_leaves(self):
        f, th, i = tangency_case(3)
        result = step2_prepare(th, i)

        assert result.counters.steps == {"step1": 0, "weierstrass": 1, "step2": 1, "step3": 0}
        prepared = [leaf for leaf in result.tree.leaves() if leaf.prepared is not None]
        assert prepared
        for leaf in prepared:
            assert leaf.invariant == (2, 1)
            assert leaf.prepared.wt.v == "y"

    def test_step3_drops_nu(self):
        f = frame("x! y")
        result = step3_drop_nu(theta(f, "d/dy"), ideal(f, "y^2 + x^3"))

        leaves = result.tree.leaves()
        assert len(leaves) == 4
        assert all(leaf.leaf for leaf in leaves)
        assert result.tree.nodes["root"].prepared.exponents == {(0, 0): (3, 0)}
        assert result.fiber_checks
        assert all(check.ok for check in result.fiber_checks)

    def test_step3_needs_the_weierstrass_shape(self):
        f = frame("x! y")

        with pytest.raises(InputError) as exc_info:
            step3_drop_nu(theta(f, "d/dy"), ideal(f, "y^2 + 2*x*y + x^3"))
        assert exc_info.value.code == "resolve.not_prepared"

    def test_principal_input_has_nothing_to_drop(self):
        f = frame("x! y")

        with pytest.raises(InputError) as exc_info:
            step3_drop_nu(theta(f, "d/dy"), ideal(f, "x^2"))
        assert exc_info.value.code == "resolve.principal"


@pytest.mark.unit
class TestFailures:
    def test_zero_ideal(self):
        f = frame("x y")

        with pytest.raises(InputError) as exc_info:
            resolve_local(theta(f, "d/dx"), FGIdeal.of(f, []))
        assert exc_info.value.code == "resolve.zero_ideal"
        assert "ideal required" in exc_info.value.message

    def test_non_monomial_distribution_aborts(self):
        f = frame("x y! z")

        with pytest.raises(SubclassAbort) as exc_info:
            resolve_local(theta(f, "y*d/dx + x*d/dz"), ideal(f, "x, z"))
        assert exc_info.value.code == "resolve.subclass_abort"
        assert exc_info.value.context["chart"] == "root"

    def test_stage_budget(self):
        f, th, i = tangency_case(3)

        with pytest.raises(StageBudgetExhausted) as exc_info:
            resolve_local(th, i, DriverOptions(max_stages=1))
        assert exc_info.value.code == "budget.stages"

    def test_branch_budget(self):
        f, th, i = tangency_case(3)

        with pytest.raises(BranchBudgetExhausted):
            resolve_local(th, i, DriverOptions(max_branches=2))


@st.composite
def diagonal_problems(draw):
    dim = draw(st.integers(min_value=2, max_value=3))
    names = "abc"[:dim]
    f = Frame.of(names, names)
    weights = draw(st.lists(st.integers(min_value=-2, max_value=2), min_size=dim, max_size=dim).filter(any))
    exps = draw(
        st.lists(
            st.tuples(*[st.integers(min_value=0, max_value=3) for _ in range(dim)]).filter(any),
            min_size=1,
            max_size=3,
            unique=True,
        )
    )
    th = Distribution.of(f, [Derivation.diagonal(f, weights)])
    return th, FGIdeal.of(f, [f.monomial(e) for e in exps])


@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(diagonal_problems())
def test_diagonal_fields_resolve_monomial_ideals(problem):
    th, i = problem
    result = resolve_local(th, i)
    event(f"tree depth {result.counters.max_depth}")

    assert verify_resolution(result.tree).is_valid
    for leaf in result.tree.leaves():
        assert principal_monomial(leaf.ideal) is not None
