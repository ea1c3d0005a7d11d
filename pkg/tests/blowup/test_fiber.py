from __future__ import annotations

import pytest
from sympy import Matrix

from folres.blowup import Center, Chart, ChartNode, ChartTree, blowup_chart, exponent_matrix, fiber_analysis, fiber_classes
from folres.exceptions import InternalInconsistency
from tests.cases import frame

ONE_BLOWUP = Matrix([[1, 0], [1, 1]])


@pytest.mark.unit
class TestExponentMatrix:
    def test_history_of_two_blowups(self):
        f = frame("u! v")
        tree = ChartTree.start(ChartNode(Chart.root(f)))
        first, edge = blowup_chart(Chart.root(f), Center.of(f, "uv"), "u")
        tree.add(edge, ChartNode(first))
        second, edge = blowup_chart(first, Center.of(first.frame, "uv"), "v")
        tree.add(edge, ChartNode(second))

        assert exponent_matrix(tree, first.id, ["u", "v"]) == ONE_BLOWUP
        # v = u*v after the first, then u = u*v in the v-chart: u -> u*v, v -> u*v^2
        assert exponent_matrix(tree, second.id, ["u", "v"]) == Matrix([[1, 1], [1, 2]])

    def test_fiber_classes_lie_over_the_origin(self):
        assert list(fiber_classes(ONE_BLOWUP, ["u", "v"])) == [("u",)]
        assert list(fiber_classes(ONE_BLOWUP, ["u", "v"], include_origin=True)) == [("u",), ("u", "v")]
        assert list(fiber_classes(Matrix.eye(2), ["u", "v"])) == []


@pytest.mark.unit
class TestFiberAnalysis:
    def test_leading_power_generates(self):
        prediction = fiber_analysis(ONE_BLOWUP, ["u", "v"], ["u"], 2, {})

        assert prediction.subcase == "v_power"
        assert prediction.bound == 1
        assert prediction.frame.case == 1
        assert prediction.frame.Lambda == Matrix([[1]])

    def test_lower_coefficient_generates(self):
        prediction = fiber_analysis(ONE_BLOWUP, ["u", "v"], ["u"], 3, {(0, 1): [0]})

        assert prediction.subcase == "mixed_term"
        assert prediction.bound == 1
        assert prediction.minimal == (0, 1)

    def test_tied_generators_keep_the_leading_power(self):
        prediction = fiber_analysis(ONE_BLOWUP, ["u", "v"], ["u"], 2, {(0, 1): [1]})

        assert prediction.subcase == "v_power"

    def test_rank_deficient_block_is_principal(self):
        prediction = fiber_analysis(Matrix.eye(2), ["u", "v"], ["v"], 2, {})

        assert prediction.subcase == "rank_deficient"
        assert prediction.bound == 0

    def test_untouched_origin(self):
        assert fiber_analysis(Matrix.eye(2), ["u", "v"], ["u", "v"], 4, {}).subcase == "origin"

    def test_non_unimodular_matrix(self):
        with pytest.raises(InternalInconsistency):
            fiber_analysis(Matrix([[2, 0], [0, 1]]), ["u", "v"], ["u"], 2, {})

    def test_vanishing_set_is_required(self):
        with pytest.raises(InternalInconsistency):
            fiber_analysis(ONE_BLOWUP, ["u", "v"], [], 2, {})
