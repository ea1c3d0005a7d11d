from __future__ import annotations

import pytest

from folres.exceptions import StageBudgetExhausted
from folres.ideals import GLOBAL, LOCAL, ideal_equal
from folres.invariants import h_sequence, origin_invariant, tg_invariant
from tests.cases import frame, ideal, tangency_case, theta


@pytest.mark.unit
class TestTangencySequence:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_cusp_family_has_invariant_two_one(self, n):
        f, th, i = tangency_case(n)
        inv = tg_invariant(th, i)

        assert inv.as_tuple() == (2, 1)
        assert inv.sequence.unit_at == 2
        assert len(inv.sequence.stages) == 3
        assert ideal_equal(inv.sequence.stages[1], ideal(f, f"y, x*z^{n - 1}, x^{n + 1}"), LOCAL)

    def test_first_stage_agrees_across_backends(self):
        f, th, i = tangency_case(3)

        for backend in (GLOBAL, LOCAL):
            seq = h_sequence(th, i, backend=backend)
            assert ideal_equal(seq.stages[1], ideal(f, "y, x*z^2, x^4"), backend)

    def test_stabilizing_sequence_has_type_two(self):
        f = frame("x y")
        inv = tg_invariant(theta(f, "x*d/dx"), ideal(f, "x + y^2"))

        assert inv.as_tuple() == (1, 2)
        assert inv.sequence.unit_at is None
        assert ideal_equal(inv.closure, ideal(f, "x, y^2"), LOCAL)

    def test_unit_ideal_is_stage_zero(self):
        f = frame("x y")
        inv = tg_invariant(theta(f, "d/dx"), ideal(f, "1 + x*y"))

        assert inv.as_tuple() == (0, 1)

    def test_stage_budget(self):
        _, th, i = tangency_case(3)

        with pytest.raises(StageBudgetExhausted) as exc_info:
            h_sequence(th, i, max_stage=1)
        assert exc_info.value.code == "budget.stages"


@pytest.mark.unit
class TestOriginInvariant:
    def test_tangent_monomial_is_factored_out(self):
        f = frame("x! y")
        origin = origin_invariant(theta(f, "d/dy"), ideal(f, "x^2*y + x^3"))

        assert origin.monomial == (2, 0)
        assert ideal_equal(origin.residual, ideal(f, "x + y"), GLOBAL)
        assert origin.invariant.as_tuple() == (1, 1)

    def test_cusp_family_residual_is_the_ideal(self):
        _, th, i = tangency_case(4)
        origin = origin_invariant(th, i)

        assert origin.monomial == (0, 0, 0)
        assert origin.invariant.as_tuple() == (2, 1)

    def test_exceptional_flag_does_not_change_the_invariant(self):
        _, th, i = tangency_case(3, exceptional=False)

        assert origin_invariant(th, i).invariant.as_tuple() == (2, 1)
