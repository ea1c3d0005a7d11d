from __future__ import annotations

import logging

import numpy as np
import pytest

from folres.exceptions import BudgetExhausted, ConfigurationError, MoraBudgetExceeded
from folres.ideals import (
    GLOBAL,
    LOCAL,
    FGIdeal,
    MembershipBackend,
    contains_one,
    cross_check,
    exceptional_factorization,
    groebner,
    ideal_equal,
    local_standard_basis,
    membership,
    membership_certificate,
    monomial_generators,
    principal_monomial,
)
from folres.ideals.mora import StepCounter
from tests.cases import frame, ideal, poly


@pytest.mark.unit
class TestBackends:
    def test_parse(self):
        assert MembershipBackend.parse("global") == GLOBAL
        assert MembershipBackend.parse(" Local ").kind == "local"
        jet = MembershipBackend.parse("jet:6")
        assert (jet.kind, jet.order, str(jet)) == ("jet", 6, "jet:6")

    @pytest.mark.parametrize("text", ["jet:x", "jet:-1", "exact", ""])
    def test_parse_rejects_unknown(self, text):
        with pytest.raises(ConfigurationError):
            MembershipBackend.parse(text)

    def test_local_only_membership(self):
        f = frame("x")
        i = ideal(f, "x + x^2")

        assert membership(f.gen("x"), i, LOCAL)
        assert not membership(f.gen("x"), i, GLOBAL)
        assert membership(f.gen("x"), i, MembershipBackend.parse("jet:8"))

    def test_certificates_hold(self):
        f = frame("x y")
        i = ideal(f, "x + x^2, y^3")
        target = poly(f, "x*y + y^4")

        cert = membership_certificate(target, i, LOCAL)
        assert cert is not None
        assert cert.holds(target, i)
        assert cert.unit.const() != 0

        global_cert = membership_certificate(poly(f, "x^2*y + x*y"), i, GLOBAL)
        assert global_cert is not None and global_cert.unit == f.one

    def test_zero_is_always_a_member(self):
        f = frame("x y")

        assert membership(f.zero, ideal(f, "x"), GLOBAL)
        assert not membership(f.gen("x"), FGIdeal.of(f, []), LOCAL)


@pytest.mark.unit
class TestIdealOperations:
    def test_contains_one_global_versus_local(self):
        f = frame("x y")
        i = ideal(f, "1 + x, y")

        assert contains_one(i, GLOBAL)
        assert contains_one(i, LOCAL)
        assert not contains_one(ideal(f, "x, y"), LOCAL)
        assert not contains_one(ideal(f, "x*(1 + x)"), GLOBAL)

    def test_groebner_basis_is_reduced(self):
        f = frame("x y z")
        basis = groebner(ideal(f, "y^2 + x*z^3 + x^4, 2*y, 3*x*z^2")).basis

        assert set(basis) == {f.gen("y"), poly(f, "x*z^2"), poly(f, "x^4")}

    def test_local_standard_basis_sees_units(self):
        f = frame("x y")
        basis = local_standard_basis(ideal(f, "x*(1 + y), y^2")).basis

        assert ideal_equal(FGIdeal.of(f, basis), ideal(f, "x, y^2"), LOCAL)

    def test_monomial_generators(self):
        f = frame("x y")

        assert monomial_generators(ideal(f, "x^2*(1 + y), x*y^3, x^2*y")) == [(2, 0), (1, 3)]
        assert monomial_generators(ideal(f, "x + y^2")) is None
        assert monomial_generators(ideal(f, "1 + x")) == [(0, 0)]

    def test_principal_monomial(self):
        f = frame("x y")

        assert principal_monomial(ideal(f, "x^2*y*(1 + x), x^3*y^2")) == (2, 1)
        assert principal_monomial(ideal(f, "x, y")) is None
        assert principal_monomial(ideal(f, "2")) == (0, 0)

    def test_exceptional_factorization(self):
        f = frame("x! y z")
        exps, residual = exceptional_factorization(ideal(f, "x^2*y + x^3, x*z"), ["x"])

        assert exps == (1, 0, 0)
        assert residual.generators == (poly(f, "x*y + x^2"), f.gen("z"))

    def test_mora_step_counter_is_a_budget_error(self):
        counter = StepCounter(2)
        counter.tick()
        counter.tick()

        with pytest.raises(MoraBudgetExceeded) as exc_info:
            counter.tick()
        assert exc_info.value.code == "budget.mora_steps"
        assert isinstance(exc_info.value, BudgetExhausted)


@pytest.mark.property
def test_backends_never_contradict_the_jet_oracle(caplog):
    """Global membership implies local, local implies the degree-8 jet; a seeded random campaign."""
    rng = np.random.default_rng(20240611)
    f = frame("x y z")
    monoms = [m for m in ((a, b, c) for a in range(5) for b in range(5) for c in range(5)) if 1 <= sum(m) <= 4]

    def random_poly(terms: int):
        out = f.zero
        for k in rng.choice(len(monoms), size=terms, replace=False):
            out += f.monomial(monoms[k], int(rng.integers(1, 4)) * (-1) ** int(rng.integers(0, 2)))
        if rng.random() < 0.3:
            out += f.one
        return out

    with caplog.at_level(logging.WARNING, logger="folres"):
        for _ in range(500):
            gens = [random_poly(int(rng.integers(1, 3))) for _ in range(int(rng.integers(1, 3)))]
            i = FGIdeal.of(f, gens)
            if rng.random() < 0.5:
                target = gens[0] * random_poly(1) + (gens[-1] * random_poly(1) if len(gens) > 1 else f.zero)
            else:
                target = random_poly(int(rng.integers(1, 3)))
            verdicts = cross_check(target, i, jet_order=8)

            assert not verdicts["global"] or verdicts["local"]
            assert not verdicts["local"] or verdicts["jet"]

    assert "backend disagreement" not in caplog.text
