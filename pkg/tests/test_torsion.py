"""Tests for the a-torsion functor, a^tΓ_a and reducedness."""

from app.models.report import AuditStatus
from app.services.catalog import catalog_rings, module_family
from app.services.ideals import ideal_generate
from app.services.modules import (
    PresentedModule,
    cyclic_quotient,
    intersection,
    module_present,
    regular_module,
    submodule_generate,
)
from app.services.ring_core import FiniteRing
from app.services.torsion import (
    functor_audit,
    gamma,
    gamma_ideal,
    gln,
    is_at_reduced,
    is_eps_reduced,
    is_reduced,
    iterated_gln,
    local_cohomology_zero,
    stratify_audit,
    sum_audit,
    torsion_chain,
    verify_equivalences,
)


class TestGamma:
    """Tests for Γ_a and the annihilator chain."""

    def test_gamma_z12(self, z12: FiniteRing):
        """Γ_2(Z12) = {0, 3, 6, 9}."""
        module = regular_module(z12)
        assert gamma(module, z12.element(2)).to_report() == [0, 3, 6, 9]

    def test_chain_z12(self, z12: FiniteRing):
        """(0:2) ⊂ (0:4) = (0:8) in Z12."""
        module = regular_module(z12)
        chain = torsion_chain(module, z12.element(2))
        assert [module.literals(level) for level in chain.levels] == [[0, 6], [0, 3, 6, 9]]
        assert chain.stabilization_index == 2
        assert chain.depth(module.element(3)) == 2
        assert chain.depth(module.element(1)) is None

    def test_unit_and_zero_scalars(self, z8_regular: PresentedModule, z8: FiniteRing):
        """Γ of a unit is 0; Γ of 0 is everything."""
        assert gamma(z8_regular, z8.element(3)).is_zero()
        assert gamma(z8_regular, z8.zero).members == frozenset(z8_regular.elements)

    def test_gamma_ideal_matches_principal(self, z12: FiniteRing):
        """Γ_I(M) = Γ_a(M) for I = (a)."""
        module = regular_module(z12)
        a = z12.element(2)
        assert gamma_ideal(module, ideal_generate(z12, [a])).members == gamma(module, a).members


class TestGln:
    """Tests for a^tΓ_a."""

    def test_gln_z8(self, z8_regular: PresentedModule, z8: FiniteRing):
        """2²Γ_2(Z8) = {0, 4}."""
        assert gln(z8_regular, z8.element(2), 2).to_report() == [0, 4]

    def test_not_left_exact(self, z8_regular: PresentedModule, z8: FiniteRing):
        """For N = 2Z8: 2²Γ_2(N) = 0 while N ∩ 2²Γ_2(Z8) = {0, 4}."""
        two = z8.element(2)
        sub = submodule_generate(z8_regular, [z8_regular.element(2)])
        assert gln(sub, two, 2).is_zero()
        assert intersection(sub, gln(z8_regular, two, 2)).to_report() == [0, 4]

    def test_composition(self, z16: FiniteRing):
        """aΓ_a applied t times equals a^tΓ_a."""
        module = regular_module(z16)
        a = z16.element(2)
        for t in (1, 2, 3):
            assert iterated_gln(module, a, t).members == gln(module, a, t).members


class TestReducedness:
    """Tests for a^t-, ε^t- and plain reducedness."""

    def test_z16(self, z16: FiniteRing):
        """Z16 is 4²-reduced but not 2²-reduced."""
        module = regular_module(z16)
        assert is_at_reduced(module, z16.element(4), 2).reduced
        verdict = is_at_reduced(module, z16.element(2), 2)
        assert not verdict.reduced
        m, k = verdict.witness
        assert k >= 2
        assert module.smul(z16.pow(z16.element(2), k), m) == module.zero

    def test_z9(self, z9: FiniteRing):
        """Z9 is 3²-reduced but not 3-reduced."""
        module = regular_module(z9)
        three = z9.element(3)
        assert is_at_reduced(module, three, 2).reduced
        assert not is_at_reduced(module, three, 1).reduced

    def test_z4_over_z8(self, z8: FiniteRing):
        """Z8/(4) is ε²-reduced but not reduced."""
        module = cyclic_quotient(z8, ideal_generate(z8, [z8.element(4)]))
        assert is_eps_reduced(module, 2).reduced
        verdict = is_reduced(module)
        assert not verdict.reduced
        assert verdict.to_witness(module)["a"] == 2

    def test_zero_scalar(self, z4: FiniteRing):
        """a ≡ 0 is always a^t-reduced while Z4 is not reduced."""
        module = regular_module(z4)
        assert is_at_reduced(module, z4.element(4), 1).reduced
        assert not is_reduced(module).reduced

    def test_equivalences_not_reduced(self, z16: FiniteRing):
        """(Z16, a=2, t=2): every condition is false."""
        report = verify_equivalences(regular_module(z16), z16.element(2), 2)
        assert report.consistent
        assert not any(report.conditions.values())
        assert report.witness is not None

    def test_equivalences_reduced(self, z16: FiniteRing):
        report = verify_equivalences(regular_module(z16), z16.element(4), 2)
        assert report.consistent
        assert all(report.conditions.values())
        assert report.witness is None

    def test_equivalences_rank_two(self, z4: FiniteRing):
        """The conditions agree on Z4²/<(2,2)> for every a and t."""
        two = z4.element(2)
        module = module_present(z4, 2, [(two, two)])
        for a in z4.elements:
            for t in (1, 2):
                assert verify_equivalences(module, a, t).consistent


class TestAudits:
    """Tests for the stratification, functor, sum and local-cohomology audits."""

    def test_stratify_z8(self, z8: FiniteRing):
        report = stratify_audit(z8)
        assert report.status == AuditStatus.HOLDS
        assert "[0, 2, 4, 6]" in report.detail

    def test_functor_audit(self, z8_regular: PresentedModule, z8: FiniteRing):
        """All six functor checks hold; the factor check records strict containments."""
        reports = functor_audit(z8_regular, z8.element(2), 2)
        assert [r.claim for r in reports] == [
            "functor.preradical",
            "functor.radical",
            "functor.characteristic",
            "functor.factor",
            "functor.ideal_action",
            "functor.composition",
        ]
        assert all(r.status == AuditStatus.HOLDS for r in reports)
        factor = reports[3]
        assert any(n.startswith("strict") for n in factor.notes)

    def test_sum(self, z4: FiniteRing):
        first = regular_module(z4)
        second = cyclic_quotient(z4, ideal_generate(z4, [z4.element(2)]))
        for a in z4.elements:
            assert sum_audit([first, second], a, 1).status == AuditStatus.HOLDS

    def test_local_cohomology(self, z16: FiniteRing):
        """Holds when M is a^t-reduced, otherwise the hypothesis is not met."""
        module = regular_module(z16)
        assert local_cohomology_zero(module, z16.element(4), 2).status == AuditStatus.HOLDS
        report = local_cohomology_zero(module, z16.element(2), 2)
        assert report.status == AuditStatus.HYPOTHESIS_NOT_MET


class TestInvariants:
    """Containments that hold for every family module and scalar."""

    def test_gln_shrinks_with_t(self):
        """a^tΓ_a(M) ⊆ aΓ_a(M)."""
        for ring in catalog_rings(max_order=12, max_n=12):
            for module in module_family(ring):
                for a in ring.elements:
                    first = gln(module, a, 1)
                    for t in (2, 3):
                        assert gln(module, a, t) <= first, (module.label, ring.to_literal(a), t)
