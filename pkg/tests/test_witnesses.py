"""Tests for the independent re-checks behind search witnesses."""

from app.models.module import ModuleSpec
from app.models.report import AuditReport, AuditStatus, Instance
from app.services.extensions import localization_audit, mult_set_closure
from app.services.harness import AuditService
from app.services.ideals import ideal_generate
from app.services.modules import cyclic_quotient, regular_module
from app.services.ring_core import FiniteRing
from app.services.witnesses import CHECKERS, VectorTable, reverify


class TestVectorTable:
    """Tests for the plain vector model of R^g/K."""

    def test_gln_of_z12_at_2(self, z12: FiniteRing):
        """2Γ_2(Z12) = 2·{0, 3, 6, 9} = {0, 6}."""
        table = VectorTable(z12, 1)
        assert {z12.to_literal(v[0]) for v in table.gln(z12.element(2), 1)} == {0, 6}

    def test_kernel_from_relations(self, z8: FiniteRing):
        table = VectorTable.from_spec(z8, ModuleSpec(ring=z8.to_spec(), rank=1, relations=[[4]]))
        assert {z8.to_literal(v[0]) for v in table.kernel} == {0, 4}
        assert table.is_zero((z8.element(4),))
        assert not table.is_zero((z8.element(2),))

    def test_eps_reduced_on_z4(self, z4: FiniteRing):
        """Z4 is ε²-reduced but not reduced."""
        table = VectorTable(z4, 1)
        assert not table.eps_reduced(1)
        assert table.eps_reduced(2)


class TestReverify:
    """Tests for reverify on engine reports and fabricated ones."""

    def test_localization_failure_confirmed(self, z4: FiniteRing):
        """Inverting 2 in Z4 gives the zero ring, which is reduced while Z4 is not."""
        report = localization_audit(regular_module(z4), mult_set_closure(z4, [z4.element(2)]), 1)
        assert report.status == AuditStatus.FAILS
        assert report.instance.module_spec is not None
        assert reverify(report)

    def test_localization_tampered(self, z4: FiniteRing):
        report = localization_audit(regular_module(z4), mult_set_closure(z4, [z4.element(2)]), 1)
        flipped = {
            **report.witness,
            "module_eps_reduced": not report.witness["module_eps_reduced"],
            "localized_eps_reduced": not report.witness["localized_eps_reduced"],
        }
        assert not reverify(report.model_copy(update={"witness": flipped}))

    def test_fabricated_sum_failure_rejected(self, z4: FiniteRing):
        """a^tΓ_a commutes with Z4 ⊕ Z4/(2), so a claimed failure is refused."""
        parts = [
            regular_module(z4).spec_literal(),
            cyclic_quotient(z4, ideal_generate(z4, [z4.element(2)])).spec_literal(),
        ]
        report = AuditReport(
            claim="sum",
            instance=Instance(ring="Z4", ring_spec=z4.to_spec(), t=1),
            status=AuditStatus.FAILS,
            witness={"a": 2, "parts": parts},
        )
        assert not reverify(report)

    def test_fabricated_radical_failure_rejected(self, z8: FiniteRing):
        module = regular_module(z8)
        report = AuditReport(
            claim="functor.radical",
            instance=Instance(ring="Z8", ring_spec=z8.to_spec(), module="Z8",
                              module_spec=module.to_spec(), a=2, t=1),
            status=AuditStatus.FAILS,
            witness={"a": 2},
        )
        assert not reverify(report)

    def test_claim_without_checker_withheld(self, z6: FiniteRing):
        assert "domain_iff_field" not in CHECKERS
        report = AuditReport(
            claim="domain_iff_field",
            instance=Instance(ring="Z6", ring_spec=z6.to_spec(), t=1),
            status=AuditStatus.FAILS,
            witness={"zero_divisor": 2},
        )
        assert not reverify(report)

    def test_holding_report_not_confirmed(self, z4: FiniteRing):
        report = localization_audit(regular_module(z4), mult_set_closure(z4, [z4.element(3)]), 1)
        assert report.status == AuditStatus.HOLDS
        assert not reverify(report)


class TestSearch:
    """Witnesses found by search are confirmed without the engine."""

    def test_fg_module_witness(self, audit_service: AuditService):
        """Z4 itself is ε²-reduced but not reduced."""
        found = audit_service.search("noeth_fg_reduced_iff_eps", 2, 8)
        assert "Z4" in [w.ring for w in found]
        assert all(w.witness["module_spec"] is not None for w in found)

    def test_localization_witness(self, audit_service: AuditService):
        found = audit_service.search("localization", 1, 4)
        assert "Z4" in [w.ring for w in found]
        assert all("mult_set" in w.witness for w in found)
