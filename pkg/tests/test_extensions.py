"""Tests for localization, scalar restriction and the polynomial identity."""

import pytest

from app.config import get_settings
from app.exceptions import OrderBudgetExceeded
from app.models.report import AuditStatus
from app.services.extensions import (
    localization_audit,
    localize,
    localize_module,
    mult_set_closure,
    poly_gln_check,
    restrict_scalars,
    scalar_audit,
)
from app.services.catalog import catalog_rings, module_family
from app.services.ideals import ideal_generate, projection, quotient_ring
from app.services.modules import regular_module
from app.services.ring_core import FiniteRing, RingHom
from app.services.torsion import is_eps_reduced


class TestLocalization:
    """Tests for S⁻¹R and S⁻¹M."""

    def test_mult_set_closure(self, z6: FiniteRing):
        mult_set = mult_set_closure(z6, [z6.element(3)])
        assert {z6.to_literal(s) for s in mult_set.elements} == {1, 3}

    def test_localize_z6_at_3(self, z6: FiniteRing):
        """Z6[1/3] ≅ Z2 has two classes."""
        localized = localize(z6, mult_set_closure(z6, [z6.element(3)]))
        assert len(localized.elements) == 2
        assert localized.canonical_map().surjective

    def test_zero_in_set_kills_everything(self, z4: FiniteRing):
        """Inverting the nilpotent 2 gives the zero ring."""
        localized = localize(z4, mult_set_closure(z4, [z4.element(2)]))
        assert len(localized.elements) == 1
        assert localized.zero == localized.one

    def test_localized_module(self, z6: FiniteRing):
        mult_set = mult_set_closure(z6, [z6.element(3)])
        localized = localize_module(regular_module(z6), mult_set)
        assert localized.size == 2
        assert is_eps_reduced(localized, 1).reduced

    def test_audit_holds_without_zero_divisors(self, z6: FiniteRing):
        report = localization_audit(regular_module(z6), mult_set_closure(z6, [z6.element(5)]), 1)
        assert report.status == AuditStatus.HOLDS
        assert "M -> S⁻¹M is injective" in report.notes

    def test_audit_converse_fails_when_embedding_fails(self, z4: FiniteRing):
        """Z4 is not reduced but its localization at {1, 2, 0} is the zero ring."""
        report = localization_audit(regular_module(z4), mult_set_closure(z4, [z4.element(2)]), 1)
        assert report.status == AuditStatus.FAILS
        assert report.witness["module_eps_reduced"] is False
        assert report.witness["localized_eps_reduced"] is True
        assert "M -> S⁻¹M is not injective" in report.notes


class TestScalars:
    """Tests for restriction of scalars."""

    def test_identity_returns_module(self, z8_regular, z8: FiniteRing):
        assert restrict_scalars(RingHom.identity(z8), z8_regular) is z8_regular

    def test_projection(self, z8: FiniteRing):
        """Z4 over itself and over Z8 agree on ε^t-reducedness."""
        quotient = quotient_ring(z8, ideal_generate(z8, [z8.element(4)]))
        hom = projection(quotient)
        module = regular_module(quotient)
        restricted = restrict_scalars(hom, module)
        assert restricted.ring is z8
        assert restricted.size == 4
        for t in (1, 2):
            report = scalar_audit(hom, module, t)
            assert report.status == AuditStatus.HOLDS
            assert report.notes == []
        assert not is_eps_reduced(restricted, 1).reduced
        assert is_eps_reduced(restricted, 2).reduced


class TestPolynomials:
    """Tests for a^tΓ_a(R)[x] = a^tΓ_a(R[x])."""

    def test_z16_degree_one(self, z16: FiniteRing):
        """Both sides have 16 polynomials of degree at most 1."""
        report = poly_gln_check(z16, z16.element(2), 2, 1)
        assert report.status == AuditStatus.HOLDS
        assert report.detail.startswith("16 polynomials")

    def test_reduced_case(self, z16: FiniteRing):
        report = poly_gln_check(z16, z16.element(4), 2, 2)
        assert report.status == AuditStatus.HOLDS
        assert "are a^2-reduced" in report.detail

    def test_budget(self, z16: FiniteRing, monkeypatch):
        """|R|^(D+1) polynomials must fit in the budget."""
        monkeypatch.setenv("REDMOD_MAX_ELEMS", "100")
        get_settings.cache_clear()
        with pytest.raises(OrderBudgetExceeded):
            poly_gln_check(z16, z16.element(2), 1, 2)

    def test_invalid_degree(self, z16: FiniteRing):
        with pytest.raises(ValueError):
            poly_gln_check(z16, z16.one, 1, -1)


class TestCanonicalMap:
    """Tests for the verified map r ↦ r/1 attached by localize."""

    def test_every_small_ring_and_generator(self):
        for ring in catalog_rings(max_order=12, max_n=12):
            for g in ring.elements:
                localized = localize(ring, mult_set_closure(ring, [g]))
                hom = localized.canonical
                assert hom is not None
                assert hom.source == ring
                assert hom.target is localized
                assert all(hom(r) == localized.fraction(r) for r in ring.elements)
                assert hom(ring.one) == localized.one

    def test_kernel_reported(self, z6: FiniteRing):
        """Z6 → Z6[1/3] kills 0, 2 and 4."""
        report = localization_audit(regular_module(z6), mult_set_closure(z6, [z6.element(3)]), 1)
        assert "R -> S⁻¹R verified, kernel of size 3" in report.notes


class TestInvariants:
    """Localizing at S = {1} changes nothing."""

    def test_trivial_set_gives_isomorphic_ring(self):
        for ring in catalog_rings(max_order=12, max_n=12):
            localized = localize(ring, mult_set_closure(ring, []))
            assert len(localized.elements) == ring.order
            assert localized.canonical.surjective, ring.label

    def test_trivial_set_gives_isomorphic_module(self):
        for ring in catalog_rings(max_order=12, max_n=12):
            mult_set = mult_set_closure(ring, [])
            localized_ring = localize(ring, mult_set)
            for module in module_family(ring):
                localized = localize_module(module, mult_set, localized_ring)
                image = {m: localized.fraction(m) for m in module.elements}
                assert len(set(image.values())) == len(localized.elements) == module.size
                for m in module.elements:
                    for n in module.elements:
                        assert image[module.add(m, n)] == localized.add(image[m], image[n])
                    for r in ring.elements:
                        scalar = localized_ring.fraction(r)
                        assert image[module.smul(r, m)] == localized.smul(scalar, image[m])
