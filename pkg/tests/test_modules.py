"""Tests for presented modules, submodules and homomorphisms."""

import itertools

import pytest

from app.exceptions import NotASubmodule, RingMismatch
from app.services.catalog import catalog_rings, module_family
from app.services.ideals import enumerate_ideals, ideal_generate
from app.services.modules import (
    PresentedModule,
    Submodule,
    ann_ideal_submodule,
    automorphisms,
    check_module_axioms,
    cyclic_quotient,
    cyclic_submodules,
    direct_sum,
    hom_count,
    hom_from_images,
    hom_set,
    is_faithful,
    module_present,
    quotient_module,
    regular_module,
    submodule_generate,
)
from app.services.ring_core import FiniteRing


class TestPresentedModule:
    """Tests for R^g/K."""

    def test_regular_module(self, z6: FiniteRing):
        module = regular_module(z6)
        assert module.size == 6
        assert module.is_free
        assert module.label == "Z6"
        assert regular_module(z6) is module

    def test_rank_two_with_relation(self, z4: FiniteRing):
        """Z4²/<(2,2)> has 8 elements."""
        two = z4.element(2)
        module = module_present(z4, 2, [(two, two)])
        assert module.size == 8
        assert module.kernel_size == 2
        assert module.element([2, 2]) == module.zero
        assert module.label == "Z4^2/<(2,2)>"

    def test_cyclic_quotient(self, z8: FiniteRing):
        """Z8/(4) as a Z8-module."""
        module = cyclic_quotient(z8, ideal_generate(z8, [z8.element(4)]))
        assert module.size == 4
        assert module.label == "Z8/(4)"
        assert module.element(5) == module.element(1)

    def test_relation_length_mismatch(self, z4: FiniteRing):
        with pytest.raises(RingMismatch):
            module_present(z4, 2, [(z4.one,)])

    def test_axioms(self, z4: FiniteRing):
        two = z4.element(2)
        assert check_module_axioms(module_present(z4, 2, [(two, two)])) is None


class TestSubmodules:
    """Tests for submodules and quotients."""

    def test_generate(self, z8_regular: PresentedModule):
        sub = submodule_generate(z8_regular, [z8_regular.element(6)])
        assert sub.to_report() == [0, 2, 4, 6]
        sub.verify()

    def test_not_closed(self, z8_regular: PresentedModule):
        """{0, 2} is not closed under addition in Z8."""
        sub = Submodule(z8_regular, [z8_regular.element(0), z8_regular.element(2)])
        with pytest.raises(NotASubmodule):
            sub.verify()

    def test_cyclic_submodules(self, z12: FiniteRing):
        """Z12 has one cyclic submodule per divisor of 12."""
        assert len(cyclic_submodules(regular_module(z12))) == 6

    def test_quotient(self, z8_regular: PresentedModule):
        sub = submodule_generate(z8_regular, [z8_regular.element(4)])
        quotient = quotient_module(z8_regular, sub)
        assert quotient.size == 4
        assert quotient_module(z8_regular, sub) is quotient

    def test_quotient_of_foreign_submodule(self, z8_regular: PresentedModule, z4: FiniteRing):
        other = regular_module(z4)
        with pytest.raises(NotASubmodule):
            quotient_module(z8_regular, submodule_generate(other, [other.element(2)]))


class TestHoms:
    """Tests for homomorphism enumeration."""

    def test_endomorphisms_of_regular(self, z4: FiniteRing):
        """Hom(R, R) ≅ R and the automorphisms are the units."""
        module = regular_module(z4)
        assert hom_count(module, module) == 4
        assert len(automorphisms(module)) == 2

    def test_hom_from_quotient(self, z4: FiniteRing):
        """Hom(Z4/(2), Z4) ≅ (0:2) = {0, 2}."""
        source = cyclic_quotient(z4, ideal_generate(z4, [z4.element(2)]))
        target = regular_module(z4)
        homs = hom_set(source, target)
        assert len(homs) == 2
        assert {target.to_literal(h.images[0]) for h in homs} == {0, 2}

    def test_direct_sum(self, z4: FiniteRing):
        first = regular_module(z4)
        second = cyclic_quotient(z4, ideal_generate(z4, [z4.element(2)]))
        total = direct_sum([first, second])
        assert direct_sum([first]) is first
        assert total.size == 8
        assert total.inject(1, second.element(1)) == total.element([0, 1])

    def test_faithful(self, z8: FiniteRing, z8_regular: PresentedModule):
        """Z8 is faithful over itself; Z8/(4) is killed by 4."""
        assert is_faithful(z8_regular).faithful
        verdict = is_faithful(cyclic_quotient(z8, ideal_generate(z8, [z8.element(4)])))
        assert not verdict.faithful
        assert z8.to_literal(verdict.witness) == 4


class TestInvariants:
    """Identities that must hold for every catalog ring and family module."""

    def test_homs_from_cyclic_quotient_match_annihilator(self):
        """|Hom(R/I, M)| == |(0:_M I)|."""
        for ring in catalog_rings(max_order=12, max_n=12):
            for ideal in enumerate_ideals(ring):
                source = cyclic_quotient(ring, ideal)
                for module in module_family(ring):
                    expected = ann_ideal_submodule(module, ideal).size
                    assert len(hom_set(source, module)) == expected, (ring.label, module.label)

    def test_quotient_by_zero_is_isomorphic(self):
        for ring in catalog_rings(max_order=12, max_n=12):
            for module in module_family(ring):
                quotient = quotient_module(module, Submodule(module, [module.zero]))
                basis = [
                    tuple(ring.one if i == j else ring.zero for j in range(module.rank))
                    for i in range(module.rank)
                ]
                hom = hom_from_images(module, quotient, tuple(quotient.canon(e) for e in basis))
                assert hom.is_bijective, module.label
                assert quotient.size == module.size

    def test_canonical_representatives_are_fixed_points(self):
        for ring in catalog_rings(max_order=12, max_n=12):
            for module in module_family(ring):
                for m in module.elements:
                    assert module.canon(m.vector) == m
                for vector in itertools.product(ring.elements, repeat=module.rank):
                    rep = module.canon(vector)
                    assert module.canon(rep.vector) == rep
