"""Tests for finite ring construction, arithmetic and homomorphisms."""

import pytest

from app.exceptions import ModulusTooSmall, NonMonicPolynomial, NotAHomomorphism, OrderBudgetExceeded, RingMismatch
from app.services.ring_core import (
    FiniteRing,
    RingHom,
    arithmetic,
    check_ring_axioms,
    classify,
    cyclic_ring,
    ring_hom_make,
    ring_make,
)


class TestRingMake:
    """Tests for ring_make and element literals."""

    def test_cyclic_ring_elements_in_order(self, z6: FiniteRing):
        """Z6 enumerates its residues 0..5."""
        assert z6.order == 6
        assert [z6.to_literal(x) for x in z6.elements] == [0, 1, 2, 3, 4, 5]
        assert z6.label == "Z6"

    def test_polynomial_quotient(self, f4: FiniteRing):
        """Z2[x]/(x²+x+1) has four elements, constant term first."""
        assert f4.order == 4
        assert [f4.to_literal(x) for x in f4.elements] == [[[0, 0]], [[1, 0]], [[0, 1]], [[1, 1]]]
        x = f4.element([[0, 1]])
        assert f4.mul(x, x) == f4.element([[1, 1]])

    def test_product_ring(self):
        """Z2 × Z3 is a six-element ring with componentwise arithmetic."""
        ring = ring_make({"components": [{"modulus": 2}, {"modulus": 3}]})
        assert ring.order == 6
        assert ring.label == "Z2 x Z3"
        x = ring.element([1, 2])
        assert ring.mul(x, x) == ring.element([1, 1])

    def test_bare_integer_needs_single_component(self):
        """A bare integer literal is rejected for product rings."""
        ring = ring_make({"components": [{"modulus": 2}, {"modulus": 3}]})
        with pytest.raises(RingMismatch):
            ring.element(1)

    def test_modulus_too_small(self):
        """Modulus 1 is rejected."""
        with pytest.raises(ModulusTooSmall):
            ring_make({"components": [{"modulus": 1}]})

    def test_non_monic_polynomial(self):
        """The leading coefficient must be 1 modulo n."""
        with pytest.raises(NonMonicPolynomial):
            ring_make({"components": [{"modulus": 4, "monic_poly": [1, 2]}]})
        with pytest.raises(NonMonicPolynomial):
            ring_make({"components": [{"modulus": 3, "monic_poly": [1, 0, 3]}]})

    def test_constant_polynomial_rejected(self):
        """Degree-0 polynomials are rejected."""
        with pytest.raises(NonMonicPolynomial):
            ring_make({"components": [{"modulus": 3, "monic_poly": [1]}]})

    def test_budget(self):
        """Rings above the element budget are refused."""
        with pytest.raises(OrderBudgetExceeded):
            cyclic_ring(100, max_elems=50)

    def test_spec_round_trip(self, f4: FiniteRing):
        """to_spec rebuilds an equal ring."""
        assert ring_make(f4.to_spec()) == f4


class TestArithmetic:
    """Tests for arithmetic dispatch and classification."""

    def test_dispatch(self, z6: FiniteRing):
        """add, mul, neg, sub and pow dispatch on canonical elements."""
        two, three = z6.element(2), z6.element(3)
        assert arithmetic(z6, "mul", two, three) == z6.zero
        assert arithmetic(z6, "add", two, three) == z6.element(5)
        assert arithmetic(z6, "neg", two) == z6.element(4)
        assert arithmetic(z6, "sub", two, three) == z6.element(5)
        assert arithmetic(z6, "pow", two, k=3) == z6.element(2)

    def test_pow_zero_is_one(self, z8: FiniteRing):
        assert z8.pow(z8.element(6), 0) == z8.one

    def test_unknown_operation(self, z6: FiniteRing):
        with pytest.raises(ValueError, match="unknown operation"):
            arithmetic(z6, "div", z6.one, z6.one)

    def test_foreign_element_rejected(self, z6: FiniteRing, z8: FiniteRing):
        """Elements of another ring raise RingMismatch."""
        with pytest.raises(RingMismatch):
            arithmetic(z6, "add", z6.one, z8.element(7))

    def test_classify_z8(self, z8: FiniteRing):
        """Z8 is special primary: odd residues are units, even ones nilpotent."""
        info = classify(z8)
        assert {z8.to_literal(u) for u in info.units} == {1, 3, 5, 7}
        assert {z8.to_literal(n) for n in info.nilpotents} == {0, 2, 4, 6}
        assert info.is_special_primary
        assert not info.is_reduced
        assert not info.is_domain

    def test_classify_field(self, f4: FiniteRing):
        info = classify(f4)
        assert info.is_field and info.is_domain and info.is_reduced

    def test_zero_divisor_pair(self, z12: FiniteRing):
        """The first zero-divisor pair in enumeration order is 2·6."""
        x, y = classify(z12).zero_divisor_pair
        assert (z12.to_literal(x), z12.to_literal(y)) == (2, 6)

    def test_axioms_hold(self, f4: FiniteRing, z6: FiniteRing):
        assert check_ring_axioms(f4) is None
        assert check_ring_axioms(z6) is None


class TestRingHom:
    """Tests for ring homomorphisms."""

    def test_crt_isomorphism(self, z6: FiniteRing):
        """Z6 → Z2 × Z3 sending 1 to (1, 1) is a surjective homomorphism."""
        target = ring_make({"components": [{"modulus": 2}, {"modulus": 3}]})
        hom = ring_hom_make(z6, target, [([1, 1], [0, 0])])
        assert hom.surjective
        assert hom(z6.element(5)) == target.element([1, 2])

    def test_one_not_preserved(self, z4: FiniteRing):
        """Sending 1 to 0 is rejected."""
        with pytest.raises(NotAHomomorphism, match="1 is not preserved"):
            ring_hom_make(z4, cyclic_ring(2), [(0, 0)])

    def test_addition_not_preserved(self):
        """Z2 → Z4 with 1 ↦ 1 breaks 1 + 1 = 0."""
        with pytest.raises(NotAHomomorphism, match="addition") as exc:
            ring_hom_make(cyclic_ring(2), cyclic_ring(4), [(1, 0)])
        assert exc.value.witness["identity"] == "f(x+y)=f(x)+f(y)"

    def test_degree_one_generator_image_checked(self, z6: FiniteRing):
        """In Z6 the generator is 0, so a nonzero image cannot be a homomorphism."""
        target = ring_make({"components": [{"modulus": 2}, {"modulus": 3}]})
        with pytest.raises(NotAHomomorphism, match="degree-1") as exc:
            ring_hom_make(z6, target, [([1, 1], [1, 0])])
        assert exc.value.witness["expected"] == target.to_literal(target.zero)

    def test_degree_one_nonzero_generator(self):
        """Z3[x]/(x+1) sends x to -1 = 2."""
        source = ring_make({"components": [{"modulus": 3, "monic_poly": [1, 1]}]})
        target = cyclic_ring(3)
        hom = ring_hom_make(source, target, [(1, 2)])
        assert hom.surjective
        with pytest.raises(NotAHomomorphism, match="degree-1"):
            ring_hom_make(source, target, [(1, 0)])

    def test_identity(self, z8: FiniteRing):
        hom = RingHom.identity(z8)
        assert hom.surjective
        assert all(hom(x) == x for x in z8.elements)
