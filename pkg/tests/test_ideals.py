"""Tests for ideals, radicals and quotient rings."""

from app.services.ideals import (
    annihilator_ideal,
    annihilators_semiprime,
    enumerate_ideals,
    ideal_generate,
    ideal_power,
    ideal_sum,
    nilradical,
    prime_ideals,
    principal_power,
    projection,
    quotient_ring,
    semiprimality,
)
from app.services.catalog import catalog_rings
from app.services.regularity import is_t_regular
from app.services.ring_core import FiniteRing, check_ring_axioms


def literals(ring: FiniteRing, ideal) -> list:
    return [ring.to_literal(x) for x in ideal.sorted_elements]


class TestIdealGeneration:
    """Tests for generating and combining ideals."""

    def test_principal_ideal(self, z12: FiniteRing):
        """(8) in Z12 is (4)."""
        ideal = ideal_generate(z12, [z12.element(8)])
        assert literals(z12, ideal) == [0, 4, 8]
        assert ideal == ideal_generate(z12, [z12.element(4)])

    def test_two_generators(self, z12: FiniteRing):
        """(4, 6) = (2)."""
        ideal = ideal_generate(z12, [z12.element(4), z12.element(6)])
        assert literals(z12, ideal) == [0, 2, 4, 6, 8, 10]

    def test_sum(self, z12: FiniteRing):
        first = ideal_generate(z12, [z12.element(4)])
        second = ideal_generate(z12, [z12.element(3)])
        assert ideal_sum(first, second).size == 12

    def test_powers(self, z8: FiniteRing):
        """(2)² = (4) and (2)³ = 0."""
        two = ideal_generate(z8, [z8.element(2)])
        assert literals(z8, ideal_power(two, 2)) == [0, 4]
        assert literals(z8, ideal_power(two, 3)) == [0]
        assert principal_power(z8, z8.element(2), 2) == ideal_power(two, 2)

    def test_annihilator(self, z12: FiniteRing):
        """(0:4) in Z12 is (3)."""
        assert literals(z12, annihilator_ideal(z12, z12.element(4))) == [0, 3, 6, 9]


class TestLattice:
    """Tests for the ideal lattice and radicals."""

    def test_ideal_counts(self, z12: FiniteRing, z8: FiniteRing, f4: FiniteRing):
        """Ideals of Z_n correspond to divisors of n."""
        assert len(enumerate_ideals(z12)) == 6
        assert len(enumerate_ideals(z8)) == 4
        assert len(enumerate_ideals(f4)) == 2

    def test_lattice_sorted_by_size(self, z12: FiniteRing):
        sizes = [i.size for i in enumerate_ideals(z12)]
        assert sizes == sorted(sizes)
        assert sizes[0] == 1 and sizes[-1] == 12

    def test_nilradical(self, z12: FiniteRing, z8: FiniteRing):
        assert literals(z12, nilradical(z12)) == [0, 6]
        assert literals(z8, nilradical(z8)) == [0, 2, 4, 6]

    def test_semiprime_witness(self, z8: FiniteRing):
        """(4) in Z8 is not semiprime: 2² ∈ (4) but 2 ∉ (4)."""
        result = semiprimality(ideal_generate(z8, [z8.element(4)]))
        assert not result.semiprime
        assert result.witness == (z8.element(2),)

    def test_prime(self, z8: FiniteRing):
        result = semiprimality(ideal_generate(z8, [z8.element(2)]))
        assert result.semiprime and result.prime

    def test_improper_ideal(self, z8: FiniteRing):
        """R itself is semiprime but not prime."""
        result = semiprimality(ideal_generate(z8, [z8.one]))
        assert result.semiprime and not result.prime

    def test_prime_ideals(self, z12: FiniteRing):
        """Z12 has exactly the primes (2) and (3)."""
        primes = prime_ideals(z12)
        assert sorted(p.size for p in primes) == [4, 6]

    def test_annihilators_semiprime(self, z6: FiniteRing, z4: FiniteRing):
        """Every (0:b) is semiprime in Z6; (0:1) = 0 is not in Z4."""
        assert annihilators_semiprime(z6) == (True, None)
        ok, b = annihilators_semiprime(z4)
        assert not ok
        assert b == z4.one


class TestQuotientRing:
    """Tests for R/I."""

    def test_z8_mod_4(self, z8: FiniteRing):
        """Z8/(4) has four classes represented by 0..3 and is a ring."""
        quotient = quotient_ring(z8, ideal_generate(z8, [z8.element(4)]))
        assert [quotient.to_literal(x) for x in quotient.elements] == [0, 1, 2, 3]
        assert quotient.mul(quotient.element(2), quotient.element(2)) == quotient.zero
        assert check_ring_axioms(quotient) is None

    def test_projection_surjective(self, z12: FiniteRing):
        quotient = quotient_ring(z12, ideal_generate(z12, [z12.element(3)]))
        hom = projection(quotient)
        assert hom.surjective
        assert hom(z12.element(7)) == quotient.element(1)

    def test_quotient_regularity(self, z8: FiniteRing):
        """Z8/(4) ≅ Z4 is 2-regular but not 1-regular."""
        quotient = quotient_ring(z8, ideal_generate(z8, [z8.element(4)]))
        assert is_t_regular(quotient, 2).regular
        assert not is_t_regular(quotient, 1).regular


class TestInvariants:
    """Lattice invariants checked on every catalog ring up to order 16."""

    def test_nilradical_is_intersection_of_primes(self):
        for ring in catalog_rings(max_order=16, max_n=16):
            meet = frozenset(ring.elements)
            for prime in prime_ideals(ring):
                meet &= prime.elements
            assert nilradical(ring).elements == meet, ring.label

    def test_ideals_regenerate_from_their_elements(self):
        """ideal_generate(R, I) == I for every enumerated I."""
        for ring in catalog_rings(max_order=16, max_n=16):
            for ideal in enumerate_ideals(ring):
                assert ideal_generate(ring, ideal.elements) == ideal, ring.label
