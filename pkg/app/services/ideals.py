"""Ideals of finite commutative rings: generation, powers, radicals and the ideal lattice."""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable

from app.config import get_settings
from app.exceptions import OracleMismatch, RingMismatch
from app.services.ring_core import CommutativeRing, RingHom, classify
from app.utils.helpers import ensure_budget

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ideal:
    """An explicitly enumerated ideal, tagged with the generators that produced it.

    Equality is set equality of elements; generators are not canonical.
    """
    ring: CommutativeRing
    elements: frozenset
    generators: tuple = field(default=(), compare=False)

    @cached_property
    def sorted_elements(self) -> list:
        return self.ring.sort(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def is_proper(self) -> bool:
        return self.ring.one not in self.elements

    def __contains__(self, x) -> bool:
        return x in self.elements

    def to_report(self) -> dict[str, Any]:
        lit = self.ring.to_literal
        return {
            "elements": [lit(x) for x in self.sorted_elements],
            "generators": [lit(g) for g in self.generators],
        }


def additive_span(ring: CommutativeRing, seeds: Iterable) -> frozenset:
    """Smallest additive subgroup containing the seeds (finite, so sums suffice)."""
    seeds = list(dict.fromkeys(seeds))
    span = {ring.zero}
    frontier = [ring.zero]
    while frontier:
        nxt = []
        for s in frontier:
            for p in seeds:
                q = ring.add(s, p)
                if q not in span:
                    span.add(q)
                    nxt.append(q)
        frontier = nxt
    return frozenset(span)


def ideal_generate(ring: CommutativeRing, gens: Iterable) -> Ideal:
    """The ideal generated by gens: the additive span of all r·g."""
    gens = tuple(gens)
    for g in gens:
        if not ring.contains(g):
            raise RingMismatch(f"generator {g!r} is not in {ring.label}")
    multiples = {ring.mul(r, g) for g in gens for r in ring.elements}
    return Ideal(ring=ring, elements=additive_span(ring, multiples), generators=gens)


def ideal_sum(first: Ideal, second: Ideal) -> Ideal:
    ring = first.ring
    elements = frozenset(ring.add(x, y) for x in first.elements for y in second.elements)
    gens = tuple(dict.fromkeys(first.generators + second.generators))
    return Ideal(ring=ring, elements=elements, generators=gens)


def annihilator_ideal(ring: CommutativeRing, b) -> Ideal:
    """(0:b) = {r : rb = 0}."""
    ring.check(b)
    members = frozenset(r for r in ring.elements if ring.mul(r, b) == ring.zero)
    return Ideal(ring=ring, elements=members, generators=tuple(ring.sort(members)))


def ideal_power(ideal: Ideal, t: int) -> Ideal:
    """I^t, generated by the t-fold products of generators of I."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if t == 1:
        return ideal
    ring = ideal.ring
    gens = ideal.generators or tuple(ideal.sorted_elements)
    products = []
    for combo in itertools.combinations_with_replacement(gens, t):
        p = ring.one
        for g in combo:
            p = ring.mul(p, g)
        products.append(p)
    return ideal_generate(ring, dict.fromkeys(products))


def principal_power(ring: CommutativeRing, a, k: int) -> Ideal:
    """(a)^k = (a^k)."""
    return ideal_generate(ring, [ring.pow(a, k)])


@dataclass(frozen=True)
class Semiprimality:
    """Result of the semiprime / prime tests on one ideal."""
    semiprime: bool
    prime: bool
    witness: tuple | None = None


def semiprimality(ideal: Ideal) -> Semiprimality:
    """Decide semiprime (a² ∈ I ⇒ a ∈ I) and prime, with a violating witness.

    The improper ideal is reported semiprime and not prime.
    """
    ring = ideal.ring
    members = ideal.elements
    if not ideal.is_proper:
        return Semiprimality(semiprime=True, prime=False)

    square_witness = None
    for a in ring.elements:
        if a not in members and ring.mul(a, a) in members:
            square_witness = a
            break
    power_witness = None
    for a in ring.elements:
        if a in members:
            continue
        if any(ring.pow(a, k) in members for k in range(2, ring.order + 1)):
            power_witness = a
            break
    if (square_witness is None) != (power_witness is None):
        raise OracleMismatch(f"{ring.label}: square and power semiprime tests disagree")
    semiprime = square_witness is None

    prime_witness = None
    for a, b in itertools.combinations_with_replacement(ring.elements, 2):
        if a not in members and b not in members and ring.mul(a, b) in members:
            prime_witness = (a, b)
            break
    prime = prime_witness is None
    witness = (square_witness,) if not semiprime else (prime_witness if not prime else None)
    return Semiprimality(semiprime=semiprime, prime=prime, witness=witness)


def nilradical(ring: CommutativeRing) -> Ideal:
    """N(R): all nilpotent elements."""
    nilpotents = classify(ring).nilpotents
    return Ideal(ring=ring, elements=nilpotents, generators=tuple(ring.sort(nilpotents)))


def _ideal_key(ideal: Ideal) -> tuple:
    ring = ideal.ring
    return (ideal.size, tuple(sorted(ring.index(x) for x in ideal.elements)))


def enumerate_ideals(ring: CommutativeRing, max_elems: int | None = None) -> list[Ideal]:
    """Every ideal of R: principal ideals closed under pairwise sums to a fixpoint."""
    cached = ring.__dict__.get("_ideal_lattice")
    if cached is not None:
        return cached
    budget = max_elems if max_elems is not None else get_settings().max_elems
    ensure_budget(f"ideal lattice of {ring.label}", ring.order, budget)

    found: dict[frozenset, Ideal] = {}
    for a in ring.elements:
        ideal = ideal_generate(ring, [a])
        found.setdefault(ideal.elements, ideal)

    pending = list(found.values())
    while pending:
        fresh = []
        current = list(found.values())
        for first in pending:
            for second in current:
                total = ideal_sum(first, second)
                if total.elements not in found:
                    found[total.elements] = total
                    fresh.append(total)
        pending = fresh

    lattice = sorted(found.values(), key=_ideal_key)
    logger.debug(f"{ring.label}: {len(lattice)} ideals")
    ring.__dict__["_ideal_lattice"] = lattice
    return lattice


def prime_ideals(ring: CommutativeRing) -> list[Ideal]:
    return [i for i in enumerate_ideals(ring) if semiprimality(i).prime]


def annihilators_semiprime(ring: CommutativeRing) -> tuple[bool, Any]:
    """Whether (0:b) is semiprime for every 0 ≠ b; returns the first failing b."""
    for b in ring.elements:
        if b == ring.zero:
            continue
        if not semiprimality(annihilator_ideal(ring, b)).semiprime:
            return False, b
    return True, None


class QuotientRing(CommutativeRing):
    """R/I with the least element (in R's order) of each coset as representative."""

    def __init__(self, base: CommutativeRing, ideal: Ideal):
        if ideal.ring is not base and ideal.ring != base:
            raise RingMismatch("ideal belongs to a different ring")
        self.base = base
        self.ideal = ideal
        canon: dict = {}
        reps = []
        for x in base.elements:
            if x in canon:
                continue
            reps.append(x)
            for i in ideal.elements:
                canon[base.add(x, i)] = x
        self._canon = canon
        self._reps = tuple(reps)

    @property
    def elements(self) -> tuple:
        return self._reps

    @property
    def zero(self):
        return self._canon[self.base.zero]

    @property
    def one(self):
        return self._canon[self.base.one]

    @cached_property
    def label(self) -> str:
        gens = ",".join(str(self.base.to_literal(g)) for g in self.ideal.generators)
        return f"{self.base.label}/({gens})"

    def canon(self, x):
        return self._canon[x]

    def add(self, x, y):
        return self._canon[self.base.add(x, y)]

    def neg(self, x):
        return self._canon[self.base.neg(x)]

    def mul(self, x, y):
        return self._canon[self.base.mul(x, y)]

    def element(self, literal):
        return self._canon[self.base.element(literal)]

    def to_literal(self, x):
        return self.base.to_literal(x)


def quotient_ring(ring: CommutativeRing, ideal: Ideal) -> QuotientRing:
    return QuotientRing(ring, ideal)


def projection(quotient: QuotientRing) -> RingHom:
    """The canonical surjection R → R/I."""
    base = quotient.base
    return RingHom.from_table(base, quotient, {x: quotient.canon(x) for x in base.elements})
