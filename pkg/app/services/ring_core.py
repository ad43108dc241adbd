"""Finite commutative rings presented as products of monic quotients of Z_n[x]."""

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping, NamedTuple, Sequence

from app.config import get_settings
from app.exceptions import (
    ModulusTooSmall,
    NonMonicPolynomial,
    NotAHomomorphism,
    OracleMismatch,
    RingMismatch,
)
from app.models.ring import ElementLiteral, RingSpec
from app.utils.helpers import ensure_budget

logger = logging.getLogger(__name__)


class CommutativeRing(ABC):
    """A finite commutative unital ring with a deterministic element order.

    Subclasses supply the element tuple and the three primitive operations;
    everything else (powers, integer multiples, indexing) is derived here.
    """

    @property
    @abstractmethod
    def elements(self) -> tuple: ...

    @property
    @abstractmethod
    def zero(self) -> Hashable: ...

    @property
    @abstractmethod
    def one(self) -> Hashable: ...

    @property
    @abstractmethod
    def label(self) -> str: ...

    @abstractmethod
    def add(self, x, y): ...

    @abstractmethod
    def neg(self, x): ...

    @abstractmethod
    def mul(self, x, y): ...

    @abstractmethod
    def to_literal(self, x) -> Any: ...

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def pow(self, x, k: int):
        """x**k by repeated squaring; pow(x, 0) is 1."""
        if k < 0:
            raise ValueError("negative exponent")
        key = (x, k)
        cached = self._pow_cache.get(key)
        if cached is not None:
            return cached
        result, base, e = self.one, x, k
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        self._pow_cache[key] = result
        return result

    def times(self, k: int, x):
        """The integer multiple k·x."""
        if k < 0:
            return self.neg(self.times(-k, x))
        result, base = self.zero, x
        while k:
            if k & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            k >>= 1
        return result

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def _pow_cache(self) -> dict:
        return {}

    @cached_property
    def _index(self) -> dict:
        return {x: i for i, x in enumerate(self.elements)}

    def index(self, x) -> int:
        """Position of x in the enumeration order."""
        try:
            return self._index[x]
        except KeyError:
            raise RingMismatch(f"{x!r} is not an element of {self.label}") from None

    def contains(self, x) -> bool:
        return x in self._index

    def check(self, *xs) -> None:
        """Raise RingMismatch unless every argument belongs to this ring."""
        for x in xs:
            if x not in self._index:
                raise RingMismatch(f"{x!r} is not an element of {self.label}")

    def sort(self, xs: Iterable) -> list:
        return sorted(xs, key=self.index)

    def is_zero(self, x) -> bool:
        return x == self.zero

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.label}>"


class RingElement(NamedTuple):
    """Canonical element: one fixed-length coefficient tuple per component."""
    coeffs: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RingComponent:
    """The factor Z_n[x]/(f) with f monic, stored constant term first."""
    modulus: int
    poly: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def size(self) -> int:
        return self.modulus ** self.degree

    @property
    def is_plain(self) -> bool:
        return self.poly == (0, 1)

    def reduce(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        """Reduce an arbitrary coefficient list modulo (n, f)."""
        n, f, d = self.modulus, self.poly, self.degree
        work = [c % n for c in coeffs]
        for i in range(len(work) - 1, d - 1, -1):
            c = work[i]
            if c:
                shift = i - d
                for j in range(d + 1):
                    work[shift + j] = (work[shift + j] - c * f[j]) % n
        work = work[:d]
        work.extend([0] * (d - len(work)))
        return tuple(work)

    def add(self, x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
        n = self.modulus
        return tuple((a + b) % n for a, b in zip(x, y))

    def neg(self, x: tuple[int, ...]) -> tuple[int, ...]:
        n = self.modulus
        return tuple((-a) % n for a in x)

    def mul(self, x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
        if self.degree == 1:
            return ((x[0] * y[0]) % self.modulus,)
        product = [0] * (2 * self.degree - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    product[i + j] += a * b
        return self.reduce(product)

    def enumerate(self) -> list[tuple[int, ...]]:
        """All elements, constant term varying fastest."""
        digits = [range(self.modulus)] * self.degree
        return [tuple(reversed(c)) for c in itertools.product(*digits)]

    def label(self) -> str:
        if self.is_plain:
            return f"Z{self.modulus}"
        return f"Z{self.modulus}[x]/({_poly_label(self.poly)})"


def _poly_label(poly: Sequence[int]) -> str:
    terms = []
    for power in range(len(poly) - 1, -1, -1):
        c = poly[power]
        if not c:
            continue
        if power == 0:
            terms.append(str(c))
        else:
            mono = "x" if power == 1 else f"x^{power}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) or "0"


@dataclass(frozen=True)
class FiniteRing(CommutativeRing):
    """Product of components Z_n[x]/(f); plain Z_n is Z_n[x]/(x)."""
    components: tuple[RingComponent, ...]

    @cached_property
    def elements(self) -> tuple[RingElement, ...]:
        per_component = [c.enumerate() for c in self.components]
        return tuple(RingElement(tuple(p)) for p in itertools.product(*per_component))

    @property
    def order(self) -> int:
        size = 1
        for c in self.components:
            size *= c.size
        return size

    @cached_property
    def zero(self) -> RingElement:
        return RingElement(tuple((0,) * c.degree for c in self.components))

    @cached_property
    def one(self) -> RingElement:
        return RingElement(tuple(c.reduce([1]) for c in self.components))

    @cached_property
    def label(self) -> str:
        return " x ".join(c.label() for c in self.components)

    @property
    def is_plain_cyclic(self) -> bool:
        return len(self.components) == 1 and self.components[0].is_plain

    def add(self, x: RingElement, y: RingElement) -> RingElement:
        return RingElement(tuple(
            c.add(a, b) for c, a, b in zip(self.components, x.coeffs, y.coeffs)
        ))

    def neg(self, x: RingElement) -> RingElement:
        return RingElement(tuple(c.neg(a) for c, a in zip(self.components, x.coeffs)))

    def mul(self, x: RingElement, y: RingElement) -> RingElement:
        return RingElement(tuple(
            c.mul(a, b) for c, a, b in zip(self.components, x.coeffs, y.coeffs)
        ))

    def idempotent(self, i: int) -> RingElement:
        """The element that is 1 in component i and 0 elsewhere."""
        return RingElement(tuple(
            c.reduce([1]) if j == i else (0,) * c.degree
            for j, c in enumerate(self.components)
        ))

    def generator(self, i: int) -> RingElement:
        """The element that is x in component i and 0 elsewhere."""
        return RingElement(tuple(
            c.reduce([0, 1]) if j == i else (0,) * c.degree
            for j, c in enumerate(self.components)
        ))

    def element(self, literal: ElementLiteral) -> RingElement:
        """Parse an element literal into canonical form."""
        if isinstance(literal, RingElement):
            self.check(literal)
            return literal
        if isinstance(literal, int):
            if len(self.components) != 1:
                raise RingMismatch(
                    f"bare integer {literal} needs a single-component ring, got {self.label}"
                )
            return RingElement((self.components[0].reduce([literal]),))
        if not isinstance(literal, (list, tuple)) or len(literal) != len(self.components):
            raise RingMismatch(f"literal {literal!r} does not match {self.label}")
        coeffs = []
        for c, part in zip(self.components, literal):
            if isinstance(part, int):
                part = [part]
            coeffs.append(c.reduce(list(part)))
        return RingElement(tuple(coeffs))

    def to_literal(self, x: RingElement) -> Any:
        if self.is_plain_cyclic:
            return x.coeffs[0][0]
        return [list(part) for part in x.coeffs]

    def to_spec(self) -> RingSpec:
        return RingSpec.model_validate({
            "components": [
                {"modulus": c.modulus, "monic_poly": list(c.poly)}
                for c in self.components
            ]
        })


@dataclass(frozen=True)
class RingClassification:
    """Unit, nilpotent and zero-divisor structure of a ring."""
    elements: tuple
    units: frozenset
    nilpotents: frozenset
    is_domain: bool
    is_field: bool
    zero_divisor_pair: tuple | None = None

    @property
    def is_reduced(self) -> bool:
        return len(self.nilpotents) == 1

    @property
    def is_special_primary(self) -> bool:
        """Every element is a unit or nilpotent."""
        return len(self.units) + len(self.nilpotents) == len(self.elements)


@dataclass(frozen=True)
class RingHom:
    """A verified ring homomorphism given by its full table."""
    source: CommutativeRing
    target: CommutativeRing
    table: Mapping = field(compare=False)
    surjective: bool = False

    def __call__(self, x):
        return self.table[x]

    @classmethod
    def from_table(
        cls,
        source: CommutativeRing,
        target: CommutativeRing,
        table: Mapping,
    ) -> "RingHom":
        """Verify 0, 1, + and × exhaustively; raise NotAHomomorphism on the first violation."""
        for x in source.elements:
            if x not in table:
                raise NotAHomomorphism("map is not total", {"missing": source.to_literal(x)})
            target.check(table[x])
        if table[source.zero] != target.zero:
            raise NotAHomomorphism("0 is not preserved", {"identity": "f(0)=0"})
        if table[source.one] != target.one:
            raise NotAHomomorphism(
                "1 is not preserved",
                {"identity": "f(1)=1", "image": target.to_literal(table[source.one])},
            )
        for x in source.elements:
            fx = table[x]
            for y in source.elements:
                fy = table[y]
                if table[source.add(x, y)] != target.add(fx, fy):
                    raise NotAHomomorphism(
                        "addition is not preserved",
                        _hom_witness("f(x+y)=f(x)+f(y)", source, x, y),
                    )
                if table[source.mul(x, y)] != target.mul(fx, fy):
                    raise NotAHomomorphism(
                        "multiplication is not preserved",
                        _hom_witness("f(xy)=f(x)f(y)", source, x, y),
                    )
        surjective = len(set(table.values())) == target.order
        return cls(source=source, target=target, table=dict(table), surjective=surjective)

    @classmethod
    def identity(cls, ring: CommutativeRing) -> "RingHom":
        return cls.from_table(ring, ring, {x: x for x in ring.elements})


def _hom_witness(identity: str, ring: CommutativeRing, x, y) -> dict[str, Any]:
    return {"identity": identity, "x": ring.to_literal(x), "y": ring.to_literal(y)}


def ring_make(spec: RingSpec | Mapping[str, Any], max_elems: int | None = None) -> FiniteRing:
    """Build a FiniteRing from a spec, validating moduli, monicity and the budget."""
    if not isinstance(spec, RingSpec):
        spec = RingSpec.model_validate(spec)
    components = []
    for comp in spec.components:
        if comp.modulus < 2:
            raise ModulusTooSmall(f"modulus {comp.modulus} is below 2")
        poly = [c % comp.modulus for c in comp.monic_poly]
        if len(poly) < 2:
            raise NonMonicPolynomial(f"polynomial {comp.monic_poly} has degree 0")
        if poly[-1] != 1:
            raise NonMonicPolynomial(
                f"polynomial {comp.monic_poly} is not monic modulo {comp.modulus}"
            )
        components.append(RingComponent(modulus=comp.modulus, poly=tuple(poly)))
    ring = FiniteRing(components=tuple(components))
    budget = max_elems if max_elems is not None else get_settings().max_elems
    ensure_budget(f"ring {ring.label}", ring.order, budget)
    return ring


def cyclic_ring(n: int, max_elems: int | None = None) -> FiniteRing:
    """Z_n."""
    return ring_make(RingSpec.cyclic(n), max_elems=max_elems)


def arithmetic(ring: CommutativeRing, op: str, x, y=None, k: int | None = None):
    """Dispatch add | mul | neg | sub | pow on canonical elements."""
    ring.check(x)
    if op in ("add", "mul", "sub"):
        ring.check(y)
        return getattr(ring, op)(x, y)
    if op == "neg":
        return ring.neg(x)
    if op == "pow":
        if k is None or k < 0:
            raise ValueError("pow needs k >= 0")
        return ring.pow(x, k)
    raise ValueError(f"unknown operation {op!r}")


def classify(ring: CommutativeRing) -> RingClassification:
    """Units, nilpotents, and the domain/field flags by exhaustive scan."""
    cached = ring.__dict__.get("_classification")
    if cached is not None:
        return cached
    elements = ring.elements
    zero, one = ring.zero, ring.one
    units = frozenset(
        u for u in elements if any(ring.mul(u, v) == one for v in elements)
    )
    nilpotents = frozenset(a for a in elements if ring.pow(a, ring.order) == zero)
    zero_divisor_pair = None
    for x in elements:
        if x == zero:
            continue
        for y in elements:
            if y != zero and ring.mul(x, y) == zero:
                zero_divisor_pair = (x, y)
                break
        if zero_divisor_pair:
            break
    nontrivial = zero != one
    is_domain = nontrivial and zero_divisor_pair is None
    is_field = nontrivial and len(units) == len(elements) - 1
    if is_domain != is_field:
        raise OracleMismatch(f"{ring.label}: finite domain/field flags disagree")
    result = RingClassification(
        elements=elements,
        units=units,
        nilpotents=nilpotents,
        is_domain=is_domain,
        is_field=is_field,
        zero_divisor_pair=zero_divisor_pair,
    )
    ring.__dict__["_classification"] = result
    return result


def ring_hom_make(
    source: FiniteRing,
    target: CommutativeRing,
    images: Sequence[tuple[Any, Any]],
) -> RingHom:
    """Extend generator images to a full table and verify it.

    ``images`` holds one pair per source component: the image of the
    component idempotent and the image of the component generator x.
    """
    if len(images) != len(source.components):
        raise NotAHomomorphism(
            f"expected {len(source.components)} generator images, got {len(images)}"
        )
    pairs = []
    for component, (idem, gen) in zip(source.components, images):
        e = target.element(idem) if hasattr(target, "element") else idem
        g = target.element(gen) if hasattr(target, "element") else gen
        target.check(e, g)
        if component.degree == 1:
            # x = -f(0) in a degree-1 component, so its image is forced by e
            expected = target.times((-component.poly[0]) % component.modulus, e)
            if g != expected:
                raise NotAHomomorphism(
                    "generator image of a degree-1 component must be -f(0)·e",
                    {"identity": "f(x)=-f(0)e", "image": target.to_literal(g),
                     "expected": target.to_literal(expected)},
                )
        pairs.append((e, g))

    image_of_one = target.zero
    for e, _ in pairs:
        image_of_one = target.add(image_of_one, e)
    if image_of_one != target.one:
        raise NotAHomomorphism(
            "1 is not preserved",
            {"identity": "f(1)=1", "image": target.to_literal(image_of_one)},
        )

    table = {}
    for x in source.elements:
        value = target.zero
        for (e, g), coeffs in zip(pairs, x.coeffs):
            for power, c in enumerate(coeffs):
                if c:
                    basis = e if power == 0 else target.mul(e, target.pow(g, power))
                    value = target.add(value, target.times(c, basis))
        table[x] = value
    hom = RingHom.from_table(source, target, table)
    logger.debug(f"Verified homomorphism {source.label} -> {target.label}")
    return hom


def check_ring_axioms(ring: CommutativeRing) -> dict[str, Any] | None:
    """Exhaustive triple-loop axiom check; returns the first violation or None."""
    els = ring.elements
    zero, one = ring.zero, ring.one
    if ring.order >= 2 and zero == one:
        return {"axiom": "0 != 1"}
    for x in els:
        if ring.add(x, zero) != x or ring.mul(x, one) != x:
            return {"axiom": "identity", "x": ring.to_literal(x)}
        if ring.add(x, ring.neg(x)) != zero:
            return {"axiom": "inverse", "x": ring.to_literal(x)}
        for y in els:
            if ring.add(x, y) != ring.add(y, x) or ring.mul(x, y) != ring.mul(y, x):
                return {"axiom": "commutativity", "x": ring.to_literal(x), "y": ring.to_literal(y)}
            for z in els:
                if ring.add(ring.add(x, y), z) != ring.add(x, ring.add(y, z)):
                    return {"axiom": "additive associativity", "x": ring.to_literal(x)}
                if ring.mul(ring.mul(x, y), z) != ring.mul(x, ring.mul(y, z)):
                    return {"axiom": "multiplicative associativity", "x": ring.to_literal(x)}
                if ring.mul(x, ring.add(y, z)) != ring.add(ring.mul(x, y), ring.mul(x, z)):
                    return {"axiom": "distributivity", "x": ring.to_literal(x)}
    return None
