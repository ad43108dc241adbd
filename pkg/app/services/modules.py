"""Finitely presented modules R^g/K over finite rings, their submodules and homomorphisms."""

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Iterator, NamedTuple, Sequence

from app.config import get_settings
from app.exceptions import NotASubmodule, OracleMismatch, OrderBudgetExceeded, RingMismatch
from app.models.module import ModuleSpec
from app.services.ideals import Ideal, additive_span, principal_power
from app.services.ring_core import CommutativeRing
from app.utils.helpers import ensure_budget

logger = logging.getLogger(__name__)


class Module(ABC):
    """A finite module over a CommutativeRing with a deterministic element order."""

    @property
    @abstractmethod
    def ring(self) -> CommutativeRing: ...

    @property
    @abstractmethod
    def elements(self) -> tuple: ...

    @property
    @abstractmethod
    def zero(self): ...

    @property
    @abstractmethod
    def label(self) -> str: ...

    @abstractmethod
    def add(self, m, n): ...

    @abstractmethod
    def neg(self, m): ...

    @abstractmethod
    def smul(self, r, m): ...

    @abstractmethod
    def to_literal(self, m) -> Any: ...

    def sub(self, m, n):
        return self.add(m, self.neg(n))

    @property
    def size(self) -> int:
        return len(self.elements)

    @cached_property
    def _index(self) -> dict:
        return {m: i for i, m in enumerate(self.elements)}

    @cached_property
    def _cache(self) -> dict:
        """Per-module memo for torsion data; transparent to callers."""
        return {}

    def index(self, m) -> int:
        return self._index[m]

    def contains(self, m) -> bool:
        return m in self._index

    def sort(self, ms: Iterable) -> list:
        return sorted(ms, key=self.index)

    def literals(self, ms: Iterable) -> list:
        return [self.to_literal(m) for m in self.sort(ms)]

    def to_spec(self) -> ModuleSpec | None:
        """A literal presentation, when one exists."""
        return None

    def spec_literal(self) -> dict[str, Any] | None:
        spec = self.to_spec()
        return spec.model_dump(mode="json") if spec is not None else None

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.label}>"


class ModuleElement(NamedTuple):
    """Canonical coset representative: the lexicographically least vector of its coset."""
    vector: tuple


class PresentedModule(Module):
    """R^g modulo the submodule K generated by the relation vectors."""

    def __init__(
        self,
        ring: CommutativeRing,
        rank: int,
        relations: Sequence[Sequence] = (),
        name: str | None = None,
        max_elems: int | None = None,
    ):
        if rank < 0:
            raise ValueError("rank must be >= 0")
        budget = max_elems if max_elems is not None else get_settings().max_elems
        ensure_budget(f"R^{rank} over {ring.label}", ring.order ** rank, budget)
        rels = []
        for rel in relations:
            rel = tuple(rel)
            if len(rel) != rank:
                raise RingMismatch(f"relation {rel!r} has length {len(rel)}, rank is {rank}")
            ring.check(*rel)
            rels.append(rel)
        self._ring = ring
        self.rank = rank
        self.relations = tuple(rels)
        self._name = name

        zero_vec = (ring.zero,) * rank
        multiples = {
            tuple(ring.mul(r, x) for x in rel) for rel in self.relations for r in ring.elements
        }
        kernel = {zero_vec}
        frontier = [zero_vec]
        while frontier:
            nxt = []
            for s in frontier:
                for p in multiples:
                    q = tuple(ring.add(a, b) for a, b in zip(s, p))
                    if q not in kernel:
                        kernel.add(q)
                        nxt.append(q)
            frontier = nxt
        self.kernel_size = len(kernel)

        canon: dict[tuple, ModuleElement] = {}
        reps = []
        for vec in itertools.product(ring.elements, repeat=rank):
            if vec in canon:
                continue
            rep = ModuleElement(vec)
            reps.append(rep)
            for k in kernel:
                canon[tuple(ring.add(a, b) for a, b in zip(vec, k))] = rep
        self._canon = canon
        self._elements = tuple(reps)
        if len(reps) * self.kernel_size != ring.order ** rank:
            raise OracleMismatch(f"{self.label}: |M|·|K| != |R|^g")

    @property
    def ring(self) -> CommutativeRing:
        return self._ring

    @property
    def elements(self) -> tuple:
        return self._elements

    @cached_property
    def zero(self) -> ModuleElement:
        return self._canon[(self._ring.zero,) * self.rank]

    @cached_property
    def label(self) -> str:
        if self._name:
            return self._name
        lit = self._ring.to_literal
        base = self._ring.label if self.rank == 1 else f"{self._ring.label}^{self.rank}"
        if not self.relations:
            return base
        if self.rank == 1:
            return f"{base}/({','.join(str(lit(r[0])) for r in self.relations)})"
        rels = ",".join("(" + ",".join(str(lit(x)) for x in r) + ")" for r in self.relations)
        return f"{base}/<{rels}>"

    @property
    def is_free(self) -> bool:
        return self.kernel_size == 1

    def canon(self, vector: Sequence) -> ModuleElement:
        return self._canon[tuple(vector)]

    def add(self, m: ModuleElement, n: ModuleElement) -> ModuleElement:
        add = self._ring.add
        return self._canon[tuple(add(a, b) for a, b in zip(m.vector, n.vector))]

    def neg(self, m: ModuleElement) -> ModuleElement:
        neg = self._ring.neg
        return self._canon[tuple(neg(a) for a in m.vector)]

    def smul(self, r, m: ModuleElement) -> ModuleElement:
        mul = self._ring.mul
        return self._canon[tuple(mul(r, a) for a in m.vector)]

    def element(self, literal: Any) -> ModuleElement:
        """Parse a module element literal (a ring literal when rank is 1)."""
        parse = getattr(self._ring, "element", None)
        if parse is None:
            raise RingMismatch(f"cannot parse literals over {self._ring.label}")
        if self.rank == 1:
            return self.canon((parse(literal),))
        if not isinstance(literal, list) or len(literal) != self.rank:
            raise RingMismatch(f"literal {literal!r} does not match rank {self.rank}")
        return self.canon(tuple(parse(x) for x in literal))

    def to_literal(self, m: ModuleElement) -> Any:
        lit = self._ring.to_literal
        if self.rank == 1:
            return lit(m.vector[0])
        return [lit(x) for x in m.vector]

    def to_spec(self) -> ModuleSpec | None:
        ring_spec = getattr(self._ring, "to_spec", None)
        if ring_spec is None:
            return None
        lit = self._ring.to_literal
        return ModuleSpec(
            ring=ring_spec(),
            rank=self.rank,
            relations=[[lit(x) for x in rel] for rel in self.relations],
        )


class Submodule(Module):
    """A subset of a module closed under + and the scalar action; itself a module."""

    def __init__(self, parent: Module, members: Iterable, generators: Sequence = ()):
        self.parent = parent
        self.members = frozenset(members)
        self.generators = tuple(generators)

    @property
    def ring(self) -> CommutativeRing:
        return self.parent.ring

    @cached_property
    def elements(self) -> tuple:
        return tuple(self.parent.sort(self.members))

    @property
    def zero(self):
        return self.parent.zero

    @cached_property
    def label(self) -> str:
        if self.generators:
            gens = ",".join(str(self.parent.to_literal(g)) for g in self.generators)
            return f"<{gens}> in {self.parent.label}"
        return f"submodule of {self.parent.label} ({len(self.members)} elements)"

    @property
    def root(self) -> Module:
        node = self
        while isinstance(node, Submodule):
            node = node.parent
        return node

    def add(self, m, n):
        return self.parent.add(m, n)

    def neg(self, m):
        return self.parent.neg(m)

    def smul(self, r, m):
        return self.parent.smul(r, m)

    def index(self, m) -> int:
        return self.parent.index(m)

    def contains(self, m) -> bool:
        return m in self.members

    def to_literal(self, m) -> Any:
        return self.parent.to_literal(m)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def __le__(self, other: "Submodule") -> bool:
        return self.members <= other.members

    def is_zero(self) -> bool:
        return self.members == {self.parent.zero}

    def verify(self) -> None:
        """Raise NotASubmodule unless the member set is closed."""
        if self.parent.zero not in self.members:
            raise NotASubmodule(f"{self.label} does not contain 0")
        for m in self.members:
            if not self.parent.contains(m):
                raise NotASubmodule(f"{m!r} is not an element of {self.parent.label}")
            for n in self.members:
                if self.parent.add(m, n) not in self.members:
                    raise NotASubmodule(f"{self.label} is not closed under addition")
            for r in self.ring.elements:
                if self.parent.smul(r, m) not in self.members:
                    raise NotASubmodule(f"{self.label} is not closed under scalars")

    def to_report(self) -> list:
        return self.parent.literals(self.members)


def span(module: Module, seeds: Iterable) -> frozenset:
    """Additive span of seeds inside a module."""
    seeds = list(dict.fromkeys(seeds))
    total = {module.zero}
    frontier = [module.zero]
    while frontier:
        nxt = []
        for s in frontier:
            for p in seeds:
                q = module.add(s, p)
                if q not in total:
                    total.add(q)
                    nxt.append(q)
        frontier = nxt
    return frozenset(total)


def free_module(ring: CommutativeRing, rank: int) -> PresentedModule:
    return PresentedModule(ring, rank)


def regular_module(ring: CommutativeRing) -> PresentedModule:
    """R over itself, memoized on the ring so torsion data is shared."""
    cached = ring.__dict__.get("_regular_module")
    if cached is None:
        cached = PresentedModule(ring, 1)
        ring.__dict__["_regular_module"] = cached
    return cached


def module_present(
    ring: CommutativeRing,
    rank: int,
    relations: Sequence[Sequence] = (),
    max_elems: int | None = None,
) -> PresentedModule:
    return PresentedModule(ring, rank, relations, max_elems=max_elems)


def cyclic_quotient(ring: CommutativeRing, ideal: Ideal) -> PresentedModule:
    """R/I as a module: rank 1 with the generators of I as relations."""
    if ideal.ring != ring:
        raise RingMismatch("ideal belongs to a different ring")
    gens = ideal.generators or tuple(ideal.sorted_elements)
    gens = [g for g in gens if g != ring.zero]
    return PresentedModule(ring, 1, [(g,) for g in gens])


def submodule_generate(module: Module, gens: Iterable) -> Submodule:
    """Smallest submodule containing gens."""
    gens = tuple(gens)
    for g in gens:
        if not module.contains(g):
            raise RingMismatch(f"{g!r} is not an element of {module.label}")
    multiples = {module.smul(r, g) for g in gens for r in module.ring.elements}
    return Submodule(module, span(module, multiples), generators=gens)


def submodule_sum(first: Submodule, second: Submodule) -> Submodule:
    parent = first.parent
    members = frozenset(parent.add(m, n) for m in first.members for n in second.members)
    return Submodule(parent, members)


def intersection(first: Submodule, second: Submodule) -> Submodule:
    return Submodule(first.parent, first.members & second.members)


def cyclic_submodules(module: Module) -> list[Submodule]:
    """Distinct cyclic submodules Rm, in order of their least generator."""
    seen: dict[frozenset, Submodule] = {}
    for m in module.elements:
        sub = submodule_generate(module, [m])
        seen.setdefault(sub.members, sub)
    return list(seen.values())


def quotient_module(module: PresentedModule, sub: Submodule) -> PresentedModule:
    """M/N, presented over R^g with N's representatives added as relations."""
    if not isinstance(module, PresentedModule):
        raise NotASubmodule("quotients are formed from presented modules")
    if sub.parent is not module:
        raise NotASubmodule(f"{sub.label} is not a submodule of {module.label}")
    key = ("quotient", sub.members)
    cached = module._cache.get(key)
    if cached is not None:
        return cached
    sub.verify()
    extra = [m.vector for m in sub.elements if m != module.zero]
    quotient = PresentedModule(
        module.ring,
        module.rank,
        list(module.relations) + extra,
        name=f"{module.label}/[{len(sub.members)}]",
    )
    if quotient.size * len(sub.members) != module.size:
        raise OracleMismatch(f"|M/N| != |M|/|N| for {module.label}")
    module._cache[key] = quotient
    return quotient


def quotient_map(module: PresentedModule, quotient: PresentedModule, m: ModuleElement) -> ModuleElement:
    """Image of m under M → M/N (both presented on the same R^g)."""
    return quotient.canon(m.vector)


def ann_submodule(module: Module, a, k: int) -> Submodule:
    """(0:_M a^k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ring = module.ring
    ring.check(a)
    ak = ring.pow(a, k)
    zero = module.zero
    return Submodule(module, [m for m in module.elements if module.smul(ak, m) == zero])


def ann_ideal_submodule(module: Module, ideal: Ideal) -> Submodule:
    """(0:_M I) = {m : xm = 0 for all x in I}."""
    zero = module.zero
    members = [
        m for m in module.elements
        if all(module.smul(x, m) == zero for x in ideal.elements)
    ]
    return Submodule(module, members)


def ann_submodule_checked(module: Module, a, k: int) -> Submodule:
    """(0:_M a^k), asserting agreement with the ideal form (0:_M (a)^k)."""
    by_element = ann_submodule(module, a, k)
    by_ideal = ann_ideal_submodule(module, principal_power(module.ring, a, k))
    if by_element.members != by_ideal.members:
        raise OracleMismatch(f"{module.label}: element and ideal annihilators disagree")
    return by_element


def scalar_image(module: Module, a, t: int) -> Submodule:
    """a^t M."""
    if t < 1:
        raise ValueError("t must be >= 1")
    at = module.ring.pow(a, t)
    return Submodule(module, {module.smul(at, m) for m in module.elements})


def ideal_times_module(module: Module, ideal_members: Iterable) -> Submodule:
    """I·M: sums of products x·m with x in I."""
    products = {module.smul(x, m) for x in ideal_members for m in module.elements}
    return Submodule(module, span(module, products))


class DirectSum(PresentedModule):
    """Componentwise direct sum of presented modules over one ring."""

    def __init__(self, parts: Sequence[PresentedModule], max_elems: int | None = None):
        if not parts:
            raise ValueError("direct sum needs at least one part")
        ring = parts[0].ring
        for p in parts:
            if p.ring != ring:
                raise RingMismatch("direct sum parts live over different rings")
        budget = max_elems if max_elems is not None else get_settings().max_elems
        size = 1
        for p in parts:
            size *= p.size
        ensure_budget("direct sum", size, budget)
        rank = sum(p.rank for p in parts)
        offsets = list(itertools.accumulate([0] + [p.rank for p in parts]))
        relations = []
        for p, off in zip(parts, offsets):
            for rel in p.relations:
                vec = [ring.zero] * rank
                vec[off:off + p.rank] = rel
                relations.append(tuple(vec))
        name = " + ".join(p.label for p in parts)
        super().__init__(ring, rank, relations, name=name, max_elems=max_elems)
        self.parts = tuple(parts)
        self.offsets = tuple(offsets[:-1])

    def inject(self, i: int, m: ModuleElement) -> ModuleElement:
        """The image of m ∈ parts[i] in the sum."""
        part, off = self.parts[i], self.offsets[i]
        vec = [self.ring.zero] * self.rank
        vec[off:off + part.rank] = m.vector
        return self.canon(vec)


def direct_sum(parts: Sequence[PresentedModule], max_elems: int | None = None) -> PresentedModule:
    if len(parts) == 1:
        return parts[0]
    return DirectSum(parts, max_elems=max_elems)


@dataclass(frozen=True)
class ModuleHom:
    """An R-linear map given by generator images and its full table."""
    source: PresentedModule
    target: Module
    images: tuple
    table: dict = field(compare=False, repr=False)

    def __call__(self, m):
        return self.table[m]

    @property
    def is_bijective(self) -> bool:
        return self.source.size == self.target.size and len(set(self.table.values())) == self.target.size

    def image_of(self, members: Iterable) -> frozenset:
        return frozenset(self.table[m] for m in members)

    def verify(self) -> None:
        """Exhaustive additivity and R-linearity check."""
        src, tgt = self.source, self.target
        for m in src.elements:
            fm = self.table[m]
            for n in src.elements:
                if self.table[src.add(m, n)] != tgt.add(fm, self.table[n]):
                    raise OracleMismatch(f"hom {self.images!r} is not additive")
            for r in src.ring.elements:
                if self.table[src.smul(r, m)] != tgt.smul(r, fm):
                    raise OracleMismatch(f"hom {self.images!r} is not R-linear")


def _check_hom_budget(source: PresentedModule, target: Module, max_elems: int | None) -> None:
    settings = get_settings()
    budget = max_elems if max_elems is not None else settings.max_elems
    if source.rank > settings.hom_max_rank:
        raise OrderBudgetExceeded(f"hom enumeration from rank {source.rank}", source.rank, settings.hom_max_rank)
    ensure_budget(f"Hom({source.label}, {target.label})", target.size ** source.rank, budget)


def hom_assignments(
    source: PresentedModule,
    target: Module,
    max_elems: int | None = None,
) -> Iterator[tuple]:
    """Generator-image tuples that kill every relation, in lexicographic order."""
    if source.ring != target.ring:
        raise RingMismatch("modules live over different rings")
    _check_hom_budget(source, target, max_elems)
    zero = target.zero
    for images in itertools.product(target.elements, repeat=source.rank):
        ok = True
        for rel in source.relations:
            total = zero
            for r, n in zip(rel, images):
                total = target.add(total, target.smul(r, n))
            if total != zero:
                ok = False
                break
        if ok:
            yield images


def hom_count(source: PresentedModule, target: Module, max_elems: int | None = None) -> int:
    return sum(1 for _ in hom_assignments(source, target, max_elems))


def hom_from_images(source: PresentedModule, target: Module, images: tuple, verify: bool = True) -> ModuleHom:
    table = {}
    zero = target.zero
    for m in source.elements:
        value = zero
        for r, n in zip(m.vector, images):
            value = target.add(value, target.smul(r, n))
        table[m] = value
    hom = ModuleHom(source=source, target=target, images=tuple(images), table=table)
    if verify:
        hom.verify()
    return hom


def hom_set(
    source: PresentedModule,
    target: Module,
    verify: bool = True,
    max_elems: int | None = None,
) -> list[ModuleHom]:
    """All R-linear maps source → target, memoized on the source for the default budget."""
    key = ("homs", target, verify)
    if max_elems is None and key in source._cache:
        return source._cache[key]
    homs = [
        hom_from_images(source, target, images, verify=verify)
        for images in hom_assignments(source, target, max_elems)
    ]
    if max_elems is None:
        source._cache[key] = homs
    return homs


def automorphisms(module: PresentedModule, max_elems: int | None = None) -> list[ModuleHom]:
    return [h for h in hom_set(module, module, verify=False, max_elems=max_elems) if h.is_bijective]


@dataclass(frozen=True)
class Faithfulness:
    faithful: bool
    witness: Any = None


def is_faithful(module: Module) -> Faithfulness:
    """Faithful iff only 0 annihilates M; witness is the least nonzero annihilator."""
    ring = module.ring
    zero = module.zero
    for a in ring.elements:
        if a == ring.zero:
            continue
        if all(module.smul(a, m) == zero for m in module.elements):
            return Faithfulness(faithful=False, witness=a)
    return Faithfulness(faithful=True)


def check_module_axioms(module: Module) -> dict[str, Any] | None:
    """Exhaustive module axiom check; returns the first violation or None."""
    ring = module.ring
    zero = module.zero
    lit = module.to_literal
    for m in module.elements:
        if module.add(m, zero) != m or module.smul(ring.one, m) != m:
            return {"axiom": "identity", "m": lit(m)}
        if module.add(m, module.neg(m)) != zero:
            return {"axiom": "inverse", "m": lit(m)}
        for n in module.elements:
            if module.add(m, n) != module.add(n, m):
                return {"axiom": "commutativity", "m": lit(m), "n": lit(n)}
            for r in ring.elements:
                if module.smul(r, module.add(m, n)) != module.add(module.smul(r, m), module.smul(r, n)):
                    return {"axiom": "r(m+n)=rm+rn", "m": lit(m), "n": lit(n)}
        for r in ring.elements:
            rm = module.smul(r, m)
            for s in ring.elements:
                if module.smul(ring.add(r, s), m) != module.add(rm, module.smul(s, m)):
                    return {"axiom": "(r+s)m=rm+sm", "m": lit(m)}
                if module.smul(ring.mul(r, s), m) != module.smul(r, module.smul(s, m)):
                    return {"axiom": "(rs)m=r(sm)", "m": lit(m)}
    return None
