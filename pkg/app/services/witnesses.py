"""Independent re-checks of failing audit reports.

Each check rebuilds the ring from its spec and decides the relevant
predicates by plain loops over elements and coefficient vectors. Nothing
is shared with the engine that produced the report: no memoized state, no
torsion or hom helpers. Claims without a checker here are never confirmed.
"""

import itertools
import logging
from typing import Any, Callable, Iterable

from app.models.module import ModuleSpec
from app.models.report import AuditReport, AuditStatus
from app.services.ring_core import FiniteRing, ring_make

logger = logging.getLogger(__name__)


def _power(ring: FiniteRing, x, k: int):
    result = ring.one
    for _ in range(k):
        result = ring.mul(result, x)
    return result


def brute_t_regular(ring: FiniteRing, t: int) -> bool:
    """Every a has some b with a^t = a^{2t}b."""
    for a in ring.elements:
        at, a2t = _power(ring, a, t), _power(ring, a, 2 * t)
        if not any(ring.mul(a2t, b) == at for b in ring.elements):
            return False
    return True


def brute_reduced(ring: FiniteRing) -> bool:
    """No nonzero x with x^k = 0 for k ≤ |R|."""
    for x in ring.elements:
        if x != ring.zero and _power(ring, x, ring.order) == ring.zero:
            return False
    return True


def brute_ring_eps_reduced(ring: FiniteRing, t: int) -> bool:
    """For all a, r and t ≤ k ≤ |R|: a^k r = 0 implies a^t r = 0."""
    zero = ring.zero
    for a in ring.elements:
        at = _power(ring, a, t)
        for r in ring.elements:
            if ring.mul(at, r) == zero:
                continue
            power = at
            for _ in range(t, ring.order + 1):
                if ring.mul(power, r) == zero:
                    return False
                power = ring.mul(power, a)
    return True


class VectorTable:
    """R^g modulo a kernel of vectors; submodules are kept as full sets of vectors."""

    def __init__(self, ring: FiniteRing, rank: int, kernel: Iterable[tuple] | None = None):
        self.ring = ring
        self.rank = rank
        self.zero = (ring.zero,) * rank
        self.vectors = tuple(itertools.product(ring.elements, repeat=rank))
        self.kernel = frozenset(kernel) if kernel is not None else frozenset([self.zero])

    @classmethod
    def from_spec(cls, ring: FiniteRing, spec: ModuleSpec | dict[str, Any]) -> "VectorTable":
        spec = ModuleSpec.model_validate(spec)
        free = cls(ring, spec.rank)
        relations = [tuple(ring.element(x) for x in rel) for rel in spec.relations]
        return cls(ring, spec.rank, free.span(free.scale(r, rel) for rel in relations for r in ring.elements))

    def add(self, v: tuple, w: tuple) -> tuple:
        return tuple(self.ring.add(x, y) for x, y in zip(v, w))

    def scale(self, r, v: tuple) -> tuple:
        return tuple(self.ring.mul(r, x) for x in v)

    def is_zero(self, v: tuple) -> bool:
        return v in self.kernel

    def literal(self, literal: Any) -> tuple:
        if self.rank == 1:
            return (self.ring.element(literal),)
        return tuple(self.ring.element(x) for x in literal)

    def saturate(self, vectors: Iterable[tuple]) -> frozenset:
        """Every vector congruent to one of ``vectors`` modulo the kernel."""
        return frozenset(self.add(v, k) for v in set(vectors) for k in self.kernel)

    def span(self, seeds: Iterable[tuple]) -> frozenset:
        seeds = list(dict.fromkeys(seeds))
        found = {self.zero}
        frontier = [self.zero]
        while frontier:
            nxt = []
            for v in frontier:
                for s in seeds:
                    w = self.add(v, s)
                    if w not in found:
                        found.add(w)
                        nxt.append(w)
            frontier = nxt
        return self.saturate(found)

    def quotient(self, sub: frozenset) -> "VectorTable":
        return VectorTable(self.ring, self.rank, sub)

    def torsion(self, a, within: Iterable[tuple] | None = None) -> frozenset:
        """Vectors u with a^k u = 0 for some k, walking u, au, a²u, … until a repeat."""
        found = set()
        for u in self.vectors if within is None else within:
            seen = set()
            w = u
            while w not in seen:
                if self.is_zero(w):
                    found.add(u)
                    break
                seen.add(w)
                w = self.scale(a, w)
        return frozenset(found)

    def gln(self, a, t: int, within: Iterable[tuple] | None = None) -> frozenset:
        at = _power(self.ring, a, t)
        return self.saturate(self.scale(at, u) for u in self.torsion(a, within))

    def eps_reduced(self, t: int, vanishes: Callable[[tuple], bool] | None = None) -> bool:
        """For all a, u and k ≥ t: a^k u vanishing implies a^t u vanishes."""
        vanishes = vanishes or self.is_zero
        ring = self.ring
        for a in ring.elements:
            at = _power(ring, a, t)
            for u in self.vectors:
                w = self.scale(at, u)
                if vanishes(w):
                    continue
                seen = set()
                while w not in seen:
                    seen.add(w)
                    w = self.scale(a, w)
                    if vanishes(w):
                        return False
        return True

    def apply(self, target: "VectorTable", images: list[tuple], v: tuple) -> tuple:
        """The linear map sending the i-th basis vector to images[i]."""
        out = target.zero
        for coefficient, image in zip(v, images):
            out = target.add(out, target.scale(coefficient, image))
        return out

    def maps_kernel(self, target: "VectorTable", images: list[tuple]) -> bool:
        return all(target.is_zero(self.apply(target, images, k)) for k in self.kernel)


def _t(report: AuditReport) -> int:
    return report.instance.t or 1


def _instance_table(ring: FiniteRing, report: AuditReport) -> tuple[VectorTable, Any] | None:
    """The report's module and scalar, or None when the instance does not name them."""
    spec, a = report.instance.module_spec, report.instance.a
    if spec is None or a is None:
        return None
    return VectorTable.from_spec(ring, spec), ring.element(a)


def _nilpotent_holds(ring: FiniteRing, witness: dict[str, Any]) -> bool:
    if "nilpotent" not in witness:
        return True
    x = ring.element(witness["nilpotent"])
    return x != ring.zero and _power(ring, x, witness["exponent"]) == ring.zero


def _check_t_regular_iff_reduced(ring: FiniteRing, report: AuditReport) -> bool:
    witness = report.witness or {}
    regular, reduced = brute_t_regular(ring, _t(report)), brute_reduced(ring)
    return (
        regular == witness.get("t_regular")
        and reduced == witness.get("reduced")
        and regular != reduced
        and _nilpotent_holds(ring, witness)
    )


def _check_reduced_iff_eps(ring: FiniteRing, report: AuditReport) -> bool:
    witness = report.witness or {}
    reduced, eps = brute_reduced(ring), brute_ring_eps_reduced(ring, _t(report))
    return (
        reduced == witness.get("reduced")
        and eps == witness.get("eps_reduced")
        and reduced != eps
        and _nilpotent_holds(ring, witness)
    )


def _check_special_primary(ring: FiniteRing, report: AuditReport) -> bool:
    witness = report.witness or {}
    if witness.get("failing_a") is None:
        return False
    t = _t(report)
    a = ring.element(witness["failing_a"])
    at, a2t = _power(ring, a, t), _power(ring, a, 2 * t)
    return not any(ring.mul(a2t, b) == at for b in ring.elements)


def _check_fg_reduced_iff_eps(ring: FiniteRing, report: AuditReport) -> bool:
    witness = report.witness or {}
    if witness.get("module_spec") is None:
        return False
    table = VectorTable.from_spec(ring, witness["module_spec"])
    reduced, eps = table.eps_reduced(1), table.eps_reduced(_t(report))
    return reduced == witness.get("reduced") and eps == witness.get("eps_reduced") and reduced != eps


def _check_localization(ring: FiniteRing, report: AuditReport) -> bool:
    """r/s acting on m/s' vanishes iff u·r·m = 0 for some u in S, so S⁻¹M is decided on M."""
    witness = report.witness or {}
    spec = report.instance.module_spec
    if spec is None or "mult_set" not in witness:
        return False
    table = VectorTable.from_spec(ring, spec)
    denominators = [ring.element(s) for s in witness["mult_set"]]

    def vanishes_locally(v: tuple) -> bool:
        return any(table.is_zero(table.scale(u, v)) for u in denominators)

    original = table.eps_reduced(_t(report))
    local = table.eps_reduced(_t(report), vanishes_locally)
    return (
        original == witness.get("module_eps_reduced")
        and local == witness.get("localized_eps_reduced")
        and original != local
    )


def _check_sum(ring: FiniteRing, report: AuditReport) -> bool:
    witness = report.witness or {}
    if not witness.get("parts") or witness.get("a") is None or None in witness["parts"]:
        return False
    parts = [VectorTable.from_spec(ring, p) for p in witness["parts"]]
    a, t = ring.element(witness["a"]), _t(report)

    def concatenations(sets: list[Iterable[tuple]]) -> set[tuple]:
        return {tuple(itertools.chain(*combo)) for combo in itertools.product(*sets)}

    total = VectorTable(ring, sum(p.rank for p in parts), concatenations([p.kernel for p in parts]))
    return total.gln(a, t) != concatenations([p.gln(a, t) for p in parts])


def _check_poly(ring: FiniteRing, report: AuditReport) -> bool:
    """Polynomials of degree ≤ D are coefficient vectors in R^{D+1}."""
    witness = report.witness or {}
    if witness.get("a") is None or "degree" not in witness:
        return False
    a, t, degree = ring.element(witness["a"]), _t(report), witness["degree"]
    coefficients = {v[0] for v in VectorTable(ring, 1).gln(a, t)}
    by_coefficient = set(itertools.product(coefficients, repeat=degree + 1))
    return VectorTable(ring, degree + 1).gln(a, t) != by_coefficient


def _check_stratify(ring: FiniteRing, report: AuditReport) -> bool:
    free = VectorTable(ring, 1)
    union = set()
    for a in ring.elements:
        union |= {v[0] for v in free.gln(a, 1)}
    nilpotents = {x for x in ring.elements if _power(ring, x, ring.order) == ring.zero}
    return union != nilpotents


def _check_preradical(ring: FiniteRing, report: AuditReport) -> bool:
    witness = report.witness or {}
    found = _instance_table(ring, report)
    if found is None or witness.get("partner_spec") is None:
        return False
    source, a = found
    t = _t(report)
    partner = VectorTable.from_spec(ring, witness["partner_spec"])
    images = [partner.literal(x) for x in witness["hom_images"]]
    if not source.maps_kernel(partner, images):
        return False
    target = partner.gln(a, t)
    return any(source.apply(partner, images, u) not in target for u in source.gln(a, t))


def _check_radical(ring: FiniteRing, report: AuditReport) -> bool:
    found = _instance_table(ring, report)
    if found is None:
        return False
    source, a = found
    t = _t(report)
    members = source.gln(a, t)
    return not source.quotient(members).gln(a, t) <= members


def _check_characteristic(ring: FiniteRing, report: AuditReport) -> bool:
    witness = report.witness or {}
    found = _instance_table(ring, report)
    if found is None or "automorphism_images" not in witness:
        return False
    source, a = found
    images = [source.literal(x) for x in witness["automorphism_images"]]
    if not source.maps_kernel(source, images):
        return False
    if source.saturate(source.apply(source, images, v) for v in source.vectors) != set(source.vectors):
        return False
    members = source.gln(a, _t(report))
    return any(source.apply(source, images, u) not in members for u in members)


def _check_factor(ring: FiniteRing, report: AuditReport) -> bool:
    witness = report.witness or {}
    found = _instance_table(ring, report)
    if found is None or "submodule" not in witness:
        return False
    source, a = found
    t = _t(report)
    sub = source.saturate(source.literal(x) for x in witness["submodule"])
    whole = source.gln(a, t)
    if "intersection" in witness:
        return not source.gln(a, t, within=sub) <= (sub & whole)
    quotient = source.quotient(sub)
    return not quotient.saturate(whole) <= quotient.gln(a, t)


def _check_ideal_action(ring: FiniteRing, report: AuditReport) -> bool:
    found = _instance_table(ring, report)
    if found is None:
        return False
    source, a = found
    t = _t(report)
    ring_gln = {v[0] for v in VectorTable(ring, 1).gln(a, t)}
    acted = source.span(source.scale(x, v) for x in ring_gln for v in source.vectors)
    target = source.gln(a, t)
    if not acted <= target:
        return True
    free = source.kernel == {source.zero} and source.rank <= 2
    return free and acted != target


def _check_composition(ring: FiniteRing, report: AuditReport) -> bool:
    found = _instance_table(ring, report)
    if found is None:
        return False
    source, a = found
    t = _t(report)
    stage = frozenset(source.vectors)
    for _ in range(t):
        stage = source.gln(a, 1, within=stage)
    return stage != source.gln(a, t)


CHECKERS: dict[str, Callable[[FiniteRing, AuditReport], bool]] = {
    "noeth_t_regular_iff_reduced": _check_t_regular_iff_reduced,
    "noeth_reduced_iff_eps": _check_reduced_iff_eps,
    "special_primary_t_regular": _check_special_primary,
    "noeth_fg_reduced_iff_eps": _check_fg_reduced_iff_eps,
    "localization": _check_localization,
    "sum": _check_sum,
    "poly": _check_poly,
    "stratify": _check_stratify,
    "functor.preradical": _check_preradical,
    "functor.radical": _check_radical,
    "functor.characteristic": _check_characteristic,
    "functor.factor": _check_factor,
    "functor.ideal_action": _check_ideal_action,
    "functor.composition": _check_composition,
}


def reverify(report: AuditReport) -> bool:
    """Re-derive a failing report from scratch; True only when an independent checker confirms it."""
    if report.status != AuditStatus.FAILS or report.instance.ring_spec is None:
        return False
    checker = CHECKERS.get(report.claim)
    if checker is None:
        logger.warning(f"No independent checker for {report.claim}; witness on {report.instance.ring} withheld")
        return False
    ring = ring_make(report.instance.ring_spec)
    confirmed = checker(ring, report)
    if not confirmed:
        logger.warning(f"Witness for {report.claim} on {ring.label} did not re-verify")
    return confirmed
