"""The a-torsion functor, the generalised locally nilradical a^tΓ_a, and reducedness."""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Sequence

from app.exceptions import OracleMismatch, OrderBudgetExceeded
from app.models.report import (
    AuditReport,
    AuditStatus,
    Instance,
    ReducednessFlags,
    ReducednessReport,
)
from app.services.ideals import Ideal, ideal_power, nilradical, principal_power
from app.services.modules import (
    DirectSum,
    Module,
    PresentedModule,
    Submodule,
    ann_ideal_submodule,
    ann_submodule,
    ann_submodule_checked,
    automorphisms,
    cyclic_quotient,
    cyclic_submodules,
    hom_assignments,
    hom_count,
    hom_set,
    ideal_times_module,
    intersection,
    quotient_map,
    quotient_module,
    regular_module,
    scalar_image,
    submodule_sum,
)
from app.services.ring_core import CommutativeRing, FiniteRing

logger = logging.getLogger(__name__)


def make_instance(ring: CommutativeRing, module: Module | None = None, a=None, t: int | None = None) -> Instance:
    """Report instance for (ring, module, a, t)."""
    return Instance(
        ring=ring.label,
        ring_spec=ring.to_spec() if isinstance(ring, FiniteRing) else None,
        module=module.label if module is not None else None,
        module_spec=module.to_spec() if module is not None else None,
        a=ring.to_literal(a) if a is not None else None,
        t=t,
    )


@dataclass(frozen=True)
class TorsionChain:
    """The ascending chain (0:_M a) ⊆ (0:_M a²) ⊆ … up to where it stabilizes."""
    levels: tuple[frozenset, ...]

    @property
    def stabilization_index(self) -> int:
        return len(self.levels)

    @property
    def torsion(self) -> frozenset:
        return self.levels[-1]

    def depth(self, m) -> int | None:
        """Least k with a^k m = 0, or None when m is not a-torsion."""
        for k, level in enumerate(self.levels, start=1):
            if m in level:
                return k
        return None


def torsion_chain(module: Module, a) -> TorsionChain:
    key = ("chain", a)
    cached = module._cache.get(key)
    if cached is not None:
        return cached
    module.ring.check(a)
    zero = module.zero
    phi = {m: module.smul(a, m) for m in module.elements}
    level = frozenset(m for m, image in phi.items() if image == zero)
    levels = [level]
    while True:
        nxt = frozenset(m for m, image in phi.items() if image in level)
        if nxt == level:
            break
        levels.append(nxt)
        level = nxt
    if len(levels) > module.size:
        raise OracleMismatch(f"{module.label}: torsion chain longer than |M|")
    chain = TorsionChain(levels=tuple(levels))
    module._cache[key] = chain
    return chain


def gamma_bruteforce(module: Module, a) -> frozenset:
    """{m : a^k m = 0 for some 1 ≤ k ≤ |M|} by direct iteration."""
    zero = module.zero
    members = set()
    for m in module.elements:
        x = m
        seen = set()
        for _ in range(module.size):
            x = module.smul(a, x)
            if x == zero:
                members.add(m)
                break
            if x in seen:
                break
            seen.add(x)
    return frozenset(members)


def gamma(module: Module, a) -> Submodule:
    """Γ_a(M), the stable term of the annihilator chain, checked against brute force."""
    key = ("gamma", a)
    cached = module._cache.get(key)
    if cached is not None:
        return cached
    chain = torsion_chain(module, a)
    if chain.torsion != gamma_bruteforce(module, a):
        raise OracleMismatch(f"{module.label}: Γ_a chain disagrees with brute force")
    result = Submodule(module, chain.torsion)
    module._cache[key] = result
    return result


def gamma_ideal(module: Module, ideal: Ideal) -> Submodule:
    """Γ_I(M) = {m : I^k m = 0 for some k}."""
    members = frozenset()
    k = 1
    while True:
        level = ann_ideal_submodule(module, ideal_power(ideal, k)).members
        if level == members:
            break
        members = level
        k += 1
        if k > module.size + 1:
            raise OracleMismatch(f"{module.label}: Γ_I chain did not stabilize")
    return Submodule(module, members)


def gln(module: Module, a, t: int) -> Submodule:
    """a^tΓ_a(M) = {a^t m : m ∈ Γ_a(M)}."""
    if t < 1:
        raise ValueError("t must be >= 1")
    key = ("gln", a, t)
    cached = module._cache.get(key)
    if cached is not None:
        return cached
    at = module.ring.pow(a, t)
    result = Submodule(module, {module.smul(at, m) for m in gamma(module, a).members})
    module._cache[key] = result
    return result


def iterated_gln(module: Module, a, t: int) -> Submodule:
    """aΓ_a(-) composed t times, each stage taken inside the previous one."""
    current: Module = module
    for _ in range(t):
        current = gln(current, a, 1)
    return Submodule(module, current.members)


@dataclass(frozen=True)
class Reducedness:
    """A reducedness verdict; witness is (m, k) with a^k m = 0 but a^t m ≠ 0."""
    reduced: bool
    witness: tuple | None = None
    scalar: Any = None

    def to_witness(self, module: Module) -> dict[str, Any] | None:
        if self.witness is None:
            return None
        m, k = self.witness
        out = {"m": module.to_literal(m), "k": k}
        if self.scalar is not None:
            out["a"] = module.ring.to_literal(self.scalar)
        return out


def definitional_at_reduced(module: Module, a, t: int) -> Reducedness:
    """Loop over m and k ≥ t: a^k m = 0 must imply a^t m = 0."""
    ring = module.ring
    zero = module.zero
    bound = max(torsion_chain(module, a).stabilization_index, t)
    at = ring.pow(a, t)
    for m in module.elements:
        if module.smul(at, m) == zero:
            continue
        for k in range(t, bound + 1):
            if module.smul(ring.pow(a, k), m) == zero:
                return Reducedness(reduced=False, witness=(m, k), scalar=a)
    return Reducedness(reduced=True, scalar=a)


def is_at_reduced(module: Module, a, t: int) -> Reducedness:
    """a^t-reduced iff a^tΓ_a(M) = 0, cross-checked by the definitional loop."""
    if t < 1:
        raise ValueError("t must be >= 1")
    by_functor = gln(module, a, t).is_zero()
    by_definition = definitional_at_reduced(module, a, t)
    if by_functor != by_definition.reduced:
        raise OracleMismatch(
            f"{module.label}: a^tΓ_a = 0 is {by_functor} but the definitional loop says "
            f"{by_definition.reduced}"
        )
    return by_definition


def is_eps_reduced(module: Module, t: int) -> Reducedness:
    """ε^t-reduced: a^t-reduced for every a ∈ R; the witness names the first failing a."""
    for a in module.ring.elements:
        verdict = is_at_reduced(module, a, t)
        if not verdict.reduced:
            return verdict
    return Reducedness(reduced=True)


def is_reduced(module: Module) -> Reducedness:
    return is_eps_reduced(module, 1)


def verify_equivalences(module: Module, a, t: int) -> ReducednessReport:
    """Evaluate every equivalent form of a^t-reducedness independently."""
    ring = module.ring
    chain = torsion_chain(module, a)
    top = max(chain.stabilization_index, t)
    gamma_set = gamma_bruteforce(module, a)

    definitional = definitional_at_reduced(module, a, t)
    gln_zero = gln(module, a, t).is_zero()

    ann_t = ann_submodule_checked(module, a, t).members
    ann_stabilizes = all(
        ann_submodule(module, a, k).members == ann_t for k in range(t, top + 1)
    )

    ideal_t = principal_power(ring, a, t)
    quotient_t = cyclic_quotient(ring, ideal_t)
    count_t = hom_count(quotient_t, module)
    hom_card_matches = all(
        hom_count(cyclic_quotient(ring, principal_power(ring, a, k)), module) == count_t
        for k in range(t, top + 1)
    )

    evaluations = {images[0] for images in hom_assignments(quotient_t, module)}
    hom_limit_matches = (
        len(gamma_set) == count_t and evaluations <= gamma_set and len(evaluations) == count_t
    )

    gamma_equals_ann_t = gamma_set == ann_ideal_submodule(module, ideal_t).members

    at = ring.pow(a, t)
    kernel = frozenset(m for m in module.elements if module.smul(at, m) == module.zero)
    image = scalar_image(module, a, t)
    if len(kernel) * image.size != module.size:
        raise OracleMismatch(f"{module.label}: |ker|·|im| != |M|")
    sequence_exact = kernel == gamma_set

    flags = ReducednessFlags(
        definitional=definitional.reduced,
        gln_zero=gln_zero,
        ann_stabilizes=ann_stabilizes,
        hom_card_matches=hom_card_matches,
        hom_limit_matches=hom_limit_matches,
        gamma_equals_ann_t=gamma_equals_ann_t,
        sequence_exact=sequence_exact,
    )
    consistent = len(set(flags.values())) == 1
    if not consistent:
        logger.warning(f"Inconsistent equivalence flags on {module.label}, a={a}, t={t}: {flags}")
    return ReducednessReport(
        instance=make_instance(ring, module, a, t),
        conditions=flags,
        consistent=consistent,
        stabilization_index=chain.stabilization_index,
        witness=definitional.to_witness(module),
    )


def stratify_audit(ring: CommutativeRing) -> AuditReport:
    """N(R) = ⋃_a aΓ_a(R)."""
    regular = regular_module(ring)
    union = set()
    for a in ring.elements:
        union |= {m.vector[0] for m in gln(regular, a, 1).members}
    radical = nilradical(ring).elements
    lit = ring.to_literal
    detail = {
        "union": [lit(x) for x in ring.sort(union)],
        "nilradical": [lit(x) for x in ring.sort(radical)],
    }
    if union == radical:
        return AuditReport(
            claim="stratify",
            instance=make_instance(ring),
            status=AuditStatus.HOLDS,
            detail=f"union of strata = N(R) = {detail['nilradical']}",
        )
    return AuditReport(
        claim="stratify",
        instance=make_instance(ring),
        status=AuditStatus.FAILS,
        witness={
            **detail,
            "only_in_union": [lit(x) for x in ring.sort(union - radical)],
            "only_in_nilradical": [lit(x) for x in ring.sort(radical - union)],
        },
    )


def factor_family(module: Module) -> list[Submodule]:
    """Cyclic submodules plus kernels of scalar maps, without repeats."""
    family: dict[frozenset, Submodule] = {}
    for sub in cyclic_submodules(module):
        family.setdefault(sub.members, sub)
    for r in module.ring.elements:
        sub = ann_submodule(module, r, 1)
        family.setdefault(sub.members, sub)
    return list(family.values())


def _report(claim: str, module: Module, a, t: int, ok: bool, witness: dict | None, detail: str,
            notes: list[str] | None = None) -> AuditReport:
    return AuditReport(
        claim=claim,
        instance=make_instance(module.ring, module, a, t),
        status=AuditStatus.HOLDS if ok else AuditStatus.FAILS,
        witness=None if ok else witness,
        detail=detail,
        notes=notes or [],
    )


def check_preradical(module: PresentedModule, a, t: int, partners: Sequence[Module]) -> AuditReport:
    """f(a^tΓ_a(M)) ⊆ a^tΓ_a(N) for every hom f: M → N over the partner set."""
    source_gln = gln(module, a, t).members
    notes = []
    checked = 0
    for partner in partners:
        try:
            homs = hom_set(module, partner, verify=False)
        except OrderBudgetExceeded as e:
            notes.append(f"partner {partner.label} skipped: {e}")
            continue
        target_gln = gln(partner, a, t).members
        for hom in homs:
            checked += 1
            image = hom.image_of(source_gln)
            if not image <= target_gln:
                bad = next(iter(partner.sort(image - target_gln)))
                return _report("functor.preradical", module, a, t, False, {
                    "partner": partner.label,
                    "partner_spec": partner.spec_literal(),
                    "hom_images": [partner.to_literal(n) for n in hom.images],
                    "escaping_image": partner.to_literal(bad),
                }, f"{checked} homs checked")
    return _report("functor.preradical", module, a, t, True, None, f"{checked} homs checked", notes)


def check_radical(module: PresentedModule, a, t: int) -> AuditReport:
    """a^tΓ_a(M / a^tΓ_a(M)) = 0."""
    quotient = quotient_module(module, gln(module, a, t))
    residue = gln(quotient, a, t)
    return _report(
        "functor.radical", module, a, t, residue.is_zero(),
        {"quotient": quotient.label, "residue": residue.to_report()},
        f"quotient of size {quotient.size}",
    )


def check_characteristic(module: PresentedModule, a, t: int) -> AuditReport:
    """Every automorphism maps a^tΓ_a(M) into itself."""
    members = gln(module, a, t).members
    autos = automorphisms(module)
    for auto in autos:
        if not auto.image_of(members) <= members:
            return _report("functor.characteristic", module, a, t, False, {
                "automorphism_images": [module.to_literal(n) for n in auto.images],
            }, "")
    return _report("functor.characteristic", module, a, t, True, None, f"{len(autos)} automorphisms")


def check_factor_containments(module: PresentedModule, a, t: int) -> AuditReport:
    """a^tΓ_a(N) ⊆ N ∩ a^tΓ_a(M) and (a^tΓ_a(M)+N)/N ⊆ a^tΓ_a(M/N).

    Strict first containments are recorded in notes: the functor is not left exact.
    """
    whole_gln = gln(module, a, t)
    notes = []
    family = factor_family(module)
    for sub in family:
        sub_gln = gln(sub, a, t).members
        meet = intersection(sub, whole_gln).members
        if not sub_gln <= meet:
            return _report("functor.factor", module, a, t, False, {
                "submodule": sub.to_report(),
                "gln_of_submodule": module.literals(sub_gln),
                "intersection": module.literals(meet),
            }, "first containment violated")
        if sub_gln != meet:
            notes.append(
                f"strict: N={sub.to_report()} gln(N)={module.literals(sub_gln)} "
                f"N∩gln(M)={module.literals(meet)}"
            )
        quotient = quotient_module(module, sub)
        pushed = {quotient_map(module, quotient, m) for m in submodule_sum(whole_gln, sub).members}
        target = gln(quotient, a, t).members
        if not pushed <= target:
            return _report("functor.factor", module, a, t, False, {
                "submodule": sub.to_report(),
                "pushed": quotient.literals(pushed),
                "gln_of_quotient": quotient.literals(target),
            }, "second containment violated")
    return _report(
        "functor.factor", module, a, t, True, None,
        f"{len(family)} submodules, {len(notes)} strict", notes,
    )


def check_ideal_action(module: PresentedModule, a, t: int) -> AuditReport:
    """a^tΓ_a(R)·M ⊆ a^tΓ_a(M), with equality for free modules of rank ≤ 2."""
    ring = module.ring
    ring_gln = [m.vector[0] for m in gln(regular_module(ring), a, t).members]
    acted = ideal_times_module(module, ring_gln).members
    target = gln(module, a, t).members
    if not acted <= target:
        return _report("functor.ideal_action", module, a, t, False, {
            "ideal_times_module": module.literals(acted),
            "gln": module.literals(target),
        }, "containment violated")
    free = module.is_free and module.rank <= 2
    if free and acted != target:
        return _report("functor.ideal_action", module, a, t, False, {
            "ideal_times_module": module.literals(acted),
            "gln": module.literals(target),
        }, "equality for a free module violated")
    detail = "equality (free)" if free else ("equality" if acted == target else "strict containment")
    return _report("functor.ideal_action", module, a, t, True, None, detail)


def check_composition(module: Module, a, t: int) -> AuditReport:
    """a^tΓ_a(M) equals aΓ_a(-) applied t times."""
    direct = gln(module, a, t)
    iterated = iterated_gln(module, a, t)
    return _report(
        "functor.composition", module, a, t, direct.members == iterated.members,
        {"direct": direct.to_report(), "iterated": iterated.to_report()},
        f"{len(direct.members)} elements both ways" if direct.members == iterated.members else "",
    )


def functor_audit(
    module: PresentedModule,
    a,
    t: int,
    partners: Sequence[Module] = (),
) -> list[AuditReport]:
    """Preradical, radical, characteristic, factor, ideal-action and composition checks."""
    partners = [module, *[p for p in partners if p is not module]]
    return [
        check_preradical(module, a, t, partners),
        check_radical(module, a, t),
        check_characteristic(module, a, t),
        check_factor_containments(module, a, t),
        check_ideal_action(module, a, t),
        check_composition(module, a, t),
    ]


def sum_audit(parts: Sequence[PresentedModule], a, t: int) -> AuditReport:
    """a^tΓ_a(⊕M_i) = ⊕a^tΓ_a(M_i)."""
    if len(parts) == 1:
        total = parts[0]
        componentwise = gln(total, a, t).members
    else:
        total = DirectSum(parts)
        pieces = [[total.inject(i, m) for m in gln(p, a, t).members] for i, p in enumerate(parts)]
        componentwise = set()
        for combo in itertools.product(*pieces):
            acc = total.zero
            for m in combo:
                acc = total.add(acc, m)
            componentwise.add(acc)
        componentwise = frozenset(componentwise)
    of_sum = gln(total, a, t).members
    ok = of_sum == componentwise
    return AuditReport(
        claim="sum",
        instance=make_instance(total.ring, total, a, t),
        status=AuditStatus.HOLDS if ok else AuditStatus.FAILS,
        witness=None if ok else {
            "a": total.ring.to_literal(a),
            "parts": [p.spec_literal() for p in parts],
            "gln_of_sum": total.literals(of_sum),
            "sum_of_gln": total.literals(componentwise),
        },
        detail=f"{len(of_sum)} elements both ways" if ok else "",
        notes=["finite index set: the product containment coincides with this equality"],
    )


def local_cohomology_zero(module: Module, a, t: int) -> AuditReport:
    """For a^t-reduced M and I = (a): Γ_I(M) ≅ Hom(R/I^t, M) via f ↦ f(1̄)."""
    ring = module.ring
    instance = make_instance(ring, module, a, t)
    reduced = is_at_reduced(module, a, t)
    ideal = principal_power(ring, a, 1)
    torsion = gamma_ideal(module, ideal).members
    if torsion != gamma(module, a).members:
        raise OracleMismatch(f"{module.label}: Γ_I differs from Γ_a for I = (a)")
    if not reduced.reduced:
        return AuditReport(
            claim="local_cohomology_degree_zero",
            instance=instance,
            status=AuditStatus.HYPOTHESIS_NOT_MET,
            detail="module is not a^t-reduced",
            notes=[f"witness of non-reducedness: {reduced.to_witness(module)}"],
        )
    quotient = cyclic_quotient(ring, ideal_power(ideal, t))
    evaluations = [images[0] for images in hom_assignments(quotient, module)]
    ok = len(evaluations) == len(torsion) and set(evaluations) == torsion
    return AuditReport(
        claim="local_cohomology_degree_zero",
        instance=instance,
        status=AuditStatus.HOLDS if ok else AuditStatus.FAILS,
        witness=None if ok else {
            "gamma_I": module.literals(torsion),
            "evaluations": module.literals(set(evaluations)),
            "hom_count": len(evaluations),
        },
        detail=f"|Γ_I(M)| = |Hom(R/I^t, M)| = {len(torsion)}" if ok else "",
    )
