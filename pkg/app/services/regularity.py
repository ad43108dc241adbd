"""t-regular rings and the ring-level claims about reducedness."""

import logging
from typing import Any, Callable, Sequence

from app.exceptions import BadConfig, OracleMismatch
from app.models.report import AuditReport, AuditStatus, RegularityCertificate, RegularityPair
from app.services.catalog import module_family
from app.services.extensions import scalar_audit
from app.services.ideals import (
    Ideal,
    annihilators_semiprime,
    enumerate_ideals,
    projection,
    quotient_ring,
    semiprimality,
)
from app.services.modules import (
    Module,
    PresentedModule,
    cyclic_quotient,
    cyclic_submodules,
    is_faithful,
    quotient_module,
    regular_module,
)
from app.services.ring_core import CommutativeRing, classify
from app.services.torsion import (
    Reducedness,
    gamma,
    is_at_reduced,
    is_eps_reduced,
    is_reduced,
    local_cohomology_zero,
    make_instance,
)

logger = logging.getLogger(__name__)

NOETHERIAN_NOTE = (
    "every finite ring is Noetherian; the corollary's proof needs (0:b) semiprime for all 0 != b"
)
FIXED_T_NOTE = "t is fixed throughout; t-regularity is not quantified over all t"


def _least_solution(ring: CommutativeRing, target, factor):
    """Least b in enumeration order with factor·b = target."""
    for b in ring.elements:
        if ring.mul(factor, b) == target:
            return b
    return None


def is_t_regular(ring: CommutativeRing, t: int) -> RegularityCertificate:
    """Decide a^t = a^{2t}b for every a, and the equivalent form a^t = a^{t+1}b.

    Witness maps are filled only when the ring is t-regular.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    memo = ring.__dict__.setdefault("_regularity", {})
    if t in memo:
        return memo[t]
    lit = ring.to_literal
    witness_map, azumaya_map = [], []
    failing = None
    for a in ring.elements:
        at = ring.pow(a, t)
        b = _least_solution(ring, at, ring.pow(a, 2 * t))
        c = _least_solution(ring, at, ring.pow(a, t + 1))
        if (b is None) != (c is None):
            raise OracleMismatch(f"{ring.label}: McCoy and Azumaya forms disagree at a={lit(a)}")
        if b is None:
            failing = a
            break
        witness_map.append(RegularityPair(a=lit(a), b=lit(b)))
        azumaya_map.append(RegularityPair(a=lit(a), b=lit(c)))
    regular = failing is None
    certificate = RegularityCertificate(
        ring=ring.label,
        t=t,
        regular=regular,
        witness_map=witness_map if regular else [],
        azumaya_map=azumaya_map if regular else [],
        failing_a=None if regular else lit(failing),
    )
    memo[t] = certificate
    return certificate


def ring_eps_reduced(ring: CommutativeRing, t: int) -> Reducedness:
    return is_eps_reduced(regular_module(ring), t)


def _report(
    claim: str,
    ring: CommutativeRing,
    t: int,
    status: AuditStatus,
    witness: dict[str, Any] | None = None,
    detail: str = "",
    notes: Sequence[str] = (),
) -> AuditReport:
    return AuditReport(
        claim=claim,
        instance=make_instance(ring, None, None, t),
        status=status,
        witness=witness if status == AuditStatus.FAILS else None,
        detail=detail,
        notes=list(notes),
    )


def _verdict(ok: bool) -> AuditStatus:
    return AuditStatus.HOLDS if ok else AuditStatus.FAILS


def _nilpotent_witness(ring: CommutativeRing) -> dict[str, Any] | None:
    lit = ring.to_literal
    for x in ring.elements:
        if x != ring.zero and x in classify(ring).nilpotents:
            k = next(k for k in range(1, ring.order + 1) if ring.pow(x, k) == ring.zero)
            return {"nilpotent": lit(x), "exponent": k}
    return None


def _annihilator_note(ring: CommutativeRing) -> str:
    ok, b = annihilators_semiprime(ring)
    if ok:
        return "every (0:b), b != 0, is semiprime"
    return f"(0:{ring.to_literal(b)}) is not semiprime"


def audit_quotient_closure(ring, t, modules) -> AuditReport:
    claim = "quotient_closure"
    certificate = is_t_regular(ring, t)
    if not certificate.regular:
        return _report(claim, ring, t, AuditStatus.HYPOTHESIS_NOT_MET,
                       detail="ring is not t-regular",
                       notes=[f"failing a = {certificate.failing_a}"])
    proper = [i for i in enumerate_ideals(ring) if i.is_proper]
    for ideal in proper:
        quotient_certificate = is_t_regular(quotient_ring(ring, ideal), t)
        if not quotient_certificate.regular:
            return _report(claim, ring, t, AuditStatus.FAILS, {
                "ideal": ideal.to_report(),
                "failing_a": quotient_certificate.failing_a,
            })
    return _report(claim, ring, t, AuditStatus.HOLDS, detail=f"{len(proper)} quotients are t-regular")


def audit_domain_iff_field(ring, t, modules) -> AuditReport:
    claim = "domain_iff_field"
    info = classify(ring)
    regular = is_t_regular(ring, t).regular
    if not info.is_domain:
        notes = []
        if info.zero_divisor_pair:
            x, y = info.zero_divisor_pair
            notes.append(f"zero divisors {ring.to_literal(x)}·{ring.to_literal(y)} = 0")
        return _report(claim, ring, t, AuditStatus.HYPOTHESIS_NOT_MET, detail="not a domain", notes=notes)
    return _report(
        claim, ring, t, _verdict(regular == info.is_field),
        {"t_regular": regular, "field": info.is_field},
        detail=f"t-regular: {regular}, field: {info.is_field}",
    )


def audit_semiprime_implies_eps(ring, t, modules) -> AuditReport:
    claim = "semiprime_implies_eps"
    regular = is_t_regular(ring, t).regular
    semiprime, b = annihilators_semiprime(ring)
    conclusion = ring_eps_reduced(ring, t)
    if not (regular and semiprime):
        return _report(claim, ring, t, AuditStatus.HYPOTHESIS_NOT_MET,
                       detail="ring is not t-regular" if not regular else _annihilator_note(ring),
                       notes=[f"R is ε^{t}-reduced: {conclusion.reduced}"])
    return _report(claim, ring, t, _verdict(conclusion.reduced),
                   conclusion.to_witness(regular_module(ring)),
                   detail="R is ε^t-reduced" if conclusion.reduced else "")


def audit_thm_all_modules(ring, t, modules) -> AuditReport:
    """Every module, every cyclic module ε^t-reduced, and R t-regular, under the semiprime hypothesis."""
    claim = "thm_all_modules"
    regular = is_t_regular(ring, t).regular
    failing_module = next((m for m in modules if not is_eps_reduced(m, t).reduced), None)
    cyclic = [cyclic_quotient(ring, ideal) for ideal in enumerate_ideals(ring)]
    failing_cyclic = next((m for m in cyclic if not is_eps_reduced(m, t).reduced), None)
    every_module = failing_module is None
    every_cyclic = failing_cyclic is None
    agree = every_module == every_cyclic == regular
    summary = {"every_module": every_module, "every_cyclic": every_cyclic, "t_regular": regular}
    notes = ["every R-module is evaluated on the ring's module family"]
    hypothesis, _ = annihilators_semiprime(ring)
    if not hypothesis:
        notes.append(f"conclusion equivalence {'holds' if agree else 'fails'} on this instance: {summary}")
        return _report(claim, ring, t, AuditStatus.HYPOTHESIS_NOT_MET,
                       detail=_annihilator_note(ring), notes=notes)
    witness = dict(summary)
    if failing_module is not None:
        witness["module"] = failing_module.label
    if failing_cyclic is not None:
        witness["cyclic_module"] = failing_cyclic.label
    return _report(claim, ring, t, _verdict(agree), witness,
                   detail=f"{len(modules)} modules, {len(cyclic)} cyclic modules", notes=notes)


def audit_regular_iff(ring, t, modules) -> AuditReport:
    claim = "regular_iff"
    regular = is_t_regular(ring, 1).regular
    t_regular = is_t_regular(ring, t).regular
    bad_ideal: Ideal | None = next(
        (i for i in enumerate_ideals(ring) if not semiprimality(i).semiprime), None
    )
    all_semiprime = bad_ideal is None
    witness = {"regular": regular, "t_regular": t_regular, "all_ideals_semiprime": all_semiprime}
    if bad_ideal is not None:
        witness["non_semiprime_ideal"] = bad_ideal.to_report()
    return _report(claim, ring, t, _verdict(regular == (t_regular and all_semiprime)), witness,
                   detail=f"regular: {regular}, t-regular: {t_regular}, all ideals semiprime: {all_semiprime}")


def audit_scalar_restriction(ring, t, modules) -> AuditReport:
    """Restriction along every projection R → R/I of the regular R/I-module."""
    claim = "scalar_restriction"
    proper = [i for i in enumerate_ideals(ring) if i.is_proper]
    for ideal in proper:
        quotient = quotient_ring(ring, ideal)
        report = scalar_audit(projection(quotient), regular_module(quotient), t)
        if report.status == AuditStatus.FAILS:
            return _report(claim, ring, t, AuditStatus.FAILS,
                           {"ideal": ideal.to_report(), **report.witness})
    return _report(claim, ring, t, AuditStatus.HOLDS, detail=f"{len(proper)} projections")


def audit_cyclic_characterization(ring, t, modules) -> AuditReport:
    claim = "cyclic_characterization"
    for module in modules:
        whole = is_eps_reduced(module, t).reduced
        bad = next((c for c in cyclic_submodules(module) if not is_eps_reduced(c, t).reduced), None)
        if whole != (bad is None):
            witness = {"module": module.label, "eps_reduced": whole, "cyclic_submodules_eps_reduced": bad is None}
            if bad is not None:
                witness["submodule"] = bad.to_report()
            return _report(claim, ring, t, AuditStatus.FAILS, witness)
    return _report(claim, ring, t, AuditStatus.HOLDS, detail=f"{len(modules)} modules")


def _submodules_of_free(modules: Sequence[Module]) -> list[Module]:
    found: list[Module] = []
    for module in modules:
        if isinstance(module, PresentedModule) and module.is_free:
            found.append(module)
            found.extend(cyclic_submodules(module))
    return found


def audit_faithful(ring, t, modules) -> AuditReport:
    """Per a: R a^t-reduced ⇔ submodules of free modules are ⇔ some faithful module is."""
    claim = "faithful"
    regular = regular_module(ring)
    free_subs = _submodules_of_free(modules)
    faithful = [m for m in modules if is_faithful(m).faithful]
    for a in ring.elements:
        first = is_at_reduced(regular, a, t).reduced
        bad = next((m for m in free_subs if not is_at_reduced(m, a, t).reduced), None)
        third = bad is None
        fourth = any(is_at_reduced(m, a, t).reduced for m in faithful)
        if not first == third == fourth:
            witness = {
                "a": ring.to_literal(a),
                "ring_at_reduced": first,
                "free_submodules_at_reduced": third,
                "faithful_at_reduced_exists": fourth,
            }
            if bad is not None:
                witness["submodule"] = bad.label
            return _report(claim, ring, t, AuditStatus.FAILS, witness)
    return _report(claim, ring, t, AuditStatus.HOLDS,
                   detail=f"{len(free_subs)} submodules of free modules, {len(faithful)} faithful modules")


def audit_noeth_t_regular_implies_eps(ring, t, modules) -> AuditReport:
    claim = "noeth_t_regular_implies_eps"
    conclusion = ring_eps_reduced(ring, t)
    if not is_t_regular(ring, t).regular:
        return _report(claim, ring, t, AuditStatus.HYPOTHESIS_NOT_MET, detail="ring is not t-regular",
                       notes=[f"R is ε^{t}-reduced: {conclusion.reduced}"])
    return _report(claim, ring, t, _verdict(conclusion.reduced),
                   conclusion.to_witness(regular_module(ring)),
                   detail="t-regular and ε^t-reduced" if conclusion.reduced else "",
                   notes=[NOETHERIAN_NOTE])


def audit_noeth_reduced_iff_eps(ring, t, modules) -> AuditReport:
    claim = "noeth_reduced_iff_eps"
    reduced = classify(ring).is_reduced
    eps = ring_eps_reduced(ring, t).reduced
    witness = {"reduced": reduced, "eps_reduced": eps, **(_nilpotent_witness(ring) or {})}
    return _report(claim, ring, t, _verdict(reduced == eps), witness,
                   detail=f"reduced: {reduced}, ε^{t}-reduced: {eps}",
                   notes=[NOETHERIAN_NOTE, _annihilator_note(ring), FIXED_T_NOTE])


def audit_noeth_t_regular_iff_reduced(ring, t, modules) -> AuditReport:
    claim = "noeth_t_regular_iff_reduced"
    reduced = classify(ring).is_reduced
    regular = is_t_regular(ring, t).regular
    witness = {"t_regular": regular, "reduced": reduced, **(_nilpotent_witness(ring) or {})}
    return _report(claim, ring, t, _verdict(reduced == regular), witness,
                   detail=f"t-regular: {regular}, reduced: {reduced}",
                   notes=[NOETHERIAN_NOTE, _annihilator_note(ring), FIXED_T_NOTE])


def audit_implication_square(ring, t, modules) -> AuditReport:
    """reduced ⇒ a-reduced ⇒ a^t-reduced and reduced ⇒ ε^t-reduced ⇒ a^t-reduced."""
    claim = "implication_square"
    for module in modules:
        reduced = is_reduced(module).reduced
        eps = is_eps_reduced(module, t).reduced
        for a in ring.elements:
            a_reduced = is_at_reduced(module, a, 1).reduced
            at_reduced = is_at_reduced(module, a, t).reduced
            broken = None
            if reduced and not a_reduced:
                broken = "reduced => a-reduced"
            elif a_reduced and not at_reduced:
                broken = "a-reduced => a^t-reduced"
            elif reduced and not eps:
                broken = "reduced => ε^t-reduced"
            elif eps and not at_reduced:
                broken = "ε^t-reduced => a^t-reduced"
            if broken:
                return _report(claim, ring, t, AuditStatus.FAILS,
                               {"module": module.label, "a": ring.to_literal(a), "implication": broken})
    return _report(claim, ring, t, AuditStatus.HOLDS, detail=f"{len(modules)} modules")


def audit_reduced_examples(ring, t, modules) -> AuditReport:
    """Γ_a(M) = 0 gives a^t-reduced; free modules over an a^t-reduced ring are a^t-reduced."""
    claim = "reduced_examples"
    free = [m for m in modules if isinstance(m, PresentedModule) and m.is_free and m.rank <= 2]
    for a in ring.elements:
        for module in modules:
            if gamma(module, a).is_zero() and not is_at_reduced(module, a, t).reduced:
                return _report(claim, ring, t, AuditStatus.FAILS, {
                    "module": module.label, "a": ring.to_literal(a), "case": "a-torsion-free",
                })
        if is_at_reduced(regular_module(ring), a, t).reduced:
            for module in free:
                verdict = is_at_reduced(module, a, t)
                if not verdict.reduced:
                    return _report(claim, ring, t, AuditStatus.FAILS, {
                        "module": module.label, "case": "free", **verdict.to_witness(module),
                    })
    return _report(claim, ring, t, AuditStatus.HOLDS, detail=f"{len(modules)} modules, {len(free)} free")


def audit_quotient_images(ring, t, modules) -> AuditReport:
    """Quotients of an a^t-reduced module by cyclic submodules; the embedding hypothesis is not evaluated."""
    claim = "quotient_images"
    notes = ["embeddability hypothesis not evaluated: conclusion only"]
    checked = 0
    for module in modules:
        if not isinstance(module, PresentedModule):
            continue
        quotients = [(n, quotient_module(module, n)) for n in cyclic_submodules(module)]
        for a in ring.elements:
            if not is_at_reduced(module, a, t).reduced:
                continue
            for sub, quotient in quotients:
                checked += 1
                verdict = is_at_reduced(quotient, a, t)
                if not verdict.reduced:
                    return _report(claim, ring, t, AuditStatus.FAILS, {
                        "module": module.label,
                        "submodule": sub.to_report(),
                        **verdict.to_witness(quotient),
                    }, notes=notes)
    return _report(claim, ring, t, AuditStatus.HOLDS, detail=f"{checked} quotients", notes=notes)


def _module_annihilators_semiprime(modules: Sequence[Module]) -> tuple[bool, dict | None]:
    seen: set[frozenset] = set()
    for module in modules:
        ring = module.ring
        for m in module.elements:
            if m == module.zero:
                continue
            members = frozenset(r for r in ring.elements if module.smul(r, m) == module.zero)
            if members in seen:
                continue
            seen.add(members)
            if not semiprimality(Ideal(ring=ring, elements=members)).semiprime:
                return False, {"module": module.label, "m": module.to_literal(m)}
    return True, None


def audit_ann_semiprime_reduced_iff_eps(ring, t, modules) -> AuditReport:
    claim = "ann_semiprime_reduced_iff_eps"
    hypothesis, where = _module_annihilators_semiprime(modules)
    mismatch = next(
        (m for m in modules if is_reduced(m).reduced != is_eps_reduced(m, t).reduced), None
    )
    if not hypothesis:
        return _report(claim, ring, t, AuditStatus.HYPOTHESIS_NOT_MET,
                       detail=f"(0:m) not semiprime for m={where['m']} in {where['module']}",
                       notes=[f"reduced ⇔ ε^{t}-reduced on every family module: {mismatch is None}"])
    witness = None
    if mismatch is not None:
        witness = {
            "module": mismatch.label,
            "reduced": is_reduced(mismatch).reduced,
            "eps_reduced": is_eps_reduced(mismatch, t).reduced,
        }
    return _report(claim, ring, t, _verdict(mismatch is None), witness, detail=f"{len(modules)} modules")


def audit_noeth_fg_reduced_iff_eps(ring, t, modules) -> AuditReport:
    claim = "noeth_fg_reduced_iff_eps"
    for module in modules:
        reduced = is_reduced(module)
        eps = is_eps_reduced(module, t)
        if reduced.reduced != eps.reduced:
            return _report(claim, ring, t, AuditStatus.FAILS, {
                "module": module.label,
                "module_spec": module.spec_literal(),
                "reduced": reduced.reduced,
                "eps_reduced": eps.reduced,
                **(reduced.to_witness(module) or {}),
            }, notes=[NOETHERIAN_NOTE, FIXED_T_NOTE])
    return _report(claim, ring, t, AuditStatus.HOLDS, detail=f"{len(modules)} modules")


def audit_special_primary_t_regular(ring, t, modules) -> AuditReport:
    claim = "special_primary_t_regular"
    if not classify(ring).is_special_primary:
        return _report(claim, ring, t, AuditStatus.HYPOTHESIS_NOT_MET,
                       detail="some element is neither a unit nor nilpotent")
    certificate = is_t_regular(ring, t)
    return _report(claim, ring, t, _verdict(certificate.regular),
                   {"failing_a": certificate.failing_a, "t": t},
                   detail="special primary and t-regular" if certificate.regular else "",
                   notes=[FIXED_T_NOTE])


def audit_local_cohomology(ring, t, modules) -> AuditReport:
    """Degree-zero local cohomology at I = (a) over every a^t-reduced family module."""
    claim = "local_cohomology_degree_zero"
    met = 0
    for module in modules:
        for a in ring.elements:
            report = local_cohomology_zero(module, a, t)
            if report.status == AuditStatus.FAILS:
                return _report(claim, ring, t, AuditStatus.FAILS,
                               {"module": module.label, "a": ring.to_literal(a), **report.witness})
            if report.status == AuditStatus.HOLDS:
                met += 1
    if not met:
        return _report(claim, ring, t, AuditStatus.HYPOTHESIS_NOT_MET, detail="no a^t-reduced instance")
    return _report(claim, ring, t, AuditStatus.HOLDS, detail=f"{met} a^t-reduced instances")


RING_AUDITS: dict[str, Callable[[CommutativeRing, int, Sequence[Module]], AuditReport]] = {
    "quotient_closure": audit_quotient_closure,
    "domain_iff_field": audit_domain_iff_field,
    "semiprime_implies_eps": audit_semiprime_implies_eps,
    "thm_all_modules": audit_thm_all_modules,
    "regular_iff": audit_regular_iff,
    "scalar_restriction": audit_scalar_restriction,
    "cyclic_characterization": audit_cyclic_characterization,
    "faithful": audit_faithful,
    "noeth_t_regular_implies_eps": audit_noeth_t_regular_implies_eps,
    "noeth_reduced_iff_eps": audit_noeth_reduced_iff_eps,
    "noeth_t_regular_iff_reduced": audit_noeth_t_regular_iff_reduced,
    "implication_square": audit_implication_square,
    "reduced_examples": audit_reduced_examples,
    "quotient_images": audit_quotient_images,
    "ann_semiprime_reduced_iff_eps": audit_ann_semiprime_reduced_iff_eps,
    "noeth_fg_reduced_iff_eps": audit_noeth_fg_reduced_iff_eps,
    "special_primary_t_regular": audit_special_primary_t_regular,
    "local_cohomology_degree_zero": audit_local_cohomology,
}


def claim_audit(
    ring: CommutativeRing,
    t: int,
    claim: str,
    modules: Sequence[Module] | None = None,
) -> AuditReport:
    """Check one ring-level claim literally on (R, t).

    Args:
        ring: The ring under audit.
        t: The fixed exponent.
        claim: A key of RING_AUDITS.
        modules: Modules standing in for "every R-module"; the ring's family by default.

    Returns:
        The audit report; failing reports carry a witness.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    audit = RING_AUDITS.get(claim)
    if audit is None:
        raise BadConfig(f"unknown ring claim {claim!r}")
    modules = list(modules) if modules is not None else module_family(ring)
    report = audit(ring, t, modules)
    logger.debug(f"{claim} on {ring.label}, t={t}: {report.status.value}")
    return report
