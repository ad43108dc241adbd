"""Localization, restriction of scalars and the polynomial-ring identity."""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable

from app.config import get_settings
from app.exceptions import OracleMismatch, RingMismatch
from app.models.report import AuditReport, AuditStatus
from app.services.modules import Module, check_module_axioms, regular_module
from app.services.ring_core import CommutativeRing, RingHom, check_ring_axioms
from app.services.torsion import gln, is_eps_reduced, make_instance, torsion_chain
from app.utils.helpers import ensure_budget

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MultSet:
    """A multiplicatively closed subset containing 1."""
    ring: CommutativeRing
    elements: frozenset
    generators: tuple = field(default=(), compare=False)

    @cached_property
    def sorted_elements(self) -> list:
        return self.ring.sort(self.elements)

    def verify(self) -> None:
        ring = self.ring
        if ring.one not in self.elements:
            raise OracleMismatch("multiplicative set lacks 1")
        for s, u in itertools.product(self.elements, repeat=2):
            if ring.mul(s, u) not in self.elements:
                raise OracleMismatch("multiplicative set is not closed")


def mult_set_closure(ring: CommutativeRing, gens: Iterable) -> MultSet:
    """Smallest multiplicatively closed set containing gens and 1."""
    gens = tuple(gens)
    ring.check(*gens)
    closed = {ring.one}
    frontier = [ring.one]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                p = ring.mul(s, g)
                if p not in closed:
                    closed.add(p)
                    nxt.append(p)
        frontier = nxt
    mult_set = MultSet(ring=ring, elements=frozenset(closed), generators=gens)
    mult_set.verify()
    return mult_set


def _set_label(mult_set: MultSet) -> str:
    lit = mult_set.ring.to_literal
    gens = ",".join(str(lit(g)) for g in mult_set.generators) or "1"
    return f"[1/{gens}]"


class LocalizedRing(CommutativeRing):
    """S⁻¹R: pairs (r, s) up to u(rs' − r's) = 0, each class represented by its first pair."""

    def __init__(self, base: CommutativeRing, mult_set: MultSet):
        if mult_set.ring != base:
            raise RingMismatch("multiplicative set belongs to a different ring")
        budget = get_settings().max_elems
        ensure_budget(f"pairs of {base.label}{_set_label(mult_set)}", base.order * len(mult_set.elements), budget)
        self.base = base
        self.mult_set = mult_set
        denominators = mult_set.sorted_elements
        canon: dict = {}
        reps: list = []
        for r in base.elements:
            for s in denominators:
                pair = (r, s)
                for rep in reps:
                    if self._equivalent(pair, rep):
                        canon[pair] = rep
                        break
                else:
                    reps.append(pair)
                    canon[pair] = pair
        self._canon = canon
        self._reps = tuple(reps)
        self.canonical: RingHom | None = None

    def _equivalent(self, p: tuple, q: tuple) -> bool:
        base = self.base
        diff = base.sub(base.mul(p[0], q[1]), base.mul(q[0], p[1]))
        return any(base.mul(u, diff) == base.zero for u in self.mult_set.elements)

    @property
    def elements(self) -> tuple:
        return self._reps

    @property
    def zero(self):
        return self._canon[(self.base.zero, self.base.one)]

    @property
    def one(self):
        return self._canon[(self.base.one, self.base.one)]

    @cached_property
    def label(self) -> str:
        return f"{self.base.label}{_set_label(self.mult_set)}"

    def canon(self, r, s):
        return self._canon[(r, s)]

    def add(self, x, y):
        base = self.base
        num = base.add(base.mul(x[0], y[1]), base.mul(y[0], x[1]))
        return self._canon[(num, base.mul(x[1], y[1]))]

    def neg(self, x):
        return self._canon[(self.base.neg(x[0]), x[1])]

    def mul(self, x, y):
        base = self.base
        return self._canon[(base.mul(x[0], y[0]), base.mul(x[1], y[1]))]

    def fraction(self, r):
        """The canonical image r/1."""
        return self._canon[(r, self.base.one)]

    def to_literal(self, x) -> Any:
        lit = self.base.to_literal
        return [lit(x[0]), lit(x[1])]

    def element(self, literal):
        """Parse a base-ring literal as the fraction literal/1."""
        return self.fraction(self.base.element(literal))

    def well_defined(self) -> None:
        """Class arithmetic must not depend on the chosen representatives."""
        base = self.base
        for p, q in itertools.product(self._canon, repeat=2):
            rp, rq = self._canon[p], self._canon[q]
            num = base.add(base.mul(p[0], q[1]), base.mul(q[0], p[1]))
            if self._canon[(num, base.mul(p[1], q[1]))] != self.add(rp, rq):
                raise OracleMismatch(f"{self.label}: addition depends on representatives")
            if self._canon[(base.mul(p[0], q[0]), base.mul(p[1], q[1]))] != self.mul(rp, rq):
                raise OracleMismatch(f"{self.label}: multiplication depends on representatives")

    def canonical_map(self) -> RingHom:
        return RingHom.from_table(self.base, self, {r: self.fraction(r) for r in self.base.elements})


class LocalizedModule(Module):
    """S⁻¹M over S⁻¹R: pairs (m, s) up to u(s'm − sm') = 0."""

    def __init__(self, base: Module, ring: LocalizedRing):
        if base.ring != ring.base:
            raise RingMismatch("module and localization live over different rings")
        budget = get_settings().max_elems
        mult_set = ring.mult_set
        ensure_budget(f"pairs of S⁻¹({base.label})", base.size * len(mult_set.elements), budget)
        self.base = base
        self._ring = ring
        canon: dict = {}
        reps: list = []
        for m in base.elements:
            for s in mult_set.sorted_elements:
                pair = (m, s)
                for rep in reps:
                    if self._equivalent(pair, rep):
                        canon[pair] = rep
                        break
                else:
                    reps.append(pair)
                    canon[pair] = pair
        self._canon = canon
        self._reps = tuple(reps)

    def _equivalent(self, p: tuple, q: tuple) -> bool:
        base = self.base
        diff = base.sub(base.smul(q[1], p[0]), base.smul(p[1], q[0]))
        return any(base.smul(u, diff) == base.zero for u in self._ring.mult_set.elements)

    @property
    def ring(self) -> LocalizedRing:
        return self._ring

    @property
    def elements(self) -> tuple:
        return self._reps

    @property
    def zero(self):
        return self._canon[(self.base.zero, self._ring.base.one)]

    @cached_property
    def label(self) -> str:
        return f"{self.base.label}{_set_label(self._ring.mult_set)}"

    def add(self, m, n):
        base, r = self.base, self._ring.base
        num = base.add(base.smul(n[1], m[0]), base.smul(m[1], n[0]))
        return self._canon[(num, r.mul(m[1], n[1]))]

    def neg(self, m):
        return self._canon[(self.base.neg(m[0]), m[1])]

    def smul(self, x, m):
        return self._canon[(self.base.smul(x[0], m[0]), self._ring.base.mul(x[1], m[1]))]

    def fraction(self, m):
        return self._canon[(m, self._ring.base.one)]

    def to_literal(self, m) -> Any:
        return [self.base.to_literal(m[0]), self._ring.base.to_literal(m[1])]


def localize(ring: CommutativeRing, mult_set: MultSet) -> LocalizedRing:
    """S⁻¹R with its arithmetic and axioms re-verified exhaustively."""
    localized = LocalizedRing(ring, mult_set)
    localized.well_defined()
    violation = check_ring_axioms(localized)
    if violation is not None:
        raise OracleMismatch(f"{localized.label} violates a ring axiom: {violation}")
    localized.canonical = localized.canonical_map()
    logger.debug(f"Localized {ring.label} to {len(localized.elements)} classes")
    return localized


def localize_module(module: Module, mult_set: MultSet, ring: LocalizedRing | None = None) -> LocalizedModule:
    ring = ring if ring is not None else localize(module.ring, mult_set)
    localized = LocalizedModule(module, ring)
    violation = check_module_axioms(localized)
    if violation is not None:
        raise OracleMismatch(f"{localized.label} violates a module axiom: {violation}")
    return localized


def localization_audit(module: Module, mult_set: MultSet, t: int) -> AuditReport:
    """M ε^t-reduced over R versus S⁻¹M ε^t-reduced over S⁻¹R, each side computed directly."""
    ring = module.ring
    localized_ring = localize(ring, mult_set)
    localized = localize_module(module, mult_set, localized_ring)
    original = is_eps_reduced(module, t)
    local = is_eps_reduced(localized, t)
    embedded = len({localized.fraction(m) for m in module.elements}) == module.size
    kernel_size = sum(1 for r in ring.elements if localized_ring.canonical(r) == localized_ring.zero)
    notes = [
        f"S = {[ring.to_literal(s) for s in mult_set.sorted_elements]}",
        f"M -> S⁻¹M is {'injective' if embedded else 'not injective'}",
        f"R -> S⁻¹R verified, kernel of size {kernel_size}",
    ]
    ok = original.reduced == local.reduced
    if not ok:
        notes.append("the converse direction relies on M embedding in S⁻¹M")
    return AuditReport(
        claim="localization",
        instance=make_instance(ring, module, None, t),
        status=AuditStatus.HOLDS if ok else AuditStatus.FAILS,
        witness=None if ok else {
            "mult_set": [ring.to_literal(s) for s in mult_set.sorted_elements],
            "module_eps_reduced": original.reduced,
            "localized_eps_reduced": local.reduced,
            "module_witness": original.to_witness(module),
            "localized_witness": local.to_witness(localized),
        },
        detail=(
            f"M {'is' if original.reduced else 'is not'} and S⁻¹M "
            f"{'is' if local.reduced else 'is not'} ε^{t}-reduced"
        ),
        notes=notes,
    )


class RestrictedModule(Module):
    """M viewed over the source of f: r·m := f(r)m."""

    def __init__(self, hom: RingHom, base: Module):
        if base.ring != hom.target:
            raise RingMismatch(f"{base.label} is not a module over {hom.target.label}")
        self.hom = hom
        self.base = base

    @property
    def ring(self) -> CommutativeRing:
        return self.hom.source

    @property
    def elements(self) -> tuple:
        return self.base.elements

    @property
    def zero(self):
        return self.base.zero

    @cached_property
    def label(self) -> str:
        return f"{self.base.label} over {self.hom.source.label}"

    def add(self, m, n):
        return self.base.add(m, n)

    def neg(self, m):
        return self.base.neg(m)

    def smul(self, r, m):
        return self.base.smul(self.hom(r), m)

    def to_literal(self, m) -> Any:
        return self.base.to_literal(m)


def _is_identity(hom: RingHom) -> bool:
    return hom.source is hom.target and all(hom(x) == x for x in hom.source.elements)


def restrict_scalars(hom: RingHom, module: Module) -> Module:
    """_R M from _S M along f: R → S; the identity map returns M itself."""
    if module.ring != hom.target:
        raise RingMismatch(f"{module.label} is not a module over {hom.target.label}")
    if _is_identity(hom):
        return module
    return RestrictedModule(hom, module)


def scalar_audit(hom: RingHom, module: Module, t: int) -> AuditReport:
    """_S M ε^t-reduced ⇒ _R M is; and, for surjective f, the converse."""
    restricted = restrict_scalars(hom, module)
    over_target = is_eps_reduced(module, t)
    over_source = is_eps_reduced(restricted, t)
    first = not over_target.reduced or over_source.reduced
    second = not hom.surjective or not over_source.reduced or over_target.reduced
    ok = first and second
    witness = None
    if not ok:
        witness = {
            "implication": "S to R" if not first else "R to S",
            "target_eps_reduced": over_target.reduced,
            "source_eps_reduced": over_source.reduced,
            "source_witness": over_source.to_witness(restricted),
            "target_witness": over_target.to_witness(module),
        }
    return AuditReport(
        claim="scalar",
        instance=make_instance(hom.source, restricted, None, t),
        status=AuditStatus.HOLDS if ok else AuditStatus.FAILS,
        witness=witness,
        detail=(
            f"_S M ε^{t}-reduced: {over_target.reduced}, _R M ε^{t}-reduced: {over_source.reduced}, "
            f"f surjective: {hom.surjective}"
        ),
        notes=[] if hom.surjective else ["converse not evaluated: f is not surjective"],
    )


def poly_gln_check(ring: CommutativeRing, a, t: int, degree: int) -> AuditReport:
    """a^tΓ_a(R)[x] = a^tΓ_a(R[x]) on polynomials of degree at most ``degree``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if degree < 0:
        raise ValueError("degree must be >= 0")
    ensure_budget(
        f"polynomials of degree <= {degree} over {ring.label}",
        ring.order ** (degree + 1),
        get_settings().max_elems,
    )
    regular = regular_module(ring)
    bound = torsion_chain(regular, a).stabilization_index
    zero = ring.zero
    at = ring.pow(a, t)
    powers = [ring.pow(a, k) for k in range(1, bound + 1)]

    torsion_polys = [
        p for p in itertools.product(ring.elements, repeat=degree + 1)
        if any(all(ring.mul(ak, c) == zero for c in p) for ak in powers)
    ]
    lhs = {tuple(ring.mul(at, c) for c in p) for p in torsion_polys}

    coefficients = [m.vector[0] for m in gln(regular, a, t).members]
    rhs = set(itertools.product(coefficients, repeat=degree + 1))

    lit = ring.to_literal

    def key(p):
        return [ring.index(c) for c in p]

    ok = lhs == rhs
    reduced = len(coefficients) == 1
    witness = None
    if not ok:
        witness = {
            "a": lit(a),
            "degree": degree,
            "only_in_polynomial_side": [[lit(c) for c in p] for p in sorted(lhs - rhs, key=key)[:5]],
            "only_in_coefficient_side": [[lit(c) for c in p] for p in sorted(rhs - lhs, key=key)[:5]],
        }
    return AuditReport(
        claim="poly",
        instance=make_instance(ring, regular, a, t),
        status=AuditStatus.HOLDS if ok else AuditStatus.FAILS,
        witness=witness,
        detail=(
            f"{len(lhs)} polynomials of degree <= {degree} on each side; "
            f"R and R[x] {'are' if reduced else 'are not'} a^{t}-reduced"
        ) if ok else "",
    )
