"""Deciding paradoxicality by productive choices.

A class C of a structure is paradoxical when no element has C as its
extension. Equivalently there is a productive choice: for every element s
whose extension lies inside C, some x of C outside ext(s). decide() returns
either the representing element or such a choice, as a certificate that can be
re-checked with membership lookups alone.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Type

from .formula import Evaluator, enumerate_formulas, parse, to_text
from .guards import check_budget
from .hf_store import MembershipGraph, SetHandle, SetStore
from .model import ClassRef, Structure, enumerate_structures, extension_table, grounded_elements, is_represented
from .report import Report

logger = logging.getLogger(__name__)

STATUS_SET = 'set'
STATUS_PARADOXICAL = 'paradoxical'

# "C is not a set" and "every set inside C misses some element of C"
PRINCIPLE_LHS = parse("not exists s forall x (x in s <-> x in P)")
PRINCIPLE_RHS = parse("forall s ((forall x (x in s -> x in P)) -> exists x (x notin s and x in P))")


@dataclass(frozen=True)
class Verdict:
    status: str
    representative: Optional[int] = None
    certificate: Mapping[int, int] = field(default_factory=dict)

    @property
    def is_set(self) -> bool:
        return self.status == STATUS_SET


def _lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def decide(m: Structure, C: ClassRef) -> Verdict:
    C.check_within(m)
    representative = is_represented(m, C)
    if representative is not None:
        return Verdict(STATUS_SET, representative)
    mask = C.mask
    certificate: Dict[int, int] = {}
    for e, ext in enumerate(m.extensions):
        if ext & ~mask == 0:
            certificate[e] = _lowest_bit(mask & ~ext)
    return Verdict(STATUS_PARADOXICAL, certificate=certificate)


def validate_certificate(m: Structure, C: ClassRef, verdict: Verdict) -> bool:
    """Re-check a verdict using membership lookups only"""
    mask = C.mask
    if verdict.is_set:
        e = verdict.representative
        return e is not None and 0 <= e < m.size and m.extensions[e] == mask
    for e in m.domain:
        inside = all(not m.member(x, e) or (mask >> x) & 1 for x in m.domain)
        if not inside:
            continue
        x = verdict.certificate.get(e)
        if x is None or not (mask >> x) & 1 or m.member(x, e):
            return False
    return True


def add_verdict(report: Report, m: Structure, name: str, C: ClassRef, verdict: Verdict) -> None:
    report.check(f"certificate:{name}", validate_certificate(m, C, verdict))
    if verdict.is_set:
        report.verdict(f"{name} SET {m.label(verdict.representative)}")
    else:
        report.verdict(f"{name} PARADOXICAL")
    for e, x in sorted(verdict.certificate.items()):
        report.witness(C.mask, m.label(e), m.label(x))


# -- productivity principle --------------------------------------------------

def _escape_holds(extensions, mask: int) -> bool:
    return all(mask & ~ext for ext in extensions if ext & ~mask == 0)


def verify_principle_class_level(max_n: int, cap: int = 4, unsafe: bool = False) -> Report:
    """Not a set iff every set inside escapes, for every class of every structure up to max_n"""
    bounded = check_budget(max_n, cap, 'universe size', unsafe)
    report = Report('principle-class', bounded=bounded)
    report.check('principle-class', True)
    report.check('russell-unrepresented', True)
    for n in range(max_n + 1):
        logger.info(f"Class-level sweep over {2 ** (n * n)} structures of size {n}")
        for bitmap, extensions, russell in extension_table(n):
            report.count('structures')
            represented = set(extensions)
            for mask in range(2 ** n):
                report.count('classes')
                left = mask not in represented
                right = _escape_holds(extensions, mask)
                if left:
                    report.count('paradoxical')
                if left != right:
                    report.check('principle-class', False)
                    report.counterexample(bitmap, f"n={n} class={mask} left={left} right={right}")
            if russell in represented:
                report.check('russell-unrepresented', False)
                report.counterexample(bitmap, f"n={n} russell={russell} represented")
    logger.info(f"Class-level sweep done: {report.counts.get('classes', 0)} classes")
    return report


def verify_principle_formula_level(max_n: int, depth: int, evaluator: Type[Evaluator] = Evaluator,
                                   universe_cap: int = 3, depth_cap: int = 3,
                                   unsafe: bool = False) -> Report:
    """Both sides of the principle for every enumerated formula over every structure up to max_n.

    The sides are evaluated with the formula's extension bound to P, and are
    also compared against the answer computed directly from the extensions.
    """
    bounded = check_budget(max_n, universe_cap, 'universe size', unsafe)
    formulas = list(enumerate_formulas(depth, cap=depth_cap, unsafe=unsafe))
    bounded = bounded or depth > depth_cap
    report = Report('principle-formulas', bounded=bounded)
    report.check('principle', True)
    report.count('formulas', len(formulas))
    for n in range(max_n + 1):
        logger.info(f"Formula-level sweep: {len(formulas)} formulas over structures of size {n}")
        for m in enumerate_structures(n, up_to=max(n, universe_cap), unsafe=unsafe):
            report.count('structures')
            ev = evaluator(m)
            sides: Dict[int, Tuple[bool, bool]] = {}
            for phi in formulas:
                mask = 0
                for e in m.domain:
                    if ev.evaluate(phi, {'x': e}):
                        mask |= 1 << e
                if mask not in sides:
                    env = {'P': mask}
                    sides[mask] = (ev.evaluate(PRINCIPLE_LHS, env), ev.evaluate(PRINCIPLE_RHS, env))
                lhs, rhs = sides[mask]
                report.count('evaluations')
                expected_lhs = mask not in m.extensions
                expected_rhs = _escape_holds(m.extensions, mask)
                if lhs != rhs or lhs != expected_lhs or rhs != expected_rhs:
                    report.check('principle', False)
                    report.counterexample(m.bitmap, f"n={n} phi={to_text(phi)} lhs={lhs} rhs={rhs}")
    logger.info(f"Formula-level sweep done: {report.counts.get('evaluations', 0)} evaluations")
    return report


def sweep_certificates(max_n: int, cap: int = 4, unsafe: bool = False) -> Report:
    """decide() and certificate re-validation on every class of every structure up to max_n"""
    bounded = check_budget(max_n, cap, 'universe size', unsafe)
    report = Report('certificates', bounded=bounded)
    report.check('certificate-soundness', True)
    report.check('decide-matches-representation', True)
    for n in range(max_n + 1):
        for m in enumerate_structures(n, up_to=max(n, cap), unsafe=unsafe):
            for mask in range(2 ** n):
                C = ClassRef.from_mask(mask)
                verdict = decide(m, C)
                report.count('verdicts')
                if not validate_certificate(m, C, verdict):
                    report.check('certificate-soundness', False)
                    report.counterexample(m.bitmap, f"class={mask} invalid certificate")
                if verdict.is_set != (is_represented(m, C) is not None):
                    report.check('decide-matches-representation', False)
                    report.counterexample(m.bitmap, f"class={mask} verdict disagrees with representation")
    return report


# -- identity-productive classes ---------------------------------------------

def identity_productive_family(m: Structure) -> List[int]:
    """Classes C with: ext(e) inside C implies e in C and e not in e"""
    family = []
    for mask in range(2 ** m.size):
        if all(ext & ~mask or ((mask >> e) & 1 and not (ext >> e) & 1)
               for e, ext in enumerate(m.extensions)):
            family.append(mask)
    return family


def identity_productive_report(m: Structure, report: Optional[Report] = None) -> Report:
    report = report or Report('identity-productive')
    family = identity_productive_family(m)
    members = set(family)
    report.count('identity-productive-classes', len(family))

    closed = all(a & b in members for a in family for b in family)
    if not report.check('intersection-closed', closed):
        report.counterexample(m.bitmap, "identity-productive classes not closed under intersection")

    wf = sum(1 << e for e in grounded_elements(m))
    least = wf in members and all(wf & ~c == 0 for c in family)
    if not report.check('wf-least', least):
        report.counterexample(m.bitmap, f"grounded class {wf} is not the least identity-productive class")

    russell = sum(1 << e for e in m.domain if not m.member(e, e))
    for c in family:
        transitive = all(m.extensions[e] & ~c == 0 for e in m.domain if (c >> e) & 1)
        if transitive:
            report.count('transitive-members')
            if not report.check('transitive-in-russell', c & ~russell == 0):
                report.counterexample(m.bitmap, f"transitive class {c} leaves the Russell class")
    if 0 in members:
        report.count('vacuous-empty-class')
    return report


def sweep_identity_productive(max_n: int, cap: int = 4, unsafe: bool = False) -> Report:
    bounded = check_budget(max_n, cap, 'universe size', unsafe)
    report = Report('identity-productive', bounded=bounded)
    for check in ('intersection-closed', 'wf-least', 'transitive-in-russell'):
        report.check(check, True)
    for n in range(max_n + 1):
        for m in enumerate_structures(n, up_to=max(n, cap), unsafe=unsafe):
            report.count('structures')
            identity_productive_report(m, report)
    report.note("the empty class qualifies whenever no element has an empty extension")
    return report


# -- productive sequences on the store ---------------------------------------

def productive_sequence(store: SetStore, d: int,
                        choice: Optional[Callable[[SetHandle], SetHandle]] = None) -> Tuple[List[SetHandle], Report]:
    """Iterate a productive choice from the empty set inside V_d.

    x0 = F(empty), x(k+1) = F({x0, ..., xk}); with Russell's class and the
    identity choice the terms are the von Neumann ordinals below d.
    """
    choice = choice or (lambda s: s)
    report = Report('productive-sequence')
    terms: List[SetHandle] = []
    while True:
        s = store.make(terms)
        x = choice(s)
        rank = store.rank(x)
        if rank is None or rank >= d:
            break
        report.check('escapes', not store.contains(s, x))
        report.check('in-russell-class', not store.contains(x, x))
        report.check('is-ordinal', x == store.ordinal(len(terms)))
        report.member(len(terms), store.format(x))
        terms.append(x)
    report.count('terms', len(terms))
    return terms, report


def diagonal_of(store: SetStore, s: SetHandle) -> SetHandle:
    """{x in s | x not in x}"""
    return store.make(x for x in store.members(s) if not store.contains(x, x))


def universe_diagonal_report(store: SetStore, d: int, with_omega: bool = True) -> Report:
    """The diagonal of s is never a member of s; ORD is not closed under it on subsets"""
    universe = list(store.rank_universe(d))
    if with_omega:
        omega = store.canonicalize(_self_loop())
        universe += [omega] + [store.adjoin(s, omega) for s in store.rank_universe(d)]
    report = Report('universe-diagonal')
    report.check('diagonal-escapes', True)
    for s in universe:
        report.count('sets')
        if store.contains(s, diagonal_of(store, s)):
            report.check('diagonal-escapes', False)
            report.counterexample(store.format(s), "diagonal is a member")

    ordinals = [store.ordinal(k) for k in range(d)]
    escaped = None
    for mask in range(2 ** len(ordinals)):
        s = store.make(o for i, o in enumerate(ordinals) if (mask >> i) & 1)
        delta = diagonal_of(store, s)
        if not _is_ordinal(store, delta):
            escaped = (s, delta)
            break
    closed = escaped is None
    report.check('ord-not-closed-under-diagonal', not closed or d < 2)
    if escaped:
        report.note(f"diagonal of {store.format(escaped[0])} is {store.format(escaped[1])}, not an ordinal")
    return report


def _is_ordinal(store: SetStore, s: SetHandle) -> bool:
    if not store.is_grounded(s):
        return False
    return s == store.ordinal(len(store.members(s)))


def _self_loop() -> MembershipGraph:
    return MembershipGraph(1, ((0, 0),), 0)
