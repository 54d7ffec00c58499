"""Classic paradoxical classes.

Each builder returns the class extension. The report functions pair it with
decide() and with the class's own uniform productive choice (identity for the
Russell-like classes, the surjection pivot for the diagonal class of a map,
F itself for images of injective maps, a pair for the ungrounded sets), so
every argument is replayed as a checked certificate.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .formula import class_extension, parse
from .guards import InputError, PreconditionError, check_budget
from .hf_store import MembershipGraph, SetHandle, SetStore
from .model import ClassRef, Structure, enumerate_structures, grounded_elements, in_n, structure_from_handles
from .productivity import add_verdict, decide
from .report import Report
from .rules import derived_class

logger = logging.getLogger(__name__)

RUSSELL_TERM = parse("{ x | x notin x }")

# x -> F(x) with the fixed parameter a = empty set where the map needs one
INJECTIVE_OPS: Dict[str, Callable[[SetStore, SetHandle], SetHandle]] = {
    'singleton': lambda store, x: store.singleton(x),
    'pair': lambda store, x: store.pair(x, store.empty),
    'successor': lambda store, x: store.successor(x),
    'ordered_pair': lambda store, x: store.ordered_pair(x, store.empty),
    'powerset': lambda store, x: store.powerset(x),
}

SIKIC_OPS = ('union', 'intersection')


@dataclass
class StoreUniverse:
    """A transitive family of store sets viewed as a finite structure"""
    store: SetStore
    handles: List[SetHandle]
    _structure: Optional[Structure] = field(default=None, init=False, repr=False)

    @classmethod
    def closure_of(cls, store: SetStore, roots: Sequence[SetHandle]) -> 'StoreUniverse':
        closed = set()
        for h in roots:
            closed |= store.transitive_closure(h)
        return cls(store, sorted(closed, key=store.sort_key))

    @property
    def structure(self) -> Structure:
        if self._structure is None:
            self._structure = structure_from_handles(self.store, self.handles)
        return self._structure

    def mask_of(self, predicate: Callable[[SetHandle], bool]) -> int:
        return sum(1 << i for i, h in enumerate(self.handles) if predicate(h))


# -- structure-level classes -------------------------------------------------

def russell_class(m: Structure) -> ClassRef:
    return class_extension(m, RUSSELL_TERM)


def rn_class(m: Structure, n: int) -> ClassRef:
    """Elements that are not n-cyclic"""
    if n < 1:
        raise PreconditionError(f"cycle length must be >= 1, got {n}")
    mask = sum(1 << e for e in m.domain if not in_n(m, e, e, n))
    return ClassRef.from_mask(mask, 'builder', f"rn:{n}")


def wf_class(m: Structure) -> ClassRef:
    return ClassRef(grounded_elements(m), 'builder', 'wf')


def sikic_class(m: Structure, F: Sequence[int]) -> ClassRef:
    """{d | d not in F(d)} for a map F whose values hit every represented set"""
    if len(F) != m.size or any(not 0 <= v < m.size for v in F):
        raise InputError(f"map must send each of the {m.size} elements to an element")
    hit = {m.extensions[v] for v in F}
    for e, ext in enumerate(m.extensions):
        if ext not in hit:
            raise PreconditionError(f"map is not surjective: the set {m.label(e)} is never a value")
    mask = sum(1 << d for d in m.domain if not m.member(d, F[d]))
    return ClassRef.from_mask(mask, 'builder', 'sikic')


def identity_choice_failures(m: Structure, mask: int) -> List[int]:
    """Elements inside the class where s -> s is not a productive choice"""
    return [e for e, ext in enumerate(m.extensions)
            if ext & ~mask == 0 and (not (mask >> e) & 1 or (ext >> e) & 1)]


def sikic_choice_failures(m: Structure, F: Sequence[int], mask: int) -> List[int]:
    failures = []
    for e, ext in enumerate(m.extensions):
        if ext & ~mask:
            continue
        pivot = next(d for d in m.domain if m.extensions[F[d]] == ext)
        if not (mask >> pivot) & 1 or (ext >> pivot) & 1:
            failures.append(e)
    return failures


def _structure_sweep(name: str, max_n: int, build: Callable[[Structure], ClassRef],
                     cap: int, unsafe: bool) -> Report:
    bounded = check_budget(max_n, cap, 'universe size', unsafe)
    report = Report(name, bounded=bounded)
    report.check(f"{name}:paradoxical", True)
    report.check(f"{name}:identity-productive", True)
    for n in range(max_n + 1):
        for m in enumerate_structures(n, up_to=max(n, cap), unsafe=unsafe):
            report.count('structures')
            C = build(m)
            verdict = decide(m, C)
            if not report.check(f"{name}:paradoxical", not verdict.is_set):
                report.counterexample(m.bitmap, f"{name} represented by {verdict.representative}")
            failures = identity_choice_failures(m, C.mask)
            if not report.check(f"{name}:identity-productive", not failures):
                report.counterexample(m.bitmap, f"{name} identity choice fails at {failures[0]}")
            report.count('witnesses', len(verdict.certificate))
    return report


def russell_report(max_n: int = 3, cap: int = 4, unsafe: bool = False) -> Report:
    return _structure_sweep('russell', max_n, russell_class, cap, unsafe)


def rn_report(n: int, max_n: int = 3, cap: int = 4, unsafe: bool = False) -> Report:
    return _structure_sweep(f"rn{n}", max_n, lambda m: rn_class(m, n), cap, unsafe)


def wf_report(max_n: int = 3, cap: int = 4, unsafe: bool = False) -> Report:
    return _structure_sweep('wf', max_n, wf_class, cap, unsafe)


def sikic_report(max_n: int = 3, cap: int = 3, unsafe: bool = False) -> Report:
    """Every surjective map on every structure up to max_n, then the union and intersection examples"""
    bounded = check_budget(max_n, cap, 'universe size', unsafe)
    report = Report('sikic', bounded=bounded)
    report.check('sikic:paradoxical', True)
    report.check('sikic:pivot-productive', True)
    for n in range(max_n + 1):
        for m in enumerate_structures(n, up_to=max(n, cap), unsafe=unsafe):
            for code in range(n ** n if n else 1):
                F = [(code // n ** d) % n for d in range(n)] if n else []
                try:
                    C = sikic_class(m, F)
                except PreconditionError:
                    report.count('non-surjective-maps')
                    continue
                report.count('surjective-maps')
                if not report.check('sikic:paradoxical', not decide(m, C).is_set):
                    report.counterexample(m.bitmap, f"map={F} class represented")
                failures = sikic_choice_failures(m, F, C.mask)
                if not report.check('sikic:pivot-productive', not failures):
                    report.counterexample(m.bitmap, f"map={F} pivot fails at {failures[0]}")
    store = SetStore()
    for op in SIKIC_OPS:
        report = report.merge(sikic_operation_report(store, op, 3))
    return report


def sikic_operation_report(store: SetStore, op: str, d: int, iterations: int = 1) -> Report:
    """x -> op^k(x) recovers every s from the pivot {...{s}...}, so it is onto V_(d-k)"""
    if op not in SIKIC_OPS:
        raise PreconditionError(f"unknown operation '{op}', expected one of {', '.join(SIKIC_OPS)}")
    if not 1 <= iterations < d:
        raise PreconditionError(f"iterations must be between 1 and {d - 1}")
    apply_op = store.union if op == 'union' else store.intersection

    def F(x: SetHandle) -> SetHandle:
        for _ in range(iterations):
            x = apply_op(x)
        return x

    universe = store.rank_universe(d)
    in_universe = set(universe)
    S = [x for x in universe if not store.contains(F(x), x)]
    members = set(S)
    name = f"sikic-{op}{iterations}"
    report = Report(name, bounded=True)
    report.check(f"{name}:pivot-recovers", True)
    report.check(f"{name}:pivot-productive", True)
    for s in store.rank_universe(d - iterations):
        pivot = s
        for _ in range(iterations):
            pivot = store.singleton(pivot)
        if not report.check(f"{name}:pivot-recovers", pivot in in_universe and F(pivot) == s):
            report.counterexample(store.format(s), f"{op} of the pivot does not give the set back")
            continue
        if all(x in members for x in store.members(s)):
            report.count('subsets-of-class')
            if not report.check(f"{name}:pivot-productive", pivot in members and not store.contains(s, pivot)):
                report.counterexample(store.format(s), f"pivot {store.format(pivot)} does not escape")
    u = StoreUniverse(store, universe)
    C = ClassRef.from_mask(u.mask_of(lambda h: h in members), 'builder', name)
    report.check(f"{name}:paradoxical", not decide(u.structure, C).is_set)
    report.count('class-size', len(S))
    return report


# -- store-level classes -----------------------------------------------------

def hyperset_universe(store: SetStore, d: int) -> StoreUniverse:
    """V_d with the self-loop, {Omega}, {0, Omega} and a two-cycle through the empty set"""
    omega = store.canonicalize(MembershipGraph(1, ((0, 0),), 0))
    # a = {b, 0}, b = {a}
    two_cycle = MembershipGraph(3, ((0, 1), (2, 1), (1, 2)), 1)
    a = store.canonicalize(two_cycle)
    roots = list(store.rank_universe(d)) + [omega, store.singleton(omega), store.pair(store.empty, omega), a]
    return StoreUniverse.closure_of(store, roots)


def ni_class(u: StoreUniverse) -> ClassRef:
    """Sets not isomorphic to any of their elements"""
    store = u.store
    mask = u.mask_of(lambda x: not any(store.is_isomorphic(x, y) for y in store.members(x)))
    return ClassRef.from_mask(mask, 'builder', 'ni')


def wf_store_class(u: StoreUniverse) -> ClassRef:
    return ClassRef.from_mask(u.mask_of(u.store.is_grounded), 'builder', 'wf')


def nwf_store_class(u: StoreUniverse) -> ClassRef:
    return ClassRef.from_mask(u.mask_of(lambda h: not u.store.is_grounded(h)), 'builder', 'nwf')


def store_class_report(name: str, u: StoreUniverse, C: ClassRef) -> Report:
    report = Report(name, bounded=True)
    m = u.structure
    verdict = decide(m, C)
    add_verdict(report, m, name, C, verdict)
    report.check(f"{name}:paradoxical", not verdict.is_set)
    failures = identity_choice_failures(m, C.mask)
    report.check(f"{name}:identity-productive", not failures)
    report.count('universe', len(u.handles))
    report.count('class-size', len(C.extension))
    return report


def ni_report(store: SetStore, d: int = 3) -> Report:
    u = hyperset_universe(store, d)
    return store_class_report('ni', u, ni_class(u))


def wf_store_report(store: SetStore, d: int = 3) -> Report:
    u = hyperset_universe(store, d)
    return store_class_report('wf-store', u, wf_store_class(u))


def injective_image(store: SetStore, op: str, d: int) -> Tuple[StoreUniverse, ClassRef, Dict[SetHandle, SetHandle]]:
    """{F(x) | F(x) not in x} for x in V_d, inside the transitive closure of V_d and F[V_d]"""
    if op not in INJECTIVE_OPS:
        raise PreconditionError(f"unknown injective map '{op}', expected one of {', '.join(INJECTIVE_OPS)}")
    base = store.rank_universe(d)
    values = {x: INJECTIVE_OPS[op](store, x) for x in base}
    if len(set(values.values())) != len(values):
        seen: Dict[SetHandle, SetHandle] = {}
        for x, y in values.items():
            if y in seen:
                raise PreconditionError(
                    f"{op} is not injective: {store.format(seen[y])} and {store.format(x)} have the same value")
            seen[y] = x
    image = {y for x, y in values.items() if not store.contains(x, y)}
    u = StoreUniverse.closure_of(store, base + list(values.values()))
    C = ClassRef.from_mask(u.mask_of(lambda h: h in image), 'builder', f"inj:{op}")
    return u, C, values


def injective_image_report(store: SetStore, op: str, d: int = 3) -> Report:
    u, C, values = injective_image(store, op, d)
    name = f"inj-{op}"
    report = Report(name, bounded=True)
    m = u.structure
    verdict = decide(m, C)
    report.check(f"{name}:paradoxical", not verdict.is_set)
    report.check(f"{name}:function-productive", True)
    image = {u.handles[i] for i in C.extension}
    for s, value in values.items():
        if all(x in image for x in u.store.members(s)):
            report.count('subsets-of-class')
            if not report.check(f"{name}:function-productive", value in image and not store.contains(s, value)):
                report.counterexample(store.format(s), f"{op} value does not escape")
    report.count('universe', len(u.handles))
    report.count('class-size', len(image))
    return report


def _random_graph(rng: random.Random) -> MembershipGraph:
    nodes = rng.randint(2, 4)
    edges = {(m, p) for m in range(nodes) for p in range(nodes) if rng.random() < 0.35}
    edges |= {(1, 0), (0, 1)}
    return MembershipGraph(nodes, tuple(sorted(edges)), 0)


def nwf_demo(stores: int = 100, seed: int = 0, max_subset_base: int = 6) -> Report:
    """Pair choice {x1, x2} on the ungrounded sets of randomly generated hyperset stores.

    x1 is the least member of s and x2 the least stored set outside the union
    of s; when no such x2 exists the case is counted, not assumed away. Each
    store then decides NWF over everything it holds, and the reference
    hyperset universe must find NWF paradoxical.
    """
    report = Report('nwf', bounded=True)
    report.check('nwf:pair-productive', True)
    for index in range(stores):
        rng = random.Random(seed * 100003 + index)
        store = SetStore()
        for _ in range(2):
            graph = _random_graph(rng)
            for root in range(graph.node_count):
                store.canonicalize(MembershipGraph(graph.node_count, graph.edges, root))
        universe = store.handles()
        nwf = [h for h in universe if not store.is_grounded(h)]
        report.count('stores')
        if not nwf:
            report.count('no-ungrounded-set')
            continue
        base = nwf[:max_subset_base]
        if len(nwf) > max_subset_base:
            report.count('truncated-stores')
        for mask in range(2 ** len(base)):
            s = [h for i, h in enumerate(base) if (mask >> i) & 1]
            report.count('subsets')
            if not s:
                report.check('nwf:pair-productive', not store.is_grounded(nwf[0]))
                continue
            union = set().union(*(store.member_ids(h) for h in s))
            x2 = next((h for h in universe if h.id not in union), None)
            if x2 is None:
                report.count('assumption-unmet')
                continue
            choice = store.pair(s[0], x2)
            if not report.check('nwf:pair-productive', not store.is_grounded(choice) and choice not in s):
                report.counterexample(f"store{index}", f"pair {store.format(choice)} does not escape")
        u = StoreUniverse(store, store.handles())
        verdict = decide(u.structure, nwf_store_class(u))
        report.count('nwf-set-in-store' if verdict.is_set else 'nwf-paradoxical-in-store')
    reference = hyperset_universe(SetStore(), 2)
    C = nwf_store_class(reference)
    verdict = decide(reference.structure, C)
    add_verdict(report, reference.structure, 'nwf', C, verdict)
    report.check('nwf:paradoxical', not verdict.is_set)
    logger.info(f"NWF demo: {report.counts.get('subsets', 0)} subsets over {stores} stores")
    return report


def classic_class(kind: str, context, *params) -> ClassRef:
    """Class extension of a named classic class in a structure or store universe"""
    if kind == 'russell':
        return russell_class(context)
    if kind == 'rn':
        return rn_class(context, int(params[0]))
    if kind == 'wf':
        return wf_class(context) if isinstance(context, Structure) else wf_store_class(context)
    if kind == 'nwf':
        return nwf_store_class(context)
    if kind == 'ni':
        return ni_class(context)
    if kind == 'sikic':
        return sikic_class(context, params[0])
    if kind == 'injective_image':
        return injective_image(context, params[0], int(params[1]) if len(params) > 1 else 3)[1]
    if kind == 'derived_system':
        return derived_class(context)
    raise PreconditionError(f"unknown class kind '{kind}'")
