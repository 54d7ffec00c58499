"""Systems of rules and the monotone operators they induce.

A rule is a pair (premise, conclusion), written premise |- conclusion. Over an
abstract space the rules are listed explicitly. Over a store space (grounded
sets of rank <= K) they come from schemas, expanded on demand:

    singleton, powerset, union, constant   members(x) |- F(x)
    adjoin                                 {x, y} |- x u {y}, and {} |- {}
    successor                              {x} |- x u {x}

Conclusions above rank K are dropped; results over store spaces are
therefore bounded.
"""
import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from .guards import InputError, PreconditionError, check_budget, validate_input
from .hf_store import SetHandle, SetStore
from .model import ClassRef
from .report import Report

logger = logging.getLogger(__name__)

FUNCTION_SCHEMAS = ('singleton', 'powerset', 'union', 'constant')
SCHEMAS = FUNCTION_SCHEMAS + ('adjoin', 'successor')

Rule = Tuple[FrozenSet[Hashable], Hashable]

# Enumerate subsets of a premise pool only while that is cheaper than scanning the space
MAX_POOL_FOR_SUBSETS = 12


class RuleSystem:
    """Rules over an abstract space, or schemas over a rank-bounded store space"""

    def __init__(self, objects: Sequence[str] = (), rules: Iterable[Rule] = (),
                 schemas: Sequence[str] = (), store: Optional[SetStore] = None,
                 rank_budget: Optional[int] = None):
        if store is not None and rank_budget is None:
            raise PreconditionError("a store space needs a rank budget")
        if store is None and schemas:
            raise PreconditionError("schemas need a store space")
        for schema in schemas:
            if schema not in SCHEMAS:
                raise PreconditionError(f"unknown schema '{schema}', expected one of {', '.join(SCHEMAS)}")
        self.objects = tuple(objects)
        self.rules: Tuple[Rule, ...] = tuple(rules)
        self.schemas = tuple(schemas)
        self.store = store
        self.rank_budget = rank_budget
        self.truncated = 0
        self._space: Optional[List[Hashable]] = None
        self._index: Dict[Hashable, int] = {}
        for premise, conclusion in self.rules:
            if store is None and (conclusion not in self.objects or not premise <= set(self.objects)):
                raise InputError(f"rule {sorted(premise)} -> {conclusion} leaves the space")

    @property
    def is_store(self) -> bool:
        return self.store is not None

    @property
    def bounded(self) -> bool:
        return self.is_store

    def space(self) -> List[Hashable]:
        if self._space is None:
            if self.is_store:
                self._space = list(self.store.rank_universe(self.rank_budget + 1))
            else:
                self._space = list(self.objects)
            self._index = {x: i for i, x in enumerate(self._space)}
        return self._space

    def sort_key(self, x: Hashable):
        if self.is_store:
            return self.store.sort_key(x)
        self.space()
        return self._index[x]

    def label(self, x: Hashable) -> str:
        return self.store.format(x) if self.is_store else str(x)

    def render_set(self, xs: Iterable[Hashable]) -> str:
        return '{' + ','.join(self.label(x) for x in sorted(xs, key=self.sort_key)) + '}'

    def render_rule(self, rule: Rule) -> str:
        return f"{self.render_set(rule[0])}|-{self.label(rule[1])}"

    # -- schema expansion ----------------------------------------------------

    def _within_budget(self, x: SetHandle) -> bool:
        rank = self.store.rank(x)
        if rank is None or rank > self.rank_budget:
            self.truncated += 1
            return False
        return True

    def _arguments(self, pool: Optional[FrozenSet[SetHandle]]) -> Iterator[SetHandle]:
        """Store sets of rank <= K whose members all lie in pool"""
        if pool is None:
            yield from self.space()
            return
        if len(pool) > MAX_POOL_FOR_SUBSETS:
            ids = {h.id for h in pool}
            yield from (x for x in self.space() if self.store.member_ids(x) <= ids)
            return
        ordered = sorted(pool, key=self.store.sort_key)
        for size in range(len(ordered) + 1):
            for combo in itertools.combinations(ordered, size):
                x = self.store.make(combo)
                if self.store.rank(x) <= self.rank_budget:
                    yield x

    def _schema_rules(self, schema: str, pool: Optional[FrozenSet[SetHandle]]) -> Iterator[Rule]:
        store = self.store
        if schema in FUNCTION_SCHEMAS:
            for x in self._arguments(pool):
                if schema == 'singleton':
                    value = store.singleton(x)
                elif schema == 'powerset':
                    value = store.powerset(x)
                elif schema == 'union':
                    value = store.union(x)
                else:
                    value = store.empty
                if self._within_budget(value):
                    yield frozenset(store.members(x)), value
        elif schema == 'successor':
            for x in (self.space() if pool is None else sorted(pool, key=store.sort_key)):
                value = store.successor(x)
                if self._within_budget(value):
                    yield frozenset({x}), value
        else:
            yield frozenset(), store.empty
            items = self.space() if pool is None else sorted(pool, key=store.sort_key)
            for x in items:
                for y in items:
                    value = store.adjoin(x, y)
                    if self._within_budget(value):
                        yield frozenset({x, y}), value

    def derivations(self, pool: Optional[Iterable[Hashable]] = None) -> Iterator[Rule]:
        """Rules whose premise lies inside pool (all rules when pool is None)"""
        within = None if pool is None else frozenset(pool)
        for premise, conclusion in self.rules:
            if within is None or premise <= within:
                yield premise, conclusion
        for schema in self.schemas:
            yield from self._schema_rules(schema, within)

    def all_rules(self) -> List[Rule]:
        return list(dict.fromkeys(self.derivations()))


def parse_rules(text: str, store: Optional[SetStore] = None) -> RuleSystem:
    """Read the rules file format (`space ...` or `store rank<=K`, then rule and schema lines)"""
    objects: Optional[List[str]] = None
    rank_budget: Optional[int] = None
    rules: List[Rule] = []
    schemas: List[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(' ')
        rest = rest.strip()
        if head in ('space', 'store'):
            if objects is not None or rank_budget is not None:
                raise InputError("second space declaration", line=lineno)
            if head == 'space':
                objects = rest.split()
                for name in objects:
                    if not validate_input(name, 'element_name'):
                        raise InputError(f"invalid object name '{name}'", line=lineno)
                if len(set(objects)) != len(objects):
                    raise InputError("duplicate object name", line=lineno)
            else:
                declared = rest.replace(' ', '')
                if not declared.startswith('rank<=') or not declared[6:].isdigit():
                    raise InputError(f"expected 'store rank<=K', got '{line}'", line=lineno)
                rank_budget = int(declared[6:])
        elif head == 'rule':
            if objects is None:
                raise InputError("rule lines need a 'space' declaration first", line=lineno)
            premise_text, arrow, conclusion = rest.partition('->')
            premise_text = premise_text.strip()
            conclusion = conclusion.strip()
            if not arrow or not premise_text.startswith('{') or not premise_text.endswith('}'):
                raise InputError(f"expected 'rule {{a,b}} -> c', got '{line}'", line=lineno)
            names = [n.strip() for n in premise_text[1:-1].split(',') if n.strip()]
            for name in names + [conclusion]:
                if name not in objects:
                    raise InputError(f"unknown object '{name}'", line=lineno)
            rules.append((frozenset(names), conclusion))
        elif head == 'schema':
            if rank_budget is None:
                raise InputError("schema lines need a 'store rank<=K' declaration first", line=lineno)
            if rest not in SCHEMAS:
                raise InputError(f"unknown schema '{rest}'", line=lineno)
            schemas.append(rest)
        else:
            raise InputError(f"cannot parse '{line}'", line=lineno)
    if objects is None and rank_budget is None:
        raise InputError("missing 'space' or 'store' declaration")
    if rank_budget is not None:
        return RuleSystem(schemas=schemas, store=store or SetStore(), rank_budget=rank_budget)
    return RuleSystem(objects, rules)


# -- analysis ------------------------------------------------------------------

@dataclass
class Validation:
    deterministic: bool
    deterministic_counterexample: Optional[Tuple[Hashable, FrozenSet, FrozenSet]]
    is_global: bool
    global_counterexample: Optional[FrozenSet]
    bounded: bool
    rule_count: int


def validate(system: RuleSystem, space_cap: int = 16, unsafe: bool = False) -> Validation:
    """Determinism over all rule pairs; globality over all subsets (bounded on store spaces)"""
    rules = system.all_rules()
    premises_of: Dict[Hashable, List[FrozenSet]] = {}
    for premise, conclusion in rules:
        premises_of.setdefault(conclusion, []).append(premise)
    collision = None
    for conclusion in sorted(premises_of, key=system.sort_key):
        distinct = sorted(set(premises_of[conclusion]), key=lambda p: sorted(system.sort_key(x) for x in p))
        if len(distinct) > 1:
            collision = (conclusion, distinct[0], distinct[1])
            break

    with_rule = {premise for premise, _ in rules}
    missing = None
    if system.is_store:
        # premises are members(x) for x in the space
        for x in system.space():
            premise = frozenset(system.store.members(x))
            if premise not in with_rule:
                missing = premise
                break
    else:
        space = system.space()
        check_budget(len(space), space_cap, 'rule space size', unsafe)
        for mask in range(2 ** len(space)):
            subset = frozenset(x for i, x in enumerate(space) if (mask >> i) & 1)
            if subset not in with_rule:
                missing = subset
                break
    logger.debug(f"validate: {len(rules)} rules, collision={collision is not None}, missing={missing is not None}")
    return Validation(collision is None, collision, missing is None, missing, system.bounded, len(rules))


def validation_report(system: RuleSystem, validation: Validation) -> Report:
    report = Report('rules-validate', bounded=validation.bounded)
    report.count('rules', validation.rule_count)
    report.verdict(f"deterministic {'YES' if validation.deterministic else 'NO'}")
    scope = 'bounded-global' if validation.bounded else 'global'
    report.verdict(f"{scope} {'YES' if validation.is_global else 'NO'}")
    if validation.deterministic_counterexample:
        conclusion, left, right = validation.deterministic_counterexample
        report.note(f"{system.label(conclusion)} follows from both {system.render_set(left)} and {system.render_set(right)}")
    if validation.global_counterexample is not None:
        report.note(f"nothing follows from {system.render_set(validation.global_counterexample)}")
    if system.truncated:
        report.count('truncated-conclusions', system.truncated)
    return report


@dataclass(frozen=True)
class MonotoneOp:
    """phi(s) = {x | some a inside s with a |- x}"""
    system: RuleSystem

    def apply(self, s: Iterable[Hashable]) -> FrozenSet[Hashable]:
        s = frozenset(s)
        return frozenset(x for premise, x in self.system.derivations(s) if premise <= s)


def apply_operator(op: MonotoneOp, s: Iterable[Hashable]) -> FrozenSet[Hashable]:
    return op.apply(s)


@dataclass
class FixedPoint:
    mode: str
    result: FrozenSet[Hashable]
    stages: List[FrozenSet[Hashable]] = field(default_factory=list)
    stable: bool = True


def fixed_point(system: RuleSystem, mode: str = 'least', budget: int = 64) -> FixedPoint:
    """Least: iterate phi from the empty set. Greatest: shrink the full space by phi.

    Stages hold the additions (least) or removals (greatest) of each step.
    """
    op = MonotoneOp(system)
    if mode == 'least':
        current: FrozenSet[Hashable] = frozenset()
    elif mode == 'greatest':
        current = frozenset(system.space())
    else:
        raise PreconditionError(f"unknown fixed point mode '{mode}'")
    point = FixedPoint(mode, current)
    for _ in range(budget):
        image = op.apply(current)
        following = current | image if mode == 'least' else current & image
        change = following - current if mode == 'least' else current - following
        if not change:
            point.result = current
            logger.info(f"{mode} fixed point: {len(current)} objects after {len(point.stages)} stages")
            return point
        point.stages.append(change)
        current = following
    point.result = current
    point.stable = False
    logger.warning(f"{mode} fixed point not reached within {budget} stages")
    return point


def fixed_point_report(system: RuleSystem, point: FixedPoint) -> Report:
    report = Report(f"rules-{point.mode}", bounded=system.bounded or not point.stable)
    report.check('stable', point.stable)
    report.count('stages', len(point.stages))
    report.count('objects', len(point.result))
    for index, change in enumerate(point.stages, start=1):
        for x in sorted(change, key=system.sort_key):
            report.member(index, system.label(x))
    if system.truncated:
        report.count('truncated-conclusions', system.truncated)
    return report


def derived_class(system: RuleSystem) -> ClassRef:
    """{x | some a |- x with x not in a}, over the indices of the space"""
    space = system.space()
    index = {x: i for i, x in enumerate(space)}
    mask = 0
    for premise, conclusion in system.derivations():
        if conclusion not in premise and conclusion in index:
            mask |= 1 << index[conclusion]
    return ClassRef.from_mask(mask, 'builder', 'derived_system')


# -- productivity on the least fixed point -------------------------------------

def _subsets(items: Sequence[Hashable], budget: int) -> Tuple[List[FrozenSet[Hashable]], bool]:
    """Subsets by increasing size, at most `budget` of them; flag when cut short"""
    out: List[FrozenSet[Hashable]] = []
    for size in range(len(items) + 1):
        for combo in itertools.combinations(items, size):
            if len(out) >= budget:
                return out, True
            out.append(frozenset(combo))
    return out, False


def productivity_on_lfp(system: RuleSystem, mode: str = 'system', subset_budget: int = 4096,
                        stage_budget: int = 64) -> Report:
    """Every subset s of I yields something in I outside s.

    function: the system is a single function schema F and the choice is F(s).
    system:   some x with s |- x (only subsets that derive something count).
    operator: some x in phi(s).
    """
    point = fixed_point(system, 'least', stage_budget)
    lfp = point.result
    ordered = sorted(lfp, key=system.sort_key)
    subsets, cut = _subsets(ordered, subset_budget)
    report = Report(f"productivity-{mode}", bounded=system.bounded or cut or not point.stable)
    report.check(f"productive:{mode}", True)
    report.count('lfp-size', len(lfp))
    if mode == 'function':
        if not system.is_store or len(system.schemas) != 1 or system.schemas[0] not in FUNCTION_SCHEMAS:
            raise PreconditionError("function mode needs exactly one of the schemas " + ', '.join(FUNCTION_SCHEMAS))
        F = dict(system.derivations(lfp))
    op = MonotoneOp(system)
    for s in subsets:
        report.count('subsets')
        if mode == 'function':
            handle = system.store.make(s)
            if system.store.rank(handle) > system.rank_budget:
                report.count('beyond-budget')
                continue
            value = F.get(s)
            if value is None:
                report.count('beyond-budget')
                continue
            candidates = [value]
        elif mode == 'system':
            candidates = [x for premise, x in system.derivations(s) if premise == s]
            if not candidates:
                report.count('no-derivation')
                continue
        elif mode == 'operator':
            candidates = list(op.apply(s))
        else:
            raise PreconditionError(f"unknown productivity mode '{mode}'")
        escapes = [x for x in candidates if x in lfp and x not in s]
        if escapes:
            if len(report.witnesses) < 64:
                report.witness('lfp', system.render_set(s), system.label(escapes[0]))
            continue
        if system.is_store and mode == 'operator' and any(system.store.rank(x) == system.rank_budget for x in s):
            report.count('beyond-budget')
            continue
        report.check(f"productive:{mode}", False)
        report.counterexample(system.render_set(s), f"no element of the fixed point outside it follows from {system.render_set(s)}")
    return report


def operator_productivity(store: SetStore, ordinal_budget: int = 5) -> Report:
    """The ordinal system's operator escapes every subset of its truncated fixed point"""
    system = RuleSystem(schemas=('successor', 'union'), store=store, rank_budget=ordinal_budget - 1)
    report = productivity_on_lfp(system, 'operator')
    lfp = fixed_point(system).result
    ordinals = {store.ordinal(n) for n in range(ordinal_budget)}
    report.check('lfp-is-ordinals', lfp == ordinals)
    report.note(f"checked on the ordinals below {ordinal_budget} only")
    return report


def injective_agreement(store: SetStore, schema: str, rank_budget: int) -> Report:
    """For injective F: I(F) lies inside {F(x) | F(x) not in x}, and F is productive on both"""
    system = RuleSystem(schemas=(schema,), store=store, rank_budget=rank_budget)
    report = productivity_on_lfp(system, 'function')
    lfp = fixed_point(system).result
    image = {value for premise, value in system.derivations() if value not in premise}
    outside = [x for x in lfp if x not in image]
    report.check('lfp-inside-image', not outside)
    for x in outside[:8]:
        report.counterexample(store.format(x), "in the fixed point but not in the image class")
    report.count('image-size', len(image))
    escapes = all(value in image and value not in premise
                  for premise, value in system.derivations() if premise <= image)
    report.check('image-productive', escapes)
    return report


# -- finite corollary ------------------------------------------------------------

def _deterministic_check(system: RuleSystem, report: Report, tag: str) -> None:
    """For a deterministic system: every derivation from a subset of I escapes it, and I lies in the derived class"""
    lfp = fixed_point(system).result
    space = system.space()
    for premise, conclusion in system.rules:
        if premise <= lfp and (conclusion not in lfp or conclusion in premise):
            report.check('corollary', False)
            report.counterexample(tag, f"{system.render_rule((premise, conclusion))} does not escape")
            return
    derived = derived_class(system).extension
    if any(space.index(x) not in derived for x in lfp):
        report.check('corollary', False)
        report.counterexample(tag, "least fixed point leaves the derived class")


def corollary_sweep(samples: int = 1000, seed: int = 0) -> Report:
    """All rule relations on two objects, then seeded deterministic systems on three"""
    report = Report('corollary')
    report.check('corollary', True)
    objects = ('a', 'b')
    possible = [(frozenset(objects[i] for i in range(2) if (mask >> i) & 1), c)
                for mask in range(4) for c in objects]
    for relation in range(2 ** len(possible)):
        rules = [possible[i] for i in range(len(possible)) if (relation >> i) & 1]
        system = RuleSystem(objects, rules)
        report.count('systems-2')
        validation = validate(system)
        if validation.is_global:
            report.count('global-2')
        if not validation.deterministic:
            continue
        report.count('deterministic-2')
        if validation.is_global:
            report.count('deterministic-global-2')
        _deterministic_check(system, report, f"2:{relation}")

    rng = random.Random(seed)
    objects3 = ('a', 'b', 'c')
    for index in range(samples):
        rules = []
        for conclusion in objects3:
            if rng.random() < 0.7:
                mask = rng.randrange(8)
                rules.append((frozenset(objects3[i] for i in range(3) if (mask >> i) & 1), conclusion))
        system = RuleSystem(objects3, rules)
        report.count('systems-3')
        _deterministic_check(system, report, f"3:{index}")
    report.note("no finite system is both deterministic and global: there are more subsets than objects")
    return report
