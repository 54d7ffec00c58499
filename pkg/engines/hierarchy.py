"""Truncated cumulative-cardinal stages.

    C_0       = {}
    C_1       = least fixed point of adjoin, rank <= seed_rank
    C_(a+1)   = least Cl with: S inside Cl and S dominated by C_a  =>  S in Cl
    C_limit   = the same closure, dominated by some earlier stage

Every closure runs as a least fixed point of an explicit rule system with one
rule members(S) |- S per candidate S. Candidates stop at rank_budget and a
stage keeps at most card_budget members, least Ackermann codes first; either
cut tags the stage truncated.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Hashable, List, Mapping, Optional, Sequence, Sized, Tuple, Union

from .guards import ContractError, PreconditionError, check_budget
from .hf_store import SetHandle, SetStore
from .report import MAX_LISTED, Report
from .rules import RuleSystem, fixed_point

logger = logging.getLogger(__name__)

LIMIT = 'limit'

STAGE_ITERATIONS = 64
# subsets of larger members are not enumerated by the stage laws
MAX_SUBSET_MEMBERS = 8
# larger sets get the powerset boundary from their rank instead of a built powerset
POWERSET_MEMBERS = 4

REPLACEMENT_MAPS = ('identity', 'union', 'intersection', 'constant', 'diagonal')


def dominates(X: Sized, Y: Sized) -> bool:
    """X is the image of Y under some function"""
    return len(X) == 0 or (len(Y) > 0 and len(X) <= len(Y))


@dataclass(frozen=True)
class StageConfig:
    stages: int = 2
    seed_rank: int = 2
    card_budget: int = 64
    rank_budget: int = 3
    limit: bool = False

    def validate(self, rank_cap: int = 5, unsafe: bool = False) -> bool:
        if self.stages < 1:
            raise PreconditionError(f"stage count must be >= 1, got {self.stages}")
        for name in ('seed_rank', 'card_budget', 'rank_budget'):
            if getattr(self, name) < 0:
                raise PreconditionError(f"{name.replace('_', '-')} must be >= 0, got {getattr(self, name)}")
        if self.rank_budget < self.seed_rank:
            raise PreconditionError(
                f"rank-budget {self.rank_budget} is below seed-rank {self.seed_rank}; later stages would lose C_1")
        # adjoin closure above rank 3 scans pairs of a 65536-set pool
        bounded = check_budget(self.seed_rank, 3, 'seed-rank', unsafe)
        return check_budget(self.rank_budget + 1, rank_cap, 'rank universe', unsafe) or bounded


@dataclass(frozen=True)
class Stage:
    index: Union[int, str]
    members: Tuple[SetHandle, ...]
    truncated: bool = False
    # card budget fired (a subset of truncated)
    capped: bool = False

    @property
    def cardinality(self) -> int:
        return len(self.members)

    @property
    def ids(self) -> FrozenSet[int]:
        return frozenset(h.id for h in self.members)


def _closure(store: SetStore, candidates: Sequence[SetHandle], bound: Optional[int],
             cfg: StageConfig) -> Tuple[Tuple[SetHandle, ...], bool, bool]:
    """Least fixed point of members(S) |- S over candidates S dominated by a set of size bound"""
    rules = [(frozenset(store.members(S)), S) for S in candidates
             if len(store.member_ids(S)) == 0 or (bound and len(store.member_ids(S)) <= bound)]
    system = RuleSystem(rules=rules, store=store, rank_budget=cfg.rank_budget)
    point = fixed_point(system, 'least', budget=STAGE_ITERATIONS)
    members = sorted(point.result, key=store.sort_key)
    capped = len(members) > cfg.card_budget
    members = members[:cfg.card_budget]
    # a rank-K member with a nonempty bound means its singleton was cut
    rank_cut = bool(bound) and any(store.rank(h) == cfg.rank_budget for h in members)
    return tuple(members), rank_cut or capped, capped


def build_stages(cfg: StageConfig, store: Optional[SetStore] = None, rank_cap: int = 5,
                 unsafe: bool = False) -> List[Stage]:
    cfg.validate(rank_cap, unsafe)
    store = store or SetStore()
    stages = [Stage(0, ())]

    seed = RuleSystem(schemas=('adjoin',), store=store, rank_budget=cfg.seed_rank)
    point = fixed_point(seed, 'least', budget=STAGE_ITERATIONS)
    stages.append(Stage(1, tuple(sorted(point.result, key=store.sort_key)), truncated=seed.truncated > 0))
    logger.debug(f"C_1: {stages[-1].cardinality} sets, {seed.truncated} adjoin conclusions beyond rank")

    candidates = store.rank_universe(cfg.rank_budget + 1)
    for index in range(2, cfg.stages + 1):
        members, truncated, capped = _closure(store, candidates, stages[-1].cardinality, cfg)
        stages.append(Stage(index, members, truncated, capped))
        logger.debug(f"C_{index}: {len(members)} sets, truncated={truncated}")
    if cfg.limit:
        bound = max(stage.cardinality for stage in stages)
        members, truncated, capped = _closure(store, candidates, bound, cfg)
        stages.append(Stage(LIMIT, members, truncated, capped))
    if any(stage.truncated for stage in stages):
        logger.warning(f"Stage construction truncated (rank-budget {cfg.rank_budget}, card-budget {cfg.card_budget})")
    logger.info(f"Built {len(stages)} stages: {', '.join(str(s.cardinality) for s in stages)}")
    return stages


def hereditary_sets(store: SetStore, k: int, d: int, powerset_budget: int = 65536,
                    unsafe: bool = False) -> List[SetHandle]:
    """Sets of rank <= d whose transitive closure has no member with more than k elements.

    Generated rank by rank: level j+1 is every subset of level j with at most
    k elements.
    """
    level: List[SetHandle] = []
    for _ in range(d + 1):
        previous = level
        total = sum(_binomial(len(previous), size) for size in range(min(k, len(previous)) + 1))
        check_budget(total, powerset_budget, 'hereditary subsets', unsafe)
        level = [store.make(combo)
                 for size in range(min(k, len(previous)) + 1)
                 for combo in itertools.combinations(previous, size)]
    return sorted(level, key=store.sort_key)


def _binomial(n: int, r: int) -> int:
    out = 1
    for i in range(r):
        out = out * (n - i) // (i + 1)
    return out


def stage_report(stages: Sequence[Stage], cfg: StageConfig, store: SetStore) -> Report:
    """Stage laws on built stages, asserted inside the budget window"""
    report = Report('hierarchy', bounded=True)
    for name in ('grounded', 'transitive', 'growth', 'successor-law', 'h-generator',
                 'union-to-next', 'powerset-to-next'):
        report.check(name, True)
    candidates = store.rank_universe(cfg.rank_budget + 1)

    for stage in stages:
        ids = stage.ids
        report.count(f"stage-{stage.index}", stage.cardinality)
        if stage.truncated:
            report.count('truncated-stages')
        for S in stage.members:
            if not store.is_grounded(S):
                report.check('grounded', False)
                report.counterexample(stage.index, f"{store.format(S)} is not grounded")
            if not store.member_ids(S) <= ids:
                report.check('transitive', False)
                report.counterexample(stage.index, f"a member of {store.format(S)} is missing")
            report.member(stage.index, store.format(S))

    if len(stages) > 1:
        report.check('seed-is-rank-universe',
                     stages[1].members == tuple(store.rank_universe(cfg.seed_rank + 1)))

    for earlier, later in zip(stages, stages[1:]):
        if later.capped:
            report.count('growth-unchecked')
        elif not earlier.ids <= later.ids or (not later.truncated and earlier.ids == later.ids):
            report.check('growth', False)
            report.counterexample(later.index, f"C_{earlier.index} is not strictly inside C_{later.index}")

    successors = [(i, stage) for i, stage in enumerate(stages) if i >= 2]
    for i, stage in successors:
        bound = stages[i - 1] if stage.index != LIMIT else max(stages[:i], key=lambda s: s.cardinality)
        _successor_law(report, store, candidates, bound, stage)
        if not stage.capped:
            expected = hereditary_sets(store, bound.cardinality, cfg.rank_budget)
            if tuple(expected) != stage.members:
                report.check('h-generator', False)
                report.counterexample(stage.index,
                                      f"hereditary generator gives {len(expected)} sets, stage has {stage.cardinality}")
    for i in range(1, len(stages) - 1):
        if stages[i + 1].index != LIMIT:
            _next_stage_laws(report, store, stages[i], stages[i + 1], cfg)
    return report


def _successor_law(report: Report, store: SetStore, candidates: Sequence[SetHandle],
                   previous: Stage, stage: Stage) -> None:
    """S in C_(a+1) iff S inside C_(a+1) and S dominated by C_a"""
    ids = stage.ids
    cutoff = max((store.code(h) for h in stage.members), default=-1)
    for S in candidates:
        if stage.capped and store.code(S) > cutoff:
            report.count('beyond-budget')
            continue
        report.count('successor-law-sets')
        left = S.id in ids
        right = store.member_ids(S) <= ids and dominates(store.member_ids(S), previous.members)
        if left != right:
            report.check('successor-law', False)
            report.counterexample(stage.index, f"{store.format(S)} left={left} right={right}")


def _next_stage_laws(report: Report, store: SetStore, stage: Stage, following: Stage, cfg: StageConfig) -> None:
    """For S in C_a: the union of S and every subset of S land in C_(a+1)"""
    ids = following.ids
    cutoff = max((store.code(h) for h in following.members), default=-1)

    def representable(x: SetHandle) -> bool:
        return store.rank(x) <= cfg.rank_budget and (not following.capped or store.code(x) <= cutoff)

    for S in stage.members:
        u = store.union(S)
        if representable(u) and u.id not in ids:
            report.check('union-to-next', False)
            report.counterexample(following.index, f"union of {store.format(S)} missing")
        elements = store.members(S)
        if len(elements) > MAX_SUBSET_MEMBERS:
            report.count('powerset-unchecked')
            continue
        for size in range(len(elements) + 1):
            for combo in itertools.combinations(elements, size):
                t = store.make(combo)
                if representable(t) and t.id not in ids:
                    report.check('powerset-to-next', False)
                    report.counterexample(following.index, f"subset {store.format(t)} of {store.format(S)} missing")


# -- Cantor's diagonal -----------------------------------------------------------

@dataclass(frozen=True)
class DiagonalWitness:
    diagonal: FrozenSet[Hashable]
    # pivot d -> (d in D, d in F(d)); exactly one holds
    pivots: Mapping[Hashable, Tuple[bool, bool]]


def diagonal_witness(A: Sequence[Hashable], F: Mapping[Hashable, FrozenSet[Hashable]]) -> DiagonalWitness:
    """D = {x in A | x not in F(x)}, with the pivot separating D from each F(d)"""
    missing = [x for x in A if x not in F]
    if missing:
        raise PreconditionError(f"map is not total: no value for {missing[0]}")
    D = frozenset(x for x in A if x not in F[x])
    pivots: Dict[Hashable, Tuple[bool, bool]] = {d: (d in D, d in F[d]) for d in A}
    if any(F[d] == D for d in A):
        raise ContractError("diagonal set lies in the range of the map")
    return DiagonalWitness(D, pivots)


def diagonal_sweep(size: int, cap: int = 4, unsafe: bool = False) -> Report:
    """Every map from A into subsets of A, for |A| = 0..size"""
    bounded = check_budget(size, cap, 'diagonal domain size', unsafe)
    report = Report('diagonal', bounded=bounded)
    report.check('diagonal-not-in-range', True)
    report.check('pivot-totality', True)
    for n in range(size + 1):
        A = tuple(f"a{i}" for i in range(n))
        subsets = [frozenset(A[i] for i in range(n) if (mask >> i) & 1) for mask in range(2 ** n)]
        for values in itertools.product(range(2 ** n), repeat=n):
            F = {A[i]: subsets[v] for i, v in enumerate(values)}
            report.count('maps')
            try:
                witness = diagonal_witness(A, F)
            except ContractError:
                report.check('diagonal-not-in-range', False)
                report.counterexample(n, f"map {values} hits its diagonal")
                continue
            if any(in_d == in_f for in_d, in_f in witness.pivots.values()):
                report.check('pivot-totality', False)
                report.counterexample(n, f"map {values} has a pivot on both sides")
        logger.debug(f"diagonal sweep |A|={n}: {report.counts.get('maps', 0)} maps so far")
    return report


# -- axioms on the rank universe, computed on Ackermann codes -------------------

def _replacement_map(store: SetStore, name: str) -> Callable[[SetHandle], SetHandle]:
    if name == 'identity':
        return lambda x: x
    if name == 'union':
        return store.union
    if name == 'intersection':
        return store.intersection
    if name == 'constant':
        return lambda x: store.empty
    if name == 'diagonal':
        return lambda x: store.make(y for y in store.members(x) if not store.contains(y, y))
    raise PreconditionError(f"unknown replacement map '{name}'")


def _is_ordinal(store: SetStore, s: SetHandle) -> bool:
    members = store.members(s)
    transitive = all(store.contains(s, y) for x in members for y in store.members(x))
    return transitive and all(store.contains(y, x) or store.contains(x, y)
                              for x, y in itertools.combinations(members, 2))


def axiom_report(store: SetStore, d: int, rank_cap: int = 5, unsafe: bool = False) -> Report:
    """Closure of V_d under the set-building axioms, checked on the sets the store builds"""
    if d < 1:
        raise PreconditionError(f"rank universe needs d >= 1, got {d}")
    bounded = check_budget(d, rank_cap, 'rank universe', unsafe)
    report = Report(f"axioms-V{d}", bounded=bounded)
    universe = store.rank_universe(d)
    present = frozenset(universe)
    below = frozenset(store.rank_universe(d - 1))
    report.count('sets', len(universe))
    logger.info(f"Axiom report on V_{d}: {len(universe)} sets")

    def fail(check: str, s: SetHandle, details: str) -> None:
        report.check(check, False)
        report.counterexample(store.format(s), details)

    for check in ('groundedness', 'empty-set', 'subset', 'union', 'powerset-boundary', 'pairing-below-boundary',
                  *(f"replacement:{name}" for name in REPLACEMENT_MAPS), 'choice'):
        report.check(check, True)
    if store.empty not in present:
        fail('empty-set', store.empty, f"the empty set is missing from V_{d}")

    maps = {name: _replacement_map(store, name) for name in REPLACEMENT_MAPS}
    values = {name: {x: F(x) for x in below} for name, F in maps.items()}
    boundary: List[SetHandle] = []
    ordinals: List[SetHandle] = []

    for s in universe:
        members = store.members(s)
        if not store.is_grounded(s) or store.rank(s) >= d:
            fail('groundedness', s, f"rank {store.rank(s)} inside V_{d}")
        # dropping one member at a time reaches every subset through the sets swept
        for x in members:
            if store.make(m for m in members if m != x) not in present:
                fail('subset', s, f"dropping {store.format(x)} leaves V_{d}")
        if store.union(s) not in present:
            fail('union', s, f"union leaves V_{d}")

        if s not in below:
            boundary.append(s)
        if len(members) <= POWERSET_MEMBERS:
            if (store.powerset(s) in present) != (s in below):
                fail('powerset-boundary', s, f"powerset membership disagrees with rank {store.rank(s)}")
        elif s in below or store.rank(s) != d - 1:
            fail('powerset-boundary', s, f"a {len(members)}-member set at rank {store.rank(s)}")

        for name in REPLACEMENT_MAPS:
            image = store.make(values[name][x] for x in members)
            image_members = store.members(image)
            if (image not in present or len(image_members) > len(members)
                    or any(m not in below for m in image_members)):
                fail(f"replacement:{name}", s, f"{name} image {store.format(image)} leaves V_{d}")

        parts = [frozenset(store.members(x)) for x in members]
        if parts and all(parts) and all(a.isdisjoint(b) for a, b in itertools.combinations(parts, 2)):
            report.count('choice-families')
            choice = store.choice_set(s)
            picked = frozenset(store.members(choice))
            if choice not in present or any(len(part & picked) != 1 for part in parts):
                fail('choice', s, f"choice set {store.format(choice)} is not a selector inside V_{d}")

        if _is_ordinal(store, s):
            ordinals.append(s)

    report.count('powerset-failures', len(boundary))
    for s in boundary[:MAX_LISTED]:
        report.member('powerset-boundary', store.format(s))

    for a, b in itertools.combinations_with_replacement(sorted(below, key=store.code), 2):
        if store.pair(a, b) not in present:
            fail('pairing-below-boundary', store.pair(a, b), f"pair of members of V_{d - 1} leaves V_{d}")

    report.count('ordinals', len(ordinals))
    report.check('ord-is-naturals', ordinals == [store.ordinal(n) for n in range(d)])

    checks = report.checks
    replacement_ok = all(checks[f"replacement:{name}"] for name in REPLACEMENT_MAPS)
    report.verdict(f"axiom subset {'HOLDS' if checks['subset'] else 'FAILS'}")
    report.verdict(f"axiom union {'HOLDS' if checks['union'] else 'FAILS'}")
    report.verdict(f"axiom powerset BOUNDARY rank {d - 1}" if boundary else "axiom powerset HOLDS")
    report.verdict(f"axiom pairing {'HOLDS' if checks['pairing-below-boundary'] else 'FAILS'} below rank {d - 1}")
    report.verdict(f"axiom replacement {'HOLDS' if replacement_ok else 'FAILS'}")
    report.verdict(f"axiom groundedness {'HOLDS' if checks['groundedness'] else 'FAILS'}")
    report.verdict(f"axiom choice {'HOLDS' if checks['choice'] else 'FAILS'}")
    report.verdict("axiom infinity NOT-EXPRESSIBLE")
    report.note("infinity is not expressible at finite scale: no finite universe holds an inductive set")
    report.note(f"Ord inside V_{d} is the naturals below {d}")
    return report
