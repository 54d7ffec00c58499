"""Limitation of size: "too big" classes are exactly the paradoxical ones.

A SetSystem fixes a finite ground and designates some of its subsets as sets.
los_check verifies, for every subset C of the ground,

    C is not a set  <=>  every set s inside C has an escape

where the escape depends on the mode: cumulative (some stage V_a holds s but
not C), cardinal and zermelo (C has an element outside s).
"""
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterator, Optional, Tuple

from .guards import PreconditionError, check_budget
from .hf_store import MembershipGraph, SetStore
from .model import ClassRef, structure_from_handles
from .productivity import decide
from .report import Report

logger = logging.getLogger(__name__)

MODES = ('cumulative', 'cardinal', 'zermelo')


@dataclass(frozen=True)
class SetSystem:
    ground: Tuple[str, ...]
    sets: FrozenSet[int]
    mode: str
    # cumulative mode only: stage masks V_0, V_1, ...
    stages: Tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.ground)

    def is_set(self, mask: int) -> bool:
        return mask in self.sets

    def escapes(self, C: int, s: int) -> bool:
        if self.mode == 'cumulative':
            return any(s & ~stage == 0 and C & ~stage for stage in self.stages)
        return bool(C & ~s)


def check_system(system: SetSystem, report: Report) -> None:
    for C in range(2 ** system.size):
        report.count('classes')
        left = not system.is_set(C)
        right = all(system.escapes(C, s) for s in system.sets if s & ~C == 0)
        if left:
            report.count('paradoxical')
        if left != right:
            report.check(f"los:{system.mode}", False)
            report.counterexample(C, f"mode={system.mode} sets={len(system.sets)} left={left} right={right}")


def cumulative_system(store: SetStore, d: int, with_omega: bool = False) -> SetSystem:
    """Ground V_d (optionally with Omega); sets are the subsets of the stages below the top.

    V_d itself is the ground, so its subsets are left out: every class would be a set.
    """
    if d < 1:
        raise PreconditionError(f"cumulative mode needs at least one stage, got d={d}")
    universe = store.rank_universe(d)
    labels = [store.format(h) for h in universe]
    if with_omega:
        labels.append(store.format(store.canonicalize(MembershipGraph(1, ((0, 0),), 0))))
    # V_a is the codes below |V_a|, and rank_universe lists V_d by code
    stages = tuple((1 << len(store.rank_universe(a))) - 1 for a in range(d + 1))
    # each stage is a run of low bits, so its subsets are the masks up to it
    sets = frozenset(s for stage in stages[:d] for s in range(stage + 1))
    return SetSystem(tuple(labels), sets, 'cumulative', stages)


def cardinal_system(g: int, k: int) -> SetSystem:
    sets = frozenset(mask for mask in range(2 ** g) if bin(mask).count('1') < k)
    return SetSystem(tuple(f"o{i}" for i in range(g)), sets, 'cardinal')


def zermelo_systems(g: int) -> Iterator[SetSystem]:
    """Every family of subsets of a g-element ground"""
    ground = tuple(f"o{i}" for i in range(g))
    subsets = 2 ** g
    for family in range(2 ** subsets):
        yield SetSystem(ground, frozenset(s for s in range(subsets) if (family >> s) & 1), 'zermelo')


def omega_report(store: SetStore, report: Report) -> None:
    """{Omega} is a set of the self-loop universe, yet too big for every stage"""
    omega = store.canonicalize(MembershipGraph(1, ((0, 0),), 0))
    m = structure_from_handles(store, [omega])
    C = ClassRef(frozenset({0}))
    verdict = decide(m, C)
    report.check('omega:set-in-self-loop-universe', verdict.is_set)
    report.check('omega:no-productive-choice', verdict.is_set and not verdict.certificate)
    report.verdict(f"omega-structure SET {m.label(verdict.representative)}" if verdict.is_set
                   else "omega-structure PARADOXICAL")
    report.note("Omega = {Omega}: the only set inside {Omega} is Omega itself, so no productive choice exists")


def los_check(mode: str, d: int = 3, k: int = 2, g: int = 3, with_omega: bool = False,
              system: Optional[SetSystem] = None, store: Optional[SetStore] = None,
              rank_cap: int = 4, ground_cap: int = 4, unsafe: bool = False) -> Report:
    if mode not in MODES:
        raise PreconditionError(f"unknown mode '{mode}', expected one of {', '.join(MODES)}")
    report = Report(f"los-{mode}")
    report.check(f"los:{mode}", True)
    if mode == 'cumulative':
        report.bounded = check_budget(d, rank_cap, 'stage count', unsafe)
        store = store or SetStore()
        system = cumulative_system(store, d, with_omega)
        check_system(system, report)
        if with_omega:
            omega_index = system.size - 1
            C = 1 << omega_index
            paradoxical = not system.is_set(C) and all(
                system.escapes(C, s) for s in system.sets if s & ~C == 0)
            report.check('omega:paradoxical-by-size', paradoxical)
            report.verdict(f"omega-cumulative {'PARADOXICAL' if paradoxical else 'SET'}")
            omega_report(store, report)
    elif mode == 'cardinal':
        report.bounded = check_budget(g, ground_cap, 'ground size', unsafe)
        if k < 0:
            raise PreconditionError(f"size threshold must be >= 0, got {k}")
        system = cardinal_system(g, k)
        check_system(system, report)
        expected = sum(1 for C in range(2 ** g) if bin(C).count('1') >= k)
        report.check('cardinal:paradoxical-iff-large', report.counts.get('paradoxical', 0) == expected)
    elif system is not None:
        check_system(system, report)
    else:
        report.bounded = check_budget(g, ground_cap, 'ground size', unsafe)
        for n in range(g + 1):
            for candidate in zermelo_systems(n):
                report.count('systems')
                check_system(candidate, report)
    logger.info(f"los {mode}: {report.counts.get('classes', 0)} classes checked")
    return report
