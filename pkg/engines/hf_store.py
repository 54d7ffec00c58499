"""Canonical store of hereditarily finite sets and hypersets.

Every set lives in a SetStore as a node whose children are canonical handles.
The store is a bisimulation quotient: two handles are equal exactly when their
membership graphs are bisimilar, which for grounded sets is plain extensional
equality.

Canonical order: grounded sets come first, ordered by Ackermann code
(code(s) = sum of 2**code(m) over members m); hypersets follow, ordered by the
size of their transitive closure and then by the colour-refined edge list of
that closure. Members of a node are always listed in this order.

Tr(x) contains x itself, following the definition "least transitive class with
x as an element". Some texts leave x out; we keep it.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .guards import BudgetError, ContractError, InputError, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SetHandle:
    id: int

    def __repr__(self) -> str:
        return f"SetHandle({self.id})"


@dataclass(frozen=True)
class SetClass:
    grounded: bool
    rank: Optional[int]
    n_cycles: FrozenSet[int]


@dataclass(frozen=True)
class MembershipGraph:
    """A presentation of a (hyper)set: edges are (member, parent) pairs"""
    node_count: int
    edges: Tuple[Tuple[int, int], ...]
    root: int

    def validate(self) -> None:
        if self.node_count < 1:
            raise InputError(f"graph needs at least one node, got {self.node_count}")
        if not 0 <= self.root < self.node_count:
            raise InputError(f"root {self.root} out of range 0..{self.node_count - 1}")
        seen = set()
        for member, parent in self.edges:
            for index in (member, parent):
                if not 0 <= index < self.node_count:
                    raise InputError(f"edge ({member}, {parent}) index {index} out of range 0..{self.node_count - 1}")
            if (member, parent) in seen:
                raise InputError(f"duplicate edge ({member}, {parent})")
            seen.add((member, parent))

    def children(self) -> List[Set[int]]:
        kids: List[Set[int]] = [set() for _ in range(self.node_count)]
        for member, parent in self.edges:
            kids[parent].add(member)
        return kids

    def dumps(self) -> str:
        lines = [f"nodes {self.node_count}"]
        lines += [f"edge {m} {p}" for m, p in sorted(self.edges)]
        lines.append(f"root {self.root}")
        return '\n'.join(lines) + '\n'


def parse_graph(text: str) -> MembershipGraph:
    """Parse the `nodes N` / `edge m p` / `root r` text format"""
    node_count: Optional[int] = None
    root: Optional[int] = None
    edges: List[Tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            numbers = [int(p) for p in parts[1:]]
        except ValueError:
            raise InputError(f"expected decimal indices in '{line}'", line=lineno)
        if any(n < 0 for n in numbers):
            raise InputError(f"negative index in '{line}'", line=lineno)
        keyword = parts[0]
        if keyword == 'nodes' and len(numbers) == 1:
            if node_count is not None:
                raise InputError("second 'nodes' declaration", line=lineno)
            node_count = numbers[0]
        elif keyword == 'edge' and len(numbers) == 2:
            edges.append((numbers[0], numbers[1]))
        elif keyword == 'root' and len(numbers) == 1:
            if root is not None:
                raise InputError("second 'root' declaration", line=lineno)
            root = numbers[0]
        else:
            raise InputError(f"cannot parse '{line}'", line=lineno)
    if node_count is None:
        raise InputError("missing 'nodes' declaration")
    if root is None:
        raise InputError("missing 'root' declaration")
    graph = MembershipGraph(node_count, tuple(edges), root)
    graph.validate()
    return graph


def _grounded_nodes(kids: Sequence[Iterable[int]], nodes: Iterable[int]) -> List[int]:
    """Nodes with no reachable cycle, listed bottom-up"""
    pending = set(nodes)
    order: List[int] = []
    done: Set[int] = set()
    progress = True
    while progress:
        progress = False
        for node in sorted(pending):
            if all(k in done for k in kids[node]):
                order.append(node)
                done.add(node)
                progress = True
        pending -= done
    return order


def _reachable(kids: Sequence[Iterable[int]], start: int) -> List[int]:
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for k in kids[node]:
            if k not in seen:
                seen.add(k)
                stack.append(k)
    return sorted(seen)


def _cycle_lengths(kids: Sequence[Iterable[int]], node: int, bound: int) -> FrozenSet[int]:
    """All n <= bound with node in^n node"""
    found = set()
    frontier = {node}
    for n in range(1, bound + 1):
        frontier = {k for f in frontier for k in kids[f]}
        if not frontier:
            break
        if node in frontier:
            found.add(n)
    return frozenset(found)


def classify_graph(graph: MembershipGraph, cycle_bound: int = 4) -> Dict[int, SetClass]:
    """Classify every node of a presentation without quotienting it"""
    graph.validate()
    kids = graph.children()
    grounded_order = _grounded_nodes(kids, range(graph.node_count))
    rank: Dict[int, int] = {}
    for node in grounded_order:
        rank[node] = 1 + max((rank[k] for k in kids[node]), default=-1)
    return {
        node: SetClass(node in rank, rank.get(node), _cycle_lengths(kids, node, cycle_bound))
        for node in range(graph.node_count)
    }


class SetStore:
    """Append-only bisimulation quotient of finite membership graphs.

    Appends need external mutual exclusion; once frozen, all queries are pure.
    """

    def __init__(self, powerset_budget: int = 65536, iso_budget: int = 64):
        self.powerset_budget = powerset_budget
        self.iso_budget = iso_budget
        self._members: List[FrozenSet[int]] = []
        self._children: List[Optional[Tuple[int, ...]]] = []
        self._grounded: List[bool] = []
        self._code: List[Optional[int]] = []
        self._rank: List[Optional[int]] = []
        self._intern: Dict[FrozenSet[int], int] = {}
        self._hyper_keys: Dict[int, tuple] = {}
        self._frozen = False
        self.empty = self.make(())
        self._operations: Dict[str, Tuple[int, Callable[..., SetHandle]]] = {
            'empty': (0, lambda: self.empty),
            'adjoin': (2, self.adjoin),
            'pair': (2, self.pair),
            'singleton': (1, self.singleton),
            'ordered_pair': (2, self.ordered_pair),
            'union': (1, self.union),
            'intersection': (1, self.intersection),
            'powerset': (1, self.powerset),
            'successor': (1, self.successor),
        }

    # -- storage -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._members)

    def freeze(self) -> None:
        self._frozen = True

    @property
    def frozen(self) -> bool:
        return self._frozen

    def _allocate(self, members: FrozenSet[int], grounded: bool) -> int:
        if self._frozen:
            raise ContractError("store is frozen; no new sets can be added")
        node = len(self._members)
        self._members.append(members)
        self._children.append(None)
        self._grounded.append(grounded)
        if grounded:
            self._code.append(sum(1 << self._code[m] for m in members))
            self._rank.append(1 + max((self._rank[m] for m in members), default=-1))
        else:
            self._code.append(None)
            self._rank.append(None)
        self._intern[members] = node
        return node

    def make(self, members: Iterable[SetHandle]) -> SetHandle:
        """The set whose members are exactly the given handles"""
        ids = frozenset(h.id for h in members)
        node = self._intern.get(ids)
        if node is None:
            # A fresh node is never on a cycle, so it is grounded iff its members are
            node = self._allocate(ids, all(self._grounded[m] for m in ids))
        return SetHandle(node)

    def find(self, members: Iterable[SetHandle]) -> Optional[SetHandle]:
        """Look a set up by its members without adding it"""
        node = self._intern.get(frozenset(h.id for h in members))
        return None if node is None else SetHandle(node)

    def handles(self) -> List[SetHandle]:
        return sorted((SetHandle(i) for i in range(len(self._members))), key=self.sort_key)

    # -- canonical order ---------------------------------------------------

    def sort_key(self, h: SetHandle) -> tuple:
        if self._grounded[h.id]:
            return (0, self._code[h.id])
        return (1,) + self._hyper_key(h.id)

    def _hyper_key(self, node: int) -> tuple:
        cached = self._hyper_keys.get(node)
        if cached is not None:
            return cached
        closure = _reachable(self._members, node)
        colour = _renumber({n: (0, self._code[n]) if self._grounded[n] else (1, 0) for n in closure})
        while True:
            refined = _renumber({
                n: (colour[n], tuple(sorted({colour[m] for m in self._members[n]})))
                for n in closure
            })
            if len(set(refined.values())) == len(set(colour.values())):
                break
            colour = refined
        edges = tuple(sorted((colour[m], colour[p]) for p in closure for m in self._members[p]))
        key = (len(closure), edges, colour[node])
        self._hyper_keys[node] = key
        return key

    def members(self, h: SetHandle) -> Tuple[SetHandle, ...]:
        """Members in canonical order"""
        cached = self._children[h.id]
        if cached is None:
            ordered = sorted((SetHandle(m) for m in self._members[h.id]), key=self.sort_key)
            cached = tuple(m.id for m in ordered)
            self._children[h.id] = cached
        return tuple(SetHandle(m) for m in cached)

    def member_ids(self, h: SetHandle) -> FrozenSet[int]:
        return self._members[h.id]

    def contains(self, s: SetHandle, x: SetHandle) -> bool:
        return x.id in self._members[s.id]

    def is_grounded(self, h: SetHandle) -> bool:
        return self._grounded[h.id]

    def rank(self, h: SetHandle) -> Optional[int]:
        return self._rank[h.id]

    def code(self, h: SetHandle) -> int:
        if not self._grounded[h.id]:
            raise PreconditionError(f"{self.format(h)} is ungrounded and has no Ackermann code")
        return self._code[h.id]

    def format(self, h: SetHandle) -> str:
        """Single-token rendering: {} for the empty set, Omega for the self-loop, h<id> for other hypersets"""
        if self._grounded[h.id]:
            return '{' + ','.join(self.format(m) for m in self.members(h)) + '}'
        if self._members[h.id] == frozenset({h.id}):
            return 'Omega'
        return f"h{h.id}"

    # -- canonicalization --------------------------------------------------

    def canonicalize(self, graph: MembershipGraph) -> SetHandle:
        """Handle of the bisimulation quotient of graph, rooted at graph.root"""
        graph.validate()
        kids = graph.children()
        reachable = _reachable(kids, graph.root)
        canonical: Dict[int, int] = {}
        grounded_order = _grounded_nodes(kids, reachable)
        for node in grounded_order:
            canonical[node] = self.make(SetHandle(canonical[k]) for k in kids[node]).id
        ungrounded = [n for n in reachable if n not in canonical]
        if not ungrounded:
            return SetHandle(canonical[graph.root])

        stored = [n for n in range(len(self._members)) if not self._grounded[n]]
        items = [('g', n) for n in ungrounded] + [('s', n) for n in stored]
        labels: Dict[tuple, FrozenSet[int]] = {}
        links: Dict[tuple, Tuple[tuple, ...]] = {}
        for kind, n in items:
            if kind == 'g':
                labels[(kind, n)] = frozenset(canonical[k] for k in kids[n] if k in canonical)
                links[(kind, n)] = tuple(('g', k) for k in kids[n] if k not in canonical)
            else:
                labels[(kind, n)] = frozenset(m for m in self._members[n] if self._grounded[m])
                links[(kind, n)] = tuple(('s', m) for m in self._members[n] if not self._grounded[m])

        # Coarsest bisimulation by naive partition refinement
        block = {item: 0 for item in items}
        blocks = 1
        while True:
            signatures: Dict[tuple, int] = {}
            refined = {}
            for item in items:
                sig = (block[item], labels[item], frozenset(block[c] for c in links[item]))
                refined[item] = signatures.setdefault(sig, len(signatures))
            block = refined
            if len(signatures) == blocks:
                break
            blocks = len(signatures)

        # Store nodes are pairwise non-bisimilar, so a block holds at most one of them
        node_of_block: Dict[int, int] = {block[('s', n)]: n for n in stored}
        fresh: List[Tuple[int, int]] = []
        for n in ungrounded:
            b = block[('g', n)]
            if b not in node_of_block:
                node_of_block[b] = self._allocate_pending()
                fresh.append((b, n))
        for b, n in fresh:
            node = node_of_block[b]
            members = labels[('g', n)] | frozenset(node_of_block[block[c]] for c in links[('g', n)])
            self._members[node] = members
            self._intern[members] = node
        if fresh:
            logger.debug(f"canonicalize: {len(fresh)} new hyperset node(s), store size {len(self._members)}")
        root = graph.root
        return SetHandle(canonical[root] if root in canonical else node_of_block[block[('g', root)]])

    def _allocate_pending(self) -> int:
        if self._frozen:
            raise ContractError("store is frozen; no new sets can be added")
        node = len(self._members)
        self._members.append(frozenset())
        self._children.append(None)
        self._grounded.append(False)
        self._code.append(None)
        self._rank.append(None)
        return node

    def to_graph(self, h: SetHandle) -> MembershipGraph:
        """Canonical presentation of h: closure nodes in canonical order"""
        closure = sorted(self.transitive_closure(h), key=self.sort_key)
        index = {x.id: i for i, x in enumerate(closure)}
        edges = tuple(sorted((index[m], index[x.id]) for x in closure for m in self._members[x.id]))
        return MembershipGraph(len(closure), edges, index[h.id])

    # -- constructors ------------------------------------------------------

    def construct(self, op: str, *args: SetHandle) -> SetHandle:
        if op not in self._operations:
            raise PreconditionError(f"unknown construction '{op}'")
        arity, fn = self._operations[op]
        if len(args) != arity:
            raise PreconditionError(f"{op} takes {arity} argument(s), got {len(args)}")
        return fn(*args)

    def adjoin(self, s: SetHandle, a: SetHandle) -> SetHandle:
        return self.make(self.members(s) + (a,))

    def pair(self, a: SetHandle, b: SetHandle) -> SetHandle:
        return self.make((a, b))

    def singleton(self, a: SetHandle) -> SetHandle:
        return self.make((a,))

    def ordered_pair(self, a: SetHandle, b: SetHandle) -> SetHandle:
        return self.pair(self.singleton(a), self.pair(a, b))

    def union(self, s: SetHandle) -> SetHandle:
        return self.make(y for x in self.members(s) for y in self.members(x))

    def intersection(self, s: SetHandle) -> SetHandle:
        """Intersection of the members of s; the empty family gives the empty set"""
        parts = [self._members[x.id] for x in self.members(s)]
        if not parts:
            return self.empty
        return self.make(SetHandle(m) for m in frozenset.intersection(*parts))

    def powerset(self, s: SetHandle) -> SetHandle:
        elements = self.members(s)
        if 2 ** len(elements) > self.powerset_budget:
            raise BudgetError(f"powerset of a {len(elements)}-element set exceeds budget {self.powerset_budget}")
        subsets = [self.make(combo)
                   for size in range(len(elements) + 1)
                   for combo in itertools.combinations(elements, size)]
        return self.make(subsets)

    def successor(self, s: SetHandle) -> SetHandle:
        return self.adjoin(s, s)

    def ordinal(self, n: int) -> SetHandle:
        """von Neumann ordinal n"""
        current = self.empty
        for _ in range(n):
            current = self.successor(current)
        return current

    def by_code(self, code: int) -> SetHandle:
        """Grounded set with the given Ackermann code"""
        if code < 0:
            raise PreconditionError(f"Ackermann codes are natural numbers, got {code}")
        members = []
        bit = 0
        while code >> bit:
            if (code >> bit) & 1:
                members.append(self.by_code(bit))
            bit += 1
        return self.make(members)

    def rank_universe(self, d: int) -> List[SetHandle]:
        """V_d, the grounded sets of rank < d, listed so that index == Ackermann code"""
        level: List[SetHandle] = []
        for _ in range(d):
            previous = level
            level = [self.make(previous[i] for i in range(len(previous)) if (mask >> i) & 1)
                     for mask in range(2 ** len(previous))]
        return level

    # -- queries -----------------------------------------------------------

    def transitive_closure(self, x: SetHandle) -> FrozenSet[SetHandle]:
        return frozenset(SetHandle(n) for n in _reachable(self._members, x.id))

    def classify(self, x: SetHandle, cycle_bound: int = 4) -> SetClass:
        return SetClass(
            self._grounded[x.id],
            self._rank[x.id],
            _cycle_lengths(self._members, x.id, cycle_bound),
        )

    def _closure_digraph(self, x: SetHandle) -> nx.DiGraph:
        closure = _reachable(self._members, x.id)
        if len(closure) > self.iso_budget:
            raise BudgetError(f"closure of {self.format(x)} has {len(closure)} nodes, budget {self.iso_budget}")
        graph = nx.DiGraph()
        for n in closure:
            graph.add_node(n, rank=self._rank[n])
        for n in closure:
            for m in self._members[n]:
                graph.add_edge(m, n)
        return graph

    def is_isomorphic(self, x: SetHandle, y: SetHandle) -> bool:
        """An in-preserving bijection Tr(x) -> Tr(y) exists (VF2 backtracking, rank-pruned)"""
        if x == y:
            return True
        gx = self._closure_digraph(x)
        gy = self._closure_digraph(y)
        if gx.number_of_nodes() != gy.number_of_nodes() or gx.number_of_edges() != gy.number_of_edges():
            return False
        matcher = DiGraphMatcher(gx, gy, node_match=lambda a, b: a['rank'] == b['rank'])
        return matcher.is_isomorphic()

    def choice_set(self, family: SetHandle) -> SetHandle:
        """One least-ordered element from each member of a disjoint family of nonempty sets"""
        parts = self.members(family)
        for part in parts:
            if not self._members[part.id]:
                raise PreconditionError(f"family {self.format(family)} has the empty set as a member")
        for left, right in itertools.combinations(parts, 2):
            if self._members[left.id] & self._members[right.id]:
                raise PreconditionError(
                    f"members {self.format(left)} and {self.format(right)} of the family are not disjoint")
        return self.make(self.members(part)[0] for part in parts)


def _renumber(values: Dict[int, tuple]) -> Dict[int, int]:
    ranking = {v: i for i, v in enumerate(sorted(set(values.values())))}
    return {k: ranking[v] for k, v in values.items()}


def canonicalize_graph(graph: MembershipGraph, store: SetStore) -> SetHandle:
    return store.canonicalize(graph)


def construct(store: SetStore, op: str, *args: SetHandle) -> SetHandle:
    return store.construct(op, *args)
