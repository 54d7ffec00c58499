import pytest
from hypothesis import given
from hypothesis import strategies as st

from engines.guards import BudgetError, ContractError, InputError, PreconditionError
from engines.hf_store import MembershipGraph, SetStore, classify_graph, parse_graph

from .strategies import codes, membership_graphs


def unfolding(kids, node, depth, memo):
    """Membership tree of node cut at depth; equal at depth N iff bisimilar on N nodes"""
    key = (node, depth)
    if key not in memo:
        memo[key] = frozenset(unfolding(kids, k, depth - 1, memo) for k in kids[node]) if depth else frozenset()
    return memo[key]


def all_graphs(n):
    pairs = [(m, p) for p in range(n) for m in range(n)]
    for mask in range(2 ** len(pairs)):
        yield tuple(e for i, e in enumerate(pairs) if (mask >> i) & 1)


class TestGraphFormat:
    def test_parse(self):
        graph = parse_graph("nodes 3  # a, b and the empty set\nedge 0 1\nedge 2 1\nedge 1 2\nroot 1\n")
        assert graph == MembershipGraph(3, ((0, 1), (2, 1), (1, 2)), 1)

    @pytest.mark.parametrize('text', [
        "edge 0 0\nroot 0\n",
        "nodes 1\n",
        "nodes 1\nedge 0 1\nroot 0\n",
        "nodes 1\nedge 0 0\nedge 0 0\nroot 0\n",
        "nodes 1\nedge x 0\nroot 0\n",
        "nodes 2\nroot 0\nroot 1\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(InputError):
            parse_graph(text)

    def test_dumps_parses_back(self):
        graph = MembershipGraph(2, ((0, 1), (1, 0)), 0)
        assert parse_graph(graph.dumps()) == graph

    def test_classify_graph(self):
        classes = classify_graph(MembershipGraph(3, ((0, 1), (2, 1), (1, 2)), 1))
        assert classes[0].grounded and classes[0].rank == 0
        assert not classes[1].grounded
        assert classes[1].n_cycles == frozenset({2, 4})


class TestStore:
    def test_empty_set(self, store):
        assert store.format(store.empty) == '{}'
        assert store.code(store.empty) == 0
        assert store.rank(store.empty) == 0

    def test_make_interns(self, store):
        one = store.singleton(store.empty)
        assert store.make([store.empty]) == one
        assert store.pair(one, store.empty) == store.pair(store.empty, one)

    def test_ordinals(self, store):
        assert [store.code(store.ordinal(n)) for n in range(5)] == [0, 1, 3, 11, 2059]
        assert store.format(store.ordinal(2)) == '{{},{{}}}'

    def test_ordered_pair(self, store):
        a, b = store.ordinal(0), store.ordinal(1)
        assert store.ordered_pair(a, b) != store.ordered_pair(b, a)
        assert store.ordered_pair(a, a) == store.singleton(store.singleton(a))

    def test_union_and_intersection(self, store):
        family = store.pair(store.ordinal(1), store.ordinal(2))
        assert store.union(family) == store.ordinal(2)
        assert store.intersection(family) == store.ordinal(1)
        assert store.intersection(store.empty) == store.empty

    def test_powerset(self, store):
        assert store.powerset(store.ordinal(2)) == store.by_code(15)
        small = SetStore(powerset_budget=2)
        with pytest.raises(BudgetError):
            small.powerset(small.ordinal(2))

    def test_construct_checks_arity(self, store):
        assert store.construct('successor', store.empty) == store.ordinal(1)
        with pytest.raises(PreconditionError):
            store.construct('pair', store.empty)
        with pytest.raises(PreconditionError):
            store.construct('choice', store.empty)

    def test_rank_universe_sizes(self, store):
        assert [len(store.rank_universe(d)) for d in range(5)] == [0, 1, 2, 4, 16]

    @given(codes(16))
    def test_rank_universe_index_is_code(self, code):
        store = SetStore()
        assert store.code(store.rank_universe(4)[code]) == code
        assert store.by_code(code) == store.rank_universe(4)[code]

    def test_negative_code(self, store):
        with pytest.raises(PreconditionError):
            store.by_code(-1)

    def test_frozen_store(self, store):
        store.ordinal(1)
        store.freeze()
        assert store.ordinal(1) == store.singleton(store.empty)
        with pytest.raises(ContractError):
            store.ordinal(3)


class TestHypersets:
    def test_omega_is_its_own_singleton(self, store, omega):
        assert store.format(omega) == 'Omega'
        assert store.singleton(omega) == omega
        assert not store.is_grounded(omega)
        assert store.rank(omega) is None
        with pytest.raises(PreconditionError):
            store.code(omega)

    def test_bisimilar_presentations_collapse(self, store, omega):
        two_cycle = store.canonicalize(MembershipGraph(2, ((0, 1), (1, 0)), 0))
        three_cycle = store.canonicalize(MembershipGraph(3, ((0, 1), (1, 2), (2, 0)), 2))
        assert two_cycle == omega
        assert three_cycle == omega

    def test_distinct_hypersets(self, store, omega):
        a = store.canonicalize(MembershipGraph(3, ((0, 1), (2, 1), (1, 2)), 1))
        assert a != omega
        b = store.members(a)[-1]
        assert store.members(b) == (a,)
        assert store.format(a).startswith('h')
        assert store.classify(a).n_cycles == frozenset({2, 4})

    def test_canonicalize_grounded(self, store):
        graph = MembershipGraph(3, ((0, 1), (0, 2), (1, 2)), 2)
        assert store.canonicalize(graph) == store.ordinal(2)

    def test_to_graph_canonicalizes_back(self, store, omega):
        a = store.canonicalize(MembershipGraph(3, ((0, 1), (2, 1), (1, 2)), 1))
        for h in (omega, a, store.ordinal(3)):
            assert store.canonicalize(store.to_graph(h)) == h

    def test_grounded_sort_before_hypersets(self, store, omega):
        three = store.ordinal(3)
        assert store.handles()[-1] == omega
        assert store.sort_key(three) < store.sort_key(omega)

    def test_members_mix(self, store, omega):
        s = store.pair(omega, store.empty)
        assert store.members(s) == (store.empty, omega)
        assert store.format(s) == f"h{s.id}"
        assert not store.is_grounded(s)


class TestIsomorphism:
    def test_grounded_isomorphism_is_equality(self, store):
        assert store.is_isomorphic(store.ordinal(2), store.ordinal(2))
        assert not store.is_isomorphic(store.ordinal(2), store.by_code(2))

    def test_mutual_members_are_isomorphic(self, store):
        a = store.canonicalize(MembershipGraph(3, ((0, 1), (2, 1), (1, 2)), 1))
        b = store.members(a)[-1]
        assert store.transitive_closure(a) == store.transitive_closure(b)
        assert store.is_isomorphic(a, b)

    def test_iso_budget(self):
        store = SetStore(iso_budget=2)
        with pytest.raises(BudgetError):
            store.is_isomorphic(store.ordinal(3), store.by_code(13))


class TestChoice:
    def test_choice_picks_least_member(self, store):
        family = store.pair(store.ordinal(1), store.singleton(store.ordinal(1)))
        choice = store.choice_set(family)
        assert store.members(choice) == (store.empty, store.ordinal(1))

    @pytest.mark.parametrize('family_code', [1, 2 ** 1 + 2 ** 3])
    def test_choice_preconditions(self, store, family_code):
        # {{}} has the empty set as a member; {{{}}, {{},{{}}}} is not disjoint
        with pytest.raises(PreconditionError):
            store.choice_set(store.by_code(family_code))

    @given(st.integers(min_value=0, max_value=3))
    def test_ordinal_rank(self, n):
        store = SetStore()
        assert store.rank(store.ordinal(n)) == n

    @given(st.sets(st.integers(min_value=0, max_value=15), min_size=1, max_size=4))
    def test_choice_meets_each_part_once(self, parts):
        store = SetStore()
        # distinct singletons form a disjoint family of nonempty sets
        family = store.make(store.singleton(store.by_code(c)) for c in parts)
        choice = store.choice_set(family)
        for part in store.members(family):
            assert len(store.member_ids(part) & store.member_ids(choice)) == 1
        assert len(store.members(choice)) == len(parts)


class TestCanonicalUniqueness:
    def test_small_graphs_share_handles_exactly_when_bisimilar(self):
        store = SetStore()
        by_tree, by_handle = {}, {}
        for n in (1, 2, 3):
            for edges in all_graphs(n):
                kids, memo = MembershipGraph(n, edges, 0).children(), {}
                for root in range(n):
                    tree = unfolding(kids, root, 6, memo)
                    h = store.canonicalize(MembershipGraph(n, edges, root))
                    assert by_tree.setdefault(tree, h) == h
                    assert by_handle.setdefault(h, tree) == tree
        assert len(by_tree) == len(by_handle)

    @pytest.mark.slow
    def test_four_node_graphs(self):
        for edges in all_graphs(4):
            store = SetStore()
            kids, memo = MembershipGraph(4, edges, 0).children(), {}
            handles = [store.canonicalize(MembershipGraph(4, edges, root)) for root in range(4)]
            trees = [unfolding(kids, root, 8, memo) for root in range(4)]
            for i in range(4):
                for j in range(4):
                    assert (handles[i] == handles[j]) == (trees[i] == trees[j])

    @given(membership_graphs(), membership_graphs())
    def test_random_graphs(self, left, right):
        store = SetStore()
        a, b = store.canonicalize(left), store.canonicalize(right)
        tree_a = unfolding(left.children(), left.root, 8, {})
        tree_b = unfolding(right.children(), right.root, 8, {})
        assert (a == b) == (tree_a == tree_b)

    def test_four_node_diamond_collapses(self):
        store = SetStore()
        # 0 = {}, 1 = 2 = {0}, 3 = {1, 2}
        h = store.canonicalize(MembershipGraph(4, ((0, 1), (0, 2), (1, 3), (2, 3)), 3))
        assert h == store.singleton(store.singleton(store.empty))
        assert len(store) == 3


class TestStoreLaws:
    def test_grounded_sets_are_rigid(self, store):
        universe = store.rank_universe(4)
        for x in universe:
            for y in universe:
                same = x == y
                assert store.is_isomorphic(x, y) == same
                assert (store.transitive_closure(x) == store.transitive_closure(y)) == same

    def test_singletons_of_different_sets_differ(self, store):
        one = store.singleton(store.empty)
        assert not store.is_isomorphic(one, store.singleton(one))

    @pytest.mark.parametrize('d', [4, pytest.param(5, marks=pytest.mark.slow)])
    def test_successor_raises_rank_by_one(self, store, d):
        for s in store.rank_universe(d):
            assert store.classify(store.successor(s)).rank == store.classify(s).rank + 1

    def test_transitive_closures(self, store, omega):
        empty = store.empty
        one = store.singleton(empty)
        two = store.singleton(one)
        assert store.transitive_closure(empty) == {empty}
        assert store.transitive_closure(two) == {two, one, empty}
        assert store.transitive_closure(omega) == {omega}
