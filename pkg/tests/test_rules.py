import pytest
from hypothesis import given
from hypothesis import strategies as st

from engines.catalog import classic_class
from engines.guards import InputError, PreconditionError
from engines.rules import (MonotoneOp, RuleSystem, apply_operator, corollary_sweep, derived_class, fixed_point,
                           fixed_point_report, injective_agreement, operator_productivity, parse_rules,
                           productivity_on_lfp, validate, validation_report)

SAMPLE = "space a b c\nrule {} -> a\nrule {a} -> b\nrule {a,b} -> c\n"


@pytest.fixture
def sample_system():
    return parse_rules(SAMPLE)


class TestParsing:
    def test_abstract_system(self, sample_system):
        assert sample_system.objects == ('a', 'b', 'c')
        assert sample_system.rules[2] == (frozenset({'a', 'b'}), 'c')
        assert not sample_system.bounded

    def test_store_system(self, store):
        system = parse_rules("store rank <= 2\nschema adjoin\n", store)
        assert system.store is store
        assert system.rank_budget == 2
        assert system.bounded

    @pytest.mark.parametrize('text, line', [
        ("rule {a} -> b\n", 1),
        ("space a b\nrule {a} -> q\n", 2),
        ("space a b\nrule a -> b\n", 2),
        ("store rank<=x\n", 1),
        ("store rank<=2\nschema choice\n", 2),
        ("schema union\n", 1),
        ("space a\nspace b\n", 2),
        ("space a A\n", 1),
        ("space a\nfrobnicate\n", 2),
    ])
    def test_malformed(self, text, line):
        with pytest.raises(InputError) as excinfo:
            parse_rules(text)
        assert excinfo.value.line == line

    def test_missing_declaration(self):
        with pytest.raises(InputError):
            parse_rules("# empty\n")

    def test_constructor_preconditions(self, store):
        with pytest.raises(PreconditionError):
            RuleSystem(schemas=('union',))
        with pytest.raises(PreconditionError):
            RuleSystem(store=store)
        with pytest.raises(PreconditionError):
            RuleSystem(schemas=('choice',), store=store, rank_budget=2)
        with pytest.raises(InputError):
            RuleSystem(('a',), [(frozenset(), 'b')])


class TestValidation:
    def test_sample(self, sample_system):
        validation = validate(sample_system)
        assert validation.deterministic
        assert not validation.is_global
        assert validation.global_counterexample == frozenset({'b'})
        report = validation_report(sample_system, validation)
        assert report.verdicts == ['deterministic YES', 'global NO']
        assert report.notes == ['nothing follows from {b}']

    def test_collision(self):
        system = RuleSystem(('a', 'b'), [(frozenset(), 'a'), (frozenset({'b'}), 'a')])
        validation = validate(system)
        assert not validation.deterministic
        assert validation.deterministic_counterexample == ('a', frozenset(), frozenset({'b'}))

    def test_store_validation_is_bounded(self, store):
        system = RuleSystem(schemas=('singleton',), store=store, rank_budget=2)
        validation = validate(system)
        assert validation.bounded
        assert validation.deterministic
        assert validation_report(system, validation).verdicts[1].startswith('bounded-global')

    def test_singleton_and_powerset_are_deterministic(self, store):
        system = RuleSystem(schemas=('singleton', 'powerset'), store=store, rank_budget=3)
        validation = validate(system)
        # P({}) = {{}} is also the singleton of {}, from the same premise
        assert validation.deterministic
        assert validation.deterministic_counterexample is None

    def test_ordinal_system_is_global_but_not_deterministic(self, store):
        system = RuleSystem(schemas=('successor', 'union'), store=store, rank_budget=2)
        validation = validate(system)
        assert validation.is_global
        assert not validation.deterministic
        # union of {{}} and union of {} are both {}
        empty = store.empty
        assert validation.deterministic_counterexample == (empty, frozenset(), frozenset({empty}))
        report = validation_report(system, validation)
        assert report.verdicts == ['deterministic NO', 'bounded-global YES']
        assert report.notes == ['{} follows from both {} and {{}}']


class TestFixedPoints:
    def test_least(self, sample_system):
        point = fixed_point(sample_system)
        assert point.result == frozenset({'a', 'b', 'c'})
        assert point.stages == [frozenset({'a'}), frozenset({'b'}), frozenset({'c'})]
        report = fixed_point_report(sample_system, point)
        assert report.passed
        assert report.members == [('1', 'a'), ('2', 'b'), ('3', 'c')]

    def test_greatest(self, sample_system):
        point = fixed_point(sample_system, 'greatest')
        assert point.result == frozenset({'a', 'b', 'c'})
        assert point.stages == []

    def test_greatest_drops_unsupported(self):
        system = RuleSystem(('a', 'b'), [(frozenset({'b'}), 'a')])
        point = fixed_point(system, 'greatest')
        assert point.result == frozenset()
        assert fixed_point(system).result == frozenset()

    def test_stage_budget(self, sample_system):
        point = fixed_point(sample_system, budget=1)
        assert not point.stable
        assert point.result == frozenset({'a'})
        assert not fixed_point_report(sample_system, point).passed

    def test_unknown_mode(self, sample_system):
        with pytest.raises(PreconditionError):
            fixed_point(sample_system, 'middle')

    def test_adjoin_builds_the_rank_universe(self, store):
        system = parse_rules("store rank<=2\nschema adjoin\n", store)
        assert fixed_point(system).result == frozenset(store.rank_universe(3))

    def test_apply_operator(self, sample_system):
        op = MonotoneOp(sample_system)
        assert apply_operator(op, set()) == {'a'}
        assert apply_operator(op, {'b'}) == {'a'}
        assert apply_operator(op, {'a'}) == {'a', 'b'}
        assert apply_operator(op, {'a', 'b'}) == {'a', 'b', 'c'}

    def test_operator_is_monotone(self, sample_system):
        op = MonotoneOp(sample_system)
        assert op.apply({'a'}) <= op.apply({'a', 'b'})

    @given(st.sets(st.sampled_from('abc')), st.sets(st.sampled_from('abc')))
    def test_operator_monotone_everywhere(self, left, right):
        op = MonotoneOp(parse_rules(SAMPLE))
        assert op.apply(left) <= op.apply(left | right)

    def test_derived_class(self, sample_system):
        assert derived_class(sample_system).mask == 7
        assert classic_class('derived_system', sample_system).mask == 7


class TestProductivity:
    def test_system_mode(self, sample_system):
        report = productivity_on_lfp(sample_system, 'system')
        assert report.passed
        assert report.counts['no-derivation'] == 5

    def test_operator_mode_fails_on_the_whole_fixed_point(self, sample_system):
        report = productivity_on_lfp(sample_system, 'operator')
        assert not report.passed
        assert report.counts['counterexamples'] == 1
        assert report.counterexamples[0][0] == '{a,b,c}'

    def test_function_mode_needs_one_schema(self, sample_system):
        with pytest.raises(PreconditionError):
            productivity_on_lfp(sample_system, 'function')

    def test_unknown_mode(self, sample_system):
        with pytest.raises(PreconditionError):
            productivity_on_lfp(sample_system, 'oracle')

    def test_ordinal_operator(self, store):
        report = operator_productivity(store, 4)
        assert report.passed
        assert report.checks['lfp-is-ordinals']

    @pytest.mark.parametrize('schema', ['singleton', 'powerset'])
    def test_injective_agreement(self, store, schema):
        assert injective_agreement(store, schema, 2).passed

    def test_constant_schema_is_not_productive(self, store):
        system = RuleSystem(schemas=('constant',), store=store, rank_budget=2)
        assert fixed_point(system).result == {store.empty}
        report = productivity_on_lfp(system, 'function')
        assert not report.passed
        assert [key for key, _ in report.counterexamples] == ['{{}}']

    def test_singleton_fixed_point(self, store):
        one = store.singleton(store.empty)
        three = store.singleton(store.singleton(one))
        system = RuleSystem(schemas=('singleton',), store=store, rank_budget=3)
        assert fixed_point(system).result == {one, three}
        # the next singletons have rank 5
        wider = RuleSystem(schemas=('singleton',), store=store, rank_budget=4)
        assert fixed_point(wider).result == {one, three}

    @pytest.mark.parametrize('rank_budget', [3, pytest.param(4, marks=pytest.mark.slow)])
    def test_singleton_agreement_at_higher_ranks(self, store, rank_budget):
        report = injective_agreement(store, 'singleton', rank_budget)
        assert report.passed
        assert report.checks['lfp-inside-image']


class TestCorollary:
    def test_sweep(self):
        report = corollary_sweep(samples=50)
        assert report.passed
        assert report.counts['systems-2'] == 256
        assert report.counts['systems-3'] == 50
        assert report.counts.get('deterministic-global-2', 0) == 0

    def test_full_sweep(self):
        report = corollary_sweep()
        assert report.passed
        assert report.counts['systems-3'] == 1000
        assert report.counts['deterministic-2'] > 0
        assert report.counts.get('deterministic-global-2', 0) == 0
