import pytest

from engines.formula import Evaluator
from engines.guards import BudgetError
from engines.model import ClassRef, Structure
from engines.productivity import (STATUS_PARADOXICAL, STATUS_SET, Verdict, add_verdict, decide, diagonal_of,
                                  identity_productive_family, identity_productive_report, productive_sequence,
                                  sweep_certificates, sweep_identity_productive, universe_diagonal_report,
                                  validate_certificate, verify_principle_class_level,
                                  verify_principle_formula_level)
from engines.report import Report


class DroppedNegation(Evaluator):
    def visit_not(self, f, env):
        return self.visit(f.body, env)


class AndAsOr(Evaluator):
    def visit_and(self, f, env):
        return self.visit(f.left, env) or self.visit(f.right, env)


class ExistsAsForall(Evaluator):
    def visit_exists(self, f, env):
        return all(self.visit(f.body, {**env, f.var: e}) for e in self.m.domain)


class FlippedMembership(Evaluator):
    def visit_member(self, f, env):
        if f.right.is_class:
            return super().visit_member(f, env)
        return not super().visit_member(f, env)


class TestDecide:
    def test_set(self, chain_structure):
        verdict = decide(chain_structure, ClassRef(frozenset({0})))
        assert verdict.status == STATUS_SET
        assert verdict.representative == 1
        assert validate_certificate(chain_structure, ClassRef(frozenset({0})), verdict)

    def test_paradoxical_with_certificate(self, chain_structure):
        C = ClassRef(frozenset({1}))
        verdict = decide(chain_structure, C)
        assert verdict.status == STATUS_PARADOXICAL
        assert dict(verdict.certificate) == {0: 1}
        assert validate_certificate(chain_structure, C, verdict)

    def test_russell_on_omega(self, omega_structure):
        verdict = decide(omega_structure, ClassRef(frozenset()))
        assert not verdict.is_set
        assert dict(verdict.certificate) == {}

    def test_tampered_certificates_are_rejected(self, chain_structure):
        C = ClassRef(frozenset({1}))
        assert not validate_certificate(chain_structure, C, Verdict(STATUS_PARADOXICAL, certificate={0: 0}))
        assert not validate_certificate(chain_structure, C, Verdict(STATUS_PARADOXICAL))
        assert not validate_certificate(chain_structure, C, Verdict(STATUS_SET, representative=0))

    def test_add_verdict(self, chain_structure):
        report = Report('classify')
        C = ClassRef(frozenset({1}))
        add_verdict(report, chain_structure, 'class1', C, decide(chain_structure, C))
        assert report.passed
        assert report.verdicts == ['class1 PARADOXICAL']
        assert report.witnesses == [('2', 'e0', 'e1')]


class TestPrinciple:
    def test_class_level(self):
        report = verify_principle_class_level(3)
        assert report.passed
        assert report.counts['structures'] == 531
        assert report.counts['classes'] == 4165

    @pytest.mark.slow
    def test_class_level_four_elements(self):
        assert verify_principle_class_level(4).passed

    def test_class_level_budget(self):
        with pytest.raises(BudgetError):
            verify_principle_class_level(5)

    def test_formula_level(self):
        report = verify_principle_formula_level(2, 2)
        assert report.passed
        assert report.counts['formulas'] == 176
        assert report.counts['structures'] == 19

    @pytest.mark.slow
    def test_formula_level_three_elements(self):
        assert verify_principle_formula_level(3, 2).passed

    def test_formula_level_depth_beyond_cap_is_bounded(self):
        report = verify_principle_formula_level(1, 2, depth_cap=1, unsafe=True)
        assert report.bounded
        assert report.passed

    @pytest.mark.parametrize('mutant', [DroppedNegation, AndAsOr, ExistsAsForall, FlippedMembership])
    def test_mutated_evaluator_is_caught(self, mutant):
        report = verify_principle_formula_level(2, 1, evaluator=mutant)
        assert not report.passed
        assert report.counterexamples


class TestCertificates:
    def test_sweep(self):
        report = sweep_certificates(3)
        assert report.passed
        assert report.counts['verdicts'] == 4165


class TestIdentityProductive:
    def test_family_on_chain(self, chain_structure):
        # e0 = {} forces e0 into every class; e1 = {e0} then follows
        assert identity_productive_family(chain_structure) == [3]

    def test_omega_admits_the_empty_class(self, omega_structure):
        assert identity_productive_family(omega_structure) == [0]
        report = identity_productive_report(omega_structure)
        assert report.passed
        assert report.counts['vacuous-empty-class'] == 1

    def test_self_member_is_left_out(self):
        # a = {} and b = {b}: {a} qualifies, {b} misses a, {a,b} holds b with b in b
        m = Structure.from_pairs(['a', 'b'], [('b', 'b')])
        family = identity_productive_family(m)
        assert 1 in family
        assert 2 not in family
        assert family == [1]
        assert identity_productive_report(m).passed

    def test_sweep(self):
        assert sweep_identity_productive(3).passed


class TestSequences:
    def test_identity_choice_gives_ordinals(self, store):
        terms, report = productive_sequence(store, 4)
        assert report.passed
        assert terms == [store.ordinal(k) for k in range(4)]
        assert [m for _, m in report.members][:2] == ['{}', '{{}}']

    def test_diagonal_of(self, store, omega):
        s = store.pair(omega, store.ordinal(1))
        assert diagonal_of(store, s) == store.singleton(store.ordinal(1))

    def test_universe_diagonal(self, store):
        report = universe_diagonal_report(store, 3)
        assert report.passed
        assert report.counts['sets'] == 4 + 1 + 4
        assert report.notes
