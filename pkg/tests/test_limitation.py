import pytest

from engines.guards import BudgetError, PreconditionError
from engines.limitation import (SetSystem, cardinal_system, cumulative_system, los_check, zermelo_systems)


class TestSystems:
    def test_cumulative_system(self, store):
        system = cumulative_system(store, 3)
        assert system.ground == ('{}', '{{}}', '{{{}}}', '{{},{{}}}')
        assert system.stages == (0, 1, 3, 15)
        assert system.sets == frozenset(range(4))

    def test_cumulative_sets_stop_below_the_top_stage(self, store):
        system = cumulative_system(store, 3)
        below_top = {s for stage in system.stages[:3] for s in range(2 ** 4) if s & ~stage == 0}
        assert system.sets == frozenset(below_top)
        # V_2 is a set; the class holding only {{{}}} and the whole ground V_3 are not
        assert system.is_set(0b0011)
        assert not system.is_set(0b0100)
        assert not system.is_set(0b1111)

    def test_cumulative_with_omega(self, store):
        assert cumulative_system(store, 2, with_omega=True).ground == ('{}', '{{}}', 'Omega')

    def test_cumulative_needs_a_stage(self, store):
        with pytest.raises(PreconditionError):
            cumulative_system(store, 0)

    def test_escape(self, store):
        system = cumulative_system(store, 3)
        assert system.escapes(0b100, 0b001)
        assert not system.escapes(0b011, 0b001)
        assert cardinal_system(3, 2).escapes(0b011, 0b001)

    def test_cardinal_sets(self):
        assert cardinal_system(3, 2).sets == frozenset({0, 1, 2, 4})

    def test_zermelo_count(self):
        assert sum(1 for _ in zermelo_systems(2)) == 16


class TestLimitationOfSize:
    def test_cumulative(self):
        report = los_check('cumulative', d=3)
        assert report.passed
        assert report.counts['classes'] == 16
        assert report.counts['paradoxical'] == 12

    def test_cumulative_with_omega(self, capsys):
        report = los_check('cumulative', d=3, with_omega=True)
        assert report.passed
        assert report.counts['classes'] == 32
        assert 'omega-cumulative PARADOXICAL' in report.verdicts
        assert 'omega-structure SET Omega' in report.verdicts

    def test_cardinal(self):
        report = los_check('cardinal', k=2, g=3)
        assert report.passed
        assert report.counts['paradoxical'] == 4

    def test_zermelo_sweep(self):
        report = los_check('zermelo', g=2)
        assert report.passed
        assert report.counts['systems'] == 22
        assert report.counts['classes'] == 74

    @pytest.mark.slow
    def test_zermelo_sweep_up_to_four(self):
        report = los_check('zermelo', g=4)
        assert report.passed
        assert report.counts['systems'] == 2 + 4 + 16 + 256 + 65536
        assert report.counts['classes'] == 1050698
        assert not report.counterexamples

    def test_explicit_system(self):
        system = SetSystem(('o0', 'o1'), frozenset({0, 3}), 'zermelo')
        report = los_check('zermelo', system=system)
        assert report.passed
        assert report.counts['paradoxical'] == 2

    def test_unknown_mode(self):
        with pytest.raises(PreconditionError):
            los_check('banach')

    def test_budgets(self):
        with pytest.raises(BudgetError):
            los_check('cumulative', d=5)
        with pytest.raises(BudgetError):
            los_check('cardinal', g=5)
        assert los_check('cardinal', g=5, unsafe=True).bounded

    def test_negative_threshold(self):
        with pytest.raises(PreconditionError):
            los_check('cardinal', k=-1)
