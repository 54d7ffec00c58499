import pytest

from engines.guards import EXIT_FAIL, EXIT_OK, InputError
from engines.report import MAX_LISTED, Report


class TestReport:
    def test_render_orders_line_kinds(self):
        report = Report('demo')
        report.note("trailing note")
        report.member(1, '{}')
        report.verdict("C1 PARADOXICAL")
        report.count('structures', 3)
        report.check('principle', True)
        assert report.lines() == [
            "MODE exhaustive",
            "CHECK principle PASS",
            "COUNT structures 3",
            "VERDICT C1 PARADOXICAL",
            "MEMBER 1 {}",
            "NOTE trailing note",
        ]

    def test_failed_check_sticks(self):
        report = Report('demo')
        report.check('x', False)
        report.check('x', True)
        assert not report.passed
        assert report.exit_code() == EXIT_FAIL

    def test_counterexamples_fail_and_are_capped(self):
        report = Report('demo')
        for i in range(MAX_LISTED + 5):
            report.counterexample(i, "detail")
        assert report.counts['counterexamples'] == MAX_LISTED + 5
        assert len(report.counterexamples) == MAX_LISTED
        assert not report.passed

    def test_merge(self):
        a, b = Report('a'), Report('b', bounded=True)
        a.check('p', True)
        a.count('n', 2)
        b.check('p', False)
        b.count('n', 3)
        merged = a.merge(b)
        assert merged.name == 'a'
        assert merged.bounded
        assert merged.checks == {'p': False}
        assert merged.counts == {'n': 5}

    def test_bounded_header(self):
        assert Report('demo', bounded=True).lines()[0] == "MODE bounded"

    def test_write_to_stdout(self, capsys):
        report = Report('demo')
        report.check('ok', True)
        assert report.write() == EXIT_OK
        assert capsys.readouterr().out == "MODE exhaustive\nCHECK ok PASS\n"

    def test_write_to_file(self, tmp_path):
        path = tmp_path / 'out.txt'
        Report('demo').write(str(path))
        assert path.read_text(encoding='utf-8') == "MODE exhaustive\n"

    def test_write_to_bad_path(self, tmp_path):
        with pytest.raises(InputError):
            Report('demo').write(str(tmp_path / 'missing' / 'out.txt'))
