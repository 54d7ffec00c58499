import argparse

import pytest

from engines.guards import (EXIT_BUDGET, EXIT_OK, EXIT_USAGE, BudgetError, ContractError, FormulaSyntaxError,
                            InputError, check_budget, describe_exit, guarded_command, read_input_file,
                            safe_int_convert, validate_input)


class TestErrors:
    def test_input_error_carries_line(self):
        err = InputError("unknown element q", line=3)
        assert err.line == 3
        assert err.one_line() == "ERROR E_INPUT: line 3: unknown element q"

    def test_syntax_error_is_an_input_error(self):
        err = FormulaSyntaxError("unexpected '|'", 7)
        assert isinstance(err, InputError)
        assert err.code == 'E_SYNTAX'
        assert err.position == 7

    def test_one_line_collapses_whitespace(self):
        assert ContractError("no binding\n  for P").one_line() == "ERROR E_CONTRACT: no binding for P"


class TestBudget:
    def test_within_cap(self):
        assert check_budget(4, 4, 'universe') is False

    def test_over_cap_raises(self):
        with pytest.raises(BudgetError):
            check_budget(5, 4, 'universe')

    def test_unsafe_lifts_cap(self):
        assert check_budget(5, 4, 'universe', unsafe=True) is True


class TestHelpers:
    @pytest.mark.parametrize('value, expected', [('12', 12), ('', None), ('x', None), ('-1', None)])
    def test_safe_int_convert(self, value, expected):
        assert safe_int_convert(value) == expected

    def test_validate_input(self):
        assert validate_input('e0', 'element_name')
        assert not validate_input('E0', 'element_name')
        assert validate_input('P', 'classvar')
        with pytest.raises(ContractError):
            validate_input('x', 'nope')

    def test_read_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            read_input_file(str(tmp_path / 'missing.u'))

    def test_read_file(self, tmp_path):
        path = tmp_path / 'u.u'
        path.write_text("elements a\n", encoding='utf-8')
        assert read_input_file(str(path)) == "elements a\n"


class TestGuardedCommand:
    def test_maps_lab_errors_to_exit_codes(self, capsys):
        @guarded_command
        def too_big(args):
            raise BudgetError("universe=9 exceeds the hard cap 4")

        assert too_big(argparse.Namespace()) == EXIT_BUDGET
        assert "ERROR E_BUDGET" in capsys.readouterr().err

    def test_unexpected_error_gets_an_id(self, capsys):
        @guarded_command
        def broken(args):
            raise RuntimeError("boom")

        assert broken(argparse.Namespace()) == EXIT_USAGE
        assert "E_INTERNAL" in capsys.readouterr().err

    def test_passes_result_through(self):
        assert guarded_command(lambda args: EXIT_OK)(argparse.Namespace()) == EXIT_OK

    def test_describe_exit(self):
        assert describe_exit(EXIT_BUDGET) == 'budget exceeded'
        assert describe_exit(42) == 'unknown'
