import hashlib
import logging
import os
import re
import sys
from datetime import datetime
from functools import wraps
from typing import Dict, Optional

logger = logging.getLogger(__name__)

# Exit codes shared by every command
EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

# Input validation patterns (names of the universe file and the formula grammar)
SAFE_PATTERNS = {
    'element_name': re.compile(r'^[a-z][a-z0-9_]*$'),
    'setvar': re.compile(r'^[a-z][a-z0-9_]*$'),
    'classvar': re.compile(r'^[A-Z][A-Z0-9_]*$'),
}


class LabError(Exception):
    """Base error carrying a single-line machine code"""
    code = 'E_LAB'
    exit_code = EXIT_USAGE

    def __init__(self, message: str, code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        if code:
            self.code = code

    def one_line(self) -> str:
        return f"ERROR {self.code}: {' '.join(self.message.split())}"


class InputError(LabError):
    """Malformed input file, graph or argument"""
    code = 'E_INPUT'

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FormulaSyntaxError(InputError):
    """Lexer or parser error at a character position"""
    code = 'E_SYNTAX'

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class PreconditionError(LabError):
    """An operation was called outside its precondition"""
    code = 'E_PRECONDITION'


class ContractError(LabError):
    """Caller broke a contract (e.g. missing binding)"""
    code = 'E_CONTRACT'


class BudgetError(LabError):
    """Hard cap or size budget exceeded"""
    code = 'E_BUDGET'
    exit_code = EXIT_BUDGET


def safe_int_convert(value: str, default: Optional[int] = None, min_val: int = 0, max_val: int = 2**63-1) -> Optional[int]:
    """Safely convert string to int with bounds checking"""
    try:
        if not value:
            return default
        result = int(value)
        if min_val <= result <= max_val:
            return result
        raise ValueError(f"Value {result} out of bounds [{min_val}, {max_val}]")
    except (ValueError, TypeError) as e:
        logger.warning(f"Safe int conversion failed: {e}")
        return default


def validate_input(input_value: str, pattern_name: str) -> bool:
    """Validate input against predefined patterns"""
    if pattern_name not in SAFE_PATTERNS:
        raise ContractError(f"Unknown validation pattern: {pattern_name}")

    if not isinstance(input_value, str):
        return False

    return bool(SAFE_PATTERNS[pattern_name].match(input_value))


def check_budget(value: int, cap: int, what: str, unsafe: bool = False) -> bool:
    """Raise BudgetError when value exceeds cap; returns True when the cap was lifted"""
    if value <= cap:
        return False
    if unsafe:
        logger.warning(f"Budget {what}={value} exceeds cap {cap}; continuing in bounded mode")
        return True
    raise BudgetError(f"{what}={value} exceeds the hard cap {cap} (use --unsafe-budget to override)")


def read_input_file(path: str) -> str:
    """Read a UTF-8 input file, turning OS errors into InputError"""
    if not path:
        raise InputError("No input file given")
    if not os.path.isfile(path):
        raise InputError(f"Input file not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"Cannot read {path}: {e}")


def guarded_command(func):
    """Wrap a command handler: map LabError to its exit code, give unexpected errors an id"""
    @wraps(func)
    def wrapper(args, *rest, **kwargs):
        try:
            return func(args, *rest, **kwargs)
        except LabError as e:
            logger.error(f"Command {func.__name__} failed: {e.one_line()}")
            print(e.one_line(), file=sys.stderr)
            return e.exit_code
        except Exception as e:
            error_id = hashlib.md5(f"{func.__name__}{datetime.now()}".encode()).hexdigest()[:8]
            logger.exception(f"Command error [{error_id}]: {e}")
            print(f"ERROR E_INTERNAL: unexpected failure (error id {error_id})", file=sys.stderr)
            return EXIT_USAGE
    return wrapper


def describe_exit(code: int) -> str:
    names: Dict[int, str] = {
        EXIT_OK: 'ok',
        EXIT_FAIL: 'counterexample or FAIL found',
        EXIT_USAGE: 'usage or input error',
        EXIT_BUDGET: 'budget exceeded',
    }
    return names.get(code, 'unknown')
