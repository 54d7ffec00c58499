import logging
import os
from dataclasses import dataclass
from typing import Optional

from .guards import safe_int_convert

logger = logging.getLogger(__name__)

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


def _env_int(var_name: str, default: int, min_val: int = 0) -> int:
    value = safe_int_convert(os.getenv(var_name) or '', default=default, min_val=min_val)
    return default if value is None else value


@dataclass(frozen=True)
class Budgets:
    """Hard caps for exhaustive sweeps, read from the environment"""
    max_universe: int = 4
    max_formula_depth: int = 3
    max_rank_universe: int = 5
    iso_budget: int = 64
    powerset_budget: int = 65536
    unsafe: bool = False

    @classmethod
    def from_env(cls, unsafe: bool = False) -> 'Budgets':
        defaults = cls()
        budgets = cls(
            max_universe=_env_int('PARADOX_LAB_MAX_UNIVERSE', defaults.max_universe),
            max_formula_depth=_env_int('PARADOX_LAB_MAX_FORMULA_DEPTH', defaults.max_formula_depth),
            max_rank_universe=_env_int('PARADOX_LAB_MAX_RANK_UNIVERSE', defaults.max_rank_universe, min_val=1),
            iso_budget=_env_int('PARADOX_LAB_ISO_BUDGET', defaults.iso_budget, min_val=1),
            powerset_budget=_env_int('PARADOX_LAB_POWERSET_BUDGET', defaults.powerset_budget, min_val=1),
            unsafe=unsafe,
        )
        logger.debug(f"Budgets loaded: {budgets}")
        return budgets


def log_file() -> str:
    return os.getenv('PARADOX_LAB_LOG_FILE') or 'paradox_lab.log'


def log_level() -> str:
    level = (os.getenv('PARADOX_LAB_LOG_LEVEL') or 'INFO').upper()
    if level not in LOG_LEVELS:
        logger.warning(f"Unknown log level {level}, using INFO")
        return 'INFO'
    return level


def ledger_file() -> Optional[str]:
    """Regression ledger path; no ledger unless PARADOX_LAB_LEDGER is set"""
    return os.getenv('PARADOX_LAB_LEDGER') or None
