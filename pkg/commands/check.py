import logging

from engines.guards import guarded_command
from engines.productivity import (sweep_certificates, sweep_identity_productive, verify_principle_class_level,
                                  verify_principle_formula_level)
from engines.regression_ledger import RegressionLedger
from engines.rules import corollary_sweep
from engines.settings import ledger_file

logger = logging.getLogger(__name__)

TARGETS = ('principle', 'principle-formulas', 'identity', 'corollary', 'certificates')


@guarded_command
def check(args) -> int:
    budgets = args.budgets
    max_n = budgets.max_universe if args.max_universe is None else args.max_universe
    unsafe = budgets.unsafe
    logger.info(f"check {args.target} (max universe {max_n})")

    if args.target == 'principle':
        report = verify_principle_class_level(max_n, cap=budgets.max_universe, unsafe=unsafe)
        formulas = verify_principle_formula_level(min(max_n, 3), args.formula_depth,
                                                  depth_cap=budgets.max_formula_depth, unsafe=unsafe)
        report = report.merge(formulas)
    elif args.target == 'principle-formulas':
        report = verify_principle_formula_level(max_n, args.formula_depth, depth_cap=budgets.max_formula_depth,
                                                unsafe=unsafe)
    elif args.target == 'identity':
        report = sweep_identity_productive(max_n, cap=budgets.max_universe, unsafe=unsafe)
    elif args.target == 'certificates':
        report = sweep_certificates(max_n, cap=budgets.max_universe, unsafe=unsafe)
    else:
        report = corollary_sweep(args.samples, args.seed)

    path = args.ledger or ledger_file()
    if path:
        RegressionLedger(path).check_counts(report, f"{args.target}:n{max_n}:d{args.formula_depth}")
    return report.write(args.report)


def setup(subparsers, parents) -> None:
    parser = subparsers.add_parser('check', parents=parents,
                                   help="Exhaustive verification of the productivity principle and its corollaries")
    parser.add_argument('target', choices=TARGETS)
    parser.add_argument('--max-universe', type=int, default=None,
                        help="Largest structure size swept (default: PARADOX_LAB_MAX_UNIVERSE)")
    parser.add_argument('--formula-depth', type=int, default=2, help="Formula size bound for the formula-level sweep")
    parser.add_argument('--samples', type=int, default=1000, help="Sampled three-object systems for the corollary")
    parser.add_argument('--ledger', default=None, help="Regression ledger JSON file (default: PARADOX_LAB_LEDGER)")
    parser.set_defaults(handler=check)
