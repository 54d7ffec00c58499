import logging

from engines.guards import guarded_command, read_input_file
from engines.hf_store import SetStore
from engines.rules import fixed_point, fixed_point_report, parse_rules, productivity_on_lfp, validate, validation_report

logger = logging.getLogger(__name__)

ACTIONS = ('validate', 'lfp', 'gfp', 'productivity')
PRODUCTIVITY_MODES = ('system', 'function', 'operator')


@guarded_command
def rules(args) -> int:
    budgets = args.budgets
    store = SetStore(budgets.powerset_budget, budgets.iso_budget)
    system = parse_rules(read_input_file(args.rules), store)
    logger.info(f"rules {args.action} on {args.rules}")

    if args.action == 'validate':
        report = validation_report(system, validate(system, unsafe=budgets.unsafe))
    elif args.action in ('lfp', 'gfp'):
        point = fixed_point(system, 'least' if args.action == 'lfp' else 'greatest', args.budget)
        report = fixed_point_report(system, point)
    else:
        report = productivity_on_lfp(system, args.mode, stage_budget=args.budget)
    return report.write(args.report)


def setup(subparsers, parents) -> None:
    parser = subparsers.add_parser('rules', parents=parents,
                                   help="Rule systems: validation, fixed points and productivity")
    parser.add_argument('action', choices=ACTIONS)
    parser.add_argument('--rules', required=True, help="Rules file (space/store, rule and schema lines)")
    parser.add_argument('--budget', type=int, default=64, help="Stage budget for fixed point iteration")
    parser.add_argument('--mode', choices=PRODUCTIVITY_MODES, default='system',
                        help="Productive choice checked by the productivity action")
    parser.set_defaults(handler=rules)
