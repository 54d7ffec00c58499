import logging

from engines.guards import guarded_command
from engines.hf_store import SetStore
from engines.limitation import MODES, los_check

logger = logging.getLogger(__name__)


@guarded_command
def los(args) -> int:
    budgets = args.budgets
    store = SetStore(budgets.powerset_budget, budgets.iso_budget)
    report = los_check(args.mode, d=args.stages, k=args.threshold, g=args.ground, with_omega=args.omega,
                       store=store, unsafe=budgets.unsafe)
    return report.write(args.report)


def setup(subparsers, parents) -> None:
    parser = subparsers.add_parser('los', parents=parents, help="Limitation of size principles on finite set systems")
    parser.add_argument('--mode', required=True, choices=MODES)
    parser.add_argument('--stages', type=int, default=3, help="Cumulative mode: ground V_d")
    parser.add_argument('--threshold', type=int, default=2, help="Cardinal mode: sets have fewer than k elements")
    parser.add_argument('--ground', type=int, default=3, help="Cardinal and zermelo modes: ground size")
    parser.add_argument('--omega', action='store_true', help="Cumulative mode: adjoin the self-loop set Omega")
    parser.set_defaults(handler=los)
