import logging

from engines.catalog import (INJECTIVE_OPS, injective_image_report, ni_report, nwf_demo, rn_report, russell_report,
                             sikic_report, wf_report, wf_store_report)
from engines.guards import InputError, PreconditionError, check_budget, guarded_command
from engines.hf_store import SetStore
from engines.productivity import productive_sequence, universe_diagonal_report
from engines.rules import FUNCTION_SCHEMAS, injective_agreement, operator_productivity

logger = logging.getLogger(__name__)

WHICH = "russell|rn:N|ni|wf|nwf|sikic|inj:OP|sequence|ordinals"
# store-level classes become finite structures with one element per set
STORE_RANK_CAP = 4


@guarded_command
def catalog(args) -> int:
    budgets = args.budgets
    max_n = args.max_universe
    check_budget(args.rank, STORE_RANK_CAP, 'rank universe', budgets.unsafe)
    store = SetStore(budgets.powerset_budget, budgets.iso_budget)
    kind, _, param = args.which.partition(':')
    logger.info(f"catalog {args.which}")

    if kind == 'russell':
        report = russell_report(max_n, cap=budgets.max_universe, unsafe=budgets.unsafe)
    elif kind == 'rn':
        if not param.isdigit() or int(param) < 1:
            raise InputError(f"expected rn:N with N >= 1, got '{args.which}'")
        report = rn_report(int(param), max_n, cap=budgets.max_universe, unsafe=budgets.unsafe)
    elif kind == 'wf':
        report = wf_report(max_n, cap=budgets.max_universe, unsafe=budgets.unsafe)
        report = report.merge(wf_store_report(store, args.rank))
    elif kind == 'ni':
        report = ni_report(store, args.rank)
    elif kind == 'nwf':
        report = nwf_demo(stores=args.stores, seed=args.seed)
    elif kind == 'sikic':
        report = sikic_report(max_n, unsafe=budgets.unsafe)
    elif kind == 'inj':
        if param not in INJECTIVE_OPS:
            raise PreconditionError(f"unknown injective map '{param}', expected one of {', '.join(INJECTIVE_OPS)}")
        report = injective_image_report(store, param, args.rank)
        if param in FUNCTION_SCHEMAS:
            report = report.merge(injective_agreement(store, param, args.rank))
    elif kind == 'sequence':
        _, report = productive_sequence(store, args.rank + 1)
        report = report.merge(universe_diagonal_report(store, args.rank))
    elif kind == 'ordinals':
        report = operator_productivity(store, args.rank + 1)
    else:
        raise InputError(f"unknown class '{args.which}', expected one of {WHICH}")
    return report.write(args.report)


def setup(subparsers, parents) -> None:
    parser = subparsers.add_parser('catalog', parents=parents,
                                   help="Replay the classic paradoxical classes with certificates")
    parser.add_argument('--which', required=True, help=WHICH)
    parser.add_argument('--max-universe', type=int, default=3, help="Largest structure size for structure sweeps")
    parser.add_argument('--rank', type=int, default=3, help="Rank universe V_d used by store-level classes")
    parser.add_argument('--stores', type=int, default=100, help="Random hyperset stores for the nwf demo")
    parser.set_defaults(handler=catalog)
