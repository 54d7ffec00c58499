import logging

from engines.guards import guarded_command
from engines.hf_store import SetStore
from engines.hierarchy import StageConfig, axiom_report, build_stages, stage_report

logger = logging.getLogger(__name__)


@guarded_command
def hierarchy(args) -> int:
    budgets = args.budgets
    store = SetStore(budgets.powerset_budget, budgets.iso_budget)
    cfg = StageConfig(args.stages, args.seed_rank, args.card_budget, args.rank_budget, args.limit)
    stages = build_stages(cfg, store, rank_cap=budgets.max_rank_universe, unsafe=budgets.unsafe)
    report = stage_report(stages, cfg, store)
    if args.axiom_report or args.rank_universe is not None:
        d = args.rank_universe if args.rank_universe is not None else cfg.rank_budget + 1
        report = report.merge(axiom_report(store, d, rank_cap=budgets.max_rank_universe, unsafe=budgets.unsafe))
    return report.write(args.report)


def setup(subparsers, parents) -> None:
    parser = subparsers.add_parser('hierarchy', parents=parents,
                                   help="Truncated cumulative-cardinal stages and the axiom report")
    parser.add_argument('action', choices=('build',))
    parser.add_argument('--stages', type=int, default=2, help="Build C_0 through C_K")
    parser.add_argument('--seed-rank', type=int, default=2, help="Rank truncation of C_1")
    parser.add_argument('--card-budget', type=int, default=64, help="Most members kept per stage")
    parser.add_argument('--rank-budget', type=int, default=3, help="Highest rank of a stage member")
    parser.add_argument('--limit', action='store_true', help="Add the first limit stage")
    parser.add_argument('--axiom-report', action='store_true', help="Append the axiom report on V_d")
    parser.add_argument('--rank-universe', type=int, default=None, help="d for the axiom report")
    parser.set_defaults(handler=hierarchy)
