from engines.guards import guarded_command
from engines.hierarchy import diagonal_sweep


@guarded_command
def diagonal(args) -> int:
    report = diagonal_sweep(args.size, cap=args.budgets.max_universe, unsafe=args.budgets.unsafe)
    return report.write(args.report)


def setup(subparsers, parents) -> None:
    parser = subparsers.add_parser('diagonal', parents=parents,
                                   help="Cantor's diagonal over every map from A into subsets of A")
    parser.add_argument('--size', type=int, default=3, help="Largest |A| swept")
    parser.set_defaults(handler=diagonal)
