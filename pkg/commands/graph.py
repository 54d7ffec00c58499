import logging

from engines.guards import guarded_command, read_input_file
from engines.hf_store import MembershipGraph, SetStore, classify_graph, parse_graph
from engines.report import Report

logger = logging.getLogger(__name__)


def _describe(cls) -> str:
    if cls.grounded:
        return f"grounded:rank={cls.rank}"
    cycles = ','.join(str(n) for n in sorted(cls.n_cycles)) or 'none'
    return f"ungrounded:cycles={cycles}"


@guarded_command
def graph(args) -> int:
    presented = parse_graph(read_input_file(args.graph))
    store = SetStore(args.budgets.powerset_budget, args.budgets.iso_budget)
    report = Report('graph')
    report.count('nodes', presented.node_count)
    report.count('edges', len(presented.edges))

    classes = classify_graph(presented, args.cycle_bound)
    handles = {}
    for node in range(presented.node_count):
        handles[node] = store.canonicalize(MembershipGraph(presented.node_count, presented.edges, node))
        report.member(f"node{node}", _describe(classes[node]))
    report.count('canonical-sets', len(set(handles.values())))

    root = handles[presented.root]
    quotient = store.classify(root, args.cycle_bound)
    report.verdict(f"root {store.format(root)} {_describe(quotient)}")
    collapsed = [node for node in handles if node != presented.root and handles[node] == root]
    if collapsed:
        report.note(f"nodes {' '.join(str(n) for n in collapsed)} are bisimilar to the root")
    logger.info(f"Graph with {presented.node_count} nodes canonicalized to {store.format(root)}")
    return report.write(args.report)


def setup(subparsers, parents) -> None:
    parser = subparsers.add_parser('graph', parents=parents,
                                   help="Canonicalize and classify a membership graph file")
    parser.add_argument('--graph', required=True, help="Graph file (nodes / edge / root lines)")
    parser.add_argument('--cycle-bound', type=int, default=4, help="Longest membership cycle searched")
    parser.set_defaults(handler=graph)
