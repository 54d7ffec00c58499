import logging

from engines.formula import ClassTerm, class_extension, parse, to_text
from engines.guards import InputError, check_budget, guarded_command, read_input_file
from engines.model import ClassRef, load_structure
from engines.productivity import add_verdict, decide
from engines.report import Report

logger = logging.getLogger(__name__)


def _explicit_class(m, names: str) -> ClassRef:
    extension = [m.index_of(name.strip()) for name in names.split(',') if name.strip()]
    return ClassRef(frozenset(extension), source=names)


@guarded_command
def classify(args) -> int:
    m = load_structure(read_input_file(args.universe))
    report = Report('classify')
    report.count('elements', m.size)
    classes = []
    for text in args.term or ():
        term = parse(text)
        if not isinstance(term, ClassTerm):
            raise InputError(f"expected a class term '{{ x | ... }}', got '{text}'")
        classes.append((term, class_extension(m, term)))
    for names in args.members or ():
        classes.append((None, _explicit_class(m, names)))

    if not classes:
        report.bounded = check_budget(m.size, args.budgets.max_universe, 'universe size', args.budgets.unsafe)
        classes = [(None, ClassRef.from_mask(mask)) for mask in range(2 ** m.size)]

    for number, (term, C) in enumerate(classes, start=1):
        name = f"class{number}"
        verdict = decide(m, C)
        add_verdict(report, m, name, C, verdict)
        members = ','.join(m.label(e) for e in sorted(C.extension))
        source = to_text(term) if term is not None else 'explicit'
        report.note(f"{name} = {source} extension {{{members}}}")
        report.count('paradoxical' if not verdict.is_set else 'sets')
    logger.info(f"Classified {len(classes)} classes over {m.size} elements")
    return report.write(args.report)


def setup(subparsers, parents) -> None:
    parser = subparsers.add_parser('classify', parents=parents,
                                   help="Decide set or paradoxical for classes of a universe file")
    parser.add_argument('--universe', required=True, help="Universe file (elements / member lines)")
    parser.add_argument('--class', dest='term', action='append',
                        help="Class term such as '{ x | x notin x }' (repeatable)")
    parser.add_argument('--members', action='append', help="Explicit class as comma-separated element names")
    parser.set_defaults(handler=classify)
