import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

import commands
from engines.guards import EXIT_USAGE, describe_exit
from engines.settings import LOG_LEVELS, Budgets, log_file, log_level


def setup_logging(path: str, level: str = 'INFO') -> None:
    """File logging in the usual format; only errors reach the console"""
    # Clear any existing handlers
    for handler in logging.root.handlers[:]:
        logging.root.removeHandler(handler)

    formatter = logging.Formatter(
        '%(asctime)s | %(levelname)-8s | %(name)-15s | %(message)s',
        datefmt='%H:%M:%S'
    )

    file_handler = logging.FileHandler(path, encoding='utf-8')
    file_handler.setFormatter(formatter)

    # Reports go to stdout; the console only carries errors
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter('%(levelname)-8s | %(message)s'))
    console_handler.setLevel(logging.ERROR)

    logging.basicConfig(level=getattr(logging, level), handlers=[file_handler, console_handler])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--report', default=None, help="Write the report to FILE instead of stdout")
    common.add_argument('--seed', type=int, default=0, help="Seed for sampled sweeps")
    common.add_argument('--unsafe-budget', action='store_true',
                        help="Lift the hard caps; the report header becomes MODE bounded")
    common.add_argument('--log-level', choices=LOG_LEVELS, default=None)

    parser = argparse.ArgumentParser(
        prog='paradox-lab',
        description="Verification lab for set-theoretic paradoxes and the productivity principle",
    )
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    commands.setup(subparsers, [common])
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    setup_logging(log_file(), log_level())
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, 'log_level', None):
        logging.getLogger().setLevel(getattr(logging, args.log_level))
    if not getattr(args, 'handler', None):
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    args.budgets = Budgets.from_env(args.unsafe_budget)
    logging.info(f"Running {args.command} ({' '.join(argv if argv is not None else sys.argv[1:])})")
    code = args.handler(args)
    logging.info(f"{args.command} finished with exit {code}: {describe_exit(code)}")
    return code


if __name__ == "__main__":
    sys.exit(main())
