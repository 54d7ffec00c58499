import logging

from .check import setup as setup_check
from .classify import setup as setup_classify
from .catalog import setup as setup_catalog
from .rules import setup as setup_rules
from .hierarchy import setup as setup_hierarchy
from .diagonal import setup as setup_diagonal
from .los import setup as setup_los
from .graph import setup as setup_graph


def setup(subparsers, parents) -> None:
    """Add every lab command to the argument parser."""
    logger = logging.getLogger(__name__)
    msg = "Loaded commands.{}"
    setup_check(subparsers, parents)
    logger.debug(msg.format("check"))
    setup_classify(subparsers, parents)
    logger.debug(msg.format("classify"))
    setup_catalog(subparsers, parents)
    logger.debug(msg.format("catalog"))
    setup_rules(subparsers, parents)
    logger.debug(msg.format("rules"))
    setup_hierarchy(subparsers, parents)
    logger.debug(msg.format("hierarchy"))
    setup_diagonal(subparsers, parents)
    logger.debug(msg.format("diagonal"))
    setup_los(subparsers, parents)
    logger.debug(msg.format("los"))
    setup_graph(subparsers, parents)
    logger.debug(msg.format("graph"))
