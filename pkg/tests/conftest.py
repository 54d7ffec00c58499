import os

import pytest

from engines.hf_store import MembershipGraph, SetStore
from engines.model import Structure, load_structure

SAMPLES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'samples')


@pytest.fixture(autouse=True)
def lab_environment(tmp_path, monkeypatch):
    monkeypatch.setenv('PARADOX_LAB_LOG_FILE', str(tmp_path / 'paradox_lab.log'))
    monkeypatch.delenv('PARADOX_LAB_LEDGER', raising=False)
    for name in ('PARADOX_LAB_MAX_UNIVERSE', 'PARADOX_LAB_MAX_FORMULA_DEPTH', 'PARADOX_LAB_MAX_RANK_UNIVERSE'):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def store():
    return SetStore()


@pytest.fixture
def omega(store):
    return store.canonicalize(MembershipGraph(1, ((0, 0),), 0))


@pytest.fixture
def omega_structure() -> Structure:
    return load_structure("elements a\nmember a a\n")


@pytest.fixture
def chain_structure() -> Structure:
    """e0 = {} and e1 = {e0}"""
    return Structure.from_pairs(['e0', 'e1'], [('e0', 'e1')])


@pytest.fixture
def sample_path():
    return lambda name: os.path.join(SAMPLES, name)
