from __future__ import annotations

from pathlib import Path

import pytest

from dln.models import KnowledgeBase
from dln.services.defeasible import DefeasibleReasoner
from dln.services.parser import parse_kb, parse_query
from dln.services.tableau import ClassicalReasoner

DATA_DIR = Path(__file__).parent / "data"


def load_kb(name: str) -> KnowledgeBase:
    return parse_kb((DATA_DIR / name).read_text(encoding="utf-8"))


def q(text: str):
    """Parse a query axiom."""
    return parse_query(text)


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def classical() -> ClassicalReasoner:
    return ClassicalReasoner()


@pytest.fixture
def reasoner(classical: ClassicalReasoner) -> DefeasibleReasoner:
    return DefeasibleReasoner(classical)


@pytest.fixture
def situs_inversus() -> KnowledgeBase:
    """Hearts on the left by default, on the right for situs inversus."""
    return load_kb("situs_inversus.kb")


@pytest.fixture
def nixon() -> KnowledgeBase:
    """Quakers are pacifists, republicans are not; republican quakers are both."""
    return load_kb("nixon.kb")


@pytest.fixture
def reservist() -> KnowledgeBase:
    """Military service defaults with minors as exceptions."""
    return load_kb("reservist.kb")


@pytest.fixture
def ranked() -> KnowledgeBase:
    return load_kb("ranked.kb")
