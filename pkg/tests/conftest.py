from __future__ import annotations

import sys
from pathlib import Path

import pytest

from uimlc import parse_document


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    acceptance = sys.modules.get("tests.test_acceptance")
    results = getattr(acceptance, "RESULTS", None) if acceptance else None
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_paths() -> list[Path]:
    return sorted(FIXTURES.glob("*.uiml"))


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def parse_fixture(name: str):
    return parse_document(read_fixture(name))


@pytest.fixture
def data_collection():
    return parse_fixture("data-collection.uiml")


@pytest.fixture
def three_styles():
    return parse_fixture("three-styles.uiml")


@pytest.fixture
def kitchen_sink():
    return parse_fixture("kitchen-sink.uiml")
