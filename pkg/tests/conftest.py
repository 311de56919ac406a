import os

import pytest

from mass_layout import FloorPlan, Layout, read_load_matrix

DATA = os.path.join(os.path.dirname(__file__), "data")
TABLE1_CSV = os.path.join(DATA, "table1.csv")

ACCEPTANCE_LINES = []


@pytest.fixture
def table1():
    return read_load_matrix(TABLE1_CSV)


@pytest.fixture
def paper_floor():
    return FloorPlan(64, 22, 20, 10, 2)


def columns_layout(lm, columns, rows=2, cols=3):
    return Layout.from_columns([[lm.index(n) for n in col] for col in columns], rows, cols, lm.n)


@pytest.fixture
def figure2(table1):
    return columns_layout(table1, [("FI", "FII"), ("FIII", "FIV"), ("FV", "FVI")])


@pytest.fixture
def figure3(table1):
    return columns_layout(table1, [("FIII", "FIV"), ("FV", "FVI"), ("FI", "FII")])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
