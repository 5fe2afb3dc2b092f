import csv
from pathlib import Path

import pytest

from knotgraph.diagram import parse_pd

DATA = Path(__file__).resolve().parent.parent / "data"

# Standard diagrams, labels as published in knot tables.
TREFOIL_PD = "X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)"
FIGURE8_PD = "X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)"
KINK_POS_PD = "X(1,1,2,2)"
KINK_NEG_PD = "X(1,2,2,1)"


@pytest.fixture
def trefoil():
    return parse_pd(TREFOIL_PD)


@pytest.fixture
def figure8():
    return parse_pd(FIGURE8_PD)


@pytest.fixture
def kink():
    return parse_pd(KINK_POS_PD)


@pytest.fixture(scope="session")
def fixture_rows():
    with (DATA / "knots_fixture.csv").open(newline="") as handle:
        return list(csv.DictReader(handle))


@pytest.fixture(scope="session")
def fixture_csv_path():
    return str(DATA / "knots_fixture.csv")
