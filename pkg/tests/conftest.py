import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))  # makes `import naive` work

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(scope="session")
def golden_20x2():
    from ellipsym.cli import ingest_csv

    return ingest_csv(os.path.join(DATA_DIR, "golden_20x2.csv"))


@pytest.fixture(scope="session")
def golden_40x2():
    from ellipsym.cli import ingest_csv

    return ingest_csv(os.path.join(DATA_DIR, "golden_40x2.csv"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
