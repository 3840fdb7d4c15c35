from pathlib import Path

import numpy as np
import pytest

import fuzzycover as fc

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
CASE_STUDY_CSV = DATA_DIR / "bone_implants.csv"


@pytest.fixture(scope="session")
def case_study():
    from fuzzycover.cli import ingest_matrix

    return ingest_matrix(str(CASE_STUDY_CSV))


def random_covering(rng, max_n=6, max_m=5, grid=100):
    """Random fuzzy covering: entries on a 1/grid lattice, covering
    condition enforced column by column, no empty members."""
    n = int(rng.integers(2, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    mat = rng.integers(0, grid + 1, size=(m, n)) / grid
    for col in range(n):
        mat[int(rng.integers(0, m)), col] = 1.0
    u = fc.Universe.of_size(n)
    return fc.FuzzyCovering.from_matrix(u, mat)


def random_fuzzy_set(rng, universe, grid=100):
    return fc.FuzzySet(universe, rng.integers(0, grid + 1, size=universe.n) / grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
