from pathlib import Path

import numpy as np
import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def meshes_dir() -> Path:
    return REPO_ROOT / "meshes"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240617)
