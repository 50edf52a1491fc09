from pathlib import Path

import pytest

from tools.algebra import BiPoly
from tools.settings import Settings

EXP = Path(__file__).resolve().parent.parent / "exp"


def poly(*terms) -> BiPoly:
    """poly((2, 0, 1), (0, 2, 1)) is x² + y²."""
    return BiPoly({(i, j): c for i, j, c in terms})


@pytest.fixture
def settings() -> Settings:
    return Settings(scan_resolution=128, log_level="WARNING")


@pytest.fixture
def exp() -> Path:
    return EXP


@pytest.fixture
def torsion() -> BiPoly:
    return poly((0, 0, "1/4"), (2, 0, "-1/4"), (0, 2, "-1/4"))
