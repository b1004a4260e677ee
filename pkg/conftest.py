# conftest.py
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import config  # noqa: E402
from algebra.polynomial import IntPolynomial  # noqa: E402


@pytest.fixture
def x2p1():
    return IntPolynomial((1, 0, 1))


@pytest.fixture
def x2m2():
    return IntPolynomial((-2, 0, 1))


@pytest.fixture
def cubic():
    """x^3 - x - 1, discriminant -23."""
    return IntPolynomial((-1, -1, 0, 1))


@pytest.fixture(autouse=True)
def quiet_status(monkeypatch):
    monkeypatch.setattr(config, "VERBOSE", False)
