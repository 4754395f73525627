"""
Pytest configuration and shared fixtures for LeibnizPairs tests.

This file contains:
- Global pytest configuration
- Catalogue objects and their regular modules
- Bundled documents and the HTTP test client
"""

import json
import sys
import logging
from pathlib import Path
from typing import Any, Dict

import pytest
from fastapi.testclient import TestClient

# Add the backend directory to the Python path
backend_path = Path(__file__).parent.parent / "backend"
sys.path.insert(0, str(backend_path))

from cli import app
from leibnizpairs import catalog
from leibnizpairs.algebra import self_module
from leibnizpairs.config import BUNDLED_DIR, BUNDLED_EXAMPLES
from leibnizpairs.document import load_document


@pytest.fixture(scope="session")
def dual_pair():
    """(DUAL, 0), the pure associative case."""
    return catalog.dual_pair()


@pytest.fixture(scope="session")
def pair1():
    """Dual numbers with the Euler derivation."""
    return catalog.pair1()


@pytest.fixture(scope="session")
def q_sl2():
    """(Q, sl_2)."""
    return catalog.q_sl2_pair()


@pytest.fixture(scope="session")
def pois3():
    """span{1, x, y} with {x, y} = x."""
    return catalog.pois3()


@pytest.fixture(scope="session")
def dual0():
    """Dual numbers with the zero bracket."""
    return catalog.dual_zero_poisson()


@pytest.fixture(scope="session")
def pair1_self(pair1):
    return self_module(pair1)


@pytest.fixture(scope="session")
def bundled_names():
    return sorted(BUNDLED_EXAMPLES)


@pytest.fixture
def bundled_raw() -> Dict[str, Dict[str, Any]]:
    """Decoded JSON of every bundled document, fresh per test so it can be mutated."""
    return {name: json.loads((BUNDLED_DIR / filename).read_text(encoding="utf-8"))
            for name, filename in BUNDLED_EXAMPLES.items()}


@pytest.fixture
def abelian3_raw() -> Dict[str, Any]:
    """
    (Q, abelian L = span{a, b, c}) with the jet [a, b] = ta, [a, c] = tb.

    Every skew λ₁ is an infinitesimal here, but this one breaks Jacobi at
    order t², and nothing in the total complex hits Hom(Λ³L, L).
    """
    return {
        "schema_version": "1.0",
        "algebras": {
            "Q": {"kind": "associative", "basis": ["1"], "unit": "1", "c": [["1", "1", "1", "1"]]},
            "L3": {"kind": "lie", "basis": ["a", "b", "c"], "c": []},
        },
        "pairs": {"Q_L3": {"A": "Q", "L": "L3", "mu": []}},
        "jets": {
            "SKEW": {
                "base": "Q_L3",
                "order": 1,
                "lambda": {"1": [["a", "b", "a", "1"], ["b", "a", "a", "-1"],
                                 ["a", "c", "b", "1"], ["c", "a", "b", "-1"]]},
            }
        },
    }


@pytest.fixture(scope="session")
def dual_doc():
    return load_document("dual_numbers")


@pytest.fixture(scope="session")
def pois3_doc():
    return load_document("pois3")


@pytest.fixture
def fastapi_client() -> TestClient:
    """Create a FastAPI test client."""
    return TestClient(app)


@pytest.fixture(autouse=True, scope="session")
def setup_test_logging():
    """Set up logging for tests."""
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "unit: Unit tests")
    config.addinivalue_line("markers", "integration: Integration tests")
    config.addinivalue_line("markers", "performance: Performance tests")
    config.addinivalue_line("markers", "slow: Slow running tests")
    config.addinivalue_line("markers", "api: API tests")
    config.addinivalue_line("markers", "cli: Command line interface tests")
