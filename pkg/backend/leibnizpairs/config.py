"""
Configuration module for LeibnizPairs

Centralized constants, bundled example catalogue and environment-driven
settings. Values can be overridden through a .env file next to the package.
"""
import os
from pathlib import Path
from typing import Dict

from dotenv import load_dotenv

from .errors import DocumentError

# Optional .env file next to the backend directory
env_path = Path(__file__).parent.parent / '.env'
if env_path.exists():
    load_dotenv(env_path, override=False)

# Input document format
SCHEMA_VERSION = "1.0"

# Global sign c in  delta_CE eps* + eps* delta_CE = c * delta_v  for the
# regular module of the pair (A, A) underlying a Poisson algebra
PROPOSITION_SIGN = -1

# Bundled example documents
BUNDLED_DIR = Path(__file__).parent / "bundled"

BUNDLED_EXAMPLES: Dict[str, str] = {
    "dual_numbers": "dual_numbers.json",
    "sl2_over_q": "sl2_over_q.json",
    "pair1": "pair1.json",
    "pois3": "pois3.json",
    "matrix2": "matrix2.json",
}

# Runtime settings
LOG_LEVEL = os.getenv("LEIBNIZ_LOG_LEVEL", "WARNING")
LOG_FILE = os.getenv("LEIBNIZ_LOG_FILE") or None

DEFAULT_MAX_DEGREE = int(os.getenv("LEIBNIZ_MAX_DEGREE", "3"))
DEFAULT_LIFT_ORDER = int(os.getenv("LEIBNIZ_LIFT_ORDER", "3"))

API_CONFIG = {
    "host": os.getenv("LEIBNIZ_API_HOST", "127.0.0.1"),
    "port": int(os.getenv("LEIBNIZ_API_PORT", "8001")),
    "max_degree_limit": int(os.getenv("LEIBNIZ_API_MAX_DEGREE", "5")),
}


def get_example_path(name: str) -> Path:
    """
    Resolve a bundled example name to its document path

    Args:
        name: Key of BUNDLED_EXAMPLES, e.g. "dual_numbers"

    Returns:
        Absolute path of the JSON document
    """
    try:
        return BUNDLED_DIR / BUNDLED_EXAMPLES[name]
    except KeyError:
        known = ", ".join(sorted(BUNDLED_EXAMPLES))
        raise DocumentError(f"unknown bundled example '{name}' (known: {known})")
