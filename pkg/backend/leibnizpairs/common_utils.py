"""
Common utilities for LeibnizPairs

Logging setup and exact rational conversion shared by every module.
"""
import logging
from fractions import Fraction
from numbers import Integral
from typing import Any, Optional

from .errors import StructureError

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value: Any) -> Fraction:
    """
    Convert an exact scalar to a Fraction

    Integers, Fractions and "p/q" strings are accepted. Floats are refused:
    no floating point value may enter an exact computation.

    Args:
        value: Scalar to convert

    Returns:
        The value as a Fraction in lowest terms
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise StructureError(f"boolean {value!r} is not a rational coefficient")
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        return parse_rational(value)
    raise StructureError(f"{type(value).__name__} {value!r} is not an exact rational")


def parse_rational(text: str) -> Fraction:
    """
    Parse a rational written as "p/q" or "n"

    Args:
        text: String form of the rational

    Returns:
        Parsed Fraction
    """
    cleaned = text.strip()
    if "." in cleaned or "e" in cleaned.lower():
        raise StructureError(f"'{text}' is not written as p/q")
    try:
        return Fraction(cleaned)
    except ZeroDivisionError:
        raise StructureError(f"'{text}' has a zero denominator")
    except ValueError:
        raise StructureError(f"'{text}' is not a rational number")


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "p/q", or "n" when the denominator is 1"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def setup_logging(level: str = "WARNING", log_file: Optional[str] = None) -> None:
    """
    Set up logging configuration

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional log file name; stderr is always used
    """
    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )
