"""
Utility functions for the LeibnizPairs engine

Index bookkeeping for cochain bases (tensor and exterior powers) and text
rendering of results.
"""
import logging
from itertools import combinations, product
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)


def increasing_tuples(dim: int, q: int) -> List[Tuple[int, ...]]:
    """
    Enumerate the strictly increasing q-tuples of range(dim) in lex order

    These index the basis of the q-th exterior power. q = 0 gives the single
    empty tuple; q > dim gives an empty list.
    """
    if q < 0:
        return []
    return list(combinations(range(dim), q))


def all_tuples(dim: int, p: int) -> List[Tuple[int, ...]]:
    """Enumerate range(dim)**p in lex order (the basis of the p-th tensor power)"""
    return list(product(range(dim), repeat=p))


def exterior_dim(dim: int, q: int) -> int:
    """Dimension of the q-th exterior power of a dim-dimensional space"""
    if q < 0 or q > dim:
        return 0
    return comb(dim, q)


def tensor_index(indices: Sequence[int], dim: int) -> int:
    """Position of a tuple in the lex enumeration of range(dim)**len(indices)"""
    position = 0
    for i in indices:
        position = position * dim + i
    return position


def sort_with_sign(indices: Iterable[int]) -> Tuple[int, Optional[Tuple[int, ...]]]:
    """
    Sort a tuple of basis indices as a wedge product would

    Returns:
        (sign, sorted tuple); sign is 0 and the tuple None when an index repeats
    """
    items = list(indices)
    if len(set(items)) != len(items):
        return 0, None
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(items)


def index_map(tuples: Sequence[Tuple[int, ...]]) -> Dict[Tuple[int, ...], int]:
    """Reverse lookup for an enumerated tuple list"""
    return {t: i for i, t in enumerate(tuples)}


def format_betti_table(branch: str, degrees: Sequence[Tuple[int, int]]) -> str:
    """
    Render cohomology dimensions as a two-column text table

    Args:
        branch: "leibniz" or "poisson"
        degrees: (n, dim H^n) pairs

    Returns:
        Table text, one degree per line
    """
    lines = [f"branch: {branch}", "  n | dim H^n", " ---+--------"]
    for n, dim in degrees:
        lines.append(f" {n:>2} | {dim:>7}")
    return "\n".join(lines)


def format_duration(seconds: float) -> str:
    """Format a duration in seconds for log messages"""
    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    if seconds < 60:
        return f"{seconds:.1f} seconds"
    return f"{seconds / 60:.1f} minutes"
