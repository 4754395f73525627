"""
Cohomology of the total complexes and of the augmenting column
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import StructureAlgebra
from .bicomplex import Bicomplex, LeibnizBicomplex, TotalCochain
from .common_utils import ONE, ZERO, format_rational
from .errors import ContractViolation, StructureError
from .linalg import (RationalMatrix, SubspaceBasis, column_space_basis, independent_subset,
                     is_zero_vector, kernel_basis, quotient_dim, rank, reduce_mod_subspace)
from .utils import format_betti_table, format_duration

logger = logging.getLogger(__name__)


@dataclass
class BettiTable:
    """Cohomology dimensions per degree, with optional canonical representatives"""
    branch: str
    degrees: List[Tuple[int, int]] = field(default_factory=list)
    representatives: Optional[Dict[int, List[TotalCochain]]] = None

    def dim(self, n: int) -> int:
        for degree, value in self.degrees:
            if degree == n:
                return value
        raise KeyError(f"degree {n} was not computed")

    def dims(self) -> List[int]:
        return [value for _, value in self.degrees]

    def format(self) -> str:
        return format_betti_table(self.branch, self.degrees)

    def to_records(self) -> List[Dict[str, Any]]:
        records = []
        for n, value in self.degrees:
            record: Dict[str, Any] = {"degree": n, "dim": value}
            if self.representatives is not None:
                record["representatives"] = [
                    _render_total_cochain(rep) for rep in self.representatives.get(n, [])
                ]
            records.append(record)
        return records


def _render_total_cochain(cochain: TotalCochain) -> List[Dict[str, Any]]:
    parts = []
    for bidegree in sorted(cochain.parts):
        part = cochain.parts[bidegree]
        entries = [[int(i), format_rational(part.coeffs[i])]
                   for i in np.flatnonzero(np.asarray(part.coeffs != 0, dtype=bool))]
        if entries:
            parts.append({"bidegree": [bidegree.p, bidegree.q], "entries": entries})
    return parts


def canonical_representatives(cycles: SubspaceBasis, boundaries: SubspaceBasis) -> List[np.ndarray]:
    """
    Kernel vectors reduced mod image, thinned to an independent family

    The count equals dim Z - dim B; each vector is fixed by reduction mod B.
    """
    reduced = [reduce_mod_subspace(vec, boundaries) for vec in cycles]
    keep = independent_subset([vec for vec in reduced], cycles.ambient_dim)
    return [reduced[i] for i in keep]


def total_cohomology(complex_: Bicomplex, max_n: int, representatives: bool = False) -> BettiTable:
    """
    dim H^n of the total complex for n = 0..max_n

    Args:
        complex_: Pair or Poisson bicomplex
        max_n: Highest degree computed
        representatives: Also return canonical representative cocycles

    Returns:
        BettiTable for the complex's branch

    Raises:
        ContractViolation: the image of D_{n-1} is not inside the kernel of D_n
    """
    if max_n < 0:
        raise StructureError(f"max degree must be non-negative, got {max_n}")
    table = BettiTable(complex_.branch, [], {} if representatives else None)
    for n in range(max_n + 1):
        start = time.perf_counter()
        cycles, boundaries = complex_.cocycles(n), complex_.coboundaries(n)
        dim_h = quotient_dim(cycles, boundaries)
        table.degrees.append((n, dim_h))
        if representatives:
            reps = canonical_representatives(cycles, boundaries)
            if len(reps) != dim_h:
                raise ContractViolation(f"found {len(reps)} representatives for dim H^{n} = {dim_h}")
            table.representatives[n] = [TotalCochain.from_vector(complex_, n, vec) for vec in reps]
        logger.info(f"H^{n} ({complex_.branch}) = {dim_h}: ker {cycles.dim}, im {boundaries.dim}, "
                    f"{format_duration(time.perf_counter() - start)}")
    return table


def cohomology_class(complex_: Bicomplex, n: int, vec: np.ndarray) -> np.ndarray:
    """
    Canonical representative of the class of a cocycle

    Returns:
        The cocycle reduced mod the coboundaries; zero iff the class is trivial
    """
    if not is_zero_vector(complex_.total_differential(n).matrix.apply(vec)):
        raise StructureError(f"vector is not a cocycle in degree {n}")
    return reduce_mod_subspace(vec, complex_.coboundaries(n))


def augmented_column_cohomology(complex_: LeibnizBicomplex, max_p: int) -> BettiTable:
    """
    Cohomology of P^L → C^1(A, M)^L → C^2(A, M)^L → … in degrees 0..max_p
    """
    maps = complex_.augmenting_column(max_p)
    table = BettiTable("augmenting", [])
    previous: Optional[RationalMatrix] = None
    for i, differential in enumerate(maps):
        matrix = differential.matrix
        cycles = kernel_basis(matrix)
        if previous is None:
            boundaries = SubspaceBasis(matrix.cols, [], check=False)
        else:
            boundaries = column_space_basis(previous)
        table.degrees.append((i, quotient_dim(cycles, boundaries)))
        previous = matrix
    return table


@dataclass
class WhiteheadReport:
    degrees: Tuple[int, ...]
    total: List[int]
    column: List[int]
    semisimple_asserted: bool

    @property
    def match(self) -> bool:
        return self.total == self.column

    @property
    def note(self) -> str:
        if not self.semisimple_asserted:
            return "hypothesis not asserted"
        return "dimensions agree" if self.match else "dimensions differ"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "degrees": list(self.degrees),
            "total": self.total,
            "augmenting_column": self.column,
            "match": self.match,
            "semisimple_asserted": self.semisimple_asserted,
            "note": self.note,
        }


def whitehead_compare(complex_: LeibnizBicomplex, semisimple: bool = False,
                      degrees: Sequence[int] = (1, 2, 3)) -> WhiteheadReport:
    """
    Compare total cohomology with the augmenting-column cohomology

    Semisimplicity of L is taken on the caller's word; without it the
    comparison still runs and the report says so.
    """
    top = max(degrees)
    total = total_cohomology(complex_, top)
    column = augmented_column_cohomology(complex_, top)
    report = WhiteheadReport(tuple(degrees), [total.dim(i) for i in degrees],
                             [column.dim(i) for i in degrees], semisimple)
    if semisimple and not report.match:
        logger.warning(f"comparison mismatch: total {report.total} vs column {report.column}")
    return report


def _hochschild_coboundary(c: np.ndarray, F: np.ndarray, n: int) -> np.ndarray:
    """δ of an n-cochain A^{⊗n} → A stored as a tensor with the output axis last"""
    G = np.moveaxis(np.tensordot(c, F, axes=([1], [n])), 1, -1)
    for i in range(1, n + 1):
        merged = np.tensordot(c, F, axes=([2], [i - 1]))
        G = G + (-1) ** i * np.moveaxis(merged, [0, 1], [i - 1, i])
    G = G + (-1) ** (n + 1) * np.tensordot(F, c, axes=([n], [0]))
    return G


def hochschild_matrices(A: StructureAlgebra, max_n: int) -> List[RationalMatrix]:
    """
    Bar-complex coboundaries C^n(A, A) → C^{n+1}(A, A) for n = 0..max_n,
    built column by column from elementary cochains
    """
    d = A.dim
    matrices = []
    for n in range(max_n + 1):
        columns = []
        for flat in range(d ** (n + 1)):
            F = np.full((d,) * (n + 1), ZERO, dtype=object)
            F[np.unravel_index(flat, F.shape)] = ONE
            G = _hochschild_coboundary(A.c, F, n)
            columns.append(np.array(G.reshape(-1), dtype=object))
        matrices.append(RationalMatrix.from_columns(d ** (n + 2), columns))
    return matrices


def hochschild_cohomology(A: StructureAlgebra, max_n: int) -> BettiTable:
    """Hochschild cohomology HH^n(A, A) for n = 0..max_n"""
    matrices = hochschild_matrices(A, max_n)
    table = BettiTable("hochschild", [])
    previous_rank = 0
    for n, matrix in enumerate(matrices):
        current_rank = rank(matrix)
        table.degrees.append((n, matrix.cols - current_rank - previous_rank))
        previous_rank = current_rank
    return table
