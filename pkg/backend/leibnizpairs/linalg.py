"""
Exact rational linear algebra

Dense matrices of Fractions held in numpy object arrays. Row reduction picks
the first nonzero entry of each column as pivot, so every result (RREF,
kernel basis, particular solution, reduced representative) is reproducible.
"""
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .common_utils import ONE, ZERO, to_rational
from .errors import ContractViolation, StructureError

logger = logging.getLogger(__name__)

_to_rational = np.frompyfunc(to_rational, 1, 1)


def rational_vector(values: Iterable) -> np.ndarray:
    """Build a 1-D object array of Fractions from exact scalars"""
    data = list(values)
    vec = np.empty(len(data), dtype=object)
    for i, value in enumerate(data):
        vec[i] = to_rational(value)
    return vec


def zero_vector(length: int) -> np.ndarray:
    """Zero vector of Fractions"""
    return np.full(length, ZERO, dtype=object)


def _nonzero_mask(arr: np.ndarray) -> np.ndarray:
    return np.asarray(arr != 0, dtype=bool)


def is_zero_vector(vec: np.ndarray) -> bool:
    return not _nonzero_mask(vec).any()


class RationalMatrix:
    """Immutable dense matrix over the rationals"""

    def __init__(self, entries):
        arr = np.array(entries, dtype=object)
        if arr.ndim != 2:
            raise StructureError(f"a matrix needs 2 dimensions, got shape {arr.shape}")
        if arr.size:
            arr = _to_rational(arr).astype(object)
        arr.flags.writeable = False
        self.entries = arr
        self._columns = None

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "RationalMatrix":
        # arr is trusted to hold Fractions already
        matrix = cls.__new__(cls)
        arr.flags.writeable = False
        matrix.entries = arr
        matrix._columns = None
        return matrix

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls._wrap(np.full((rows, cols), ZERO, dtype=object))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        arr = np.full((n, n), ZERO, dtype=object)
        for i in range(n):
            arr[i, i] = ONE
        return cls._wrap(arr)

    @classmethod
    def from_entries(cls, rows: int, cols: int,
                     entries: Mapping[Tuple[int, int], Fraction]) -> "RationalMatrix":
        """Dense matrix from a sparse {(row, col): value} mapping"""
        arr = np.full((rows, cols), ZERO, dtype=object)
        for (i, j), value in entries.items():
            if value:
                arr[i, j] = to_rational(value)
        return cls._wrap(arr)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[np.ndarray]) -> "RationalMatrix":
        arr = np.full((rows, len(columns)), ZERO, dtype=object)
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise StructureError(f"column {j} has length {len(col)}, expected {rows}")
            arr[:, j] = [to_rational(v) for v in col]
        return cls._wrap(arr)

    @classmethod
    def from_blocks(cls, rows: int, cols: int,
                    placements: Iterable[Tuple[int, int, "RationalMatrix"]]) -> "RationalMatrix":
        """Place (row offset, column offset, block) triples into a zero matrix, adding overlaps"""
        arr = np.full((rows, cols), ZERO, dtype=object)
        for r0, c0, block in placements:
            if block.rows and block.cols:
                arr[r0:r0 + block.rows, c0:c0 + block.cols] += block.entries
        return cls._wrap(arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    def __getitem__(self, key):
        return self.entries[key]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.entries == other.entries))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols})"

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix._wrap(self.entries.T.copy())

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j].copy()

    def row(self, i: int) -> np.ndarray:
        return self.entries[i, :].copy()

    def is_zero(self) -> bool:
        return not _nonzero_mask(self.entries).any()

    def nonzero_count(self) -> int:
        return int(_nonzero_mask(self.entries).sum())

    def nonzero_by_column(self) -> List[List[Tuple[int, Fraction]]]:
        """For each column, the (row, value) pairs of its nonzero entries"""
        if self._columns is None:
            columns: List[List[Tuple[int, Fraction]]] = [[] for _ in range(self.cols)]
            rows_idx, cols_idx = np.nonzero(_nonzero_mask(self.entries))
            for i, j in zip(rows_idx.tolist(), cols_idx.tolist()):
                columns[j].append((i, self.entries[i, j]))
            self._columns = columns
        return self._columns

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Matrix-vector product, skipping zero coordinates of vec"""
        if len(vec) != self.cols:
            raise StructureError(f"vector of length {len(vec)} for a {self.rows}x{self.cols} matrix")
        out = zero_vector(self.rows)
        columns = self.nonzero_by_column()
        for k in np.flatnonzero(_nonzero_mask(vec)).tolist():
            coeff = vec[k]
            for i, value in columns[k]:
                out[i] += value * coeff
        return out

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            return matmul(self, other)
        return self.apply(np.asarray(other, dtype=object))

    def to_lists(self) -> List[List[Fraction]]:
        return [list(row) for row in self.entries]


def matmul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    """
    Exact product a @ b

    Only nonzero pairs contribute, which keeps products of coboundary
    matrices (mostly zero) cheap.
    """
    if a.cols != b.rows:
        raise StructureError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = np.full((a.rows, b.cols), ZERO, dtype=object)
    a_columns = a.nonzero_by_column()
    for j, column in enumerate(b.nonzero_by_column()):
        for k, bkj in column:
            for i, aik in a_columns[k]:
                out[i, j] += aik * bkj
    return RationalMatrix._wrap(out)


def _rref_in_place(arr: np.ndarray) -> List[int]:
    rows, cols = arr.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.flatnonzero(_nonzero_mask(arr[r:, c]))
        if candidates.size == 0:
            continue
        i = r + int(candidates[0])
        if i != r:
            arr[[r, i]] = arr[[i, r]]
        pivot = arr[r, c]
        if pivot != 1:
            arr[r] = arr[r] / pivot
        others = np.flatnonzero(_nonzero_mask(arr[:, c]))
        others = others[others != r]
        if others.size:
            arr[others] = arr[others] - np.multiply.outer(arr[others, c], arr[r])
        pivots.append(c)
        r += 1
    return pivots


def rref(m: RationalMatrix) -> Tuple[int, List[int], RationalMatrix]:
    """
    Reduced row echelon form

    Args:
        m: Matrix to reduce

    Returns:
        (rank, pivot columns, reduced matrix)
    """
    arr = m.entries.copy()
    arr.flags.writeable = True
    pivots = _rref_in_place(arr)
    return len(pivots), pivots, RationalMatrix._wrap(arr)


def rank(m: RationalMatrix) -> int:
    # row rank equals column rank; reduce along the shorter side
    target = m if m.rows <= m.cols else m.transpose()
    return rref(target)[0]


class SubspaceBasis:
    """
    A linearly independent family of vectors in Q^ambient_dim

    Independence is verified on construction unless the caller already knows
    it (check=False), e.g. for rows of a reduced echelon form.
    """

    def __init__(self, ambient_dim: int, vectors: Sequence[np.ndarray] = (), check: bool = True):
        self.ambient_dim = ambient_dim
        vecs = []
        for i, vec in enumerate(vectors):
            vec = np.asarray(vec, dtype=object)
            if vec.shape != (ambient_dim,):
                raise StructureError(f"vector {i} has shape {vec.shape}, expected ({ambient_dim},)")
            vecs.append(vec)
        self.vectors: Tuple[np.ndarray, ...] = tuple(vecs)
        self._echelon: Optional[Tuple[List[int], np.ndarray]] = None
        if check and self.vectors:
            found = rank(self.matrix())
            if found != len(self.vectors):
                raise StructureError(f"{len(self.vectors)} vectors span only a {found}-dimensional space")

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def matrix(self) -> RationalMatrix:
        """The vectors as rows"""
        arr = np.full((len(self.vectors), self.ambient_dim), ZERO, dtype=object)
        for i, vec in enumerate(self.vectors):
            arr[i, :] = vec
        return RationalMatrix._wrap(arr)

    def echelon(self) -> Tuple[List[int], np.ndarray]:
        """Pivot columns and RREF rows of the span"""
        if self._echelon is None:
            arr = self.matrix().entries.copy()
            arr.flags.writeable = True
            pivots = _rref_in_place(arr)
            self._echelon = (pivots, arr[:len(pivots)])
        return self._echelon

    def contains(self, vec: np.ndarray) -> bool:
        return is_zero_vector(reduce_mod_subspace(vec, self))


def kernel_basis(m: RationalMatrix) -> SubspaceBasis:
    """
    Basis of {v : m v = 0}

    One vector per non-pivot column f: coordinate f is 1, the pivot
    coordinates are read off the reduced matrix, all others are 0.
    """
    _, pivots, reduced = rref(m)
    pivot_set = set(pivots)
    vectors = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = zero_vector(m.cols)
        vec[free] = ONE
        for j, pc in enumerate(pivots):
            vec[pc] = -reduced[j, free]
        vectors.append(vec)
    return SubspaceBasis(m.cols, vectors, check=False)


def column_space_basis(m: RationalMatrix) -> SubspaceBasis:
    """Canonical basis of the image of m: nonzero rows of rref(m^T)"""
    r, _, reduced = rref(m.transpose())
    return SubspaceBasis(m.rows, [reduced.row(i) for i in range(r)], check=False)


def solve(m: RationalMatrix, b: Sequence) -> Optional[np.ndarray]:
    """
    Solve m x = b

    Returns:
        The particular solution that vanishes on every non-pivot coordinate,
        or None when the system is inconsistent
    """
    rhs = rational_vector(b) if not isinstance(b, np.ndarray) else b
    if len(rhs) != m.rows:
        raise StructureError(f"right-hand side of length {len(rhs)} for {m.rows} equations")
    arr = np.full((m.rows, m.cols + 1), ZERO, dtype=object)
    arr[:, :m.cols] = m.entries
    arr[:, m.cols] = rhs
    pivots = _rref_in_place(arr)
    if pivots and pivots[-1] == m.cols:
        return None
    x = zero_vector(m.cols)
    for j, pc in enumerate(pivots):
        x[pc] = arr[j, m.cols]
    return x


def reduce_mod_subspace(vec: Sequence, basis: SubspaceBasis) -> np.ndarray:
    """
    Canonical representative of vec + span(basis)

    Pivot coordinates of the basis RREF are eliminated; the result is zero
    exactly when vec lies in the span.
    """
    out = np.array(vec, dtype=object).copy()
    if out.shape != (basis.ambient_dim,):
        raise StructureError(f"vector of shape {out.shape} in ambient dimension {basis.ambient_dim}")
    if not basis.vectors:
        return out
    pivots, rows = basis.echelon()
    for j, pc in enumerate(pivots):
        coeff = out[pc]
        if coeff != 0:
            out = out - coeff * rows[j]
    return out


def quotient_dim(cycles: SubspaceBasis, boundaries: SubspaceBasis) -> int:
    """
    dim Z - dim B for B contained in Z

    Raises:
        ContractViolation: some vector of B is not in span Z
    """
    if cycles.ambient_dim != boundaries.ambient_dim:
        raise StructureError(
            f"ambient dimensions differ: {cycles.ambient_dim} vs {boundaries.ambient_dim}")
    for i, vec in enumerate(boundaries):
        if not cycles.contains(vec):
            logger.error(f"boundary vector {i} lies outside the cycle space")
            raise ContractViolation(f"boundary vector {i} is not contained in the cycle space")
    return cycles.dim - boundaries.dim


def express_in_basis(basis: SubspaceBasis, vectors: Sequence[np.ndarray]) -> RationalMatrix:
    """
    Coordinates of each vector with respect to basis, one column per vector

    Raises:
        ContractViolation: a vector lies outside span(basis)
    """
    k, count = basis.dim, len(vectors)
    arr = np.full((basis.ambient_dim, k + count), ZERO, dtype=object)
    for j, vec in enumerate(basis.vectors):
        arr[:, j] = vec
    for j, vec in enumerate(vectors):
        arr[:, k + j] = vec
    pivots = _rref_in_place(arr)
    if pivots[:k] != list(range(k)) or len(pivots) > k:
        logger.error(f"{count} vectors are not all contained in a {k}-dimensional subspace")
        raise ContractViolation("vector outside the given subspace")
    out = np.full((k, count), ZERO, dtype=object)
    out[:, :] = arr[:k, k:]
    return RationalMatrix._wrap(out)


def independent_subset(vectors: Sequence[np.ndarray], ambient_dim: int) -> List[int]:
    """Indices of the first maximal linearly independent subfamily"""
    if not vectors:
        return []
    columns = RationalMatrix.from_columns(ambient_dim, list(vectors))
    _, pivots, _ = rref(columns)
    return pivots


def stack_vectors(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Concatenate coordinate blocks into one vector"""
    if not vectors:
        return zero_vector(0)
    return np.concatenate([np.asarray(v, dtype=object) for v in vectors]).astype(object)
