"""
Cochain spaces and coboundary matrices of the pair and Poisson bicomplexes

Basis of C^{p,q}: (A-tuple in lex order, increasing L-tuple, target index),
with the A-tuple varying slowest. The column p = 0 has target P, every other
position has target M. Blocks of a total degree are ordered by increasing p;
in the Poisson complex the bottom-row slot Hom(Λ^{n} A, M), stored at
bidegree (1, n - 1), comes first.

Signs:
    δ_H   interior merge at 1-indexed position i carries (-1)^i, tail (-1)^(p+1)
    δ_CE  action term (-1)^(i+1), bracket term (-1)^(i+j), 1-indexed
    D     δ_H + (-1)^p δ_CE on C^{p,q}; δ_v + δ_CE on C^{0,q};
          δ_P + δ_CE on the Poisson bottom row
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Dict, List, NamedTuple, Optional, Tuple, Union

import numpy as np

from .algebra import LeibnizPair, PairModule, PoissonAlgebra, self_module
from .common_utils import ONE, ZERO
from .config import PROPOSITION_SIGN
from .errors import ContractViolation, StructureError
from .linalg import (RationalMatrix, SubspaceBasis, column_space_basis, express_in_basis,
                     kernel_basis, matmul, zero_vector)
from .utils import all_tuples, exterior_dim, increasing_tuples, index_map, sort_with_sign, tensor_index

logger = logging.getLogger(__name__)

LEIBNIZ = "leibniz"
POISSON = "poisson"


@dataclass(frozen=True, order=True)
class Bidegree:
    p: int
    q: int
    branch: str = LEIBNIZ

    def __post_init__(self):
        if self.branch not in (LEIBNIZ, POISSON):
            raise StructureError(f"unknown branch '{self.branch}'")
        if self.p < 0:
            raise StructureError(f"negative p in {self}")
        if self.branch == POISSON and self.p < 1:
            raise StructureError("the Poisson complex has no column p = 0")
        if self.q < 0 and not (self.is_bottom and self.q == -1):
            raise StructureError(f"negative q in {self}")

    @property
    def total(self) -> int:
        return self.p + self.q

    @property
    def is_bottom(self) -> bool:
        """Poisson bottom-row slot Hom(Λ^{q+1} A, M)"""
        return self.branch == POISSON and self.p == 1

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


@dataclass(frozen=True, eq=False)
class Cochain:
    bidegree: Bidegree
    coeffs: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not np.asarray(self.coeffs != 0, dtype=bool).any()


class Block(NamedTuple):
    bidegree: Bidegree
    offset: int
    size: int


@dataclass(frozen=True, eq=False)
class TotalCochain:
    n: int
    branch: str
    parts: Dict[Bidegree, Cochain] = field(default_factory=dict)

    def to_vector(self, complex_: "_Bicomplex") -> np.ndarray:
        vec = zero_vector(complex_.total_dim(self.n))
        for block in complex_.layout(self.n):
            part = self.parts.get(block.bidegree)
            if part is not None:
                if part.dim != block.size:
                    raise StructureError(f"part {block.bidegree} has {part.dim} coordinates, expected {block.size}")
                vec[block.offset:block.offset + block.size] = part.coeffs
        return vec

    @classmethod
    def from_vector(cls, complex_: "_Bicomplex", n: int, vec: np.ndarray) -> "TotalCochain":
        if len(vec) != complex_.total_dim(n):
            raise StructureError(f"vector of length {len(vec)} for total degree {n}")
        parts = {
            block.bidegree: Cochain(block.bidegree, np.array(vec[block.offset:block.offset + block.size], dtype=object))
            for block in complex_.layout(n)
        }
        return cls(n, complex_.branch, parts)

    def is_zero(self) -> bool:
        return all(part.is_zero() for part in self.parts.values())


@dataclass(frozen=True, eq=False)
class DifferentialMatrix:
    from_degree: int
    to_degree: int
    matrix: RationalMatrix
    source_layout: Tuple[Block, ...]
    target_layout: Tuple[Block, ...]

    @property
    def basis_layout(self) -> Tuple[Block, ...]:
        return self.source_layout


class _BlockAssembler:
    """Accumulate (out block, in block) sub-matrices of a cochain map"""

    def __init__(self, out_blocks: int, in_blocks: int, out_width: int, in_width: int):
        self.out_blocks, self.in_blocks = out_blocks, in_blocks
        self.out_width, self.in_width = out_width, in_width
        self.blocks: Dict[Tuple[int, int], np.ndarray] = {}
        self._eye = None
        if out_width == in_width:
            self._eye = np.full((out_width, in_width), ZERO, dtype=object)
            for t in range(out_width):
                self._eye[t, t] = ONE

    def add(self, out_block: int, in_block: int, block: np.ndarray) -> None:
        key = (out_block, in_block)
        current = self.blocks.get(key)
        self.blocks[key] = block if current is None else current + block

    def add_scalar(self, out_block: int, in_block: int, scalar: Fraction) -> None:
        if scalar:
            self.add(out_block, in_block, self._eye * scalar)

    def build(self) -> RationalMatrix:
        ow, iw = self.out_width, self.in_width
        arr = np.full((self.out_blocks * ow, self.in_blocks * iw), ZERO, dtype=object)
        for (ob, ib), block in self.blocks.items():
            arr[ob * ow:(ob + 1) * ow, ib * iw:(ib + 1) * iw] += block
        return RationalMatrix._wrap(arr)


def _transposed_slices(tensor: np.ndarray) -> List[Optional[np.ndarray]]:
    """For t[x, s, r], the matrices K_x with K_x[r, s] = t[x, s, r]; None when zero"""
    out = []
    for x in range(tensor.shape[0]):
        block = np.array(tensor[x].T, dtype=object)
        out.append(block if np.asarray(block != 0, dtype=bool).any() else None)
    return out


def _nonzero_entries(vec: np.ndarray) -> List[Tuple[int, Fraction]]:
    return [(int(l), vec[l]) for l in np.flatnonzero(np.asarray(vec != 0, dtype=bool))]


def hochschild_matrix(c: np.ndarray, left: np.ndarray, right: np.ndarray,
                      p: int, multiplicity: int = 1) -> RationalMatrix:
    """
    Matrix of δ_H: Hom(A^{⊗p}, M) → Hom(A^{⊗p+1}, M), repeated for each of
    `multiplicity` untouched exterior slots

    Args:
        c: Structure constants of A
        left: left_act[a, m, n]
        right: right_act[m, a, n]
        p: Source degree, p >= 0
        multiplicity: Number of Λ^q basis elements carried along
    """
    dA, dM = c.shape[0], left.shape[1]
    n_lie = multiplicity
    asm = _BlockAssembler(dA ** (p + 1) * n_lie, dA ** p * n_lie, dM, dM)
    left_blocks = _transposed_slices(left)
    right_blocks = _transposed_slices(np.transpose(right, (1, 0, 2)))
    merges = {(a, b): _nonzero_entries(c[a, b]) for a in range(dA) for b in range(dA)}
    tail_sign = -1 if (p + 1) % 2 else 1
    for args in all_tuples(dA, p + 1):
        row = tensor_index(args, dA)
        head = left_blocks[args[0]]
        tail = right_blocks[args[p]]
        head_col = tensor_index(args[1:], dA)
        tail_col = tensor_index(args[:p], dA)
        for s in range(n_lie):
            ob = row * n_lie + s
            if head is not None:
                asm.add(ob, head_col * n_lie + s, head)
            if tail is not None:
                asm.add(ob, tail_col * n_lie + s, tail * tail_sign)
        for i in range(p):
            sign = -1 if i % 2 == 0 else 1
            for l, coeff in merges[(args[i], args[i + 1])]:
                merged = args[:i] + (l,) + args[i + 2:]
                col = tensor_index(merged, dA)
                for s in range(n_lie):
                    asm.add_scalar(row * n_lie + s, col * n_lie + s, sign * coeff)
    return asm.build()


def chevalley_eilenberg_matrix(bracket: np.ndarray, target_action: np.ndarray, q: int,
                               p: int = 0, mu: Optional[np.ndarray] = None) -> RationalMatrix:
    """
    Matrix of δ_CE: Hom(Λ^q L, N) → Hom(Λ^{q+1} L, N)

    For p = 0, N is the target space acted on by target_action[x, s, r]. For
    p >= 1, N = Hom(A^{⊗p}, M) with [x, f](a) = x.f(a) - Σ_r f(..., μ(x)a_r, ...),
    target_action being the L-action on M and mu the structure morphism.
    """
    dL, dT = bracket.shape[0], target_action.shape[1]
    dA = mu.shape[1] if p else 1
    n_in, n_out = exterior_dim(dL, q), exterior_dim(dL, q + 1)
    a_count = dA ** p
    asm = _BlockAssembler(a_count * n_out, a_count * n_in, dT, dT)
    if n_out == 0:
        return asm.build()
    in_index = index_map(increasing_tuples(dL, q))
    act_blocks = _transposed_slices(target_action)
    brackets = {(x, y): _nonzero_entries(bracket[x, y]) for x in range(dL) for y in range(dL)}
    mu_entries = ({(x, a): _nonzero_entries(mu[x, a]) for x in range(dL) for a in range(dA)}
                  if p else {})
    a_tuples = all_tuples(dA, p)
    for u_idx, U in enumerate(increasing_tuples(dL, q + 1)):
        for k, x in enumerate(U):
            sign = 1 if k % 2 == 0 else -1
            t_idx = in_index[U[:k] + U[k + 1:]]
            act = act_blocks[x]
            for a_idx, args in enumerate(a_tuples):
                ob = a_idx * n_out + u_idx
                if act is not None:
                    asm.add(ob, a_idx * n_in + t_idx, act * sign)
                for r in range(p):
                    for l, coeff in mu_entries[(x, args[r])]:
                        moved = args[:r] + (l,) + args[r + 1:]
                        asm.add_scalar(ob, tensor_index(moved, dA) * n_in + t_idx, -sign * coeff)
        for k1, k2 in combinations(range(q + 1), 2):
            sign = 1 if (k1 + k2) % 2 == 0 else -1
            rest = U[:k1] + U[k1 + 1:k2] + U[k2 + 1:]
            for z, coeff in brackets[(U[k1], U[k2])]:
                wedge_sign, T = sort_with_sign((z,) + rest)
                if T is None:
                    continue
                t_idx = in_index[T]
                for a_idx in range(a_count):
                    asm.add_scalar(a_idx * n_out + u_idx, a_idx * n_in + t_idx, sign * wedge_sign * coeff)
    return asm.build()


def lie_action_matrix(target_action: np.ndarray, x: int, p: int = 0,
                      mu: Optional[np.ndarray] = None) -> RationalMatrix:
    """Matrix of f ↦ [x, f] on Hom(A^{⊗p}, N) for the basis element x of L"""
    dT = target_action.shape[1]
    dA = mu.shape[1] if p else 1
    a_tuples = all_tuples(dA, p)
    asm = _BlockAssembler(len(a_tuples), len(a_tuples), dT, dT)
    act = _transposed_slices(target_action[x:x + 1])[0]
    for a_idx, args in enumerate(a_tuples):
        if act is not None:
            asm.add(a_idx, a_idx, act)
        for r in range(p):
            for l, coeff in _nonzero_entries(mu[x, args[r]]):
                moved = args[:r] + (l,) + args[r + 1:]
                asm.add_scalar(a_idx, tensor_index(moved, dA), -coeff)
    return asm.build()


def delta_v_matrix(P_on_A: np.ndarray, q: int, dim_L: int) -> RationalMatrix:
    """Matrix of δ_v: Hom(Λ^q L, P) → Hom(Λ^q L, Hom(A, M)), f ↦ (a ↦ [f(X), a])"""
    dP, dA, dM = P_on_A.shape
    n_lie = exterior_dim(dim_L, q)
    asm = _BlockAssembler(dA * n_lie, n_lie, dM, dP)
    for a in range(dA):
        block = np.array(P_on_A[:, a, :].T, dtype=object)
        if not np.asarray(block != 0, dtype=bool).any():
            continue
        for s in range(n_lie):
            asm.add(a * n_lie + s, s, block)
    return asm.build()


def epsilon_star_matrix(dim_a: int, dim_target: int, q: int) -> RationalMatrix:
    """
    Matrix of ε*: Hom(Λ^q A, N) → Hom(A ⊗ Λ^{q-1} A, N),
    (ε* f)(a | S) = f(a ∧ S)

    The target uses the C^{1,q-1} layout. For q = 0 the map is zero.
    """
    n_out = exterior_dim(dim_a, q - 1) if q >= 1 else 0
    asm = _BlockAssembler(dim_a * n_out, exterior_dim(dim_a, q), dim_target, dim_target)
    if q < 1:
        return asm.build()
    out_index = index_map(increasing_tuples(dim_a, q - 1))
    for u_idx, U in enumerate(increasing_tuples(dim_a, q)):
        for r, a in enumerate(U):
            rest = U[:r] + U[r + 1:]
            asm.add_scalar(a * n_out + out_index[rest], u_idx, ONE if r % 2 == 0 else -ONE)
    return asm.build()


def antisymmetrizer(dim: int, q: int) -> RationalMatrix:
    """Matrix of ε on V^{⊗q}: v_1⊗…⊗v_q ↦ (1/q!) Σ_σ sgn(σ) v_σ(1)⊗…⊗v_σ(q)"""
    size = dim ** q
    entries: Dict[Tuple[int, int], Fraction] = {}
    weight = Fraction(1, factorial(q))
    perms = [(perm, sort_with_sign(perm)[0]) for perm in permutations(range(q))]
    for args in all_tuples(dim, q):
        col = tensor_index(args, dim)
        for perm, sign in perms:
            row = tensor_index(tuple(args[i] for i in perm), dim)
            entries[(row, col)] = entries.get((row, col), ZERO) + sign * weight
    return RationalMatrix.from_entries(size, size, entries)


def embed_exterior(dim: int, q: int) -> RationalMatrix:
    """Λ^q V → V^{⊗q}, e_S ↦ Σ_σ sgn(σ) e_{σ(S)} (inverse of ε on its image up to q!)"""
    entries: Dict[Tuple[int, int], Fraction] = {}
    perms = [(perm, sort_with_sign(perm)[0]) for perm in permutations(range(q))]
    for s_idx, S in enumerate(increasing_tuples(dim, q)):
        for perm, sign in perms:
            entries[(tensor_index(tuple(S[i] for i in perm), dim), s_idx)] = Fraction(sign)
    return RationalMatrix.from_entries(dim ** q, exterior_dim(dim, q), entries)


class _Bicomplex:
    """Shared layout and caching for both branches"""
    branch = LEIBNIZ

    def __init__(self, pair: LeibnizPair, mod: PairModule):
        self.pair = pair
        self.mod = mod.check_shapes(pair)
        self.dA, self.dL = pair.A.dim, pair.L.dim
        self.dM, self.dP = self.mod.M_dim, self.mod.P_dim
        self._matrices: Dict[Tuple, RationalMatrix] = {}
        self._differentials: Dict[int, DifferentialMatrix] = {}
        self._spaces: Dict[Tuple[str, int], SubspaceBasis] = {}

    def _cached(self, key: Tuple, build) -> RationalMatrix:
        matrix = self._matrices.get(key)
        if matrix is None:
            matrix = build()
            logger.debug(f"built {key} block: {matrix.rows}x{matrix.cols}")
            self._matrices[key] = matrix
        return matrix

    def bidegrees(self, n: int) -> List[Bidegree]:
        raise NotImplementedError

    def dim(self, d: Bidegree) -> int:
        raise NotImplementedError

    def layout(self, n: int) -> Tuple[Block, ...]:
        blocks, offset = [], 0
        for d in self.bidegrees(n):
            size = self.dim(d)
            blocks.append(Block(d, offset, size))
            offset += size
        return tuple(blocks)

    def total_dim(self, n: int) -> int:
        if n < 0:
            return 0
        return sum(self.dim(d) for d in self.bidegrees(n))

    def _block_maps(self, d: Bidegree) -> List[Tuple[Bidegree, RationalMatrix]]:
        raise NotImplementedError

    def total_differential(self, n: int) -> DifferentialMatrix:
        """
        Block matrix of D: C^n_tot → C^{n+1}_tot

        Args:
            n: Source total degree, n >= 0

        Returns:
            DifferentialMatrix with the source and target block layouts
        """
        if n < 0:
            raise StructureError(f"total degree must be non-negative, got {n}")
        cached = self._differentials.get(n)
        if cached is not None:
            return cached
        source, target = self.layout(n), self.layout(n + 1)
        target_offsets = {block.bidegree: block.offset for block in target}
        placements = []
        for block in source:
            if block.size == 0:
                continue
            for dest, matrix in self._block_maps(block.bidegree):
                if dest in target_offsets and matrix.rows:
                    placements.append((target_offsets[dest], block.offset, matrix))
        rows, cols = self.total_dim(n + 1), self.total_dim(n)
        matrix = RationalMatrix.from_blocks(rows, cols, placements)
        logger.info(f"{self.branch} total differential D_{n}: {rows}x{cols}")
        result = DifferentialMatrix(n, n + 1, matrix, source, target)
        self._differentials[n] = result
        return result

    def cocycles(self, n: int) -> SubspaceBasis:
        """Kernel basis of D_n"""
        key = ("Z", n)
        if key not in self._spaces:
            self._spaces[key] = kernel_basis(self.total_differential(n).matrix)
        return self._spaces[key]

    def coboundaries(self, n: int) -> SubspaceBasis:
        """Canonical basis of the image of D_{n-1} (empty for n = 0)"""
        key = ("B", n)
        if key not in self._spaces:
            if n == 0:
                self._spaces[key] = SubspaceBasis(self.total_dim(0), [], check=False)
            else:
                self._spaces[key] = column_space_basis(self.total_differential(n - 1).matrix)
        return self._spaces[key]

    def apply(self, matrix: RationalMatrix, f: Cochain, target: Bidegree) -> Cochain:
        if f.dim != matrix.cols:
            raise StructureError(f"cochain at {f.bidegree} has {f.dim} coordinates, map expects {matrix.cols}")
        return Cochain(target, matrix.apply(f.coeffs))

    def cochain(self, d: Bidegree, coeffs=None) -> Cochain:
        size = self.dim(d)
        if coeffs is None:
            return Cochain(d, zero_vector(size))
        vec = np.array(coeffs, dtype=object)
        if vec.shape != (size,):
            raise StructureError(f"{d} needs {size} coordinates, got {vec.shape}")
        return Cochain(d, vec)

    def index(self, d: Bidegree, args: Tuple[int, ...], lie_args: Tuple[int, ...], target: int) -> int:
        """Coordinate of the elementary cochain (args; lie_args) ↦ e_target"""
        n_lie_dim = self._lie_dim(d)
        n_lie = exterior_dim(n_lie_dim, len(lie_args))
        s_idx = index_map(increasing_tuples(n_lie_dim, len(lie_args)))[tuple(lie_args)]
        width = self._target_dim(d)
        a_idx = tensor_index(args, self.dA) if args else 0
        return (a_idx * n_lie + s_idx) * width + target

    def _lie_dim(self, d: Bidegree) -> int:
        return self.dL

    def _target_dim(self, d: Bidegree) -> int:
        return self.dM

    def delta_H_matrix(self, p: int, q: int) -> RationalMatrix:
        """δ_H: C^{p,q} → C^{p+1,q} of the pair, p >= 1"""
        if p < 1:
            raise StructureError("δ_H is defined from p = 1 on; use δ_v on the column p = 0")
        mod = self.mod
        return self._cached(("H", p, q), lambda: hochschild_matrix(
            self.pair.A.c, mod.left_act, mod.right_act, p, exterior_dim(self.dL, q)))

    def delta_CE_matrix(self, p: int, q: int) -> RationalMatrix:
        """δ_CE: C^{p,q} → C^{p,q+1} of the pair"""
        if p == 0:
            return self._cached(("CE", 0, q), lambda: chevalley_eilenberg_matrix(
                self.pair.L.c, self.mod.L_on_P, q))
        return self._cached(("CE", p, q), lambda: chevalley_eilenberg_matrix(
            self.pair.L.c, self.mod.L_on_M, q, p=p, mu=self.pair.mu))

    def lie_action_matrix(self, x: int, p: int) -> RationalMatrix:
        """f ↦ [x, f] on C^{p,0} (on P when p = 0)"""
        if p == 0:
            return self._cached(("ACT", x, 0), lambda: lie_action_matrix(self.mod.L_on_P, x))
        return self._cached(("ACT", x, p), lambda: lie_action_matrix(
            self.mod.L_on_M, x, p=p, mu=self.pair.mu))


class LeibnizBicomplex(_Bicomplex):
    """
    The double complex C^{p,q} = Hom(Λ^q L, C^p(A, M)), C^{0,q} = Hom(Λ^q L, P)

    Args:
        pair: Leibniz pair
        mod: Coefficients; the regular module when omitted
    """
    branch = LEIBNIZ

    def __init__(self, pair: LeibnizPair, mod: Optional[PairModule] = None):
        super().__init__(pair, mod if mod is not None else self_module(pair))

    def bidegrees(self, n: int) -> List[Bidegree]:
        return [Bidegree(p, n - p) for p in range(n + 1)]

    def dim(self, d: Bidegree) -> int:
        if d.branch != LEIBNIZ:
            raise StructureError(f"{d} is not a bidegree of the pair complex")
        if d.p == 0:
            return self.dP * exterior_dim(self.dL, d.q)
        return self.dM * self.dA ** d.p * exterior_dim(self.dL, d.q)

    def _target_dim(self, d: Bidegree) -> int:
        return self.dP if d.p == 0 else self.dM

    def delta_v_matrix(self, q: int) -> RationalMatrix:
        """δ_v: C^{0,q} → C^{1,q}"""
        return self._cached(("V", q), lambda: delta_v_matrix(self.mod.P_on_A, q, self.dL))

    def _block_maps(self, d: Bidegree) -> List[Tuple[Bidegree, RationalMatrix]]:
        p, q = d.p, d.q
        vertical = self.delta_v_matrix(q) if p == 0 else self.delta_H_matrix(p, q)
        ce = self.delta_CE_matrix(p, q)
        if p % 2:
            ce = RationalMatrix._wrap(-ce.entries)
        return [(Bidegree(p + 1, q), vertical), (Bidegree(p, q + 1), ce)]

    def dim_cpq(self, d: Bidegree) -> int:
        return self.dim(d)

    def lie_action_on_cochain(self, x: np.ndarray, f: Cochain) -> Cochain:
        """
        [x, f] for f at (p, 0)

        Args:
            x: Coordinates of an element of L
            f: Cochain of bidegree (p, 0)
        """
        if f.bidegree.q != 0:
            raise StructureError(f"the L-action is applied to (p, 0) cochains, got {f.bidegree}")
        out = zero_vector(f.dim)
        for i, coeff in _nonzero_entries(np.asarray(x, dtype=object)):
            out = out + coeff * self.lie_action_matrix(i, f.bidegree.p).apply(f.coeffs)
        return Cochain(f.bidegree, out)

    def delta_H(self, f: Cochain) -> Cochain:
        d = f.bidegree
        return self.apply(self.delta_H_matrix(d.p, d.q), f, Bidegree(d.p + 1, d.q))

    def delta_CE(self, f: Cochain) -> Cochain:
        d = f.bidegree
        return self.apply(self.delta_CE_matrix(d.p, d.q), f, Bidegree(d.p, d.q + 1))

    def delta_v(self, f: Cochain) -> Cochain:
        d = f.bidegree
        if d.p != 0:
            raise StructureError(f"δ_v starts on the column p = 0, got {d}")
        return self.apply(self.delta_v_matrix(d.q), f, Bidegree(1, d.q))

    def invariants_subspace(self, p: int) -> SubspaceBasis:
        """
        L-invariant cochains of C^p(A, M) (of P when p = 0)

        Returns:
            Kernel of the stacked action matrices of the basis of L
        """
        width = self.dim(Bidegree(p, 0))
        actions = [self.lie_action_matrix(x, p) for x in range(self.dL)]
        stacked = RationalMatrix.from_blocks(
            width * len(actions), width,
            [(i * width, 0, matrix) for i, matrix in enumerate(actions)])
        return kernel_basis(stacked)

    def augmenting_column(self, max_p: int) -> List[DifferentialMatrix]:
        """
        The complex P^L → C^1(A, M)^L → C^2(A, M)^L → …

        Matrices are written in the invariant bases, one map per source
        degree 0..max_p. The first map is δ_v, the others δ_H.

        Raises:
            ContractViolation: a map leaves the invariant subspaces
        """
        bases = [self.invariants_subspace(p) for p in range(max_p + 2)]
        maps = []
        for p in range(max_p + 1):
            full = self.delta_v_matrix(0) if p == 0 else self.delta_H_matrix(p, 0)
            images = [full.apply(vec) for vec in bases[p]]
            try:
                restricted = express_in_basis(bases[p + 1], images)
            except ContractViolation:
                raise ContractViolation(f"the map out of degree {p} does not preserve L-invariants")
            layout_in = (Block(Bidegree(p, 0), 0, bases[p].dim),)
            layout_out = (Block(Bidegree(p + 1, 0), 0, bases[p + 1].dim),)
            maps.append(DifferentialMatrix(p, p + 1, restricted, layout_in, layout_out))
        return maps


class PoissonBicomplex(_Bicomplex):
    """
    The modified double complex of a Poisson algebra

    Bottom row Hom(Λ^{q+1} A, M) at (1, q), q >= -1; rows p >= 2 are the
    C^{p,q} of the pair (A, A_Lie) with coefficients M.
    """
    branch = POISSON

    def __init__(self, poisson: PoissonAlgebra, mod: Optional[PairModule] = None):
        pair = poisson.as_pair()
        super().__init__(pair, mod if mod is not None else self_module(pair))
        self.poisson = poisson

    def bidegrees(self, n: int) -> List[Bidegree]:
        return [Bidegree(1, n - 1, POISSON)] + [Bidegree(p, n - p, POISSON) for p in range(2, n + 1)]

    def dim(self, d: Bidegree) -> int:
        if d.branch != POISSON:
            raise StructureError(f"{d} is not a bidegree of the Poisson complex")
        if d.is_bottom:
            return self.dM * exterior_dim(self.dA, d.q + 1)
        return self.dM * self.dA ** d.p * exterior_dim(self.dA, d.q)

    def index(self, d: Bidegree, args: Tuple[int, ...], lie_args: Tuple[int, ...], target: int) -> int:
        if d.is_bottom:
            s_idx = index_map(increasing_tuples(self.dA, len(lie_args)))[tuple(lie_args)]
            return s_idx * self.dM + target
        return super().index(d, args, lie_args, target)

    def bottom_CE_matrix(self, k: int) -> RationalMatrix:
        """δ_CE: Hom(Λ^k A, M) → Hom(Λ^{k+1} A, M)"""
        return self._cached(("BCE", k), lambda: chevalley_eilenberg_matrix(
            self.poisson.bracket, self.mod.L_on_M, k))

    def epsilon_star_matrix(self, k: int) -> RationalMatrix:
        return self._cached(("EPS", k), lambda: epsilon_star_matrix(self.dA, self.dM, k))

    def delta_P_matrix(self, k: int) -> RationalMatrix:
        """δ_P = δ_H ∘ ε*: Hom(Λ^k A, M) → C̃^{2,k-1}, k >= 1"""
        if k < 1:
            raise StructureError("δ_P starts on Hom(Λ^1 A, M)")
        return self._cached(("P", k), lambda: matmul(
            self.delta_H_matrix(1, k - 1), self.epsilon_star_matrix(k)))

    def _block_maps(self, d: Bidegree) -> List[Tuple[Bidegree, RationalMatrix]]:
        if d.is_bottom:
            k = d.q + 1
            maps = [(Bidegree(1, d.q + 1, POISSON), self.bottom_CE_matrix(k))]
            if k >= 1:
                maps.append((Bidegree(2, k - 1, POISSON), self.delta_P_matrix(k)))
            return maps
        p, q = d.p, d.q
        ce = self.delta_CE_matrix(p, q)
        if p % 2:
            ce = RationalMatrix._wrap(-ce.entries)
        return [(Bidegree(p + 1, q, POISSON), self.delta_H_matrix(p, q)),
                (Bidegree(p, q + 1, POISSON), ce)]

    def dim_cpq(self, d: Bidegree) -> int:
        return self.dim(d)

    def epsilon_star(self, f: Cochain) -> Cochain:
        """ε* of a bottom-row cochain, landing in C^{1,q-1} of the pair complex"""
        if not f.bidegree.is_bottom:
            raise StructureError(f"ε* acts on the bottom row, got {f.bidegree}")
        k = f.bidegree.q + 1
        return self.apply(self.epsilon_star_matrix(k), f, Bidegree(1, max(k - 1, 0)))

    def delta_P(self, f: Cochain) -> Cochain:
        if not f.bidegree.is_bottom:
            raise StructureError(f"δ_P acts on the bottom row, got {f.bidegree}")
        k = f.bidegree.q + 1
        return self.apply(self.delta_P_matrix(k), f, Bidegree(2, k - 1, POISSON))

    def delta_CE(self, f: Cochain) -> Cochain:
        d = f.bidegree
        if d.is_bottom:
            return self.apply(self.bottom_CE_matrix(d.q + 1), f, Bidegree(1, d.q + 1, POISSON))
        return self.apply(self.delta_CE_matrix(d.p, d.q), f, Bidegree(d.p, d.q + 1, POISSON))

    def delta_H(self, f: Cochain) -> Cochain:
        d = f.bidegree
        if d.is_bottom:
            raise StructureError("the bottom row carries δ_P, not δ_H")
        return self.apply(self.delta_H_matrix(d.p, d.q), f, Bidegree(d.p + 1, d.q, POISSON))

    def regular_pair_complex(self) -> LeibnizBicomplex:
        """Pair complex of (A, A_Lie) with its regular module, where the identities below live"""
        return LeibnizBicomplex(self.pair, self_module(self.pair))

    def proposition_defect(self, q: int) -> RationalMatrix:
        """
        δ_CE ε* + ε* δ_CE - PROPOSITION_SIGN·δ_v on C^{0,q} of the regular pair complex

        Zero exactly when the identity holds with the pinned global sign.
        """
        pc = self.regular_pair_complex()
        dA = self.dA
        rows = pc.dim(Bidegree(1, q))
        cols = pc.dim(Bidegree(0, q))
        eps_next = epsilon_star_matrix(dA, dA, q + 1)
        second = matmul(eps_next, pc.delta_CE_matrix(0, q))
        if q >= 1:
            first = matmul(pc.delta_CE_matrix(1, q - 1), epsilon_star_matrix(dA, dA, q))
        else:
            first = RationalMatrix.zeros(rows, cols)
        vertical = pc.delta_v_matrix(q)
        total = first.entries + second.entries - PROPOSITION_SIGN * vertical.entries
        return RationalMatrix._wrap(np.array(total, dtype=object))

    def theorem_defect(self, q: int) -> RationalMatrix:
        """δ_CE δ_P + δ_P δ_CE on Hom(Λ^q A, M), q >= 1; the zero matrix when the identity holds"""
        first = matmul(self.delta_CE_matrix(2, q - 1), self.delta_P_matrix(q))
        second = matmul(self.delta_P_matrix(q + 1), self.bottom_CE_matrix(q))
        return RationalMatrix._wrap(np.array(first.entries + second.entries, dtype=object))


Bicomplex = Union[LeibnizBicomplex, PoissonBicomplex]


def make_bicomplex(obj: Union[LeibnizPair, PoissonAlgebra], mod: Optional[PairModule] = None,
                   branch: str = LEIBNIZ) -> Bicomplex:
    """
    Build the bicomplex of a pair or a Poisson algebra

    A Poisson algebra on the leibniz branch is read as its pair (A, A_Lie).
    """
    if branch == POISSON:
        if not isinstance(obj, PoissonAlgebra):
            raise StructureError(f"the poisson branch needs a Poisson algebra, got {type(obj).__name__}")
        return PoissonBicomplex(obj, mod)
    if branch != LEIBNIZ:
        raise StructureError(f"unknown branch '{branch}'")
    pair = obj.as_pair() if isinstance(obj, PoissonAlgebra) else obj
    return LeibnizBicomplex(pair, mod)


def dim_cpq(obj: Union[LeibnizPair, PoissonAlgebra], mod: Optional[PairModule], d: Bidegree) -> int:
    return make_bicomplex(obj, mod, d.branch).dim(d)


def check_complex(complex_: Bicomplex, max_n: int) -> None:
    """
    Raises:
        ContractViolation: D_{n+1} D_n is nonzero for some n < max_n
    """
    for n in range(max_n):
        product_ = matmul(complex_.total_differential(n + 1).matrix, complex_.total_differential(n).matrix)
        if not product_.is_zero():
            logger.error(f"D_{n + 1} D_{n} has {product_.nonzero_count()} nonzero entries")
            raise ContractViolation(f"the total differential does not square to zero at degree {n}")
