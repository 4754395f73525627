"""
Formal deformations of Leibniz pairs and Poisson algebras over k[t]/t^{N+1}

A jet stores the order-i coefficients α_i, μ_i, λ_i for i = 1..N; order 0 is
the base structure. For a Poisson algebra A = L and μ = λ, so only α and λ
are stored.

Embeddings into the total complex of the regular module:

    pair     infinitesimal (α, μ, λ)  ->  (C^{0,2}: -λ, C^{1,1}: -μ, C^{2,0}: α)
             equivalence (φ, ψ)       ->  (C^{0,1}: -ψ, C^{1,0}: φ)
             defects                  ->  (C^{0,3}: Jac, C^{1,2}: -Mor, C^{2,1}: Der, C^{3,0}: -Assoc)
    poisson  infinitesimal (α, λ)     ->  (bottom Λ²: λ, C^{2,0}: α)
             equivalence φ            ->  bottom Λ¹: φ
             defects                  ->  (bottom Λ³: -Jac, C^{2,1}: Der, C^{3,0}: -Assoc)

μ sits in C^{1,1} as h(a; x) = μ(x, a). With these signs the order-1 defects
are D of the infinitesimal, the infinitesimal of a transformed trivial jet is
D of the equivalence, and adding c at order n satisfies the axioms iff
D(c) + obstruction = 0.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import LeibnizPair, PoissonAlgebra, rational_tensor, self_module
from .bicomplex import (LEIBNIZ, POISSON, Bicomplex, Bidegree, LeibnizBicomplex, PoissonBicomplex)
from .common_utils import ONE, ZERO
from .errors import ContractViolation, ObstructionPreconditionError, StructureError
from .linalg import is_zero_vector, reduce_mod_subspace, solve, zero_vector
from .utils import increasing_tuples

logger = logging.getLogger(__name__)

Base = Union[LeibnizPair, PoissonAlgebra]

DEFECT_NAMES = ("assoc", "mu_der", "mu_mor", "jacobi")


def branch_of(base: Base) -> str:
    return POISSON if isinstance(base, PoissonAlgebra) else LEIBNIZ


def _dims(base: Base) -> Tuple[int, int]:
    if isinstance(base, PoissonAlgebra):
        return base.dim, base.dim
    return base.A.dim, base.L.dim


def _zeros(shape: Tuple[int, ...]) -> np.ndarray:
    return np.full(shape, ZERO, dtype=object)


def _identity(dim: int) -> np.ndarray:
    eye = _zeros((dim, dim))
    for i in range(dim):
        eye[i, i] = ONE
    return eye


def _is_skew(tensor: np.ndarray) -> bool:
    return bool(np.all(np.asarray(tensor == -np.transpose(tensor, (1, 0, 2)), dtype=bool)))


@lru_cache(maxsize=32)
def deformation_complex(base: Base) -> Bicomplex:
    """Total complex of the regular module, where infinitesimals and obstructions live"""
    if isinstance(base, PoissonAlgebra):
        return PoissonBicomplex(base)
    return LeibnizBicomplex(base, self_module(base))


@dataclass(frozen=True, eq=False)
class DeformationJet:
    """
    Truncated deformation of a pair or Poisson algebra

    alpha[i-1], mu[i-1], lam[i-1] hold the order-i terms with the index
    conventions of the base tensors. mu is empty on the poisson branch.
    """
    base: Base
    order: int
    alpha: Tuple[np.ndarray, ...] = ()
    mu: Tuple[np.ndarray, ...] = ()
    lam: Tuple[np.ndarray, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.order < 0:
            raise StructureError(f"jet order must be non-negative, got {self.order}")
        dA, dL = _dims(self.base)
        poisson = self.branch == POISSON
        expected = {
            "alpha": (dA, dA, dA),
            "mu": (dL, dA, dA),
            "lam": (dL, dL, dL),
        }
        for attr, shape in expected.items():
            terms = tuple(getattr(self, attr))
            if attr == "mu" and poisson:
                if terms:
                    raise StructureError("poisson jets store no separate mu terms (mu = lambda)")
                continue
            if not terms:
                terms = tuple(_zeros(shape) for _ in range(self.order))
            if len(terms) != self.order:
                raise StructureError(f"jet {self.name}: {len(terms)} {attr} terms for order {self.order}")
            terms = tuple(rational_tensor(t, shape, f"{self.name or 'jet'}.{attr}[{i + 1}]")
                          for i, t in enumerate(terms))
            object.__setattr__(self, attr, terms)
        for i, term in enumerate(self.lam):
            if not _is_skew(term):
                raise StructureError(f"jet {self.name}: lambda_{i + 1} is not skew")

    @property
    def branch(self) -> str:
        return branch_of(self.base)

    @classmethod
    def trivial(cls, base: Base, order: int) -> "DeformationJet":
        return cls(base, order)

    def term(self, kind: str, k: int) -> np.ndarray:
        """Order-k coefficient of alpha, mu or lam; zero above the jet order"""
        if kind == "mu" and self.branch == POISSON:
            kind = "lam"
        if k == 0:
            return self._base_term(kind)
        terms = getattr(self, kind)
        if k <= len(terms):
            return terms[k - 1]
        return _zeros(self._base_term(kind).shape)

    def _base_term(self, kind: str) -> np.ndarray:
        base = self.base
        if isinstance(base, PoissonAlgebra):
            return base.A.c if kind == "alpha" else base.bracket
        return {"alpha": base.A.c, "mu": base.mu, "lam": base.L.c}[kind]

    def series(self, kind: str, length: Optional[int] = None) -> List[np.ndarray]:
        top = self.order if length is None else length
        return [self.term(kind, k) for k in range(top + 1)]

    def truncated(self, order: int) -> "DeformationJet":
        """Keep terms of order <= order, padding with zeros"""
        poisson = self.branch == POISSON
        return DeformationJet(
            self.base, order,
            tuple(self.term("alpha", k) for k in range(1, order + 1)),
            () if poisson else tuple(self.term("mu", k) for k in range(1, order + 1)),
            tuple(self.term("lam", k) for k in range(1, order + 1)),
            self.name,
        )

    def extended(self, alpha: np.ndarray, mu: Optional[np.ndarray], lam: np.ndarray) -> "DeformationJet":
        poisson = self.branch == POISSON
        return DeformationJet(
            self.base, self.order + 1,
            self.alpha + (alpha,),
            () if poisson else self.mu + (mu,),
            self.lam + (lam,),
            self.name,
        )

    def is_trivial(self) -> bool:
        terms = self.alpha + self.mu + self.lam
        return all(not np.asarray(t != 0, dtype=bool).any() for t in terms)


@dataclass(frozen=True, eq=False)
class EquivalenceJet:
    """Φ_t = id + Σ t^i φ_i on A and Ψ_t = id + Σ t^i ψ_i on L; φ_i[a, b] is the b-coefficient of φ_i(a)"""
    base: Base
    order: int
    phi: Tuple[np.ndarray, ...] = ()
    psi: Tuple[np.ndarray, ...] = ()
    name: str = ""

    def __post_init__(self):
        dA, dL = _dims(self.base)
        phi = tuple(self.phi) or tuple(_zeros((dA, dA)) for _ in range(self.order))
        if len(phi) != self.order:
            raise StructureError(f"equivalence {self.name}: {len(phi)} phi terms for order {self.order}")
        object.__setattr__(self, "phi", tuple(
            rational_tensor(t, (dA, dA), f"{self.name or 'equivalence'}.phi[{i + 1}]") for i, t in enumerate(phi)))
        if self.branch == POISSON:
            if self.psi:
                raise StructureError("poisson equivalences use psi = phi")
            return
        psi = tuple(self.psi) or tuple(_zeros((dL, dL)) for _ in range(self.order))
        if len(psi) != self.order:
            raise StructureError(f"equivalence {self.name}: {len(psi)} psi terms for order {self.order}")
        object.__setattr__(self, "psi", tuple(
            rational_tensor(t, (dL, dL), f"{self.name or 'equivalence'}.psi[{i + 1}]") for i, t in enumerate(psi)))

    @property
    def branch(self) -> str:
        return branch_of(self.base)

    def phi_series(self) -> List[np.ndarray]:
        return [_identity(_dims(self.base)[0])] + list(self.phi)

    def psi_series(self) -> List[np.ndarray]:
        if self.branch == POISSON:
            return self.phi_series()
        return [_identity(_dims(self.base)[1])] + list(self.psi)

    @classmethod
    def identity(cls, base: Base, order: int) -> "EquivalenceJet":
        return cls(base, order)


def _series_matmul(P: Sequence[np.ndarray], Q: Sequence[np.ndarray], order: int) -> List[np.ndarray]:
    out = []
    for n in range(order + 1):
        acc = _zeros((P[0].shape[0], Q[0].shape[1]))
        for i in range(n + 1):
            acc = acc + np.dot(P[i], Q[n - i])
        out.append(acc)
    return out


def neumann_inverse(series: Sequence[np.ndarray], order: int) -> List[np.ndarray]:
    """(id + X)^{-1} = Σ_k (-X)^k mod t^{order+1}, X the positive-order part"""
    dim = series[0].shape[0]
    minus_x = [_zeros((dim, dim))] + [-term for term in series[1:order + 1]]
    minus_x += [_zeros((dim, dim))] * (order + 1 - len(minus_x))
    power = [_identity(dim)] + [_zeros((dim, dim))] * order
    total = [term.copy() for term in power]
    for _ in range(order):
        power = _series_matmul(power, minus_x, order)
        total = [t + p for t, p in zip(total, power)]
    return total


def _convolve(left: Sequence[np.ndarray], right: Sequence[np.ndarray], order: int, contract) -> List[np.ndarray]:
    out = []
    for n in range(order + 1):
        acc = None
        for i in range(n + 1):
            term = contract(left[i], right[n - i])
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def _transform_bilinear(T: Sequence[np.ndarray], first: Sequence[np.ndarray], second: Sequence[np.ndarray],
                        out_inverse: Sequence[np.ndarray], order: int) -> List[np.ndarray]:
    """Series of (u, v) ↦ Out^{-1} T(First u, Second v), all truncated"""
    step1 = _convolve(first, T, order, lambda f, t: np.tensordot(f, t, axes=([1], [0])))
    step2 = _convolve(second, step1, order,
                      lambda s, x: np.transpose(np.tensordot(s, x, axes=([1], [1])), (1, 0, 2)))
    return _convolve(step2, out_inverse, order, lambda y, o: np.tensordot(y, o, axes=([2], [0])))


def apply_equivalence(jet: DeformationJet, eq: EquivalenceJet) -> DeformationJet:
    """
    Conjugate a jet by an equivalence

    α'(a, b) = Φ⁻¹ α(Φa, Φb), μ'(x, a) = Φ⁻¹ μ(Ψx, Φa), λ'(x, y) = Ψ⁻¹ λ(Ψx, Ψy),
    with the inverses from the truncated Neumann series.
    """
    if eq.order != jet.order:
        raise StructureError(f"equivalence of order {eq.order} applied to a jet of order {jet.order}")
    if eq.base is not jet.base and branch_of(eq.base) != jet.branch:
        raise StructureError("equivalence and jet live on different branches")
    N = jet.order
    phi, psi = eq.phi_series(), eq.psi_series()
    phi_inv, psi_inv = neumann_inverse(phi, N), neumann_inverse(psi, N)
    alpha = _transform_bilinear(jet.series("alpha"), phi, phi, phi_inv, N)
    lam = _transform_bilinear(jet.series("lam"), psi, psi, psi_inv, N)
    if jet.branch == POISSON:
        return DeformationJet(jet.base, N, tuple(alpha[1:]), (), tuple(lam[1:]), jet.name)
    mu = _transform_bilinear(jet.series("mu"), psi, phi, phi_inv, N)
    return DeformationJet(jet.base, N, tuple(alpha[1:]), tuple(mu[1:]), tuple(lam[1:]), jet.name)


def invert_equivalence(eq: EquivalenceJet) -> EquivalenceJet:
    """The equivalence (Φ⁻¹, Ψ⁻¹) truncated at the same order"""
    phi_inv = neumann_inverse(eq.phi_series(), eq.order)
    if eq.branch == POISSON:
        return EquivalenceJet(eq.base, eq.order, tuple(phi_inv[1:]), (), eq.name)
    psi_inv = neumann_inverse(eq.psi_series(), eq.order)
    return EquivalenceJet(eq.base, eq.order, tuple(phi_inv[1:]), tuple(psi_inv[1:]), eq.name)


def exponentiate_derivation(poisson: PoissonAlgebra, phi, order: int) -> EquivalenceJet:
    """
    Φ_t = Σ_{i<=N} t^i φ^i / i!

    Raises:
        StructureError: φ is not an infinitesimal automorphism
    """
    dA = poisson.dim
    phi = rational_tensor(phi, (dA, dA), "phi")
    if not is_infinitesimal_automorphism(poisson, phi):
        raise StructureError("phi is not simultaneously an associative and a Lie derivation")
    terms, power = [], _identity(dA)
    for i in range(1, order + 1):
        power = np.dot(power, phi)
        terms.append(power * Fraction(1, factorial(i)))
    return EquivalenceJet(poisson, order, tuple(terms))


@dataclass
class DefectReport:
    """Order-n coefficients of the four axiom defects, as multilinear tensors

    assoc[a, b, c, :], mu_der[x, a, b, :], mu_mor[x, y, a, :], jacobi[x, y, z, :]
    """
    order_checked: int
    branch: str
    assoc: np.ndarray
    mu_der: np.ndarray
    mu_mor: np.ndarray
    jacobi: np.ndarray

    def is_zero(self) -> bool:
        return all(not np.asarray(getattr(self, name) != 0, dtype=bool).any() for name in DEFECT_NAMES)

    def failing(self) -> List[str]:
        return [name for name in DEFECT_NAMES if np.asarray(getattr(self, name) != 0, dtype=bool).any()]

    def nonzero_entries(self, name: str) -> List[Tuple[Tuple[int, ...], object]]:
        tensor = getattr(self, name)
        return [(tuple(int(i) for i in idx), tensor[tuple(idx)])
                for idx in np.argwhere(np.asarray(tensor != 0, dtype=bool))]


def defects(jet: DeformationJet, n: int) -> DefectReport:
    """
    Coefficient of t^n in the associator, the derivation defect
    μ(x, α(a, b)) - α(μ(x, a), b) - α(a, μ(x, b)), the morphism defect
    μ(λ(x, y), a) - μ(x, μ(y, a)) + μ(y, μ(x, a)) and the Jacobiator

    Terms above the jet order count as zero.
    """
    if n < 0:
        raise StructureError(f"defect order must be non-negative, got {n}")
    alpha = [jet.term("alpha", k) for k in range(n + 1)]
    mu = [jet.term("mu", k) for k in range(n + 1)]
    lam = [jet.term("lam", k) for k in range(n + 1)]
    assoc = der = mor = jac = None
    for i in range(n + 1):
        j = n - i
        a_i, a_j, m_i, m_j, l_i, l_j = alpha[i], alpha[j], mu[i], mu[j], lam[i], lam[j]
        assoc_ij = (np.tensordot(a_j, a_i, axes=([2], [0]))
                    - np.transpose(np.tensordot(a_i, a_j, axes=([1], [2])), (0, 2, 3, 1)))
        der_ij = (np.transpose(np.tensordot(m_i, a_j, axes=([1], [2])), (0, 2, 3, 1))
                  - np.tensordot(m_j, a_i, axes=([2], [0]))
                  - np.transpose(np.tensordot(a_i, m_j, axes=([1], [2])), (2, 0, 3, 1)))
        nested = np.transpose(np.tensordot(m_i, m_j, axes=([1], [2])), (0, 2, 3, 1))
        mor_ij = (np.tensordot(l_j, m_i, axes=([2], [0]))
                  - nested + np.transpose(nested, (1, 0, 2, 3)))
        jt = np.tensordot(l_j, l_i, axes=([2], [0]))
        jac_ij = jt + np.transpose(jt, (2, 0, 1, 3)) + np.transpose(jt, (1, 2, 0, 3))
        assoc = assoc_ij if assoc is None else assoc + assoc_ij
        der = der_ij if der is None else der + der_ij
        mor = mor_ij if mor is None else mor + mor_ij
        jac = jac_ij if jac is None else jac + jac_ij
    return DefectReport(n, jet.branch, _as_rational(assoc), _as_rational(der),
                        _as_rational(mor), _as_rational(jac))


def _as_rational(arr: np.ndarray) -> np.ndarray:
    return np.asarray(arr, dtype=object) + ZERO


def _exterior_rows(tensor: np.ndarray, dim: int, k: int) -> List[np.ndarray]:
    """tensor[U] for every increasing k-tuple U, in basis order"""
    return [np.asarray(tensor[U], dtype=object) for U in increasing_tuples(dim, k)]


def _flat(parts: List[np.ndarray]) -> np.ndarray:
    if not parts:
        return zero_vector(0)
    return np.concatenate([np.asarray(p, dtype=object).reshape(-1) for p in parts]).astype(object)


def _assemble(complex_: Bicomplex, n: int, blocks: Dict[Bidegree, np.ndarray]) -> np.ndarray:
    vec = zero_vector(complex_.total_dim(n))
    for block in complex_.layout(n):
        values = blocks.get(block.bidegree)
        if values is None:
            continue
        values = np.asarray(values, dtype=object).reshape(-1)
        if len(values) != block.size:
            raise ContractViolation(f"block {block.bidegree} expects {block.size} values, got {len(values)}")
        vec[block.offset:block.offset + block.size] = values
    return vec


def _blocks(complex_: Bicomplex, n: int, vec: np.ndarray) -> Dict[Bidegree, np.ndarray]:
    return {b.bidegree: np.array(vec[b.offset:b.offset + b.size], dtype=object) for b in complex_.layout(n)}


def infinitesimal_cochain(base: Base, alpha, mu, lam) -> np.ndarray:
    """Total 2-cochain of an order-1 triple (mu ignored on the poisson branch)"""
    complex_ = deformation_complex(base)
    dA, dL = _dims(base)
    alpha = rational_tensor(alpha, (dA, dA, dA), "alpha")
    lam = rational_tensor(lam, (dL, dL, dL), "lambda")
    if not _is_skew(lam):
        raise StructureError("lambda must be skew")
    if complex_.branch == POISSON:
        return _assemble(complex_, 2, {
            Bidegree(1, 1, POISSON): _flat(_exterior_rows(lam, dA, 2)),
            Bidegree(2, 0, POISSON): alpha.reshape(-1),
        })
    mu = rational_tensor(mu, (dL, dA, dA), "mu")
    return _assemble(complex_, 2, {
        Bidegree(0, 2): -_flat(_exterior_rows(lam, dL, 2)),
        Bidegree(1, 1): -np.transpose(mu, (1, 0, 2)).reshape(-1),
        Bidegree(2, 0): alpha.reshape(-1),
    })


def infinitesimal_from_cochain(base: Base, vec: np.ndarray) -> Tuple[np.ndarray, Optional[np.ndarray], np.ndarray]:
    """Inverse of infinitesimal_cochain: (alpha, mu, lam); mu is None on the poisson branch"""
    complex_ = deformation_complex(base)
    dA, dL = _dims(base)
    blocks = _blocks(complex_, 2, vec)
    if complex_.branch == POISSON:
        lam_rows, alpha_flat, mu = blocks[Bidegree(1, 1, POISSON)], blocks[Bidegree(2, 0, POISSON)], None
        lam_sign = ONE
    else:
        lam_rows, alpha_flat = blocks[Bidegree(0, 2)], blocks[Bidegree(2, 0)]
        mu = -np.transpose(blocks[Bidegree(1, 1)].reshape(dA, dL, dA), (1, 0, 2))
        lam_sign = -ONE
    lam = _zeros((dL, dL, dL))
    rows = lam_rows.reshape(-1, dL) if dL else lam_rows.reshape(0, 0)
    for s, (x, y) in enumerate(increasing_tuples(dL, 2)):
        lam[x, y] = lam_sign * rows[s]
        lam[y, x] = -lam_sign * rows[s]
    alpha = alpha_flat.reshape(dA, dA, dA)
    return alpha, mu, lam


def equivalence_cochain(base: Base, phi, psi=None) -> np.ndarray:
    """Total 1-cochain of an order-1 equivalence (psi ignored on the poisson branch)"""
    complex_ = deformation_complex(base)
    dA, dL = _dims(base)
    phi = rational_tensor(phi, (dA, dA), "phi")
    if complex_.branch == POISSON:
        return _assemble(complex_, 1, {Bidegree(1, 0, POISSON): phi.reshape(-1)})
    psi = rational_tensor(psi if psi is not None else _zeros((dL, dL)), (dL, dL), "psi")
    return _assemble(complex_, 1, {Bidegree(0, 1): -psi.reshape(-1), Bidegree(1, 0): phi.reshape(-1)})


def equivalence_from_cochain(base: Base, vec: np.ndarray) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    complex_ = deformation_complex(base)
    dA, dL = _dims(base)
    blocks = _blocks(complex_, 1, vec)
    if complex_.branch == POISSON:
        return blocks[Bidegree(1, 0, POISSON)].reshape(dA, dA), None
    return blocks[Bidegree(1, 0)].reshape(dA, dA), -blocks[Bidegree(0, 1)].reshape(dL, dL)


def defect_cochain(report: DefectReport, base: Base) -> np.ndarray:
    """The four defects as one total 3-cochain"""
    complex_ = deformation_complex(base)
    dA, dL = _dims(base)
    der_flat = np.transpose(report.mu_der, (1, 2, 0, 3)).reshape(-1)
    if complex_.branch == POISSON:
        return _assemble(complex_, 3, {
            Bidegree(1, 2, POISSON): -_flat(_exterior_rows(report.jacobi, dA, 3)),
            Bidegree(2, 1, POISSON): der_flat,
            Bidegree(3, 0, POISSON): -report.assoc.reshape(-1),
        })
    mor_by_a = np.transpose(report.mu_mor, (2, 0, 1, 3))
    mor_flat = _flat([_flat(_exterior_rows(mor_by_a[a], dL, 2)) for a in range(dA)])
    return _assemble(complex_, 3, {
        Bidegree(0, 3): _flat(_exterior_rows(report.jacobi, dL, 3)),
        Bidegree(1, 2): -mor_flat,
        Bidegree(2, 1): der_flat,
        Bidegree(3, 0): -report.assoc.reshape(-1),
    })


def infinitesimal_of(jet: DeformationJet) -> np.ndarray:
    return infinitesimal_cochain(jet.base, jet.term("alpha", 1), jet.term("mu", 1), jet.term("lam", 1))


@dataclass
class InfinitesimalCheck:
    is_cocycle: bool
    is_trivial: Optional[bool]
    class_vector: Optional[np.ndarray] = None

    def __bool__(self) -> bool:
        return self.is_cocycle


def is_infinitesimal(base: Base, alpha, mu, lam) -> InfinitesimalCheck:
    """
    Whether (α₁, μ₁, λ₁) is a total 2-cocycle, and whether its class is zero

    Returns:
        InfinitesimalCheck; is_trivial and class_vector are None for non-cocycles
    """
    complex_ = deformation_complex(base)
    vec = infinitesimal_cochain(base, alpha, mu, lam)
    if not is_zero_vector(complex_.total_differential(2).matrix.apply(vec)):
        return InfinitesimalCheck(False, None, None)
    reduced = reduce_mod_subspace(vec, complex_.coboundaries(2))
    return InfinitesimalCheck(True, is_zero_vector(reduced), reduced)


def is_infinitesimal_automorphism(base: Base, phi, psi=None) -> bool:
    """Whether (φ, ψ) is a total 1-cocycle"""
    complex_ = deformation_complex(base)
    vec = equivalence_cochain(base, phi, psi)
    return is_zero_vector(complex_.total_differential(1).matrix.apply(vec))


@dataclass
class Obstruction:
    order: int
    cochain: np.ndarray
    class_vector: np.ndarray

    @property
    def vanishes(self) -> bool:
        return is_zero_vector(self.class_vector)


def obstruction(jet: DeformationJet, n: Optional[int] = None) -> Obstruction:
    """
    Obstruction to extending a jet valid mod t^n by an order-n term

    Terms of order >= n are ignored. The cochain is the order-n defect with
    those terms set to zero; its class in H^3 vanishes iff the jet extends.

    Raises:
        ObstructionPreconditionError: the jet fails the axioms below order n
    """
    n = jet.order + 1 if n is None else n
    if n < 1:
        raise StructureError(f"obstruction order must be positive, got {n}")
    truncated = jet.truncated(n - 1)
    for i in range(1, n):
        if not defects(truncated, i).is_zero():
            raise ObstructionPreconditionError(i)
    complex_ = deformation_complex(jet.base)
    cochain = defect_cochain(defects(truncated, n), jet.base)
    class_vector = reduce_mod_subspace(cochain, complex_.coboundaries(3))
    return Obstruction(n, cochain, class_vector)


@dataclass
class LiftResult:
    success: bool
    jet: DeformationJet
    failed_order: Optional[int] = None
    obstruction_class: Optional[np.ndarray] = None
    corrections: List[Tuple[np.ndarray, Optional[np.ndarray], np.ndarray]] = field(default_factory=list)

    def corrections_vanish(self) -> bool:
        return all(not np.asarray(t != 0, dtype=bool).any()
                   for triple in self.corrections for t in triple if t is not None)


def lift_to_order(base: Base, alpha1, mu1, lam1, target_order: int) -> LiftResult:
    """
    Extend an infinitesimal order by order, solving D(c_n) = -obstruction_n
    with the canonical particular solution

    Returns:
        LiftResult; on failure the jet is valid to the last order reached and
        the nonzero obstruction class is attached
    """
    check = is_infinitesimal(base, alpha1, mu1, lam1)
    if not check.is_cocycle:
        raise ObstructionPreconditionError(1, "the infinitesimal is not a total 2-cocycle")
    poisson = branch_of(base) == POISSON
    jet = DeformationJet(base, 1, (alpha1,), () if poisson else (mu1,), (lam1,))
    complex_ = deformation_complex(base)
    d2 = complex_.total_differential(2).matrix
    result = LiftResult(True, jet)
    for n in range(2, target_order + 1):
        obs = obstruction(jet, n)
        if not obs.vanishes:
            logger.warning(f"lift stops at order {n}: obstruction class is nonzero")
            return LiftResult(False, jet, n, obs.class_vector, result.corrections)
        solution = solve(d2, -obs.cochain)
        if solution is None:
            raise ContractViolation(f"obstruction at order {n} has zero class but no preimage")
        alpha_n, mu_n, lam_n = infinitesimal_from_cochain(base, solution)
        result.corrections.append((alpha_n, mu_n, lam_n))
        jet = jet.extended(alpha_n, mu_n, lam_n)
        logger.info(f"lifted to order {n}")
    result.jet = jet
    return result


@dataclass
class TrivializeResult:
    success: bool
    jet: DeformationJet
    equivalences: List[EquivalenceJet] = field(default_factory=list)
    failed_order: Optional[int] = None


def trivialize(jet: DeformationJet) -> TrivializeResult:
    """
    Gauge a valid jet to the trivial jet order by order

    At order k (lower orders already zero) the order-k term is a 2-cocycle;
    it is removed by id + t^k (φ_k, ψ_k) with D(φ_k, ψ_k) = -term.
    """
    complex_ = deformation_complex(jet.base)
    d1 = complex_.total_differential(1).matrix
    poisson = jet.branch == POISSON
    dA, dL = _dims(jet.base)
    applied: List[EquivalenceJet] = []
    current = jet
    for k in range(1, jet.order + 1):
        term = infinitesimal_cochain(jet.base, current.term("alpha", k), current.term("mu", k),
                                     current.term("lam", k))
        if is_zero_vector(term):
            continue
        solution = solve(d1, -term)
        if solution is None:
            return TrivializeResult(False, current, applied, k)
        phi_k, psi_k = equivalence_from_cochain(jet.base, solution)
        phi = [_zeros((dA, dA)) for _ in range(jet.order)]
        phi[k - 1] = phi_k
        psi = [] if poisson else [_zeros((dL, dL)) for _ in range(jet.order)]
        if not poisson:
            psi[k - 1] = psi_k
        eq = EquivalenceJet(jet.base, jet.order, tuple(phi), tuple(psi))
        current = apply_equivalence(current, eq)
        applied.append(eq)
    return TrivializeResult(current.is_trivial(), current, applied, None if current.is_trivial() else jet.order)
