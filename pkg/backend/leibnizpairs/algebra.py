"""
Algebraic input data and its axiom checks

Associative and Lie algebras, Leibniz pairs, Poisson algebras and pair
modules, all given by structure-constant tensors over the rationals.
Axioms are multilinear, so every check runs over basis tuples only.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .common_utils import ONE, ZERO, format_rational, to_rational
from .errors import StructureError

logger = logging.getLogger(__name__)

ASSOCIATIVE = "associative"
LIE = "lie"

_to_rational = np.frompyfunc(to_rational, 1, 1)


def rational_tensor(data: Any, shape: Tuple[int, ...], name: str = "tensor") -> np.ndarray:
    """
    Convert nested lists or an array into a read-only object tensor of Fractions

    Raises:
        StructureError: wrong shape or a non-exact entry
    """
    arr = np.array(data, dtype=object)
    if arr.size == 0 and 0 in tuple(shape):
        arr = np.full(shape, ZERO, dtype=object)
    if arr.shape != tuple(shape):
        raise StructureError(f"{name} has shape {arr.shape}, expected {tuple(shape)}")
    if arr.size:
        arr = _to_rational(arr).astype(object)
    arr.flags.writeable = False
    return arr


def zero_tensor(shape: Tuple[int, ...]) -> np.ndarray:
    arr = np.full(shape, ZERO, dtype=object)
    arr.flags.writeable = False
    return arr


def basis_vector(dim: int, i: int) -> np.ndarray:
    vec = np.full(dim, ZERO, dtype=object)
    vec[i] = ONE
    return vec


def bilinear(tensor: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Evaluate the bilinear map t(u, v)_k = sum u_i v_j t[i, j, k]"""
    out = np.full(tensor.shape[2], ZERO, dtype=object)
    for i in np.flatnonzero(np.asarray(u != 0, dtype=bool)).tolist():
        for j in np.flatnonzero(np.asarray(v != 0, dtype=bool)).tolist():
            coeff = u[i] * v[j]
            out = out + coeff * tensor[i, j]
    return out


@dataclass(frozen=True, eq=False)
class StructureAlgebra:
    """A finite-dimensional associative or Lie algebra given by structure constants"""
    kind: str
    basis_labels: Tuple[str, ...]
    c: np.ndarray
    unit_index: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        dim = len(self.basis_labels)
        object.__setattr__(self, "c", rational_tensor(self.c, (dim, dim, dim), f"{self.name or 'algebra'}.c"))
        validate_structure(self)

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def multiply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return bilinear(self.c, u, v)

    def basis(self, i: int) -> np.ndarray:
        return basis_vector(self.dim, i)


@dataclass(frozen=True, eq=False)
class LeibnizPair:
    """(A, L, mu) with mu[x, a, b] the coefficient of b in mu(x)(a)"""
    A: StructureAlgebra
    L: StructureAlgebra
    mu: np.ndarray
    name: str = ""

    def __post_init__(self):
        if self.A.kind != ASSOCIATIVE:
            raise StructureError(f"pair {self.name}: A must be associative, got {self.A.kind}")
        if self.L.kind != LIE:
            raise StructureError(f"pair {self.name}: L must be a Lie algebra, got {self.L.kind}")
        shape = (self.L.dim, self.A.dim, self.A.dim)
        object.__setattr__(self, "mu", rational_tensor(self.mu, shape, f"{self.name or 'pair'}.mu"))

    def act(self, x: np.ndarray, a: np.ndarray) -> np.ndarray:
        return bilinear(self.mu, x, a)


@dataclass(frozen=True, eq=False)
class PoissonAlgebra:
    """An associative algebra with a skew bracket acting by derivations"""
    A: StructureAlgebra
    bracket: np.ndarray
    name: str = ""

    def __post_init__(self):
        if self.A.kind != ASSOCIATIVE:
            raise StructureError(f"poisson {self.name}: underlying algebra must be associative")
        shape = (self.A.dim,) * 3
        object.__setattr__(self, "bracket",
                           rational_tensor(self.bracket, shape, f"{self.name or 'poisson'}.bracket"))

    @property
    def dim(self) -> int:
        return self.A.dim

    def lie_algebra(self) -> StructureAlgebra:
        return StructureAlgebra(LIE, self.A.basis_labels, self.bracket, name=f"{self.name}_lie")

    def as_pair(self) -> LeibnizPair:
        """The pair (A, A_Lie) with mu = ad"""
        return LeibnizPair(self.A, self.lie_algebra(), self.bracket, name=self.name)

    def self_module(self) -> "PairModule":
        return self_module(self.as_pair())


@dataclass(frozen=True, eq=False)
class PairModule:
    """
    Coefficients (M, P) over a Leibniz pair

    left_act[a, m, n]: a.m; right_act[m, a, n]: m.a; L_on_M[x, m, n]: [x, m];
    L_on_P[x, p, r]: [x, p]; P_on_A[p, a, n]: [p, a] in M.
    """
    M_labels: Tuple[str, ...]
    P_labels: Tuple[str, ...]
    left_act: np.ndarray
    right_act: np.ndarray
    L_on_M: np.ndarray
    L_on_P: np.ndarray
    P_on_A: np.ndarray
    regular: bool = False
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "M_labels", tuple(self.M_labels))
        object.__setattr__(self, "P_labels", tuple(self.P_labels))
        if not self.M_labels:
            raise StructureError(f"module {self.name}: M must be at least one-dimensional")

    @property
    def M_dim(self) -> int:
        return len(self.M_labels)

    @property
    def P_dim(self) -> int:
        return len(self.P_labels)

    def check_shapes(self, pair: LeibnizPair) -> "PairModule":
        """Coerce the action tensors against the pair's dimensions"""
        dA, dL, dM, dP = pair.A.dim, pair.L.dim, self.M_dim, self.P_dim
        shapes = {
            "left_act": (dA, dM, dM),
            "right_act": (dM, dA, dM),
            "L_on_M": (dL, dM, dM),
            "L_on_P": (dL, dP, dP),
            "P_on_A": (dP, dA, dM),
        }
        for attr, shape in shapes.items():
            tensor = rational_tensor(getattr(self, attr), shape, f"{self.name or 'module'}.{attr}")
            object.__setattr__(self, attr, tensor)
        return self


def self_module(pair: LeibnizPair) -> PairModule:
    """The regular module (M, P) = (A, L) of a pair"""
    A, L = pair.A, pair.L
    module = PairModule(
        M_labels=A.basis_labels,
        P_labels=L.basis_labels,
        left_act=A.c,
        right_act=A.c,
        L_on_M=pair.mu,
        L_on_P=L.c,
        P_on_A=pair.mu,
        regular=True,
        name=f"{pair.name}_self" if pair.name else "self",
    )
    return module.check_shapes(pair)


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: Tuple[int, ...]
    labels: Tuple[str, ...]
    lhs: Tuple[Fraction, ...]
    rhs: Tuple[Fraction, ...]

    def describe(self) -> str:
        return f"{self.axiom} at ({', '.join(self.labels)})"


@dataclass
class ValidationReport:
    """Outcome of an axiom check; ok iff no violation was found"""
    subject: str
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, axiom: str, witness: Sequence[int], labels: Sequence[str],
               lhs: np.ndarray, rhs: np.ndarray) -> None:
        if np.all(np.asarray(lhs == rhs, dtype=bool)):
            return
        self.violations.append(Violation(
            axiom, tuple(witness), tuple(labels),
            tuple(to_rational(v) for v in lhs), tuple(to_rational(v) for v in rhs)))

    def extend(self, other: "ValidationReport") -> "ValidationReport":
        self.violations.extend(other.violations)
        return self

    def axioms_failed(self) -> List[str]:
        return sorted({v.axiom for v in self.violations})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "violations": [
                {
                    "axiom": v.axiom,
                    "witness": list(v.labels),
                    "lhs": [format_rational(x) for x in v.lhs],
                    "rhs": [format_rational(x) for x in v.rhs],
                }
                for v in self.violations
            ],
        }


def validate_structure(alg: StructureAlgebra) -> None:
    """
    Structural checks on a structure algebra

    Raises:
        StructureError: unknown kind, empty basis, duplicate labels or a bad unit index
    """
    if alg.kind not in (ASSOCIATIVE, LIE):
        raise StructureError(f"unknown algebra kind '{alg.kind}'")
    if alg.dim == 0 and alg.kind == ASSOCIATIVE:
        raise StructureError(f"associative algebra {alg.name} must have a nonempty basis")
    if len(set(alg.basis_labels)) != alg.dim:
        raise StructureError(f"algebra {alg.name} has duplicate basis labels")
    if alg.unit_index is not None:
        if alg.kind != ASSOCIATIVE:
            raise StructureError(f"Lie algebra {alg.name} cannot declare a unit")
        if not 0 <= alg.unit_index < alg.dim:
            raise StructureError(f"unit index {alg.unit_index} out of range for dim {alg.dim}")


def validate_associative(A: StructureAlgebra) -> ValidationReport:
    """
    Check associativity, and the unit axioms when a unit is declared

    Args:
        A: Associative structure algebra

    Returns:
        ValidationReport naming every failing basis triple
    """
    if A.kind != ASSOCIATIVE:
        raise StructureError(f"validate_associative needs an associative algebra, got {A.kind}")
    report = ValidationReport(A.name or "associative")
    labels = A.basis_labels
    for i, j, k in product(range(A.dim), repeat=3):
        lhs = A.multiply(A.c[i, j], A.basis(k))
        rhs = A.multiply(A.basis(i), A.c[j, k])
        report.record("associativity", (i, j, k), (labels[i], labels[j], labels[k]), lhs, rhs)
    if A.unit_index is not None:
        u = A.unit_index
        for j in range(A.dim):
            report.record("left_unit", (u, j), (labels[u], labels[j]), A.c[u, j], A.basis(j))
            report.record("right_unit", (j, u), (labels[j], labels[u]), A.c[j, u], A.basis(j))
    return report


def _lie_report(c: np.ndarray, labels: Sequence[str], subject: str) -> ValidationReport:
    report = ValidationReport(subject)
    dim = len(labels)
    for i, j in product(range(dim), repeat=2):
        if i <= j:
            report.record("skew_symmetry", (i, j), (labels[i], labels[j]), c[i, j], -c[j, i])
    for i, j, k in product(range(dim), repeat=3):
        total = (bilinear(c, c[i, j], basis_vector(dim, k))
                 + bilinear(c, c[j, k], basis_vector(dim, i))
                 + bilinear(c, c[k, i], basis_vector(dim, j)))
        report.record("jacobi", (i, j, k), (labels[i], labels[j], labels[k]),
                      total, np.full(dim, ZERO, dtype=object))
    return report


def validate_lie(L: StructureAlgebra) -> ValidationReport:
    """Skew-symmetry and Jacobi identity on basis triples"""
    if L.kind != LIE:
        raise StructureError(f"validate_lie needs a Lie algebra, got {L.kind}")
    return _lie_report(L.c, L.basis_labels, L.name or "lie")


def validate_pair(pair: LeibnizPair) -> ValidationReport:
    """
    Check that mu maps L into Der(A) as a morphism of Lie algebras

    Args:
        pair: Leibniz pair whose A and L are individually valid

    Returns:
        ValidationReport with axioms "mu_derivation" and "mu_lie_morphism"
    """
    A, L = pair.A, pair.L
    report = ValidationReport(pair.name or "pair")
    la, ll = A.basis_labels, L.basis_labels
    for x, a, b in product(range(L.dim), range(A.dim), range(A.dim)):
        lhs = pair.act(L.basis(x), A.c[a, b])
        rhs = A.multiply(pair.mu[x, a], A.basis(b)) + A.multiply(A.basis(a), pair.mu[x, b])
        report.record("mu_derivation", (x, a, b), (ll[x], la[a], la[b]), lhs, rhs)
    for x, y, a in product(range(L.dim), range(L.dim), range(A.dim)):
        lhs = pair.act(L.c[x, y], A.basis(a))
        rhs = pair.act(L.basis(x), pair.mu[y, a]) - pair.act(L.basis(y), pair.mu[x, a])
        report.record("mu_lie_morphism", (x, y, a), (ll[x], ll[y], la[a]), lhs, rhs)
    return report


def validate_rinehart(pair: LeibnizPair, a_action_on_L: Any) -> ValidationReport:
    """
    Check the Rinehart conditions for a pair with an A-module structure on L

    a_action_on_L[a, x, y] is the coefficient of y in a.x. Non-commutativity
    of A is reported as a violation, not raised.
    """
    A, L = pair.A, pair.L
    action = rational_tensor(a_action_on_L, (A.dim, L.dim, L.dim), "a_action_on_L")
    report = ValidationReport(f"{pair.name or 'pair'}_rinehart")
    la, ll = A.basis_labels, L.basis_labels
    for a, b in product(range(A.dim), repeat=2):
        if a < b:
            report.record("commutativity", (a, b), (la[a], la[b]), A.c[a, b], A.c[b, a])
    for a, b, x in product(range(A.dim), range(A.dim), range(L.dim)):
        lhs = bilinear(action, A.c[a, b], L.basis(x))
        rhs = bilinear(action, A.basis(a), action[b, x])
        report.record("a_module_on_L", (a, b, x), (la[a], la[b], ll[x]), lhs, rhs)
    if A.unit_index is not None:
        u = A.unit_index
        for x in range(L.dim):
            report.record("a_module_unit", (u, x), (la[u], ll[x]), action[u, x], L.basis(x))
    for a, x, b in product(range(A.dim), range(L.dim), range(A.dim)):
        lhs = pair.act(action[a, x], A.basis(b))
        rhs = A.multiply(A.basis(a), pair.mu[x, b])
        report.record("mu_a_linear", (a, x, b), (la[a], ll[x], la[b]), lhs, rhs)
    for x, a, y in product(range(L.dim), range(A.dim), range(L.dim)):
        lhs = bilinear(L.c, L.basis(x), action[a, y])
        rhs = bilinear(action, pair.mu[x, a], L.basis(y)) + bilinear(action, A.basis(a), L.c[x, y])
        report.record("mixed_leibniz", (x, a, y), (ll[x], la[a], ll[y]), lhs, rhs)
    return report


def validate_poisson(poisson: PoissonAlgebra) -> ValidationReport:
    """Skew-symmetry, Jacobi and the Leibniz rule [a, bc] = [a, b]c + b[a, c]"""
    A, br = poisson.A, poisson.bracket
    report = _lie_report(br, A.basis_labels, poisson.name or "poisson")
    labels = A.basis_labels
    for a, b, c in product(range(A.dim), repeat=3):
        lhs = bilinear(br, A.basis(a), A.c[b, c])
        rhs = A.multiply(br[a, b], A.basis(c)) + A.multiply(A.basis(b), br[a, c])
        report.record("leibniz_rule", (a, b, c), (labels[a], labels[b], labels[c]), lhs, rhs)
    return report


def validate_module(pair: LeibnizPair, mod: PairModule) -> ValidationReport:
    """
    Check every axiom of a pair module

    Covers the A-bimodule axioms on M, the L-module axioms on M and P, the
    derivation rules of the semidirect-product morphism L + P -> Der(A + M)
    and, for a module flagged regular, agreement with the pair's own
    structure tensors.

    Args:
        pair: Valid Leibniz pair
        mod: Candidate module

    Returns:
        ValidationReport over all axiom instances
    """
    mod.check_shapes(pair)
    A, L = pair.A, pair.L
    dA, dL, dM, dP = A.dim, L.dim, mod.M_dim, mod.P_dim
    la, ll, lm, lp = A.basis_labels, L.basis_labels, mod.M_labels, mod.P_labels
    report = ValidationReport(mod.name or "module")

    def e(dim, i):
        return basis_vector(dim, i)

    def left(a, m):
        return bilinear(mod.left_act, a, m)

    def right(m, a):
        return bilinear(mod.right_act, m, a)

    def lm_act(x, m):
        return bilinear(mod.L_on_M, x, m)

    for a, b, m in product(range(dA), range(dA), range(dM)):
        report.record("bimodule_left", (a, b, m), (la[a], la[b], lm[m]),
                      left(A.c[a, b], e(dM, m)), left(e(dA, a), mod.left_act[b, m]))
    for m, a, b in product(range(dM), range(dA), range(dA)):
        report.record("bimodule_right", (m, a, b), (lm[m], la[a], la[b]),
                      right(mod.right_act[m, a], e(dA, b)), right(e(dM, m), A.c[a, b]))
    for a, m, b in product(range(dA), range(dM), range(dA)):
        report.record("bimodule_middle", (a, m, b), (la[a], lm[m], la[b]),
                      right(mod.left_act[a, m], e(dA, b)), left(e(dA, a), mod.right_act[m, b]))

    for x, y, m in product(range(dL), range(dL), range(dM)):
        lhs = lm_act(L.c[x, y], e(dM, m))
        rhs = lm_act(e(dL, x), mod.L_on_M[y, m]) - lm_act(e(dL, y), mod.L_on_M[x, m])
        report.record("lie_module_M", (x, y, m), (ll[x], ll[y], lm[m]), lhs, rhs)
    for x, y, p in product(range(dL), range(dL), range(dP)):
        lhs = bilinear(mod.L_on_P, L.c[x, y], e(dP, p))
        rhs = (bilinear(mod.L_on_P, e(dL, x), mod.L_on_P[y, p])
               - bilinear(mod.L_on_P, e(dL, y), mod.L_on_P[x, p]))
        report.record("lie_module_P", (x, y, p), (ll[x], ll[y], lp[p]), lhs, rhs)

    for x, a, m in product(range(dL), range(dA), range(dM)):
        lhs = lm_act(e(dL, x), mod.left_act[a, m])
        rhs = left(pair.mu[x, a], e(dM, m)) + left(e(dA, a), mod.L_on_M[x, m])
        report.record("L_left_derivation", (x, a, m), (ll[x], la[a], lm[m]), lhs, rhs)
    for x, m, a in product(range(dL), range(dM), range(dA)):
        lhs = lm_act(e(dL, x), mod.right_act[m, a])
        rhs = right(mod.L_on_M[x, m], e(dA, a)) + right(e(dM, m), pair.mu[x, a])
        report.record("L_right_derivation", (x, m, a), (ll[x], lm[m], la[a]), lhs, rhs)

    for p, a, b in product(range(dP), range(dA), range(dA)):
        lhs = bilinear(mod.P_on_A, e(dP, p), A.c[a, b])
        rhs = right(mod.P_on_A[p, a], e(dA, b)) + left(e(dA, a), mod.P_on_A[p, b])
        report.record("P_derivation", (p, a, b), (lp[p], la[a], la[b]), lhs, rhs)
    for x, p, a in product(range(dL), range(dP), range(dA)):
        lhs = bilinear(mod.P_on_A, mod.L_on_P[x, p], e(dA, a))
        rhs = (lm_act(e(dL, x), mod.P_on_A[p, a])
               - bilinear(mod.P_on_A, e(dP, p), pair.mu[x, a]))
        report.record("lie_morphism_extension", (x, p, a), (ll[x], lp[p], la[a]), lhs, rhs)

    if mod.regular:
        _check_regular(pair, mod, report)
    return report


def _check_regular(pair: LeibnizPair, mod: PairModule, report: ValidationReport) -> None:
    A, L = pair.A, pair.L
    if (mod.M_dim, mod.P_dim) != (A.dim, L.dim):
        report.violations.append(Violation(
            "regular_module", (mod.M_dim, mod.P_dim), ("M", "P"),
            (Fraction(mod.M_dim), Fraction(mod.P_dim)), (Fraction(A.dim), Fraction(L.dim))))
        return
    expected = {
        "left_act": A.c,
        "right_act": A.c,
        "L_on_M": pair.mu,
        "L_on_P": L.c,
        "P_on_A": pair.mu,
    }
    for attr, tensor in expected.items():
        actual = getattr(mod, attr)
        for i, j in product(range(tensor.shape[0]), range(tensor.shape[1])):
            report.record("regular_module", (i, j), (attr, f"{i},{j}"), actual[i, j], tensor[i, j])


def validate_poisson_module(poisson: PoissonAlgebra, mod: PairModule) -> ValidationReport:
    """
    Module axioms over the pair of a Poisson algebra plus the rule
    [ab, m] = a[b, m] + [a, m]b
    """
    pair = poisson.as_pair()
    report = validate_module(pair, mod)
    A = poisson.A
    la, lm = A.basis_labels, mod.M_labels
    for a, b, m in product(range(A.dim), range(A.dim), range(mod.M_dim)):
        lhs = bilinear(mod.L_on_M, A.c[a, b], basis_vector(mod.M_dim, m))
        rhs = (bilinear(mod.left_act, A.basis(a), mod.L_on_M[b, m])
               + bilinear(mod.right_act, mod.L_on_M[a, m], A.basis(b)))
        report.record("poisson_module_derivation", (a, b, m), (la[a], la[b], lm[m]), lhs, rhs)
    return report


def validate_object(obj: Any) -> ValidationReport:
    """Dispatch to the validator matching the object's type"""
    if isinstance(obj, StructureAlgebra):
        return validate_associative(obj) if obj.kind == ASSOCIATIVE else validate_lie(obj)
    if isinstance(obj, LeibnizPair):
        report = ValidationReport(obj.name or "pair")
        report.extend(validate_associative(obj.A)).extend(validate_lie(obj.L))
        return report.extend(validate_pair(obj))
    if isinstance(obj, PoissonAlgebra):
        report = validate_associative(obj.A)
        report.subject = obj.name or "poisson"
        return report.extend(validate_poisson(obj))
    raise StructureError(f"cannot validate object of type {type(obj).__name__}")
