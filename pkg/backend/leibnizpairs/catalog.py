"""
Classical small examples as constructor functions

The bundled JSON documents describe the same objects; these constructors
are what the tests and the document round-trip compare against.
"""
from typing import Dict, Sequence, Tuple

import numpy as np

from .algebra import (ASSOCIATIVE, LIE, LeibnizPair, PairModule, PoissonAlgebra,
                      StructureAlgebra, self_module)
from .common_utils import ZERO, to_rational


def _tensor(dim_a: int, dim_b: int, dim_c: int,
            entries: Dict[Tuple[int, int, int], int]) -> np.ndarray:
    arr = np.full((dim_a, dim_b, dim_c), ZERO, dtype=object)
    for key, value in entries.items():
        arr[key] = to_rational(value)
    return arr


def dual_numbers() -> StructureAlgebra:
    """Q[x]/(x^2) on the basis (1, x)"""
    c = _tensor(2, 2, 2, {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1})
    return StructureAlgebra(ASSOCIATIVE, ("1", "x"), c, unit_index=0, name="DUAL")


def rationals() -> StructureAlgebra:
    return StructureAlgebra(ASSOCIATIVE, ("1",), _tensor(1, 1, 1, {(0, 0, 0): 1}),
                            unit_index=0, name="Q")


def zero_lie() -> StructureAlgebra:
    return StructureAlgebra(LIE, (), np.full((0, 0, 0), ZERO, dtype=object), name="ZERO")


def abelian_lie(labels: Sequence[str], name: str = "ABELIAN") -> StructureAlgebra:
    dim = len(labels)
    return StructureAlgebra(LIE, tuple(labels), _tensor(dim, dim, dim, {}), name=name)


def sl2() -> StructureAlgebra:
    """sl_2 on (h, e, f): [h, e] = 2e, [h, f] = -2f, [e, f] = h"""
    h, e, f = 0, 1, 2
    c = _tensor(3, 3, 3, {
        (h, e, e): 2, (e, h, e): -2,
        (h, f, f): -2, (f, h, f): 2,
        (e, f, h): 1, (f, e, h): -1,
    })
    return StructureAlgebra(LIE, ("h", "e", "f"), c, name="SL2")


def dual_pair() -> LeibnizPair:
    """(DUAL, 0): the pure associative case"""
    return LeibnizPair(dual_numbers(), zero_lie(), np.full((0, 2, 2), ZERO, dtype=object), name="DUAL_PAIR")


def pair1() -> LeibnizPair:
    """(DUAL, span{d}) with d acting as the Euler derivation x -> x"""
    mu = _tensor(1, 2, 2, {(0, 1, 1): 1})
    return LeibnizPair(dual_numbers(), abelian_lie(("d",), name="D"), mu, name="PAIR1")


def q_sl2_pair() -> LeibnizPair:
    """(Q, sl_2); Der(Q) = 0 forces mu = 0"""
    return LeibnizPair(rationals(), sl2(), _tensor(3, 1, 1, {}), name="Q_SL2")


def dual_sl2_trivial_pair() -> LeibnizPair:
    """(DUAL, sl_2) with sl_2 acting by zero"""
    return LeibnizPair(dual_numbers(), sl2(), _tensor(3, 2, 2, {}), name="DUAL_SL2")


def matrix_algebra2() -> StructureAlgebra:
    """2x2 matrices on the matrix units E11, E12, E21, E22"""
    units = [(0, 0), (0, 1), (1, 0), (1, 1)]
    entries = {}
    for a, (i, j) in enumerate(units):
        for b, (k, l) in enumerate(units):
            if j == k:
                entries[(a, b, units.index((i, l)))] = 1
    return StructureAlgebra(ASSOCIATIVE, ("E11", "E12", "E21", "E22"),
                            _tensor(4, 4, 4, entries), name="MAT2")


def matrix2_pair() -> LeibnizPair:
    """(M_2(Q), sl_2) with sl_2 acting by inner derivations a -> xa - ax"""
    A = matrix_algebra2()
    # h = E11 - E22, e = E12, f = E21 in matrix-unit coordinates
    sl2_in_units = [
        [1, 0, 0, -1],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
    ]
    mu = np.full((3, 4, 4), ZERO, dtype=object)
    for x, coords in enumerate(sl2_in_units):
        xv = np.array([to_rational(v) for v in coords], dtype=object)
        for a in range(4):
            mu[x, a] = A.multiply(xv, A.basis(a)) - A.multiply(A.basis(a), xv)
    return LeibnizPair(A, sl2(), mu, name="MAT2_SL2")


def pois3() -> PoissonAlgebra:
    """span{1, x, y}, all products of x, y zero, {x, y} = x"""
    c = _tensor(3, 3, 3, {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (0, 2, 2): 1, (2, 0, 2): 1})
    A = StructureAlgebra(ASSOCIATIVE, ("1", "x", "y"), c, unit_index=0, name="POIS3_A")
    bracket = _tensor(3, 3, 3, {(1, 2, 1): 1, (2, 1, 1): -1})
    return PoissonAlgebra(A, bracket, name="POIS3")


def dual_zero_poisson() -> PoissonAlgebra:
    """The dual numbers with the zero bracket"""
    return PoissonAlgebra(dual_numbers(), _tensor(2, 2, 2, {}), name="DUAL0")


def trivial_coefficients(pair: LeibnizPair) -> PairModule:
    """(M, P) = (A, 0) with multiplication actions and L acting through mu"""
    A = pair.A
    module = PairModule(
        M_labels=A.basis_labels,
        P_labels=(),
        left_act=A.c,
        right_act=A.c,
        L_on_M=pair.mu,
        L_on_P=np.full((pair.L.dim, 0, 0), ZERO, dtype=object),
        P_on_A=np.full((0, A.dim, A.dim), ZERO, dtype=object),
        name=f"{pair.name}_coeffs",
    )
    return module.check_shapes(pair)


CATALOG = {
    "dual_pair": dual_pair,
    "pair1": pair1,
    "q_sl2": q_sl2_pair,
    "dual_sl2": dual_sl2_trivial_pair,
    "matrix2": matrix2_pair,
    "pois3": pois3,
    "dual0": dual_zero_poisson,
}


def leibniz_examples() -> Dict[str, Tuple[LeibnizPair, PairModule]]:
    """Every catalogued pair with its regular module"""
    examples = {}
    for name in ("dual_pair", "pair1", "q_sl2", "dual_sl2", "matrix2"):
        pair = CATALOG[name]()
        examples[name] = (pair, self_module(pair))
    return examples
