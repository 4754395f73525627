"""
LeibnizPairs package for exact cohomology and deformations of Leibniz pairs
and Poisson algebras
"""

from .algebra import (
    LeibnizPair,
    PairModule,
    PoissonAlgebra,
    StructureAlgebra,
    ValidationReport,
    self_module,
    validate_module,
    validate_object,
    validate_pair,
    validate_poisson,
)
from .bicomplex import Bidegree, LeibnizBicomplex, PoissonBicomplex, make_bicomplex
from .cohomology import BettiTable, hochschild_cohomology, total_cohomology, whitehead_compare
from .common_utils import setup_logging
from .deformation import (
    DeformationJet,
    EquivalenceJet,
    apply_equivalence,
    defects,
    is_infinitesimal,
    lift_to_order,
    obstruction,
)
from .document import load_document, parse_document
from .errors import ContractViolation, DocumentError, LeibnizPairsError, StructureError

__version__ = "1.0.0"
__all__ = [
    "StructureAlgebra",
    "LeibnizPair",
    "PoissonAlgebra",
    "PairModule",
    "ValidationReport",
    "self_module",
    "validate_object",
    "validate_pair",
    "validate_poisson",
    "validate_module",
    "Bidegree",
    "LeibnizBicomplex",
    "PoissonBicomplex",
    "make_bicomplex",
    "BettiTable",
    "total_cohomology",
    "whitehead_compare",
    "hochschild_cohomology",
    "DeformationJet",
    "EquivalenceJet",
    "defects",
    "is_infinitesimal",
    "apply_equivalence",
    "obstruction",
    "lift_to_order",
    "load_document",
    "parse_document",
    "setup_logging",
    "LeibnizPairsError",
    "StructureError",
    "ContractViolation",
    "DocumentError",
]
