"""
Exception types for LeibnizPairs

Validation failures are reported through ValidationReport objects, not
exceptions. The classes here cover malformed input, broken internal
contracts and unmet deformation preconditions.
"""
from typing import Optional


class LeibnizPairsError(Exception):
    """Base class for every error raised by the engine"""


class StructureError(LeibnizPairsError, ValueError):
    """A tensor or basis does not have the declared shape or entry type"""


class ContractViolation(LeibnizPairsError, RuntimeError):
    """An internal invariant failed, e.g. an image not contained in a kernel"""


class ObstructionPreconditionError(LeibnizPairsError, ValueError):
    """A jet is not valid below the order at which an obstruction was requested"""

    def __init__(self, order: int, message: Optional[str] = None):
        self.order = order
        super().__init__(message or f"jet fails the pair axioms at order {order}")


class DocumentError(LeibnizPairsError, ValueError):
    """An input document cannot be parsed or does not resolve"""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class BranchError(DocumentError):
    """The poisson branch was requested for an object that is not a Poisson algebra"""
