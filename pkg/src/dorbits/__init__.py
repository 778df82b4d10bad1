"""Diagram-equivariant constructions over finite categories and finite spaces."""

from .errors import (
    BudgetExceeded,
    CheckFailure,
    DorbitsError,
    ParseError,
    ValidationError,
)
from .fincat import FinCategory, FinFunctor, NatTransform
from .finspace import FinSpace, MonotoneMap
from .dspace import DSpace, EquivariantMap
from .orbits import Orbit, OrbitCategory
from .cells import CellComplex

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CellComplex",
    "CheckFailure",
    "DSpace",
    "DorbitsError",
    "EquivariantMap",
    "FinCategory",
    "FinFunctor",
    "FinSpace",
    "MonotoneMap",
    "NatTransform",
    "Orbit",
    "OrbitCategory",
    "ParseError",
    "ValidationError",
]
