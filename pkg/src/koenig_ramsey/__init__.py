"""Finite categories, set diagrams and Ramsey witnesses, with expansion and transfer tools."""

from .fincat import FinCategory, connected_components, is_confluent, validate_category
from .functor import FunctorData, validate_functor
from .ramsey import find_witness, is_ramsey, is_ramsey_witness, iterated_m_solution
from .setdiag import SetDiagram, enumerate_solutions, solve, solve_restricted, validate_diagram

__version__ = "0.1.0"

__all__ = [
    "FinCategory",
    "FunctorData",
    "SetDiagram",
    "connected_components",
    "enumerate_solutions",
    "find_witness",
    "is_confluent",
    "is_ramsey",
    "is_ramsey_witness",
    "iterated_m_solution",
    "solve",
    "solve_restricted",
    "validate_category",
    "validate_diagram",
    "validate_functor",
]
