"""Cops-and-robbers workbench."""

from .errors import ContractViolation, DomainError, GenerationError, GeometryError, PolicyFault, PursuitError, ResourceError
from .game import GameConfig, GamePosition, Side, legal_moves
from .graph import Graph

__version__ = "0.1.0"

__all__ = [
    "ContractViolation",
    "DomainError",
    "GameConfig",
    "GamePosition",
    "GenerationError",
    "GeometryError",
    "Graph",
    "PolicyFault",
    "PursuitError",
    "ResourceError",
    "Side",
    "legal_moves",
]
