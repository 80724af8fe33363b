"""n-queens in d dimensions: exact solving, constructions, bounds, IP models."""

from .geometry import (
    BoardSpec,
    Placement,
    attack_directions,
    attacks,
    modular_attacks,
    verify_certificate,
)

__all__ = [
    "BoardSpec",
    "Placement",
    "attack_directions",
    "attacks",
    "modular_attacks",
    "verify_certificate",
]

__version__ = "0.1.0"
