"""Forward and inverse diffraction by rectangular periodic gratings."""

from .geometry import BinaryProfile, RectangularProfile, corners_of, layer_decomposition, validate_profile
from .modal import ForwardSolution, solve_forward
from .radiation import MediumPair, PlaneWaveIncidence, efficiencies

__all__ = [
    "BinaryProfile",
    "ForwardSolution",
    "MediumPair",
    "PlaneWaveIncidence",
    "RectangularProfile",
    "corners_of",
    "efficiencies",
    "layer_decomposition",
    "solve_forward",
    "validate_profile",
]
