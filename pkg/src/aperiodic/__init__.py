"""Penrose rhomb tilings, Ammann recompositions, iteration dynamics, diffraction."""

from .exactnum import CycloPoint, GoldenRational

__all__ = ["CycloPoint", "GoldenRational"]
__version__ = "0.1.0"
