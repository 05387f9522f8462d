"""Distributed planar coloring in a simulated LOCAL model."""

from localcolor.errors import InputError, LemmaViolation, RoundLimitExceeded
from localcolor.graph import Cycle, Graph

__all__ = ["Cycle", "Graph", "InputError", "LemmaViolation", "RoundLimitExceeded"]
__version__ = "0.1.0"
