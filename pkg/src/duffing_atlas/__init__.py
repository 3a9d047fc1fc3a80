"""
ROLE: Top-level duffing_atlas package.

Qualitative analysis of the generalized Duffing family

    x' = y,  y' = -alpha*y - epsilon*x**m - sigma*x

covering finite and infinite equilibria, centers, connection cycles,
numerical verification and global phase-portrait classification.
"""

from .version import __version__
from .model.parameters import Parameters, PlaneState

__all__ = ["Parameters", "PlaneState", "__version__"]
