"""Finite lattice toolkit: lattices, partial lattices, varieties, subspace
lattices and transferability witnesses at finite scale."""

from latforge.errors import LatForgeError
from latforge.kernels import BACKEND
from latforge.lattice import FiniteLattice

__version__ = "0.1.0"

__all__ = ["BACKEND", "FiniteLattice", "LatForgeError", "__version__"]
