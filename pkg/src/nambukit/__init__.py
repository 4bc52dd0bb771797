"""Exact computations with Nambu-Poisson tensors, Filippov algebras and Filippov algebroids."""

from .exterior import DiffForm, MultiVectorField
from .ratpoly import Poly

__version__ = "0.1.0"
__all__ = ["DiffForm", "MultiVectorField", "Poly"]
