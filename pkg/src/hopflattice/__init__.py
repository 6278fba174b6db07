"""Exact Hopf-map constructions of the 24-cell, E8 and Barnes-Wall kissing configurations."""

from .algebra import ExactScalar, Hyper, basis_element, cd_conj, cd_inv, cd_mul, cd_norm2
from .configuration import Configuration, ConstructionError
from .hopf import BasePoint, PointAtInfinity, SpherePair, fiber_point, h1, h2, hopf_direct

__version__ = "0.1.0"

__all__ = [
    "BasePoint",
    "Configuration",
    "ConstructionError",
    "ExactScalar",
    "Hyper",
    "PointAtInfinity",
    "SpherePair",
    "basis_element",
    "cd_conj",
    "cd_inv",
    "cd_mul",
    "cd_norm2",
    "fiber_point",
    "h1",
    "h2",
    "hopf_direct",
]
