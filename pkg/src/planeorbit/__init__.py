"""Exact orbit closures for groups of plane polynomial automorphisms over number fields."""

from .amalgam import conjugate_into_factor, cyclically_reduce, factorize, is_bounded
from .closure import ClosureConfig, ClosureResult, orbit_closure
from .errors import PlaneOrbitError
from .lattice import Kind, LatticeDescriptor, Subvariety, classify, is_torsion
from .numfield import FieldElement, NumberField
from .planeauto import PlaneAutomorphism, PlanePoint, compose, parse_map
from .poly2 import BiPoly, parse_poly

__version__ = "0.1.0"

__all__ = [
    "BiPoly",
    "ClosureConfig",
    "ClosureResult",
    "FieldElement",
    "Kind",
    "LatticeDescriptor",
    "NumberField",
    "PlaneAutomorphism",
    "PlaneOrbitError",
    "PlanePoint",
    "Subvariety",
    "classify",
    "compose",
    "conjugate_into_factor",
    "cyclically_reduce",
    "factorize",
    "is_bounded",
    "is_torsion",
    "orbit_closure",
    "parse_map",
    "parse_poly",
]
