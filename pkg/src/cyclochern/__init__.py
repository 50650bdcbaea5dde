"""Exact-arithmetic workbench for the cyclic homology of finite crossed
products, twisted spectral triples and their index pairings, and the
equivariant index-density forms of flat tori and round spheres."""

from .scalars import Scalar
from .groups import FiniteGroup, GAction, conjugacy_analysis
from .algebra import (
    AlgebraElement,
    ConformalCocycle,
    CrossedProductAlgebra,
    MatrixAlgebra,
    PointAlgebra,
    sigma_from_cocycle,
)
from .chains import Chain, Cochain, PeriodicChain, PeriodicCochain

__all__ = [
    "Scalar",
    "FiniteGroup",
    "GAction",
    "conjugacy_analysis",
    "AlgebraElement",
    "ConformalCocycle",
    "CrossedProductAlgebra",
    "MatrixAlgebra",
    "PointAlgebra",
    "sigma_from_cocycle",
    "Chain",
    "Cochain",
    "PeriodicChain",
    "PeriodicCochain",
]

__version__ = "0.1.0"
