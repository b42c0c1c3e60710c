"""Exact rational toolkit for sub-Riemannian model spaces and Carnot algebras."""

from __future__ import annotations

from .freenilp import FreeNilpotent, build_free, canonical_surjection, witt_ranks
from .holonomy import FULL, TRIVIAL, HomogeneousModelData, holonomy_dichotomy, step_and_growth, validate
from .liecore import LieAlgebra, LinearMap, from_json, homomorphism_check, jacobi_check, to_json
from .modelcheck import carnot_isomorphic, carnot_model_check, lie_model_check, nilpotentize

__version__ = "0.1.0"

__all__ = [
    "FULL",
    "TRIVIAL",
    "FreeNilpotent",
    "HomogeneousModelData",
    "LieAlgebra",
    "LinearMap",
    "build_free",
    "canonical_surjection",
    "carnot_isomorphic",
    "carnot_model_check",
    "from_json",
    "holonomy_dichotomy",
    "homomorphism_check",
    "jacobi_check",
    "lie_model_check",
    "nilpotentize",
    "step_and_growth",
    "to_json",
    "validate",
    "witt_ranks",
]
