"""Equivariant endomorphism monoids of finite-group actions and their relative ranks."""
from .collapse import build_V, build_W, collapse_type_count, generators_for, relative_rank_formula
from .endo import EquivariantMap, compose, enumerate_aut, enumerate_end, maps_equal, metrics
from .errors import EqMonoidError
from .factorize import factor, recompose
from .groups import FiniteGroup, Subgroup
from .gset import GSet, OrbitSpec, Point, build_gset

__all__ = [
    "EqMonoidError", "EquivariantMap", "FiniteGroup", "GSet", "OrbitSpec", "Point", "Subgroup",
    "build_V", "build_W", "build_gset", "collapse_type_count", "compose", "enumerate_aut",
    "enumerate_end", "factor", "generators_for", "maps_equal", "metrics", "recompose",
    "relative_rank_formula",
]
