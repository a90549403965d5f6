"""Polynomial systems over number rings and the combinators that build definitions."""
from .poly import Poly
from .system import Var, PolySystem, DiophDefinition, Builder, merge, CLASSES
from .ops import (RootlessPolynomial, combine_to_single, find_rootless_quadratic, unit_gadget, nonzero_gadget,
                  witness_nonzero, total_positivity_system, intersect_definitions, compose_transitive,
                  superset_shrink, transport, veronese, has_square_root)
from .oracle import brute_force_solutions, t_image, box_elements, grid_zero_sets

__all__ = [
    "Poly", "Var", "PolySystem", "DiophDefinition", "Builder", "merge", "CLASSES", "RootlessPolynomial",
    "combine_to_single", "find_rootless_quadratic", "unit_gadget", "nonzero_gadget", "witness_nonzero",
    "total_positivity_system", "intersect_definitions", "compose_transitive", "superset_shrink", "transport",
    "veronese", "has_square_root", "brute_force_solutions", "t_image", "box_elements", "grid_zero_sets",
]
