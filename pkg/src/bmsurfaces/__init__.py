"""Existence and classification of b^m-symplectic structures on surfaces, decided combinatorially."""
from __future__ import annotations

__version__ = "0.1.0"

from .actions import FiniteAction, average, equivariantly_equivalent, is_invariant, pullback
from .bgraph import build_graph, canonical_label, exists_bm, presentation_isomorphisms, two_colorable
from .decision import Decision, NoStructureError
from .desingularize import build_profile, convergence_report, desing_total_volume_closed, desing_total_volume_numeric
from .laurent import BmForm, check_form, cohomology_class, construct_form, equivalent, invariants, regularized_volume
from .nambu import NambuComponent, NambuData, from_surface, nambu_average, nambu_equivalent, nambu_validate
from .quadrature import finite_part_power, integrate_adaptive, regularized_volume_numeric
from .surface import (
    CoveredSurface,
    Curve,
    Face,
    SurfaceMap,
    SurfacePresentation,
    is_orientable,
    orientation_double_cover,
    validate,
)
