"""Tileability of Wang tile and polygon prototile sets through Anderson-Putnam
complexes, non-negative 2-cycles and the (asymptotic) Thurston norm."""

from .asymptotic import asymptotic_norm_upper, lipschitz_bound, subadditivity_check
from .homology import (
    build_ap_complex,
    cycle_space_basis,
    is_cycle,
    nonneg_cycle_exists,
    simplex_extreme_points,
    switching_rules,
)
from .reduction import encode_as_wang, forget_colors, scale_to_integral, zigzag
from .refinement import (
    build_wp_tileset,
    cycle_in_projected_cone,
    enumerate_patterns,
    project_cycle,
    tileability,
)
from .surface import (
    build_surface,
    euler_characteristic,
    ev_of_periodic,
    extract_periodic_tiling,
    find_torus,
    thurston_norm,
    thurston_norm_bruteforce,
)
from .tileset import (
    canonical_serialize,
    parse_cycle,
    parse_polygon_set,
    parse_wang_tileset,
    validate_polygon_set,
)

__version__ = "0.1.0"
