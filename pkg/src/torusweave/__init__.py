"""Alternating link diagrams on the torus: combinatorics, triangulations,
circle patterns, and hyperbolic volume."""

from .core import MapError, TLDError, TorusMap
from .diagram import (
    TorusDiagram,
    collapse_bigons,
    link_component_count,
    parse_diagram,
    serialize_diagram,
    trace_faces,
    validate_basic,
)
from .tiling import (
    TilingGraph,
    check_census,
    classify_vertices,
    derive_colors,
    layout_modulus,
    parse_tiling,
    perfect_matching,
    realize_link,
    right_angled_class,
    serialize_tiling,
)
from .catalog import catalog_diagram, catalog_names, catalog_tiling, catalog_tld
from .cuts import CutReport, check_bs_condition, has_cycle_of_tangles, is_weakly_prime
from .surgery import (
    Tangle,
    replace_crossing_with_tangle,
    replace_edge_with_tangle,
    trefoil_nugget,
    twist_chain_tangle,
    wheel_tangle,
)
from .triangulation import (
    CuspClass,
    EdgeClass,
    IdealTriangulation,
    Tetrahedron,
    Torihedron,
    TriangulationError,
    build_torihedra,
    edge_census,
    edge_slot,
    export_json,
    glued_edge_classes,
    stellate,
    stellate_tiling,
    three_two_moves,
)
from .geometry import (
    V16,
    V24,
    V_OCT,
    V_TET,
    AngleReport,
    AngleStructure,
    GeometryError,
    TraceFieldClass,
    VolumeReport,
    bipyramid_volume,
    classify_field,
    cusp_shape_top,
    exact_volume,
    incommensurable,
    lobachevsky,
    maximize_volume,
    semiregular_angles,
    tet_volume,
    verify_angles,
    vol_bipyramid_bound,
)
from .circle_pattern import (
    CirclePattern,
    GluingReport,
    PatternError,
    ShapeAssignment,
    kite_volume,
    layout_pattern,
    pattern_report,
    pattern_svg,
    shape_parameters,
    shape_volume,
    solve_radii,
    verify_gluing,
    volume_bounds,
)

__all__ = [
    "MapError",
    "TLDError",
    "TorusMap",
    "TorusDiagram",
    "TilingGraph",
    "parse_diagram",
    "serialize_diagram",
    "parse_tiling",
    "serialize_tiling",
    "trace_faces",
    "validate_basic",
    "collapse_bigons",
    "link_component_count",
    "classify_vertices",
    "check_census",
    "perfect_matching",
    "derive_colors",
    "realize_link",
    "right_angled_class",
    "layout_modulus",
    "catalog_names",
    "catalog_tiling",
    "catalog_diagram",
    "catalog_tld",
    "CutReport",
    "is_weakly_prime",
    "has_cycle_of_tangles",
    "check_bs_condition",
    "Tangle",
    "trefoil_nugget",
    "wheel_tangle",
    "twist_chain_tangle",
    "replace_edge_with_tangle",
    "replace_crossing_with_tangle",
    "TriangulationError",
    "Tetrahedron",
    "EdgeClass",
    "CuspClass",
    "IdealTriangulation",
    "Torihedron",
    "build_torihedra",
    "glued_edge_classes",
    "stellate",
    "stellate_tiling",
    "three_two_moves",
    "edge_census",
    "edge_slot",
    "export_json",
    "GeometryError",
    "AngleStructure",
    "AngleReport",
    "TraceFieldClass",
    "VolumeReport",
    "V_TET",
    "V_OCT",
    "V16",
    "V24",
    "lobachevsky",
    "tet_volume",
    "bipyramid_volume",
    "semiregular_angles",
    "verify_angles",
    "maximize_volume",
    "exact_volume",
    "CirclePattern",
    "GluingReport",
    "PatternError",
    "ShapeAssignment",
    "kite_volume",
    "layout_pattern",
    "pattern_report",
    "pattern_svg",
    "shape_parameters",
    "shape_volume",
    "solve_radii",
    "verify_gluing",
    "volume_bounds",
    "vol_bipyramid_bound",
    "classify_field",
    "incommensurable",
    "cusp_shape_top",
]

__version__ = "0.1.0"
