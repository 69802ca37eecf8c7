"""Disk families whose members avoid each other's mu-cores.

Region decomposition of a union of disks into outer shell, inner shell and
core, the weighted area bound built on it, numerical certification of the
shell inequality, and the hexagonal extremal constructions.
"""
from .arrangement import (
    Digon,
    MuArrangement,
    ValidationReport,
    Violation,
    adjacency_pairs,
    classify_digon,
    connected_components,
    find_digons,
    is_adjacent,
    is_thick,
    required_distance,
    validate,
)
from .bounds import (
    MU_CRIT,
    BoundReport,
    Coefficients,
    LocalCheck,
    PackingReport,
    coefficients,
    core_triangle_check,
    prop1_packing_check,
    shell_triangle_check,
    sigma_core,
    sigma_shell,
    theorem_bound,
)
from .certify import (
    CertificationGrid,
    case1_margin,
    certify_h_positive,
    derivative_gate,
    fab_monotonicity,
    nocore_probe,
    refine_minimum,
    shell_fg,
    shell_fg_partials,
    shell_h,
)
from .constructions import (
    DensityEstimate,
    Window,
    corollary_density,
    density_estimate,
    hex_arrangement,
    iterate_hex,
    random_arrangement,
)
from .decomposition import RegionDecomposition, decompose
from .errors import (
    DomainError,
    EmptyFamilyError,
    HypothesisError,
    MuArrangementError,
    NonOverlappingError,
    ShortfallError,
)
from .geometry import (
    AngleInterval,
    Disk,
    SymmetricGauge,
    Triangle,
    arc_boundaries,
    circle_relation,
    digon_vertices,
    gauge_norm,
    triangle_metrics,
    union_area,
)

__version__ = "0.1.0"

__all__ = [
    "Digon",
    "MuArrangement",
    "ValidationReport",
    "Violation",
    "adjacency_pairs",
    "classify_digon",
    "connected_components",
    "find_digons",
    "is_adjacent",
    "is_thick",
    "required_distance",
    "validate",
    "MU_CRIT",
    "BoundReport",
    "Coefficients",
    "LocalCheck",
    "PackingReport",
    "coefficients",
    "core_triangle_check",
    "prop1_packing_check",
    "shell_triangle_check",
    "sigma_core",
    "sigma_shell",
    "theorem_bound",
    "CertificationGrid",
    "case1_margin",
    "certify_h_positive",
    "derivative_gate",
    "fab_monotonicity",
    "nocore_probe",
    "refine_minimum",
    "shell_fg",
    "shell_fg_partials",
    "shell_h",
    "DensityEstimate",
    "Window",
    "corollary_density",
    "density_estimate",
    "hex_arrangement",
    "iterate_hex",
    "random_arrangement",
    "RegionDecomposition",
    "decompose",
    "DomainError",
    "EmptyFamilyError",
    "HypothesisError",
    "MuArrangementError",
    "NonOverlappingError",
    "ShortfallError",
    "AngleInterval",
    "Disk",
    "SymmetricGauge",
    "Triangle",
    "arc_boundaries",
    "circle_relation",
    "digon_vertices",
    "gauge_norm",
    "triangle_metrics",
    "union_area",
    "__version__",
]
