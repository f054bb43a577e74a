"""Exact Gelfand-Zeitlin polytope and Gromov width certificate for G2 coadjoint orbits."""
from .exact_field import SQRT3, FieldDomainError, FieldElement, format_field, parse_field, to_float
from .lie_data import (
    Lattice,
    g2_root_system,
    gz_weight_lattice,
    kirwan_triangle,
    su3_root_system,
    thimm_gz,
    verify_interlacing,
    weight_lattice_L,
)
from .polytope import (
    CertificateError,
    build_width_certificate,
    enumerate_edges,
    enumerate_vertices,
    gromov_width_report,
    gz_halfspaces,
    min_edge_length,
    smooth_chamber_vertices,
)
from .recheck import recheck_certificate

__all__ = [
    "FieldElement",
    "FieldDomainError",
    "SQRT3",
    "parse_field",
    "format_field",
    "to_float",
    "Lattice",
    "g2_root_system",
    "su3_root_system",
    "weight_lattice_L",
    "gz_weight_lattice",
    "kirwan_triangle",
    "thimm_gz",
    "verify_interlacing",
    "gz_halfspaces",
    "enumerate_vertices",
    "enumerate_edges",
    "min_edge_length",
    "smooth_chamber_vertices",
    "build_width_certificate",
    "gromov_width_report",
    "CertificateError",
    "recheck_certificate",
]
__version__ = "0.1.0"
