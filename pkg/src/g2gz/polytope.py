"""Exact H/V-representations of the Gelfand-Zeitlin polytope and its width certificate.

The polytope lives in R^5 with the weight lattice of
:func:`g2gz.lie_data.gz_weight_lattice`. Vertices are found by intersecting
every 5-subset of bounding hyperplanes; with nine halfspaces that is 126
exact solves. Edges are vertex pairs whose common tight constraints cut out
a line.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact_field import ONE, SQRT3, ZERO, FieldDomainError, FieldElement, format_field
from .lie_data import Lattice, gz_weight_lattice
from .linalg import SINGULAR, exact_det, exact_nullspace, exact_rank, exact_solve

__all__ = [
    "Halfspace",
    "HPolytope",
    "VRep",
    "Edge",
    "WidthCertificate",
    "WidthReport",
    "UnboundedPolytopeError",
    "CertificateError",
    "gz_halfspaces",
    "cube_polytope",
    "enumerate_vertices",
    "enumerate_edges",
    "min_edge_length",
    "smooth_chamber_vertices",
    "build_width_certificate",
    "gromov_width_report",
    "affine_dimension",
    "in_chamber",
    "UPPER_BOUND_CITATION",
]

F = FieldElement
Vector = tuple[FieldElement, ...]


class UnboundedPolytopeError(ValueError):
    pass


class CertificateError(RuntimeError):
    pass


def _dot(u: Sequence, v: Sequence) -> FieldElement:
    acc = ZERO
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


@dataclass(frozen=True)
class Halfspace:
    """The closed halfspace ``<normal, x> <= offset``."""

    normal: Vector
    offset: FieldElement
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(F.coerce(c) for c in self.normal))
        object.__setattr__(self, "offset", F.coerce(self.offset))
        if not any(self.normal):
            raise ValueError("halfspace normal must be nonzero")

    def slack(self, x: Sequence) -> FieldElement:
        """``offset - <normal, x>``; non-negative inside."""
        return self.offset - _dot(self.normal, x)

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        s = self.slack(x).sign()
        return s > 0 if strict else s >= 0

    def float_slack(self, X):
        """Vectorised float slack for an array of points of shape (..., n)."""
        import numpy as np

        n = np.array([float(c) for c in self.normal])
        return float(self.offset) - np.asarray(X, dtype=float) @ n


@dataclass(frozen=True)
class HPolytope:
    """Bounded polytope ``{x : <n_i, x> <= b_i}`` with an ambient lattice.

    ``chamber`` holds the constraints whose strict versions cut out the open
    chamber region on which the torus action is smooth; they are not part of
    the polytope's own inequalities.
    """

    halfspaces: tuple[Halfspace, ...]
    lattice: Lattice
    chamber: tuple[Halfspace, ...] = ()
    lam: FieldElement | None = None

    @property
    def dim(self) -> int:
        return self.lattice.dim

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        return all(h.contains(x, strict) for h in self.halfspaces)

    def tight_set(self, x: Sequence) -> frozenset[int]:
        return frozenset(i for i, h in enumerate(self.halfspaces) if not h.slack(x))


@dataclass(frozen=True)
class VRep:
    vertices: tuple[Vector, ...]
    tight_sets: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def index(self, v: Sequence) -> int:
        return self.vertices.index(tuple(v))


@dataclass(frozen=True)
class Edge:
    v0: int
    v1: int
    direction: tuple[int, ...]  # primitive, in lattice coordinates, from v0 to v1
    length: FieldElement


@dataclass
class WidthCertificate:
    vertex: Vector
    directions: tuple[tuple[int, ...], ...]  # lattice coordinates
    size_l: FieldElement
    affine_map: tuple[tuple[FieldElement, ...], ...]  # columns are ambient directions
    translation: Vector
    check_log: dict[str, bool] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return bool(self.check_log) and all(self.check_log.values())

    def apply(self, y: Sequence) -> Vector:
        """``B(y) = vertex + sum_i y_i u_i``."""
        out = list(self.translation)
        for yi, col in zip(y, self.affine_map):
            yi = F.coerce(yi)
            out = [o + yi * c for o, c in zip(out, col)]
        return tuple(out)

    def to_dict(self) -> dict:
        return {
            "vertex": [format_field(c) for c in self.vertex],
            "directions": [list(d) for d in self.directions],
            "l": format_field(self.size_l),
            "checks": dict(self.check_log),
        }


# -- construction ---------------------------------------------------------


def gz_halfspaces(lam, lattice: Lattice | None = None) -> HPolytope:
    """The nine bounding inequalities of the polytope for the orbit through (0, lam).

    Three come from the Kirwan triangle, six from eigenvalue interlacing.
    ``lattice`` defaults to :func:`g2gz.lie_data.gz_weight_lattice`.
    """
    lam = F.coerce(lam)
    if lam.sign() <= 0:
        raise FieldDomainError("lambda must be positive")
    h = F(0, Fraction(1, 2))  # sqrt3/2
    r3 = F(0, Fraction(1, 3))  # 1/sqrt3
    t = Fraction(1, 3)
    hs = (
        Halfspace((-h, F(Fraction(1, 2)), 0, 0, 0), lam / 2, "kirwan: -sqrt3 x1/2 + x2/2 <= lam/2"),
        Halfspace((h, F(Fraction(1, 2)), 0, 0, 0), lam / 2, "kirwan: sqrt3 x1/2 + x2/2 <= lam/2"),
        Halfspace((0, -1, 0, 0, 0), -lam / 2, "kirwan: lam/2 <= x2"),
        Halfspace((-t, -r3, -1, 0, 0), ZERO, "-x1/3 - x2/sqrt3 <= x3"),
        Halfspace((-2 * t, 0, 1, 0, 0), ZERO, "x3 <= 2x1/3"),
        Halfspace((2 * t, 0, 0, -1, 0), ZERO, "2x1/3 <= x4"),
        Halfspace((t, -r3, 0, 1, 0), ZERO, "x4 <= -x1/3 + x2/sqrt3"),
        Halfspace((0, 0, 1, 0, -1), ZERO, "x3 <= x5"),
        Halfspace((0, 0, 0, -1, 1), ZERO, "x5 <= x4"),
    )
    chamber = (
        Halfspace((F(Fraction(3, 2)), -h, 0, 0, 0), ZERO, "su3 chamber: 3x1/2 + sqrt3 x2/2 >= 0"),
        Halfspace((F(Fraction(-3, 2)), -h, 0, 0, 0), ZERO, "su3 chamber: -3x1/2 + sqrt3 x2/2 >= 0"),
        Halfspace((0, 0, 1, -1, 0), ZERO, "u2 chamber: x3 <= x4"),
    )
    return HPolytope(hs, gz_weight_lattice() if lattice is None else lattice, chamber, lam)


def cube_polytope(n: int = 5, side=1) -> HPolytope:
    """The cube ``[0, side]^n`` with the standard lattice; an engine self-test."""
    hs = []
    for i in range(n):
        e = [ZERO] * n
        e[i] = ONE
        hs.append(Halfspace(tuple(e), F.coerce(side), f"x{i + 1} <= {side}"))
        hs.append(Halfspace(tuple(-c for c in e), ZERO, f"x{i + 1} >= 0"))
    basis = []
    for i in range(n):
        e = [ZERO] * n
        e[i] = ONE
        basis.append(tuple(e))
    return HPolytope(tuple(hs), Lattice(tuple(basis)))


def _check_bounded(P: HPolytope) -> None:
    n = P.dim
    N = [list(h.normal) for h in P.halfspaces]
    if exact_rank(N) < n:
        raise UnboundedPolytopeError("normals do not span: polytope contains a line")
    # pointed recession cone; its extreme rays are lines cut by n-1 normals
    for sub in itertools.combinations(range(len(N)), n - 1):
        ns = exact_nullspace([N[i] for i in sub], n)
        if len(ns) != 1:
            continue
        (d,) = ns
        d = [F.coerce(x) for x in d]
        for sgn in (1, -1):
            if all((sgn * _dot(row, d)).sign() <= 0 for row in N):
                raise UnboundedPolytopeError(
                    f"recession direction {[format_field(sgn * x) for x in d]}"
                )


def enumerate_vertices(P: HPolytope) -> VRep:
    """All vertices, each with its full set of tight constraint indices."""
    _check_bounded(P)
    n = P.dim
    found: dict[Vector, set[int]] = {}
    for sub in itertools.combinations(range(len(P.halfspaces)), n):
        A = [list(P.halfspaces[i].normal) for i in sub]
        b = [P.halfspaces[i].offset for i in sub]
        x = exact_solve(A, b)
        if x is SINGULAR:
            continue
        x = tuple(x)
        if x in found:
            found[x].update(sub)
            continue
        if P.contains(x):
            found[x] = set(sub)
    verts = sorted(found)
    # recompute tight sets from scratch so they are complete
    tights = tuple(P.tight_set(v) for v in verts)
    for v, t in zip(verts, tights):
        assert exact_rank([list(P.halfspaces[i].normal) for i in t]) == n
    return VRep(tuple(verts), tights)


def affine_dimension(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return exact_rank(diffs) if diffs else 0


def enumerate_edges(P: HPolytope, V: VRep) -> list[Edge]:
    """Edges with primitive lattice directions and integral affine lengths."""
    n = P.dim
    edges = []
    for i, j in itertools.combinations(range(len(V)), 2):
        common = V.tight_sets[i] & V.tight_sets[j]
        if len(common) < n - 1:
            continue
        if exact_rank([list(P.halfspaces[k].normal) for k in common]) != n - 1:
            continue
        diff = [b - a for a, b in zip(V.vertices[i], V.vertices[j])]
        direction, length = P.lattice.primitive(diff)
        edges.append(Edge(i, j, direction, length))
    return edges


def min_edge_length(P: HPolytope, V: VRep | None = None) -> FieldElement:
    V = enumerate_vertices(P) if V is None else V
    return min(e.length for e in enumerate_edges(P, V))


def in_chamber(P: HPolytope, x: Sequence) -> bool:
    """Strict membership in the open chamber region (vacuous if none is set)."""
    return all(h.contains(x, strict=True) for h in P.chamber)


def _incident(edges: Sequence[Edge], i: int) -> list[tuple[tuple[int, ...], FieldElement]]:
    out = []
    for e in edges:
        if e.v0 == i:
            out.append((e.direction, e.length))
        elif e.v1 == i:
            out.append((tuple(-k for k in e.direction), e.length))
    return out


def _is_unimodular(dirs: Sequence[Sequence[int]]) -> bool:
    d = exact_det([[Fraction(k) for k in row] for row in dirs])
    return abs(d) == 1


def smooth_chamber_vertices(
    P: HPolytope, V: VRep, edges: Sequence[Edge] | None = None
) -> list[int]:
    """Indices of chamber vertices whose incident edges form a lattice basis."""
    edges = enumerate_edges(P, V) if edges is None else edges
    out = []
    for i, v in enumerate(V.vertices):
        if not in_chamber(P, v):
            continue
        inc = _incident(edges, i)
        if len(inc) != P.dim:
            continue
        if _is_unimodular([d for d, _ in inc]):
            out.append(i)
    return out


def build_width_certificate(
    P: HPolytope, V: VRep | None = None, edges: Sequence[Edge] | None = None
) -> tuple[FieldElement, WidthCertificate]:
    """Largest simplex size certified at a smooth chamber vertex.

    Picks the smooth chamber vertex maximising its shortest incident edge
    (ties: lexicographically smallest vertex) and runs the exact checks that
    together show ``B(open simplex of size l)`` lies in the interior of ``P``
    and in the open chamber.
    """
    V = enumerate_vertices(P) if V is None else V
    edges = enumerate_edges(P, V) if edges is None else edges
    smooth = smooth_chamber_vertices(P, V, edges)
    if not smooth:
        raise CertificateError("no smooth vertex in the open chamber")
    best = None
    for i in smooth:
        inc = _incident(edges, i)
        l = min(length for _, length in inc)
        if best is None or l > best[0] or (l == best[0] and V.vertices[i] < V.vertices[best[1]]):
            best = (l, i)
    l, i = best
    v = V.vertices[i]
    dirs = tuple(sorted(d for d, _ in _incident(edges, i)))
    cols = tuple(P.lattice.to_ambient(d) for d in dirs)
    cert = WidthCertificate(
        vertex=v,
        directions=dirs,
        size_l=l,
        affine_map=cols,
        translation=v,
    )
    cert.check_log = certificate_checks(P, cert)
    return l, cert


def certificate_checks(P: HPolytope, cert: WidthCertificate) -> dict[str, bool]:
    v, l = cert.vertex, cert.size_l
    gens = [tuple(vi + l * ui for vi, ui in zip(v, u)) for u in cert.affine_map]
    tight = P.tight_set(v)
    return {
        "directions_form_lattice_basis": len(cert.directions) == P.dim
        and _is_unimodular(cert.directions),
        "generators_in_polytope": all(P.contains(g) for g in gens),
        "vertex_strict_off_tight_set": all(
            h.contains(v, strict=True)
            for k, h in enumerate(P.halfspaces)
            if k not in tight
        ),
        "vertex_in_open_chamber": in_chamber(P, v),
        "generators_in_closed_chamber": all(
            h.contains(g) for g in gens for h in P.chamber
        ),
    }


UPPER_BOUND_CITATION = (
    "Caviedes Castro, upper bound for Gromov width of coadjoint orbits "
    "(quoted constant lambda/sqrt3, not computed)"
)

NOTE = (
    "The Gromov width is a statement about symplectic embeddings; only the "
    "polytope certificate for the lower bound is computed here. The upper "
    "bound is a quoted constant."
)


@dataclass
class WidthReport:
    lam: FieldElement
    polytope: HPolytope
    vrep: VRep
    edges: list[Edge]
    certificate: WidthCertificate
    lower_bound: FieldElement
    upper_bound: FieldElement
    tight: bool
    upper_bound_citation: str = UPPER_BOUND_CITATION
    note: str = NOTE

    def to_dict(self) -> dict:
        verts = self.vrep.vertices
        return {
            "lambda": format_field(self.lam),
            "vertices": [[format_field(c) for c in v] for v in verts],
            "edges": [
                {
                    "v0": [format_field(c) for c in verts[e.v0]],
                    "v1": [format_field(c) for c in verts[e.v1]],
                    "direction": list(e.direction),
                    "length": format_field(e.length),
                }
                for e in self.edges
            ],
            "certificate": self.certificate.to_dict(),
            "lower_bound": format_field(self.lower_bound),
            "upper_bound": format_field(self.upper_bound),
            "upper_bound_citation": self.upper_bound_citation,
            "tight": self.tight,
            "note": self.note,
        }


def gromov_width_report(lam, lattice: Lattice | None = None) -> WidthReport:
    """Certified lower bound against the quoted upper bound ``lam / sqrt3``."""
    P = gz_halfspaces(lam, lattice)
    V = enumerate_vertices(P)
    edges = enumerate_edges(P, V)
    l, cert = build_width_certificate(P, V, edges)
    if not cert.valid:
        failed = [k for k, ok in cert.check_log.items() if not ok]
        raise CertificateError(f"certificate checks failed: {failed}")
    upper = P.lam / SQRT3
    return WidthReport(
        lam=P.lam,
        polytope=P,
        vrep=V,
        edges=edges,
        certificate=cert,
        lower_bound=l,
        upper_bound=upper,
        tight=(l == upper),
    )
