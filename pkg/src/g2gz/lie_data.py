"""Root data, lattices and the Gelfand-Zeitlin map for U(1) < U(2) < SU(3).

Coordinates on the SU(3) Cartan are the planar coordinates of the G2 root
diagram. A traceless Hermitian matrix with ascending eigenvalues
``mu1 <= mu2 <= mu3`` sits at

    x1 = 3/2 * mu2,    x2 = sqrt3/2 * (mu3 - mu1),

and conversely ``mu = (-x1/3 - x2/sqrt3, 2x1/3, -x1/3 + x2/sqrt3)``.
The U(2) factor is the upper-left 2x2 block and U(1) its (1,1) entry.

Most functions have two modes: exact (``FieldElement`` entries) and float
(numpy arrays, batched over leading axes).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Sequence

import numpy as np

from .exact_field import ONE, SQRT3, ZERO, FieldDomainError, FieldElement
from .linalg import SINGULAR, exact_rank, exact_solve, hermitian_eigenvalues

__all__ = [
    "RootSystem",
    "Lattice",
    "GZPoint",
    "g2_root_system",
    "su3_root_system",
    "weight_lattice_L",
    "gz_weight_lattice",
    "su3_weight_lattice",
    "su3_coords_from_eigs",
    "eigs_from_su3_coords",
    "thimm_gz",
    "interlacing_slacks",
    "verify_interlacing",
    "in_su3_chamber",
    "kirwan_triangle",
]

F = FieldElement
HALF = Fraction(1, 2)
SQRT3_F = 1.7320508075688772


def _vec(*xs) -> tuple[FieldElement, ...]:
    return tuple(FieldElement.coerce(x) for x in xs)


def _is_exact(xs) -> bool:
    return all(isinstance(x, FieldElement) for x in xs)


# -- root systems ---------------------------------------------------------


@dataclass(frozen=True)
class RootSystem:
    """A planar root system with named roots.

    ``named`` holds the labelled positive-side roots of the diagram
    (alpha1..alpha6 for G2); ``roots`` is the full set including negatives.
    """

    roots: tuple[tuple[FieldElement, FieldElement], ...]
    simple_roots: dict[str, tuple[FieldElement, FieldElement]]
    named: dict[str, tuple[FieldElement, FieldElement]] = field(default_factory=dict)

    def __contains__(self, v) -> bool:
        return tuple(v) in set(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def __getitem__(self, name: str):
        return self.named[name]

    @staticmethod
    def norm2(v) -> FieldElement:
        return v[0] * v[0] + v[1] * v[1]

    def long_roots(self):
        top = max(self.norm2(r) for r in self.roots)
        return tuple(r for r in self.roots if self.norm2(r) == top)

    def short_roots(self):
        top = max(self.norm2(r) for r in self.roots)
        return tuple(r for r in self.roots if self.norm2(r) != top)


def g2_root_system() -> RootSystem:
    """The twelve G2 roots with short roots of squared length 1.

    The vertical long roots are ``(0, +-sqrt3)``, as forced by closure.
    """
    h = F(0, HALF)  # sqrt3 / 2
    named = {
        "alpha1": _vec(Fraction(-3, 2), h),
        "alpha2": _vec(1, 0),
        "alpha3": _vec(Fraction(3, 2), h),
        "alpha4": _vec(-HALF, h),
        "alpha5": _vec(-HALF, -h),
        "alpha6": _vec(0, -SQRT3),
    }
    roots = []
    for v in named.values():
        roots.append(v)
        roots.append((-v[0], -v[1]))
    return RootSystem(
        roots=tuple(roots),
        simple_roots={"alpha1": named["alpha1"], "alpha2": named["alpha2"]},
        named=named,
    )


def su3_root_system() -> RootSystem:
    """The long roots of G2, which form the roots of the embedded SU(3)."""
    g2 = g2_root_system()
    named = {k: g2.named[k] for k in ("alpha1", "alpha3", "alpha6")}
    return RootSystem(
        roots=g2.long_roots(),
        simple_roots={"alpha1": g2.named["alpha1"], "alpha3": g2.named["alpha3"]},
        named=named,
    )


# -- lattices -------------------------------------------------------------


@dataclass(frozen=True)
class Lattice:
    """Full-rank lattice in R^n given by a basis of field vectors."""

    basis: tuple[tuple[FieldElement, ...], ...]

    def __post_init__(self):
        n = len(self.basis)
        if any(len(b) != n for b in self.basis):
            raise ValueError("lattice basis must be square")
        if exact_rank(self.basis) != n:
            raise ValueError("lattice basis is not linearly independent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> list[list[FieldElement]]:
        """Matrix whose columns are the basis vectors."""
        n = self.dim
        return [[self.basis[j][i] for j in range(n)] for i in range(n)]

    def coords(self, v: Sequence) -> list[FieldElement]:
        """Coefficients of ``v`` in the basis (field elements, not necessarily integral)."""
        sol = exact_solve(self.basis_matrix(), [FieldElement.coerce(x) for x in v])
        if sol is SINGULAR:
            raise ValueError("singular lattice basis")
        return sol

    def to_ambient(self, k: Sequence[int]) -> tuple[FieldElement, ...]:
        n = self.dim
        out = [ZERO] * n
        for kj, b in zip(k, self.basis):
            if kj:
                out = [o + kj * bi for o, bi in zip(out, b)]
        return tuple(out)

    def contains(self, v: Sequence) -> bool:
        return all(c.is_integer() for c in self.coords(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def primitive(self, v: Sequence) -> tuple[tuple[int, ...], FieldElement]:
        """Write ``v = s * sum(k_i b_i)`` with ``k`` primitive integral and ``s > 0``.

        Raises ``ValueError`` if ``v`` is not a real multiple of a lattice
        vector, i.e. its lattice coordinates are not rationally proportional.
        """
        c = self.coords(v)
        piv = next((x for x in c if x), None)
        if piv is None:
            raise ValueError("zero vector has no primitive direction")
        ratios = [x / piv for x in c]
        if not all(r.is_rational() for r in ratios):
            raise ValueError("direction is not commensurable with the lattice")
        den = 1
        for r in ratios:
            den = den * r.a.denominator // gcd(den, r.a.denominator)
        ints = [int(r.a * den) for r in ratios]
        g = 0
        for k in ints:
            g = gcd(g, k)
        ints = [k // g for k in ints]
        # choose the orientation that makes the scale positive
        j = next(i for i, k in enumerate(ints) if k)
        s = c[j] / ints[j]
        if s.sign() < 0:
            ints = [-k for k in ints]
            s = -s
        return tuple(ints), s


def weight_lattice_L() -> Lattice:
    """Product lattice ``L*_SU(3) x Z^2 x Z`` in (x1, ..., x5) coordinates.

    Basis (1,0,0,0,0), (1/2, sqrt3/2, 0,0,0), e3, e4, e5. See
    :func:`gz_weight_lattice` for the lattice the polytope is measured in.
    """
    e = [[ZERO] * 5 for _ in range(5)]
    for i in range(5):
        e[i][i] = ONE
    e[1] = [F(HALF), F(0, HALF), ZERO, ZERO, ZERO]
    return Lattice(tuple(tuple(r) for r in e))


def gz_weight_lattice() -> Lattice:
    """Weight lattice of the torus acting through the Gelfand-Zeitlin coordinates.

    Same covolume as :func:`weight_lattice_L`, but an SU(3) weight carries a
    tail shift of ``+-1/3 (1, 1, 1)``: the U(2) and U(1) coordinates are
    eigenvalues of blocks of a *traceless* matrix, so moving by a U(3)
    lattice vector also moves the tail by minus the mean of that vector.
    Basis ``(1,0,-1/3,-1/3,-1/3)``, ``(1/2, sqrt3/2, 1/3, 1/3, 1/3)``, e3, e4, e5.

    Integral points of the polytope in this lattice count weight vectors:
    14 at ``lam = sqrt3`` (the adjoint representation of G2).
    """
    t = F(Fraction(1, 3))
    b = [list(v) for v in weight_lattice_L().basis]
    b[0][2:] = [-t, -t, -t]
    b[1][2:] = [t, t, t]
    return Lattice(tuple(tuple(r) for r in b))


def su3_weight_lattice() -> Lattice:
    g2 = g2_root_system()
    return Lattice((g2["alpha2"], g2["alpha4"]))


# -- Gelfand-Zeitlin coordinates ------------------------------------------


class GZPoint(NamedTuple):
    x1: object
    x2: object
    x3: object
    x4: object
    x5: object


_EIG_TOL = 1e-10


def su3_coords_from_eigs(mu):
    """Planar chamber coordinates ``(x1, x2)`` of sorted traceless eigenvalues.

    Exact when given field elements; otherwise a float array whose last axis
    has length 3.
    """
    if isinstance(mu, (list, tuple)) and len(mu) == 3 and _is_exact(mu):
        m1, m2, m3 = mu
        if not (m1 <= m2 <= m3):
            raise FieldDomainError("eigenvalues must be sorted ascending")
        if m1 + m2 + m3 != 0:
            raise FieldDomainError("eigenvalues must sum to zero")
        return (Fraction(3, 2) * m2, F(0, HALF) * (m3 - m1))
    m = np.asarray(mu, dtype=float)
    if m.shape[-1] != 3:
        raise ValueError("need three eigenvalues")
    scale = np.maximum(np.max(np.abs(m), axis=-1), 1.0)
    if np.any(np.diff(m, axis=-1) < -_EIG_TOL * scale[..., None]):
        raise FieldDomainError("eigenvalues must be sorted ascending")
    if np.any(np.abs(np.sum(m, axis=-1)) > _EIG_TOL * scale):
        raise FieldDomainError("eigenvalues must sum to zero")
    x1 = 1.5 * m[..., 1]
    x2 = 0.5 * SQRT3_F * (m[..., 2] - m[..., 0])
    return np.stack([x1, x2], axis=-1)


def eigs_from_su3_coords(x1, x2):
    """Inverse of :func:`su3_coords_from_eigs`."""
    if _is_exact((x1, x2)):
        third = Fraction(1, 3)
        r = x2 / SQRT3
        return (-third * x1 - r, 2 * third * x1, -third * x1 + r)
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    r = x2 / SQRT3_F
    return np.stack([-x1 / 3 - r, 2 * x1 / 3, -x1 / 3 + r], axis=-1)


def _exact_sym2_eigs(a, b, d):
    """Ascending eigenvalues of [[a, b], [b, d]] inside Q(sqrt3)."""
    if not b:
        return (a, d) if a <= d else (d, a)
    tr = a + d
    disc = (a - d) * (a - d) + 4 * b * b
    r = disc.sqrt()
    if r is None:
        raise FieldDomainError("eigenvalues leave Q(sqrt3)")
    return ((tr - r) * HALF, (tr + r) * HALF)


def thimm_gz(xi):
    """Gelfand-Zeitlin coordinates of a traceless Hermitian 3x3 matrix.

    Projections happen on ``xi`` itself and the sweep (eigenvalue sort) is
    applied last at each level: ``(x1, x2)`` from the full spectrum,
    ``(x3, x4)`` from the upper-left 2x2 block, ``x5 = xi[0, 0]``.

    Float input may be a stack of shape ``(..., 3, 3)``; the result then has
    shape ``(..., 5)``. Exact input (nested lists of ``FieldElement``) must be
    real symmetric and block diagonal with ``xi[0][2] = xi[1][2] = 0``.
    """
    if isinstance(xi, (list, tuple)) and all(_is_exact(row) for row in xi):
        return _thimm_gz_exact(xi)
    X = np.asarray(xi, dtype=complex)
    if X.shape[-2:] != (3, 3):
        raise ValueError("thimm_gz expects 3x3 matrices")
    tr = np.trace(X, axis1=-2, axis2=-1)
    nrm = np.sqrt(np.sum(np.abs(X) ** 2, axis=(-2, -1)))
    if np.any(np.abs(tr) > 1e-12 * nrm + 1e-300):
        raise FieldDomainError("thimm_gz expects a traceless matrix")
    mu = hermitian_eigenvalues(X)
    # trace is zero to rounding; enforce it before converting
    mu = mu - np.mean(mu, axis=-1, keepdims=True)
    x12 = su3_coords_from_eigs(mu)
    x34 = hermitian_eigenvalues(X[..., :2, :2])
    x5 = X[..., 0, 0].real
    return np.concatenate([x12, x34, x5[..., None]], axis=-1)


def _thimm_gz_exact(xi) -> GZPoint:
    M = [[FieldElement.coerce(v) for v in row] for row in xi]
    if len(M) != 3 or any(len(r) != 3 for r in M):
        raise ValueError("thimm_gz expects 3x3 matrices")
    for i in range(3):
        for j in range(3):
            if M[i][j] != M[j][i]:
                raise FieldDomainError("exact thimm_gz needs a real symmetric matrix")
    if M[0][0] + M[1][1] + M[2][2] != 0:
        raise FieldDomainError("thimm_gz expects a traceless matrix")
    if M[0][2] or M[1][2]:
        raise FieldDomainError("exact thimm_gz needs xi[0][2] = xi[1][2] = 0")
    x3, x4 = _exact_sym2_eigs(M[0][0], M[0][1], M[1][1])
    mu = sorted([x3, x4, M[2][2]])
    x1, x2 = su3_coords_from_eigs(mu)
    return GZPoint(x1, x2, x3, x4, M[0][0])


def interlacing_slacks(p):
    """The six interlacing differences; all are >= 0 exactly on the GZ cone.

    Order: x3 - mu1, 2x1/3 - x3, x4 - 2x1/3, mu3 - x4, x5 - x3, x4 - x5.
    """
    if _is_exact(tuple(p)):
        x1, x2, x3, x4, x5 = p
        m1, m2, m3 = eigs_from_su3_coords(x1, x2)
        return (x3 - m1, m2 - x3, x4 - m2, m3 - x4, x5 - x3, x4 - x5)
    P = np.asarray(p, dtype=float)
    mu = eigs_from_su3_coords(P[..., 0], P[..., 1])
    x3, x4, x5 = P[..., 2], P[..., 3], P[..., 4]
    return np.stack(
        [
            x3 - mu[..., 0],
            mu[..., 1] - x3,
            x4 - mu[..., 1],
            mu[..., 2] - x4,
            x5 - x3,
            x4 - x5,
        ],
        axis=-1,
    )


def verify_interlacing(p, slack=0.0):
    """True iff ``p`` satisfies the six interlacing inequalities.

    Exact for field coordinates. For floats each inequality may be violated
    by at most ``slack`` (a scalar, or an array of shape (..., 1) giving one
    slack per point); stacked input returns a boolean array.
    """
    s = interlacing_slacks(p)
    if isinstance(s, tuple):
        return all(v.sign() >= 0 for v in s)
    return np.all(s >= -slack, axis=-1)


def in_su3_chamber(x1, x2, strict: bool = False, slack: float = 0.0):
    """Membership in the closed (or open) SU(3) positive chamber ``x2 >= sqrt3 |x1|``."""
    if _is_exact((x1, x2)):
        a = Fraction(3, 2) * x1 + F(0, HALF) * x2
        b = -Fraction(3, 2) * x1 + F(0, HALF) * x2
        if strict:
            return a.sign() > 0 and b.sign() > 0
        return a.sign() >= 0 and b.sign() >= 0
    a = 1.5 * np.asarray(x1) + 0.5 * SQRT3_F * np.asarray(x2)
    b = -1.5 * np.asarray(x1) + 0.5 * SQRT3_F * np.asarray(x2)
    if strict:
        return (a > slack) & (b > slack)
    return (a >= -slack) & (b >= -slack)


def kirwan_triangle(lam) -> tuple[tuple[FieldElement, FieldElement], ...]:
    """Vertices of the SU(3) Kirwan polytope of the orbit through (0, lam)."""
    lam = FieldElement.coerce(lam)
    if lam.sign() <= 0:
        raise FieldDomainError("lambda must be positive")
    w = lam / (2 * SQRT3)
    return ((ZERO, lam), (w, lam * HALF), (-w, lam * HALF))
