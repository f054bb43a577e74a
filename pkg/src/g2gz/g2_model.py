"""Numerical g2 inside so(7), its long-root su(3), and sampling of the orbit O_lam.

g2 is the stabiliser of the associative 3-form

    phi = e123 + e145 + e167 + e246 - e257 - e347 - e356

in so(7); su(3) is the subalgebra that also kills e1, acting complex-linearly
on the orthogonal complement of e1 with complex structure ``v -> e1 x v``.
The invariant form is ``B(X, Y) = -c tr(XY)`` with ``c`` chosen so that short
roots have squared length 1.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .lie_data import SQRT3_F, g2_root_system, thimm_gz
from .linalg import exact_nullspace

__all__ = [
    "PHI_TERMS",
    "ThreeForm",
    "LieAlgebraModel",
    "OrbitPoint",
    "ModelConstructionError",
    "build_model",
    "orbit_seed",
    "sample_orbit",
    "sample_orbits",
    "moment_map_su3",
    "gz_value",
    "orbit_dimension",
    "bracket_closure_residual",
    "jacobi_residual",
    "root_alignment_error",
    "write_samples_csv",
]

# 1-based index triples
PHI_TERMS = (
    ((1, 2, 3), 1),
    ((1, 4, 5), 1),
    ((1, 6, 7), 1),
    ((2, 4, 6), 1),
    ((2, 5, 7), -1),
    ((3, 4, 7), -1),
    ((3, 5, 6), -1),
)

DEFAULT_MODEL_SEED = 20240601


class ModelConstructionError(RuntimeError):
    pass


def _so7_basis() -> np.ndarray:
    mats = []
    for i, j in itertools.combinations(range(7), 2):
        E = np.zeros((7, 7))
        E[i, j], E[j, i] = 1.0, -1.0
        mats.append(E)
    return np.array(mats)


@dataclass(frozen=True)
class ThreeForm:
    coeffs: np.ndarray  # (7, 7, 7) integer, totally antisymmetric

    @classmethod
    def associative(cls) -> ThreeForm:
        phi = np.zeros((7, 7, 7), dtype=int)
        for (i, j, k), s in PHI_TERMS:
            for p in itertools.permutations(range(3)):
                idx = [(i, j, k)[q] - 1 for q in p]
                sgn = np.linalg.det(np.eye(3)[list(p)])
                phi[tuple(idx)] = int(round(sgn)) * s
        form = cls(phi)
        if form.stabilizer_dimension() != 14:
            raise ModelConstructionError("3-form stabiliser is not 14-dimensional")
        return form

    def act(self, X: np.ndarray) -> np.ndarray:
        """Infinitesimal action ``phi(X., ., .) + phi(., X., .) + phi(., ., X.)``."""
        p = self.coeffs
        return (
            np.einsum("da,dbc->abc", X, p)
            + np.einsum("db,adc->abc", X, p)
            + np.einsum("dc,abd->abc", X, p)
        )

    def _action_matrix(self) -> list[list[int]]:
        basis = _so7_basis()
        triples = list(itertools.combinations(range(7), 3))
        cols = []
        for X in basis:
            T = self.act(X)
            cols.append([int(round(T[t])) for t in triples])
        return [list(r) for r in zip(*cols)]

    def stabilizer(self, extra_rows: Iterable[list[int]] = ()) -> list[list[Fraction]]:
        """Exact rational kernel in the so(7) basis ``E_ij - E_ji`` (i < j)."""
        rows = [[Fraction(v) for v in r] for r in self._action_matrix()]
        rows += [[Fraction(v) for v in r] for r in extra_rows]
        return exact_nullspace(rows, 21)

    def stabilizer_dimension(self) -> int:
        return len(self.stabilizer())


@dataclass(frozen=True)
class LieAlgebraModel:
    """A concrete g2 with su(3), Cartan and coordinates matching the root diagram.

    ``g2_basis`` is B-orthonormal with the eight su(3) elements first.
    ``su3_hermitian[k]`` is the Hermitian 3x3 matrix attached to
    ``su3_basis[k]`` in the ordered complex basis ``complex_basis``.
    """

    g2_basis: np.ndarray  # (14, 7, 7)
    cartan_basis: np.ndarray  # (2, 7, 7)
    roots: np.ndarray  # (12, 2), diagram coordinates
    coord_map: np.ndarray  # (2, 2): Cartan coefficients -> diagram coordinates
    complex_basis: np.ndarray  # (3, 7)
    J: np.ndarray  # (7, 7)
    form_scale: float
    su3_hermitian: np.ndarray  # (8, 3, 3) complex
    hermitian_scale: float
    three_form: ThreeForm

    @property
    def su3_basis(self) -> np.ndarray:
        return self.g2_basis[:8]

    @property
    def complement_basis(self) -> np.ndarray:
        return self.g2_basis[8:]

    def form(self, X, Y):
        """Invariant form ``-c tr(XY)``, batched over leading axes."""
        return -self.form_scale * np.einsum("...ij,...ji->...", X, Y)

    def coefficients(self, X) -> np.ndarray:
        """Coordinates of ``X`` (..., 7, 7) in the orthonormal g2 basis."""
        return -self.form_scale * np.einsum("...ij,kji->...k", X, self.g2_basis)

    def from_coefficients(self, c) -> np.ndarray:
        return np.einsum("...k,kij->...ij", c, self.g2_basis)

    def cartan_coords(self, X) -> np.ndarray:
        """Diagram coordinates of the Cartan component of ``X``."""
        a = -self.form_scale * np.einsum("...ij,kji->...k", X, self.cartan_basis)
        return a @ self.coord_map.T

    def ad_matrix(self, X) -> np.ndarray:
        """Matrix of ``u -> [X, u]`` on g2 in the orthonormal basis."""
        br = np.einsum("ij,kjl->kil", X, self.g2_basis) - np.einsum(
            "kij,jl->kil", self.g2_basis, X
        )
        return self.coefficients(br).T

    @property
    def dims(self) -> dict[str, int]:
        return {"g2": len(self.g2_basis), "su3": 8, "cartan": len(self.cartan_basis)}


@dataclass(frozen=True)
class OrbitPoint:
    xi: np.ndarray  # (7, 7) or (N, 7, 7)
    casimir: np.ndarray | float


def _orthonormal_rows(V: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    U, s, Vt = np.linalg.svd(V, full_matrices=False)
    return Vt[s > tol * s.max()]


def _complex_matrix(X: np.ndarray, basis: np.ndarray, J: np.ndarray) -> np.ndarray:
    """3x3 complex matrix of a J-linear real operator in a J-unitary basis."""
    Xf = np.einsum("...ij,kj->...ik", X, basis)  # columns X f_k
    re = np.einsum("ji,...ik->...jk", basis, Xf)
    im = np.einsum("ji,...ik->...jk", basis @ J.T, Xf)
    return re + 1j * im


def _unitary_frame(J: np.ndarray) -> np.ndarray:
    vecs: list[np.ndarray] = []
    span = [np.eye(7)[0]]
    for cand in np.eye(7)[1:]:
        v = cand.copy()
        for w in span:
            v -= (w @ v) * w
        if np.linalg.norm(v) < 1e-8:
            continue
        v /= np.linalg.norm(v)
        Jv = J @ v
        vecs.append(v)
        span += [v, Jv / np.linalg.norm(Jv)]
        if len(vecs) == 3:
            break
    return np.array(vecs)


def build_model(seed: int = DEFAULT_MODEL_SEED, max_tries: int = 8) -> LieAlgebraModel:
    """Construct g2, su(3), a Cartan subalgebra and the diagram coordinates.

    Every dimension and alignment check raises :class:`ModelConstructionError`
    naming the invariant that failed.
    """
    phi = ThreeForm.associative()
    so7 = _so7_basis()
    g2_exact = phi.stabilizer()
    if len(g2_exact) != 14:
        raise ModelConstructionError(f"dim g2 = {len(g2_exact)}, expected 14")
    # X e1 = 0: first column of X vanishes; E_ij has entry (i,0) only for j = 0
    e1_rows = []
    for r in range(7):
        e1_rows.append([int(so7[k][r, 0]) for k in range(21)])
    su3_exact = phi.stabilizer(e1_rows)
    if len(su3_exact) != 8:
        raise ModelConstructionError(f"dim su3 = {len(su3_exact)}, expected 8")

    # in so(7) coefficient space -tr(XY) = 2 <x, y>
    G = np.array([[float(v) for v in row] for row in g2_exact])
    S = np.array([[float(v) for v in row] for row in su3_exact])
    S_on = _orthonormal_rows(S)
    G_perp = G - (G @ S_on.T) @ S_on
    C_on = _orthonormal_rows(G_perp)
    if len(S_on) != 8 or len(C_on) != 6:
        raise ModelConstructionError("su3 complement in g2 is not 6-dimensional")
    coeffs = np.vstack([S_on, C_on]) / np.sqrt(2.0)
    basis = np.einsum("ka,aij->kij", coeffs, so7)

    def coefficients(X, c=1.0):
        return -c * np.einsum("...ij,kji->...k", X, basis)

    def ad(X):
        br = np.einsum("ij,kjl->kil", X, basis) - np.einsum("kij,jl->kil", basis, X)
        return coefficients(br).T

    rng = np.random.default_rng(seed)
    cartan = None
    for _ in range(max_tries):
        Y = np.einsum("k,kij->ij", rng.normal(size=8), basis[:8])
        _, s, Vt = np.linalg.svd(ad(Y))
        null = Vt[s < 1e-9 * s.max()]
        if len(null) == 2:
            cartan = np.einsum("ak,kij->aij", null, basis)
            break
    if cartan is None:
        raise ModelConstructionError("no generic su3 element with 2-dim centraliser")
    if np.max(np.abs(coefficients(cartan)[:, 8:])) > 1e-9:
        raise ModelConstructionError("Cartan subalgebra is not inside su3")

    # roots: simultaneous eigenvectors of ad(h1), ad(h2)
    A1, A2 = ad(cartan[0]), ad(cartan[1])
    w, V = np.linalg.eig(A1 + np.pi * A2)
    roots = []
    for lam_, v in zip(w, V.T):
        if abs(lam_) < 1e-8:
            continue
        nv = np.vdot(v, v)
        roots.append(
            [(np.vdot(v, A1 @ v) / nv).imag, (np.vdot(v, A2 @ v) / nv).imag]
        )
    roots = np.array(roots)
    if roots.shape != (12, 2):
        raise ModelConstructionError(f"found {len(roots)} roots, expected 12")
    norms = np.sum(roots**2, axis=1)
    short = norms.min()
    if not np.allclose(np.sort(norms), np.repeat([short, 3 * short], 6), rtol=1e-8):
        raise ModelConstructionError("root lengths are not in ratio 1:3")

    c = short  # calibrates B so short roots have squared length 1
    basis = basis / np.sqrt(c)
    cartan = cartan / np.sqrt(c)
    roots = roots / np.sqrt(c)

    exact = np.array([[float(x) for x in r] for r in g2_root_system().roots])
    al1 = np.array([float(x) for x in g2_root_system()["alpha1"]])
    al2 = np.array([float(x) for x in g2_root_system()["alpha2"]])
    target = np.column_stack([al1, al2])
    O = None
    for a, b in itertools.product(roots, roots):
        if abs(a @ a - 3) > 1e-6 or abs(b @ b - 1) > 1e-6 or abs(a @ b + 1.5) > 1e-6:
            continue
        cand = target @ np.linalg.inv(np.column_stack([a, b]))
        if np.allclose(cand.T @ cand, np.eye(2), atol=1e-9):
            O = cand
            break
    if O is None:
        raise ModelConstructionError("could not align roots with the diagram")
    mapped = roots @ O.T
    d = np.min(np.linalg.norm(mapped[:, None, :] - exact[None, :, :], axis=2), axis=1)
    if np.max(d) > 1e-8:
        raise ModelConstructionError(f"root alignment residual {np.max(d):.2e}")

    phi_c = phi.coeffs.astype(float)
    J = phi_c[0].T  # (J v)_k = sum_j phi_{1jk} v_j
    e1perp = np.eye(7)[1:]
    if not np.allclose(J @ J @ e1perp.T, -e1perp.T, atol=1e-12):
        raise ModelConstructionError("e1 x . is not a complex structure on e1-perp")
    for X in basis[:8]:
        if not np.allclose(X @ J, J @ X, atol=1e-10):
            raise ModelConstructionError("su3 does not commute with the complex structure")

    frame = _unitary_frame(J)
    form_scale = c

    def cartan_elem(x):
        a = np.linalg.solve(O, np.asarray(x, dtype=float))
        return np.einsum("a,aij->ij", a, cartan)

    # weight basis of the Cartan, ordered by the eigenvalues at (0, 1)
    H0 = -1j * _complex_matrix(cartan_elem([0.0, 1.0]), frame, J)
    ev, U = np.linalg.eigh(0.5 * (H0 + H0.conj().T))
    fb = np.einsum("jk,ji->ki", U.real, frame) + np.einsum("jk,ji->ki", U.imag, frame @ J.T)

    def herm(X, fbasis):
        return -1j * _complex_matrix(X, fbasis, J)

    # fix the overall scale and sign of su(3)* -> Hermitian against the diagram
    w_ = np.array([[-1 / 3, -1 / SQRT3_F], [2 / 3, 0.0], [-1 / 3, 1 / SQRT3_F]])
    x_test = np.array([0.37, 1.91])
    e = np.linalg.eigvalsh(herm(cartan_elem(x_test), fb))
    t = np.sort(w_ @ x_test)
    scale = None
    for sgn in (1.0, -1.0):
        k = sgn * np.linalg.norm(t) / np.linalg.norm(e)
        if np.allclose(np.sort(k * e), t, atol=1e-9 * np.linalg.norm(t)):
            scale = k
            break
    if scale is None:
        raise ModelConstructionError("su(3) Hermitian identification is not consistent")
    if scale < 0:
        fb = fb[::-1]
    x_chk = np.array([-0.81, 0.44])
    e = np.linalg.eigvalsh(scale * herm(cartan_elem(x_chk), fb))
    if not np.allclose(e, np.sort(w_ @ x_chk), atol=1e-9):
        raise ModelConstructionError("Hermitian identification is not linear on the Cartan")

    su3_herm = np.array([scale * herm(X, fb) for X in basis[:8]])
    return LieAlgebraModel(
        g2_basis=basis,
        cartan_basis=cartan,
        roots=mapped,
        coord_map=O,
        complex_basis=fb,
        J=J,
        form_scale=form_scale,
        su3_hermitian=su3_herm,
        hermitian_scale=scale,
        three_form=phi,
    )


# -- orbit ----------------------------------------------------------------


def orbit_seed(model: LieAlgebraModel, lam: float) -> OrbitPoint:
    """The Cartan element at diagram coordinates ``(0, lam)``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    a = np.linalg.solve(model.coord_map, np.array([0.0, float(lam)]))
    xi = np.einsum("a,aij->ij", a, model.cartan_basis)
    return OrbitPoint(xi, float(model.form(xi, xi)))


def orbit_dimension(model: LieAlgebraModel, xi: np.ndarray, tol: float = 1e-6) -> int:
    """Rank of ``ad(xi)`` on g2; singular values below ``tol * max`` count as zero."""
    s = np.linalg.svd(model.ad_matrix(xi), compute_uv=False)
    return int(np.sum(s > tol * s.max()))


class _Exponentials:
    """``exp(t u_k)`` for the g2 basis via one eigendecomposition each."""

    def __init__(self, basis: np.ndarray):
        w, V = np.linalg.eigh(1j * basis)  # i u is Hermitian
        self.w = w
        self.V = V

    def __call__(self, k: np.ndarray, t: np.ndarray) -> np.ndarray:
        V = self.V[k]
        ph = np.exp(-1j * self.w[k] * t[:, None])
        E = np.einsum("nij,nj,nkj->nik", V, ph, V.conj())
        return E.real


def _walk_params(rng_seed: int, n_steps: int, stream: int):
    rng = np.random.default_rng([int(rng_seed), int(stream)])
    k = rng.integers(0, 14, size=n_steps)
    t = rng.uniform(-1.0, 1.0, size=n_steps)
    return k, t


def sample_orbits(
    model: LieAlgebraModel,
    seed_point: OrbitPoint,
    rng_seed: int,
    n_samples: int,
    n_steps: int,
    first_stream: int = 0,
) -> OrbitPoint:
    """Random-walk samples ``Ad(g) xi`` with ``g`` a product of basis exponentials.

    Sample ``i`` draws from its own stream ``(rng_seed, first_stream + i)``,
    so any split of the work gives identical samples.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    xi0 = np.asarray(seed_point.xi, dtype=float)
    Xi = np.broadcast_to(xi0, (n_samples, 7, 7)).copy()
    if n_steps == 0 or n_samples == 0:
        return OrbitPoint(Xi, model.form(Xi, Xi))
    params = [_walk_params(rng_seed, n_steps, first_stream + i) for i in range(n_samples)]
    K = np.array([p[0] for p in params])
    T = np.array([p[1] for p in params])
    expo = _Exponentials(model.g2_basis)
    for s in range(n_steps):
        E = expo(K[:, s], T[:, s])
        Xi = E @ Xi @ np.swapaxes(E, -1, -2)
    return OrbitPoint(Xi, model.form(Xi, Xi))


def sample_orbit(
    model: LieAlgebraModel, seed_point: OrbitPoint, rng_seed: int, n_steps: int, stream: int = 0
) -> OrbitPoint:
    pts = sample_orbits(model, seed_point, rng_seed, 1, n_steps, first_stream=stream)
    return OrbitPoint(pts.xi[0], float(pts.casimir[0]))


def moment_map_su3(model: LieAlgebraModel, xi) -> np.ndarray:
    """Traceless Hermitian image of the su(3) component of ``xi``."""
    X = xi.xi if isinstance(xi, OrbitPoint) else np.asarray(xi, dtype=float)
    c = model.coefficients(X)[..., :8]
    return np.einsum("...k,kab->...ab", c, model.su3_hermitian)


def gz_value(model: LieAlgebraModel, xi) -> np.ndarray:
    """Gelfand-Zeitlin coordinates ``(x1, ..., x5)`` of orbit points."""
    return thimm_gz(moment_map_su3(model, xi))


# -- sanity checks ---------------------------------------------------------


def bracket_closure_residual(model: LieAlgebraModel) -> float:
    B = model.g2_basis
    worst = 0.0
    for X, Y in itertools.combinations(B, 2):
        Z = X @ Y - Y @ X
        proj = model.from_coefficients(model.coefficients(Z))
        worst = max(worst, float(np.max(np.abs(Z - proj))))
    return worst


def jacobi_residual(model: LieAlgebraModel, n: int = 20, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)

    def br(a, b):
        return a @ b - b @ a

    worst = 0.0
    for _ in range(n):
        X, Y, Z = (model.from_coefficients(rng.normal(size=14)) for _ in range(3))
        r = br(X, br(Y, Z)) + br(Y, br(Z, X)) + br(Z, br(X, Y))
        worst = max(worst, float(np.max(np.abs(r))))
    return worst


def root_alignment_error(model: LieAlgebraModel) -> float:
    """Largest distance from a computed root to the nearest diagram root."""
    exact = np.array([[float(x) for x in r] for r in g2_root_system().roots])
    d = np.linalg.norm(model.roots[:, None, :] - exact[None, :, :], axis=2)
    # also require a bijection: every diagram root is hit
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def write_samples_csv(fh, gz: np.ndarray, casimir: np.ndarray) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x1", "x2", "x3", "x4", "x5", "casimir"])
    for row, cas in zip(gz, casimir):
        w.writerow([repr(float(v)) for v in row] + [repr(float(cas))])


def samples_csv_text(gz: np.ndarray, casimir: np.ndarray) -> str:
    buf = io.StringIO()
    write_samples_csv(buf, gz, casimir)
    return buf.getvalue()
