from fractions import Fraction

import numpy as np
import pytest

from g2gz.exact_field import SQRT3, FieldElement
from g2gz.g2_model import (
    PHI_TERMS,
    ThreeForm,
    bracket_closure_residual,
    gz_value,
    jacobi_residual,
    moment_map_su3,
    orbit_dimension,
    orbit_seed,
    root_alignment_error,
    sample_orbit,
    sample_orbits,
    samples_csv_text,
)
from g2gz.lie_data import g2_root_system, verify_interlacing
from g2gz.polytope import gz_halfspaces

LAMS = [1.0, float(SQRT3), 3.5]


def test_stabilizer_dimension_exact():
    phi = ThreeForm.associative()
    assert phi.stabilizer_dimension() == 14
    assert len(PHI_TERMS) == 7


def test_dimensions(model):
    assert model.dims == {"g2": 14, "su3": 8, "cartan": 2}
    assert model.g2_basis.shape == (14, 7, 7)


def test_basis_orthonormal(model):
    G = model.form(model.g2_basis[:, None], model.g2_basis[None, :])
    assert np.allclose(G, np.eye(14), atol=1e-12)


def test_basis_preserves_three_form(model):
    phi = model.three_form
    for X in model.g2_basis:
        assert np.max(np.abs(phi.act(X))) < 1e-12


def test_algebra_residuals(model):
    assert bracket_closure_residual(model) <= 1e-9
    assert jacobi_residual(model) <= 1e-8


def test_root_alignment(model):
    assert root_alignment_error(model) < 1e-8
    norms = np.sort(np.sum(model.roots**2, axis=1))
    assert np.allclose(norms, [1] * 6 + [3] * 6)
    assert np.allclose(model.coord_map.T @ model.coord_map, np.eye(2), atol=1e-12)


def test_su3_commutes_with_complex_structure(model):
    for X in model.su3_basis:
        assert np.allclose(X @ model.J, model.J @ X, atol=1e-10)
    assert np.max(np.abs(model.su3_basis[:, :, 0])) < 1e-12


@pytest.mark.parametrize("lam", LAMS)
def test_orbit_seed(model, lam):
    xi = orbit_seed(model, lam)
    assert np.allclose(model.cartan_coords(xi.xi), [0, lam], atol=1e-10)
    assert orbit_dimension(model, xi.xi) == 10
    # casimir of (0, lam) with B normalised on the diagram
    assert np.isclose(xi.casimir, lam**2)


@pytest.mark.parametrize("lam", LAMS)
def test_moment_map_at_seed(model, lam):
    M = moment_map_su3(model, orbit_seed(model, lam))
    c = lam / np.sqrt(3)
    assert np.allclose(M, np.diag([-c, 0, c]), atol=1e-10)
    assert np.allclose(gz_value(model, orbit_seed(model, lam)), [0, lam, -c, 0, -c], atol=1e-10)


def test_moment_map_basics(model):
    for X in model.complement_basis:
        assert np.allclose(moment_map_su3(model, X), 0, atol=1e-12)
    rng = np.random.default_rng(3)
    X = model.from_coefficients(rng.normal(size=14))
    M = moment_map_su3(model, X)
    assert abs(np.trace(M)) < 1e-12
    assert np.allclose(M, M.conj().T)


def test_moment_map_equivariance(model):
    # for k in SU(3) the image is conjugated: spectrum and Frobenius norm are kept
    rng = np.random.default_rng(4)
    X = model.from_coefficients(rng.normal(size=14))
    u = model.from_coefficients(np.r_[rng.normal(size=8), np.zeros(6)])
    w, V = np.linalg.eigh(1j * u)
    k = (V @ np.diag(np.exp(-1j * w)) @ V.conj().T).real
    M0 = moment_map_su3(model, X)
    M1 = moment_map_su3(model, k @ X @ k.T)
    assert np.allclose(np.linalg.eigvalsh(M0), np.linalg.eigvalsh(M1), atol=1e-10)
    # and the complement projection is untouched in norm
    assert np.isclose(model.form(X, X), model.form(k @ X @ k.T, k @ X @ k.T))


def test_zero_steps_is_identity(model):
    xi = orbit_seed(model, 2.0)
    pts = sample_orbits(model, xi, 5, 3, 0)
    assert np.allclose(pts.xi, xi.xi)


def test_sampling_deterministic_and_splittable(model):
    xi = orbit_seed(model, 1.0)
    a = sample_orbits(model, xi, 11, 6, 4)
    b = sample_orbits(model, xi, 11, 6, 4)
    assert np.array_equal(a.xi, b.xi)
    c = sample_orbits(model, xi, 11, 2, 4, first_stream=4)
    assert np.array_equal(a.xi[4:], c.xi)
    one = sample_orbit(model, xi, 11, 4, stream=3)
    assert np.array_equal(one.xi, a.xi[3])
    d = sample_orbits(model, xi, 12, 6, 4)
    assert not np.allclose(a.xi, d.xi)


@pytest.mark.parametrize("exact", [FieldElement(1), SQRT3, FieldElement(Fraction(7, 2))])
def test_samples_inside_polytope(model, exact):
    lam = float(exact)
    xi = orbit_seed(model, lam)
    pts = sample_orbits(model, xi, 2024, 2000, 15)
    assert np.max(np.abs(pts.casimir / xi.casimir - 1)) < 1e-8
    gz = gz_value(model, pts)
    P = gz_halfspaces(exact)
    slack = np.stack([h.float_slack(gz) for h in P.halfspaces], axis=-1)
    assert slack.min() >= -1e-7 * lam
    assert np.all(verify_interlacing(gz, 1e-9))
    # chamber: x2 >= sqrt3 |x1|
    assert np.all(gz[:, 1] - np.sqrt(3) * np.abs(gz[:, 0]) >= -1e-9)


def test_convexity_evidence(model):
    lam = 1.0
    xi = orbit_seed(model, lam)
    gz = gz_value(model, sample_orbits(model, xi, 99, 500, 15))
    P = gz_halfspaces(1)
    rng = np.random.default_rng(0)
    i, j = rng.integers(0, len(gz), size=(2, 2000))
    mid = (gz[i] + gz[j]) / 2
    for h in P.halfspaces:
        n = np.array([float(c) for c in h.normal])
        assert np.max(mid @ n) <= np.max(gz @ n) + 1e-6 * lam


def test_samples_cover_polytope(model):
    # coverage, not distribution: the walk reaches far from the seed
    xi = orbit_seed(model, 1.0)
    gz = gz_value(model, sample_orbits(model, xi, 1, 3000, 25))
    assert gz[:, 1].min() < 0.6 and gz[:, 0].max() > 0.2 and gz[:, 0].min() < -0.2


def test_csv(model):
    xi = orbit_seed(model, 1.0)
    pts = sample_orbits(model, xi, 1, 3, 2)
    text = samples_csv_text(gz_value(model, pts), pts.casimir)
    lines = text.splitlines()
    assert lines[0] == "x1,x2,x3,x4,x5,casimir"
    assert len(lines) == 4
    row = [float(v) for v in lines[1].split(",")]
    assert np.allclose(row[:5], gz_value(model, pts)[0], rtol=0, atol=0)


def test_seed_rejects_nonpositive(model):
    with pytest.raises(ValueError):
        orbit_seed(model, 0.0)
