"""Exact elimination over Q(sqrt3) and a small Hermitian eigensolver.

The exact routines accept anything with field semantics (``FieldElement``,
``Fraction``, ``int``); they never round. Matrices are plain nested sequences
indexed ``[row][col]``.

The eigensolver is a cyclic Jacobi iteration on the real symmetric embedding
``[[Re M, -Im M], [Im M, Re M]]`` of a complex Hermitian matrix, vectorised
over any leading batch dimensions.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

__all__ = [
    "Singular",
    "SINGULAR",
    "NonHermitianError",
    "exact_solve",
    "exact_rank",
    "exact_det",
    "exact_nullspace",
    "mat_vec",
    "as_hermitian",
    "hermitian_eigenvalues",
]


class Singular:
    """Sentinel returned by :func:`exact_solve` for a singular system."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "SINGULAR"

    def __bool__(self) -> bool:
        return False


SINGULAR = Singular()


class NonHermitianError(ValueError):
    pass


def _is_zero(x) -> bool:
    return not x


def mat_vec(A: Sequence[Sequence], x: Sequence) -> list:
    out = []
    for row in A:
        acc = 0
        for aij, xj in zip(row, x):
            acc = aij * xj + acc
        out.append(acc)
    return out


def _bareiss(M: list[list], ncols: int) -> tuple[list[list], list[int], int]:
    """Fraction-free forward elimination in place.

    Returns the echelon matrix, pivot columns, and the permutation sign.
    Only the first ``ncols`` columns are used for pivoting.
    """
    rows = len(M)
    prev = 1
    pivots: list[int] = []
    r = 0
    swaps = 0
    for c in range(ncols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if not _is_zero(M[i][c])), None)
        if p is None:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
            swaps += 1
        piv = M[r][c]
        for i in range(r + 1, rows):
            mic = M[i][c]
            Mi = M[i]
            Mr = M[r]
            for j in range(c + 1, len(Mi)):
                Mi[j] = (piv * Mi[j] - mic * Mr[j]) / prev
            Mi[c] = 0 * piv
        # rows below a skipped column keep the old scale; Bareiss divisibility
        # holds in a field regardless
        prev = piv
        pivots.append(c)
        r += 1
    return M, pivots, -1 if swaps % 2 else 1


def exact_rank(A: Sequence[Sequence]) -> int:
    """Rank over the field by fraction-free elimination."""
    if not A or not len(A[0]):
        return 0
    M = [list(row) for row in A]
    _, pivots, _ = _bareiss(M, len(M[0]))
    return len(pivots)


def exact_det(A: Sequence[Sequence]):
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    _, pivots, sgn = _bareiss(M, n)
    if len(pivots) < n:
        return 0 * M[0][0]
    # in Bareiss elimination the last pivot is the determinant
    return sgn * M[n - 1][n - 1]


def exact_solve(A: Sequence[Sequence], rhs: Sequence):
    """Solve ``A x = rhs`` exactly; return :data:`SINGULAR` if ``A`` is singular.

    The solution is checked by multiplying back before it is returned.
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("exact_solve needs a square matrix")
    if len(rhs) != n:
        raise ValueError("right-hand side has the wrong length")
    M = [list(A[i]) + [rhs[i]] for i in range(n)]
    _, pivots, _ = _bareiss(M, n)
    if len(pivots) < n:
        return SINGULAR
    x = [None] * n
    for i in range(n - 1, -1, -1):
        acc = M[i][n]
        for j in range(i + 1, n):
            acc = acc - M[i][j] * x[j]
        x[i] = acc / M[i][i]
    back = mat_vec(A, x)
    if any(bi != ri for bi, ri in zip(back, rhs)):
        raise ArithmeticError("exact_solve back-substitution check failed")
    return x


def exact_nullspace(A: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of ``{x : A x = 0}`` from the reduced row echelon form."""
    if ncols is None:
        ncols = len(A[0])
    M = [list(row) for row in A]
    rows = len(M)
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, rows) if not _is_zero(M[i][c])), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [v / piv for v in M[r]]
        for i in range(rows):
            if i != r and not _is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [vi - f * vr for vi, vr in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * ncols
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fcol]
        basis.append(v)
    return basis


# -- Hermitian eigenvalues ------------------------------------------------


def as_hermitian(M, tol: float = 1e-14) -> np.ndarray:
    """Validate and symmetrize a (batch of) complex Hermitian matrices."""
    M = np.asarray(M, dtype=complex)
    if M.shape[-1] != M.shape[-2]:
        raise NonHermitianError("matrix is not square")
    MH = np.conj(np.swapaxes(M, -1, -2))
    scale = np.max(np.abs(M), axis=(-2, -1), initial=0.0)
    err = np.max(np.abs(M - MH), axis=(-2, -1), initial=0.0)
    if np.any(err > tol * np.maximum(scale, 1e-300)):
        raise NonHermitianError(
            f"matrix is not Hermitian (asymmetry {float(np.max(err)):.3g})"
        )
    return 0.5 * (M + MH)


def _jacobi_symmetric(S: np.ndarray, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a batch of real symmetric matrices, unsorted."""
    A = np.array(S, dtype=float, copy=True)
    n = A.shape[-1]
    if n == 1:
        return A[..., 0, 0].copy()
    total = np.sum(A * A, axis=(-2, -1))
    iu = np.triu_indices(n, 1)
    with np.errstate(over="ignore", divide="ignore"):
        _jacobi_sweeps(A, total, iu, n, max_sweeps)
    return np.diagonal(A, axis1=-2, axis2=-1).copy()


def _jacobi_sweeps(A, total, iu, n, max_sweeps):
    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        off = np.sum(A[..., iu[0], iu[1]] ** 2, axis=-1)
        # roundoff floor: eigenvalues are then off by at most n*eps*|A| (Weyl)
        if np.all(off <= (n * eps) ** 2 * total):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[..., p, q]
                app = A[..., p, p]
                aqq = A[..., q, q]
                nz = apq != 0.0
                if not np.any(nz):
                    continue
                safe = np.where(nz, apq, 1.0)
                theta = (aqq - app) / (2.0 * safe)
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                t = np.where(theta == 0.0, 1.0, t)
                t = np.where(nz, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                c_ = c[..., None]
                s_ = s[..., None]
                colp = A[..., :, p].copy()
                colq = A[..., :, q].copy()
                A[..., :, p] = c_ * colp - s_ * colq
                A[..., :, q] = s_ * colp + c_ * colq
                rowp = A[..., p, :].copy()
                rowq = A[..., q, :].copy()
                A[..., p, :] = c_ * rowp - s_ * rowq
                A[..., q, :] = s_ * rowp + c_ * rowq


def hermitian_eigenvalues(M, *, validate: bool = True) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix or a stack of them.

    >>> hermitian_eigenvalues([[2, 1j], [-1j, 2]]).round(12)
    array([1., 3.])
    """
    H = as_hermitian(M) if validate else np.asarray(M, dtype=complex)
    n = H.shape[-1]
    re, im = H.real, H.imag
    top = np.concatenate([re, -im], axis=-1)
    bot = np.concatenate([im, re], axis=-1)
    S = np.concatenate([top, bot], axis=-2)
    ev = np.sort(_jacobi_symmetric(S), axis=-1)
    # every eigenvalue of the embedding appears twice
    ev = 0.5 * (ev[..., 0::2] + ev[..., 1::2])
    assert ev.shape[-1] == n
    return ev
