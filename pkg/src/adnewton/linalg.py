"""Sparse SPD linear algebra: CSR construction and Jacobi-preconditioned CG.

Matrices are `scipy.sparse.csr_matrix` in canonical form (sorted column
indices, duplicates summed); vectors are plain 1-D `numpy.ndarray`. The CG
solver is written out here rather than taken from scipy so that the stopping
criterion (true relative residual) and the failure modes are exactly the ones
the rest of the library relies on.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


class NotSPDError(ValueError):
    """The matrix cannot be symmetric positive definite."""


class LinearSolveError(RuntimeError):
    """CG failed to reach the requested tolerance within the iteration budget."""

    def __init__(self, message: str, relative_residual: float):
        super().__init__(message)
        self.relative_residual = relative_residual


def from_arrays(n: int, rows, cols, values) -> sp.csr_matrix:
    """Build an n-by-n CSR matrix from parallel COO index/value arrays.

    Duplicate (row, col) pairs are summed. This is the fast path used by the
    finite-element assembly; `from_triplets` is the tuple-based front end.
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    values = np.asarray(values, dtype=np.float64)
    if rows.shape != cols.shape or rows.shape != values.shape:
        raise ValueError("rows, cols and values must have matching lengths")
    if rows.size and (rows.min() < 0 or rows.max() >= n or cols.min() < 0 or cols.max() >= n):
        raise ValueError(f"triplet index out of range for a {n}x{n} matrix")
    mat = sp.coo_matrix((values, (rows, cols)), shape=(n, n)).tocsr()
    mat.sum_duplicates()
    mat.sort_indices()
    return mat


def from_triplets(n: int, triplets) -> sp.csr_matrix:
    """Build an n-by-n CSR matrix from an iterable of (row, col, value) triples."""
    triplets = list(triplets)
    if not triplets:
        return from_arrays(n, [], [], [])
    rows, cols, values = zip(*triplets)
    return from_arrays(n, rows, cols, values)


def to_triplets(mat: sp.csr_matrix) -> list[tuple[int, int, float]]:
    """Return the explicitly stored entries of `mat` as (row, col, value) triples."""
    coo = mat.tocoo()
    return [(int(r), int(c), float(v)) for r, c, v in zip(coo.row, coo.col, coo.data)]


def matvec(mat: sp.csr_matrix, x: np.ndarray) -> np.ndarray:
    """Matrix-vector product with an explicit dimension check."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size != mat.shape[1]:
        raise ValueError(f"vector of length {x.size} incompatible with shape {mat.shape}")
    return mat @ x


def cg_solve(mat: sp.csr_matrix, b: np.ndarray, rel_tol: float = 1e-12,
             max_iter: int | None = None) -> np.ndarray:
    """Solve mat @ x = b for SPD `mat` by Jacobi-preconditioned CG.

    Returns x with ||mat @ x - b||_2 <= rel_tol * ||b||_2; the true residual is
    re-evaluated before returning, so the bound holds for the returned iterate
    and not merely for the recursively updated one.

    Raises NotSPDError if a non-positive diagonal entry or curvature shows the
    matrix is not SPD, and LinearSolveError (carrying the relative residual
    that was reached) if the budget runs out.
    """
    if rel_tol <= 0.0:
        raise ValueError("rel_tol must be positive")
    b = np.asarray(b, dtype=np.float64)
    n = mat.shape[0]
    if mat.shape[0] != mat.shape[1]:
        raise ValueError("matrix must be square")
    if b.ndim != 1 or b.size != n:
        raise ValueError(f"right-hand side of length {b.size} incompatible with shape {mat.shape}")
    if max_iter is None:
        max_iter = 10 * n + 100

    diag = mat.diagonal()
    if n and diag.min() <= 0.0:
        raise NotSPDError("non-positive diagonal entry; matrix is not SPD")

    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return np.zeros(n)
    tol = rel_tol * b_norm

    x = np.zeros(n)
    r = b.copy()
    z = r / diag
    p = z.copy()
    rz = float(r @ z)

    for _ in range(max_iter):
        Ap = mat @ p
        pAp = float(p @ Ap)
        if not pAp > 0.0:
            raise NotSPDError("non-positive curvature direction; matrix is not SPD")
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        if np.linalg.norm(r) <= tol:
            # Recursive residual drifts from the true one near round-off; check
            # the real thing and keep iterating from it if the bound fails.
            r = b - mat @ x
            if np.linalg.norm(r) <= tol:
                return x
            z = r / diag
            p = z.copy()
            rz = float(r @ z)
            continue
        z = r / diag
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new

    achieved = float(np.linalg.norm(b - mat @ x)) / b_norm
    raise LinearSolveError(
        f"CG did not reach rel_tol={rel_tol:g} in {max_iter} iterations "
        f"(achieved {achieved:.3e})", achieved)
