"""Generalized symmetric-definite eigensolver shared by the 1D and 2D stacks.

Shift-invert subspace iteration with Rayleigh-Ritz extraction.  Dense
(banded) pencils are factorized with a banded Cholesky, sparse pencils with
a sparse LU; both problem families here are small enough (<= 1e4 DOFs) that
no Krylov machinery is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import SolverError

__all__ = ["SymmetricPencil", "EigenPairs", "solve_smallest"]


@dataclass
class SymmetricPencil:
    """Stiffness/mass pair K x = lambda M x with symmetric K and SPD M."""

    K: object
    M: object

    def __post_init__(self):
        if self.K.shape != self.M.shape or self.K.shape[0] != self.K.shape[1]:
            raise SolverError("pencil matrices must be square and of equal size")

    @property
    def n(self) -> int:
        return self.K.shape[0]

    @property
    def sparse(self) -> bool:
        return sp.issparse(self.K)


@dataclass
class EigenPairs:
    values: np.ndarray      # ascending
    vectors: np.ndarray     # columns, M-orthonormal
    residuals: np.ndarray   # ||K x - lambda M x|| / ||K x||
    iterations: int


def _to_banded_lower(a: np.ndarray, bw: int) -> np.ndarray:
    n = a.shape[0]
    ab = np.zeros((bw + 1, n))
    for d in range(bw + 1):
        ab[d, : n - d] = np.diagonal(a, -d)
    return ab


def _bandwidth(a: np.ndarray) -> int:
    nz = np.nonzero(a)
    if len(nz[0]) == 0:
        return 0
    return int(np.max(np.abs(nz[0] - nz[1])))


class _BandedFactor:
    def __init__(self, a: np.ndarray):
        self.bw = max(_bandwidth(a), 1)
        self.cb = sla.cholesky_banded(_to_banded_lower(a, self.bw), lower=True)

    def solve(self, b: np.ndarray) -> np.ndarray:
        return sla.cho_solve_banded((self.cb, True), b)


class _SparseFactor:
    def __init__(self, a):
        self.lu = spla.splu(sp.csc_matrix(a))

    def solve(self, b: np.ndarray) -> np.ndarray:
        return self.lu.solve(b)


def _factorize(pencil: SymmetricPencil, shift: float):
    """Factor K - shift*M, retrying once with a perturbed shift on breakdown."""
    shifts = [shift]
    if shift != 0.0:
        shifts.append(shift * (1.0 - 1e-3))
    else:
        shifts.append(-1e-8)
    last_err: Exception | None = None
    for s in shifts:
        a = pencil.K - s * pencil.M if s != 0.0 else pencil.K
        try:
            if pencil.sparse:
                return _SparseFactor(a), s
            try:
                return _BandedFactor(a), s
            except np.linalg.LinAlgError:
                # banded Cholesky needs positive definiteness; an interior
                # shift makes the matrix indefinite, fall back to sparse LU
                return _SparseFactor(sp.csc_matrix(a)), s
        except Exception as err:  # factorization breakdown
            last_err = err
    raise SolverError(f"factorization failed at shifts {shifts}: {last_err}")


def solve_smallest(
    pencil: SymmetricPencil,
    m: int,
    shift: float = 0.0,
    tol: float = 1e-10,
    seed: int = 0,
    max_iter: int = 200,
    x0: np.ndarray | None = None,
) -> EigenPairs:
    """m smallest eigenpairs of K x = lambda M x.

    Subspace iteration on (K - shift M)^{-1} M with M-orthonormal Ritz
    vectors.  Deterministic for a fixed seed; an optional x0 warm-starts the
    subspace (handy in parameter scans).
    """
    n = pencil.n
    if not 1 <= m <= n:
        raise SolverError(f"cannot extract {m} pairs from an n = {n} pencil")
    factor, _ = _factorize(pencil, shift)
    K, M = pencil.K, pencil.M
    if pencil.sparse:
        k_norm = float(abs(K).sum(axis=0).max())
        m_norm = float(abs(M).sum(axis=0).max())
    else:
        k_norm = float(np.abs(K).sum(axis=0).max())
        m_norm = float(np.abs(M).sum(axis=0).max())

    p = min(n, max(2 * m, m + 8))
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    if x0 is not None:
        x0 = np.atleast_2d(np.asarray(x0, dtype=float))
        if x0.shape[0] != n:
            x0 = x0.T
        q = min(p, x0.shape[1])
        X[:, :q] = x0[:, :q]
    X, _ = np.linalg.qr(X)

    values = np.zeros(m)
    residuals = np.full(m, np.inf)
    it = 0
    for it in range(1, max_iter + 1):
        Y = factor.solve(M @ X)
        Y, _ = np.linalg.qr(Y)
        Kr = Y.T @ (K @ Y)
        Mr = Y.T @ (M @ Y)
        Kr = 0.5 * (Kr + Kr.T)
        Mr = 0.5 * (Mr + Mr.T)
        try:
            w, Q = sla.eigh(Kr, Mr)
        except np.linalg.LinAlgError as err:
            raise SolverError(f"Rayleigh-Ritz breakdown: {err}") from None
        X = Y @ Q
        values = w[:m]
        KX = K @ X[:, :m]
        MX = M @ X[:, :m]
        num = np.linalg.norm(KX - MX * values[np.newaxis, :], axis=0)
        # backward error of the pencil; a plain ||Kx|| denominator has an
        # eps*||K|| floor that fourth-order stiffness scaling cannot beat
        den = (k_norm + np.abs(values) * m_norm) * np.linalg.norm(X[:, :m], axis=0)
        residuals = num / np.maximum(den, 1e-300)
        if np.all(residuals <= tol):
            break
    else:
        raise SolverError(
            f"subspace iteration did not reach tol {tol:g} in {max_iter} sweeps "
            f"(residuals {residuals})"
        )

    vectors = X[:, :m].copy()
    # deterministic sign: largest-magnitude entry positive
    for j in range(m):
        i_max = int(np.argmax(np.abs(vectors[:, j])))
        if vectors[i_max, j] < 0:
            vectors[:, j] = -vectors[:, j]
    return EigenPairs(values=values.copy(), vectors=vectors, residuals=residuals, iterations=it)
