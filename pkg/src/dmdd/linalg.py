"""Dense linear-algebra kernels used by the DMD fit.

Matrices are plain 2-D numpy arrays in numpy's default row-major layout.
The decompositions delegate to LAPACK through :mod:`numpy.linalg`; this
module pins down truncation, ordering and error behaviour on top.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroMatrixError

DEFAULT_RANK_TOL = 1e-10


@dataclass(frozen=True)
class SvdResult:
    """Reduced SVD ``X = U @ diag(singular_values) @ V.conj().T``."""

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    @property
    def rank(self) -> int:
        return self.singular_values.shape[0]


@dataclass(frozen=True)
class EigResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_matrix(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim == 1:
        M = M[:, None]
    if M.ndim != 2 or 0 in M.shape:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {M.shape}")
    if not np.issubdtype(M.dtype, np.inexact):
        M = M.astype(float)
    return M


def reduced_svd(X, rank_tol: float = DEFAULT_RANK_TOL) -> SvdResult:
    """Reduced SVD keeping singular values strictly above ``rank_tol * s[0]``.

    Parameters
    ----------
    X : array_like, shape (rows, cols)
        Real or complex matrix. A 1-D input is treated as a column.
    rank_tol : float
        Relative truncation threshold in ``[0, 1)``.

    Returns
    -------
    SvdResult
        ``U`` is ``rows x r`` and ``V`` is ``cols x r`` with orthonormal
        columns, singular values are sorted descending.
    """
    if not 0 <= rank_tol < 1:
        raise ValueError(f"rank_tol must lie in [0, 1), got {rank_tol}")
    X = _as_matrix(X)
    U, s, Vh = np.linalg.svd(X, full_matrices=False)
    if s[0] == 0:
        raise ZeroMatrixError("cannot take a reduced SVD of an all-zero matrix")
    r = int(np.count_nonzero(s > rank_tol * s[0]))
    return SvdResult(U[:, :r], s[:r], Vh[:r].conj().T)


def eig_dense(S) -> EigResult:
    """Eigenpairs of a square matrix, ordered by descending modulus.

    Ties in modulus are broken by descending real part, then descending
    imaginary part, so conjugate pairs come out as ``(a + bi, a - bi)``
    with ``b > 0``. Eigenvectors have unit 2-norm.
    """
    S = _as_matrix(S)
    if S.shape[0] != S.shape[1]:
        raise DimensionMismatch(f"eigendecomposition needs a square matrix, got {S.shape}")
    w, W = np.linalg.eig(S)
    w = w.astype(complex)
    # lexsort uses the last key as the primary one
    order = np.lexsort((-w.imag, -w.real, -np.abs(w)))
    W = W[:, order].astype(complex)
    W /= np.linalg.norm(W, axis=0)
    return EigResult(w[order], W)


def pinv(M, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse through :func:`reduced_svd`.

    >>> pinv(np.array([[3.0], [4.0]])).round(12)
    array([[0.12, 0.16]])
    """
    svd = reduced_svd(M, tol)
    return (svd.V / svd.singular_values) @ svd.U.conj().T
