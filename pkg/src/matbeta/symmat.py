"""Real symmetric matrix kernel.

Matrices are plain ``numpy`` arrays; :func:`symmetrize` is the single entry
point that validates and averages with the transpose. All functions here are
pure.
"""
from typing import NamedTuple

import numpy as np

from .errors import InvalidInput, NotPD, NotPSD, ShapeError, SingularMatrix

PSD_CLAMP = 1e-10
PD_TOL = 1e-12


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns, orthogonal


def symmetrize(A, check_tol=None):
    """Return ``(A + A.T) / 2`` as a float array.

    With ``check_tol`` set, raise :class:`InvalidInput` when ``A`` is further
    than ``check_tol * max(1, |A|_max)`` from symmetric instead of silently
    averaging.
    """
    A = np.array(A, dtype=float)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ShapeError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInput("matrix has non-finite entries")
    if check_tol is not None:
        asym = np.max(np.abs(A - A.T))
        if asym > check_tol * max(1.0, np.max(np.abs(A))):
            raise InvalidInput(f"matrix is not symmetric (max |A - A'| = {asym:.3g})")
    return (A + A.T) / 2


def maxabs(A):
    return float(np.max(np.abs(A))) if np.size(A) else 0.0


def eigvalsh(A):
    """Eigen-decomposition with eigenvalues sorted descending.

    Ties keep LAPACK's order reversed consistently (stable sort on the negated
    values), so repeated calls return identical output.
    """
    A = symmetrize(A)
    w, Q = np.linalg.eigh(A)
    order = np.argsort(-w, kind="stable")
    return EigenDecomposition(w[order], Q[:, order])


def eigenvalues(A):
    return eigvalsh(A).eigenvalues


def spectral_radius(A):
    return float(np.max(np.abs(eigenvalues(A))))


def _apply(A, fn):
    w, Q = eigvalsh(A)
    B = (Q * fn(w)) @ Q.T
    return (B + B.T) / 2


def sqrt_psd(A):
    """Unique PSD square root. Slightly negative eigenvalues are clamped to 0."""
    A = symmetrize(A)
    w = eigenvalues(A)
    if w[-1] < -PSD_CLAMP * max(1.0, maxabs(A)):
        raise NotPSD(f"matrix is not positive semi-definite (min eigenvalue {w[-1]:.3g})")
    return _apply(A, lambda v: np.sqrt(np.clip(v, 0.0, None)))


def _check_pd(A, err=SingularMatrix):
    w = eigenvalues(A)
    if w[-1] <= PD_TOL * max(maxabs(A), np.finfo(float).tiny):
        raise err(f"matrix is not positive definite (min eigenvalue {w[-1]:.3g})")
    return w


def inv_sqrt_pd(A):
    A = symmetrize(A)
    _check_pd(A, NotPD)
    return _apply(A, lambda v: 1.0 / np.sqrt(v))


def inv(A):
    A = symmetrize(A)
    _check_pd(A)
    return _apply(A, lambda v: 1.0 / v)


def det(A):
    return float(np.prod(eigenvalues(A)))


def logdet(A):
    A = symmetrize(A)
    w = _check_pd(A)
    return float(np.sum(np.log(w)))


def pinv(A, rcond=1e-10):
    """Moore-Penrose inverse of a general (n, p) matrix."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    return np.linalg.pinv(A, rcond=rcond)


def rank(A, rtol=1e-10):
    """Number of singular values above ``rtol * sigma_max``."""
    s = np.linalg.svd(np.atleast_2d(np.asarray(A, dtype=float)), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def loewner_gt(A, B, tol=0.0):
    """True iff ``A - B`` is positive definite beyond ``tol``."""
    A = symmetrize(A)
    B = symmetrize(B)
    if A.shape != B.shape:
        raise ShapeError(f"dimension mismatch {A.shape} vs {B.shape}")
    return bool(eigenvalues(A - B)[-1] > tol)
