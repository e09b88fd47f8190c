"""Dense real-symmetric / complex-Hermitian linear algebra and Haar sampling.

Matrices are plain numpy arrays. A real dtype means the real symmetric
field (beta=1); a complex dtype means the Hermitian field (beta=2).
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

HERMITIAN_ATOL = 1e-12


class ValidationError(ValueError):
    """Input violates a structural invariant (shape, symmetry, trace...)."""


class NotPSDError(ValidationError):
    """Matrix has an eigenvalue below the allowed negative tolerance."""

    def __init__(self, eigenvalue: float, tol: float):
        self.eigenvalue = eigenvalue
        self.tol = tol
        super().__init__(
            f"not positive semidefinite: eigenvalue {eigenvalue:.3e} < -{tol:.3e}"
        )


class EigenDecomposition(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def field_of(m: np.ndarray) -> int:
    """Field tag of an array: 1 for real entries, 2 for complex."""
    return 2 if np.iscomplexobj(m) else 1


def check_hermitian(m, beta: int | None = None, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return ``m`` as an array after checking squareness and self-adjointness.

    With ``beta=1`` the imaginary parts must be exactly zero and a real
    array is returned; with ``beta=2`` the result is complex.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if beta not in (None, 1, 2):
        raise ValidationError(f"field tag must be 1 or 2, got {beta}")
    if beta == 1:
        if np.iscomplexobj(m):
            if np.any(m.imag != 0):
                raise ValidationError("beta=1 matrix has nonzero imaginary parts")
            m = m.real
        m = m.astype(float)
    elif beta == 2:
        m = m.astype(complex)
    elif not np.iscomplexobj(m):
        m = m.astype(float)
    dev = np.max(np.abs(m - m.conj().T))
    if dev > atol:
        raise ValidationError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return m


def hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def eigh(m) -> EigenDecomposition:
    """Eigendecomposition with eigenvalues in nondecreasing order."""
    m = check_hermitian(m)
    values, vectors = np.linalg.eigh(hermitize(m))
    return EigenDecomposition(values, vectors)


def sqrt_psd(m, tol: float | None = None) -> np.ndarray:
    """PSD square root of a Hermitian matrix.

    Eigenvalues in ``[-tol, 0)`` are treated as roundoff and clamped to zero.
    The default ``tol`` is ``1e-10`` times the largest eigenvalue magnitude.
    """
    values, vectors = eigh(m)
    if tol is None:
        tol = 1e-10 * max(float(np.max(np.abs(values))), np.finfo(float).tiny)
    if values[0] < -tol:
        raise NotPSDError(float(values[0]), tol)
    root = np.sqrt(np.clip(values, 0.0, None))
    return hermitize((vectors * root) @ vectors.conj().T)


def haar_random(n: int, beta: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary (beta=2) or orthogonal (beta=1) matrix.

    QR of a Gaussian matrix, with column phases chosen so that the
    triangular factor has a positive diagonal.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if beta == 2:
        z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    elif beta == 1:
        z = rng.standard_normal((n, n))
    else:
        raise ValueError(f"field tag must be 1 or 2, got {beta}")
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def log_gamma(x: float) -> float:
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)
