"""Dense complex matrix helpers: Hermitian eigenvalues, operator norms, commutators.

Everything in this package ultimately reduces to a handful of dense
linear-algebra primitives on small complex matrices.  They are collected
here, with the validation rules the rest of the package relies on:
matrices are finite-entried, and Hermitian inputs are symmetrized at the
door when the asymmetry is float noise, rejected when it is not.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-12


class MatrixError(ValueError):
    """Raised when a matrix argument violates a structural precondition."""


def as_complex_matrix(entries) -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting NaN/inf entries."""
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise MatrixError(f"expected a nonempty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise MatrixError("matrix entries must be finite")
    return m


def hermitian(entries, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate and return a Hermitian matrix.

    Asymmetry up to ``tol`` (relative to the largest entry) is absorbed by
    symmetrizing (h + h*)/2; anything larger is an error rather than a
    silent repair.
    """
    m = as_complex_matrix(entries)
    if m.shape[0] != m.shape[1]:
        raise MatrixError(f"Hermitian matrix must be square, got {m.shape}")
    scale = max(np.max(np.abs(m)), 1.0)
    asym = np.max(np.abs(m - m.conj().T))
    if asym > tol * scale:
        raise MatrixError(f"matrix is not Hermitian: asymmetry {asym:.3e} exceeds {tol * scale:.3e}")
    return (m + m.conj().T) / 2.0


def hermitian_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    return np.linalg.eigvalsh(hermitian(h))


def operator_norm(m) -> float:
    """Largest singular value; the C*-norm of a matrix acting on C^n."""
    m = as_complex_matrix(m)
    return float(np.linalg.norm(m, 2))


def commutator(d: np.ndarray, a: np.ndarray) -> np.ndarray:
    """[d, a] = da - ad.  Anti-Hermitian whenever d and a are Hermitian."""
    d = as_complex_matrix(d)
    a = as_complex_matrix(a)
    if d.shape != a.shape or d.shape[0] != d.shape[1]:
        raise MatrixError(f"commutator needs equal square shapes, got {d.shape} and {a.shape}")
    return d @ a - a @ d


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary from the QR of a complex Gaussian matrix."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
