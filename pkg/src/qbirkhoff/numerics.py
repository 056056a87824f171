"""Dense complex linear algebra helpers with a shared tolerance discipline.

Every rank, positivity and equality decision in the package routes through
this module, so a single vectorization convention (column stacking) and a
single set of cutoffs apply everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "NumericalFailure",
    "as_matrix",
    "dagger",
    "vec",
    "unvec",
    "frobenius_norm",
    "operator_norm",
    "max_abs",
    "is_hermitian",
    "hermitize",
    "hermitian_eig",
    "numerical_rank",
    "is_psd",
    "partial_trace",
    "phase_fixed",
]


class NumericalFailure(RuntimeError):
    """A verified construction failed its consistency check beyond tolerance."""


@dataclass(frozen=True)
class Tolerance:
    """Numerical cutoffs shared by the whole package.

    rank_rel   relative singular-value cutoff for rank decisions
    psd_abs    allowance for the most negative eigenvalue, scaled by the
               largest eigenvalue magnitude (floored at 1)
    eq_abs     entrywise allowance for equality tests
    """

    rank_rel: float = 1e-9
    psd_abs: float = 1e-9
    eq_abs: float = 1e-9

    def __post_init__(self):
        for name in ("rank_rel", "psd_abs", "eq_abs"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")


DEFAULT_TOLERANCE = Tolerance()


def as_matrix(m) -> np.ndarray:
    """Coerce to a complex 2-d array, rejecting non-finite entries."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains non-finite entries")
    return arr


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.asarray(m)).T


def vec(m) -> np.ndarray:
    """Column-stacking vectorization; vec(a @ x @ b) == kron(b.T, a) @ vec(x)."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(x, n: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec` onto an ``n`` by ``n`` matrix."""
    x = np.asarray(x)
    if n is None:
        n = int(round(np.sqrt(x.size)))
    if n * n != x.size:
        raise ValueError(f"vector of size {x.size} is not a square matrix")
    return x.reshape((n, n), order="F")


def frobenius_norm(m) -> float:
    return float(np.linalg.norm(np.asarray(m)))


def operator_norm(m) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(m), 2))


def max_abs(m) -> float:
    """Largest entry magnitude; 0 for an empty array."""
    arr = np.asarray(m)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def is_hermitian(m, eq_abs: float = DEFAULT_TOLERANCE.eq_abs) -> bool:
    arr = np.asarray(m)
    return arr.ndim == 2 and arr.shape[0] == arr.shape[1] and max_abs(arr - dagger(arr)) <= eq_abs


def hermitize(m, eq_abs: float | None = None) -> np.ndarray:
    """Hermitian part (m + m*)/2; with ``eq_abs`` given, reject inputs further
    from hermitian than the allowance."""
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if eq_abs is not None and max_abs(arr - dagger(arr)) > eq_abs:
        raise ValueError("matrix is not hermitian within tolerance")
    return (arr + dagger(arr)) / 2.0


def hermitian_eig(m, tol: Tolerance = DEFAULT_TOLERANCE) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending, real) and matching orthonormal eigenvector
    columns of a hermitian matrix.

    The input is hermitized before the solve; inputs that are not hermitian
    within ``tol.eq_abs`` are rejected.
    """
    h = hermitize(m, eq_abs=tol.eq_abs)
    vals, vecs = np.linalg.eigh(h)
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def numerical_rank(m, tol: Tolerance = DEFAULT_TOLERANCE) -> int:
    """Number of singular values above ``rank_rel`` times the largest."""
    arr = as_matrix(m)
    if arr.size == 0:
        return 0
    s = np.linalg.svd(arr, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel * s[0]))


def is_psd(m, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """Positive semidefiniteness of a hermitian matrix.

    The most negative eigenvalue may reach ``psd_abs`` scaled by the largest
    eigenvalue magnitude (floored at 1).
    """
    vals, _ = hermitian_eig(m, tol)
    if vals.size == 0:
        return True
    allowance = tol.psd_abs * max(1.0, float(np.max(np.abs(vals))))
    return float(vals[-1]) >= -allowance


def partial_trace(m, dims: tuple[int, int], side: str) -> np.ndarray:
    """Trace out one tensor factor of a matrix on a bipartite space.

    ``dims`` declares the factor sizes (first is the slow index, matching
    ``numpy.kron`` order); ``side`` names the factor that is traced out.
    """
    arr = as_matrix(m)
    d1, d2 = dims
    if d1 <= 0 or d2 <= 0 or arr.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"matrix of shape {arr.shape} does not match factors {dims}")
    four = arr.reshape(d1, d2, d1, d2)
    if side == "first":
        return np.trace(four, axis1=0, axis2=2)
    if side == "second":
        return np.trace(four, axis1=1, axis2=3)
    raise ValueError(f"side must be 'first' or 'second', got {side!r}")


def phase_fixed(m, eq_abs: float = DEFAULT_TOLERANCE.eq_abs) -> np.ndarray:
    """Rotate a matrix by a global phase so its first entry of modulus above
    ``eq_abs`` (row-major scan) becomes real positive."""
    arr = np.asarray(m, dtype=complex)
    flat = arr.ravel(order="C")
    above = np.nonzero(np.abs(flat) > eq_abs)[0]
    if above.size == 0:
        return arr.copy()
    z = flat[above[0]]
    return arr * (np.conj(z) / abs(z))
