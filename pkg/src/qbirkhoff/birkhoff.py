"""Classical doubly stochastic matrices and their permutation decompositions.

The commutative special case: every doubly stochastic matrix is a convex
combination of permutation matrices, found greedily by repeated perfect
matchings on the support graph.  ``embed_classical`` lifts a matrix to the
quantum side as a channel acting on diagonals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .channels import Channel
from .numerics import DEFAULT_TOLERANCE, Tolerance

__all__ = [
    "DSMatrix",
    "PermutationDecomposition",
    "is_doubly_stochastic",
    "birkhoff_decompose",
    "embed_classical",
    "ds_matrix_to_dict",
    "ds_matrix_from_dict",
    "loads_ds_matrix",
    "load_ds_matrix",
    "decomposition_to_dicts",
]

# residual entries below 64·n·eps are zeroed between matching rounds
_CLAMP_FACTOR = 64 * np.finfo(float).eps

# the greedy loop stops once the residual mass drops below n times this
_MASS_FLOOR = 1e-13


def _as_real_square(s) -> np.ndarray:
    arr = np.asarray(s, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square real matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains non-finite entries")
    return arr


@dataclass(frozen=True)
class DSMatrix:
    """A validated doubly stochastic matrix."""

    matrix: np.ndarray

    @classmethod
    def from_matrix(cls, s, tol: Tolerance = DEFAULT_TOLERANCE) -> "DSMatrix":
        arr = _as_real_square(s)
        if not is_doubly_stochastic(arr, tol):
            raise ValueError("matrix is not doubly stochastic within tolerance")
        return cls(arr)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def is_doubly_stochastic(s, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    try:
        arr = _as_real_square(s)
    except ValueError:
        return False
    if float(arr.min()) < -tol.eq_abs:
        return False
    rows = np.abs(arr.sum(axis=1) - 1.0)
    cols = np.abs(arr.sum(axis=0) - 1.0)
    return float(rows.max()) <= tol.eq_abs and float(cols.max()) <= tol.eq_abs


@dataclass(frozen=True)
class PermutationDecomposition:
    """Convex combination Σ w_k P_{π_k}; permutations map row -> column."""

    terms: tuple
    n: int

    def total_weight(self) -> float:
        return float(sum(w for w, _ in self.terms))

    def mixture(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        for w, perm in self.terms:
            out[np.arange(self.n), list(perm)] += w
        return out


def _perfect_matching(support: np.ndarray):
    # Kuhn's augmenting-path search; rows are matched in order, columns
    # scanned lexicographically, so the result is deterministic
    n = support.shape[0]
    match_col = [-1] * n

    def try_row(r, seen):
        for c in range(n):
            if support[r, c] and not seen[c]:
                seen[c] = True
                if match_col[c] == -1 or try_row(match_col[c], seen):
                    match_col[c] = r
                    return True
        return False

    for r in range(n):
        if not try_row(r, [False] * n):
            return None
    perm = [0] * n
    for c in range(n):
        perm[match_col[c]] = c
    return tuple(perm)


def birkhoff_decompose(s, tol: Tolerance = DEFAULT_TOLERANCE) -> PermutationDecomposition:
    """Greedy Birkhoff-von Neumann decomposition.

    Each round matches the support perfectly, removes the minimum matched
    entry, and clamps subtraction noise to zero.  A missing matching means
    the input violated double stochasticity beyond tolerance.
    """
    ds = s if isinstance(s, DSMatrix) else DSMatrix.from_matrix(s, tol)
    n = ds.n
    resid = ds.matrix.copy()
    clamp = _CLAMP_FACTOR * n
    resid[resid < clamp] = 0.0

    terms = []
    while float(resid.sum()) > n * _MASS_FLOOR:
        perm = _perfect_matching(resid > 0.0)
        if perm is None:
            raise ValueError(
                "support graph has no perfect matching — "
                "input violates double stochasticity beyond tolerance"
            )
        rows = np.arange(n)
        cols = np.asarray(perm)
        weight = float(resid[rows, cols].min())
        resid[rows, cols] -= weight
        resid[resid < clamp] = 0.0
        terms.append((weight, perm))
    return PermutationDecomposition(terms=tuple(terms), n=n)


def embed_classical(s, tol: Tolerance = DEFAULT_TOLERANCE) -> Channel:
    """The channel with Kraus family {√s_ij · e_i e_j*} over the support.

    Acts on diagonal states as the matrix itself: diag(p) -> diag(S p).
    """
    ds = s if isinstance(s, DSMatrix) else DSMatrix.from_matrix(s, tol)
    n = ds.n
    ops = []
    for i in range(n):
        for j in range(n):
            if ds.matrix[i, j] > tol.eq_abs:
                v = np.zeros((n, n), dtype=complex)
                v[i, j] = np.sqrt(ds.matrix[i, j])
                ops.append(v)
    return Channel.from_kraus(ops, tol)


# --- JSON surface ---------------------------------------------------------


def ds_matrix_to_dict(s) -> dict:
    ds = s if isinstance(s, DSMatrix) else DSMatrix.from_matrix(s)
    return {"n": ds.n, "rows": [[float(x) for x in row] for row in ds.matrix]}


def ds_matrix_from_dict(data, tol: Tolerance = DEFAULT_TOLERANCE) -> DSMatrix:
    if not isinstance(data, dict) or "n" not in data or "rows" not in data:
        raise ValueError('matrix file must be an object with "n" and "rows"')
    n = data["n"]
    if not isinstance(n, int) or n <= 0:
        raise ValueError(f'"n" must be a positive integer, got {n!r}')
    arr = np.asarray(data["rows"], dtype=float)
    if arr.shape != (n, n):
        raise ValueError(f'"rows" of shape {arr.shape} does not match "n" = {n}')
    return DSMatrix.from_matrix(arr, tol)


def _reject_constant(token):
    raise ValueError(f"non-finite number {token!r} in matrix file")


def loads_ds_matrix(text: str, tol: Tolerance = DEFAULT_TOLERANCE) -> DSMatrix:
    data = json.loads(text, parse_constant=_reject_constant)
    return ds_matrix_from_dict(data, tol)


def load_ds_matrix(path, tol: Tolerance = DEFAULT_TOLERANCE) -> DSMatrix:
    with open(path, encoding="utf-8") as fh:
        return loads_ds_matrix(fh.read(), tol)


def decomposition_to_dicts(dec: PermutationDecomposition) -> list:
    return [{"weight": w, "permutation": list(perm)} for w, perm in dec.terms]
