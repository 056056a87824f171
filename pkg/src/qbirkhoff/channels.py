"""Unital completely positive maps in Kraus, Choi and superoperator form.

The three representations are tied together by the package-wide
column-stacking convention:

    choi          = sum_k vec(v_k) vec(v_k)*
    superoperator = sum_k conj(v_k) (x) v_k

A ``Channel`` always carries a canonical minimal Kraus family obtained from
the Choi eigendecomposition, so equal channels serialize identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .numerics import (
    DEFAULT_TOLERANCE,
    Tolerance,
    as_matrix,
    dagger,
    hermitian_eig,
    max_abs,
    phase_fixed,
    unvec,
    vec,
)

__all__ = [
    "NotCompletelyPositive",
    "KrausFamily",
    "Channel",
    "choi_from_kraus",
    "kraus_from_choi",
    "superoperator_from_kraus",
    "apply_kraus",
    "numerical_index",
    "adjoint_channel",
    "matrix_to_pairs",
    "matrix_from_pairs",
    "channel_to_dict",
    "family_from_dict",
    "channel_from_dict",
    "dumps_channel",
    "loads_channel",
    "load_channel",
    "save_channel",
]


class NotCompletelyPositive(ValueError):
    """The Choi matrix has a negative eigenvalue beyond tolerance."""


@dataclass(frozen=True)
class KrausFamily:
    """Ordered family of n-by-n operators v_k representing x -> sum v_k x v_k*."""

    ops: tuple

    @classmethod
    def from_ops(cls, ops) -> "KrausFamily":
        mats = tuple(as_matrix(v) for v in ops)
        if not mats:
            raise ValueError("an empty Kraus family has no algebra size")
        n = mats[0].shape[0]
        for v in mats:
            if v.shape != (n, n):
                raise ValueError(f"ragged Kraus family: {v.shape} next to ({n}, {n})")
        return cls(mats)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    @property
    def index(self) -> int:
        return len(self.ops)

    def unit_defects(self) -> tuple[float, float]:
        """Deviations (entrywise max) of sum v v* and sum v* v from I."""
        eye = np.eye(self.dim)
        out_sum = sum(v @ dagger(v) for v in self.ops)
        in_sum = sum(dagger(v) @ v for v in self.ops)
        return max_abs(out_sum - eye), max_abs(in_sum - eye)

    def validate(self, tol: Tolerance = DEFAULT_TOLERANCE) -> tuple[bool, bool]:
        """(unital, trace_preserving) flags within ``eq_abs``."""
        out_dev, in_dev = self.unit_defects()
        return out_dev <= tol.eq_abs, in_dev <= tol.eq_abs

    def adjoint(self) -> "KrausFamily":
        return KrausFamily(tuple(dagger(v) for v in self.ops))


def apply_kraus(ops, x) -> np.ndarray:
    x = as_matrix(x)
    out = np.zeros_like(x)
    for v in ops:
        out = out + v @ x @ dagger(v)
    return out


def choi_from_kraus(k) -> np.ndarray:
    """n²×n² Choi matrix; block (i,j) equals the channel applied to e_ij."""
    ops = k.ops if isinstance(k, KrausFamily) else tuple(as_matrix(v) for v in k)
    n = ops[0].shape[0]
    c = np.zeros((n * n, n * n), dtype=complex)
    for v in ops:
        w = vec(v)
        c += np.outer(w, np.conj(w))
    return c


def superoperator_from_kraus(k) -> np.ndarray:
    ops = k.ops if isinstance(k, KrausFamily) else tuple(as_matrix(v) for v in k)
    n = ops[0].shape[0]
    t = np.zeros((n * n, n * n), dtype=complex)
    for v in ops:
        t += np.kron(np.conj(v), v)
    return t


def _canonical_sort_key(eigval: float, op: np.ndarray):
    # descending eigenvalue, ties broken by the rounded entry sequence
    entries = tuple(
        (round(float(z.real), 12), round(float(z.imag), 12)) for z in op.ravel(order="C")
    )
    return (-round(eigval, 12), entries)


def kraus_from_choi(choi, tol: Tolerance = DEFAULT_TOLERANCE) -> KrausFamily:
    """Canonical minimal Kraus family of a PSD Choi matrix.

    Eigenpairs above the relative rank cutoff become operators
    unvec(sqrt(eig) * eigenvector), ordered by descending eigenvalue with a
    deterministic tie-break, each phase-fixed.  Raises
    :class:`NotCompletelyPositive` when the Choi matrix has an eigenvalue
    below the PSD allowance.
    """
    c = as_matrix(choi)
    n2 = c.shape[0]
    n = int(round(np.sqrt(n2)))
    if n * n != n2 or c.shape != (n2, n2):
        raise ValueError(f"Choi matrix of shape {c.shape} is not n² by n²")
    vals, vecs = hermitian_eig(c, tol)
    top = float(vals[0]) if vals.size else 0.0
    if top <= 0.0:
        raise NotCompletelyPositive("Choi matrix is not positive semidefinite")
    allowance = tol.psd_abs * max(1.0, float(np.max(np.abs(vals))))
    if float(vals[-1]) < -allowance:
        raise NotCompletelyPositive(
            f"Choi matrix has eigenvalue {vals[-1]:.3e} below -{allowance:.3e}"
        )
    keep = [
        (float(vals[k]), phase_fixed(unvec(np.sqrt(vals[k]) * vecs[:, k], n), tol.eq_abs))
        for k in range(vals.size)
        if vals[k] > tol.rank_rel * top
    ]
    keep.sort(key=lambda pair: _canonical_sort_key(*pair))
    return KrausFamily(tuple(op for _, op in keep))


@dataclass(frozen=True)
class Channel:
    """A CP map with canonical minimal Kraus family and validity flags.

    ``index`` equals the Choi rank by construction.  Unital and
    trace-preserving are recorded, not required: operations that only make
    sense for doubly stochastic maps refuse non-flagged inputs themselves.
    """

    kraus: KrausFamily
    unital: bool
    trace_preserving: bool

    @classmethod
    def from_kraus(cls, ops, tol: Tolerance = DEFAULT_TOLERANCE) -> "Channel":
        fam = ops if isinstance(ops, KrausFamily) else KrausFamily.from_ops(ops)
        canon = kraus_from_choi(choi_from_kraus(fam), tol)
        unital, tp = canon.validate(tol)
        return cls(canon, unital, tp)

    @classmethod
    def from_choi(cls, choi, tol: Tolerance = DEFAULT_TOLERANCE) -> "Channel":
        canon = kraus_from_choi(choi, tol)
        unital, tp = canon.validate(tol)
        return cls(canon, unital, tp)

    @property
    def dim(self) -> int:
        return self.kraus.dim

    @property
    def index(self) -> int:
        return self.kraus.index

    def apply(self, x) -> np.ndarray:
        x = as_matrix(x)
        if x.shape != (self.dim, self.dim):
            raise ValueError(f"operand of shape {x.shape} does not act on M_{self.dim}")
        return apply_kraus(self.kraus.ops, x)

    def choi(self) -> np.ndarray:
        return choi_from_kraus(self.kraus)

    def superoperator(self) -> np.ndarray:
        return superoperator_from_kraus(self.kraus)

    def is_doubly_stochastic(self) -> bool:
        return self.unital and self.trace_preserving


def numerical_index(ch: Channel) -> int:
    """Dimension of the span of a minimal Kraus family (= Choi rank)."""
    return ch.index


def adjoint_channel(ch: Channel, tol: Tolerance = DEFAULT_TOLERANCE) -> Channel:
    """The dual map x -> sum v_k* x v_k; defined for doubly stochastic input."""
    if not ch.is_doubly_stochastic():
        raise ValueError("adjoint channel requires a unital trace-preserving input")
    return Channel.from_kraus(ch.kraus.adjoint(), tol)


# --- JSON surface ---------------------------------------------------------
#
# Channel files are UTF-8 JSON {"dim": n, "kraus": [op, ...]} with each op an
# n×n row-major array of [re, im] pairs.  Floats are written with Python's
# shortest round-trip repr (full double precision); NaN/Inf are rejected on
# read and never written.


def matrix_to_pairs(m) -> list:
    arr = as_matrix(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in arr]


def matrix_from_pairs(rows) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed complex matrix: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError(f"expected rows of [re, im] pairs, got shape {arr.shape}")
    return as_matrix(arr[:, :, 0] + 1j * arr[:, :, 1])


def channel_to_dict(ch: Channel) -> dict:
    return {"dim": ch.dim, "kraus": [matrix_to_pairs(v) for v in ch.kraus.ops]}


def family_from_dict(data) -> KrausFamily:
    """The Kraus family exactly as serialized, without canonicalization."""
    if not isinstance(data, dict) or "dim" not in data or "kraus" not in data:
        raise ValueError('channel file must be an object with "dim" and "kraus"')
    n = data["dim"]
    if not isinstance(n, int) or n <= 0:
        raise ValueError(f'"dim" must be a positive integer, got {n!r}')
    ops = [matrix_from_pairs(rows) for rows in data["kraus"]]
    for v in ops:
        if v.shape != (n, n):
            raise ValueError(f'Kraus operator of shape {v.shape} does not match "dim" {n}')
    return KrausFamily.from_ops(ops)


def channel_from_dict(data, tol: Tolerance = DEFAULT_TOLERANCE) -> Channel:
    return Channel.from_kraus(family_from_dict(data), tol)


def _reject_constant(token):
    raise ValueError(f"non-finite number {token!r} in channel file")


def dumps_channel(ch: Channel) -> str:
    return json.dumps(channel_to_dict(ch), indent=2, allow_nan=False)


def loads_channel(text: str, tol: Tolerance = DEFAULT_TOLERANCE) -> Channel:
    data = json.loads(text, parse_constant=_reject_constant)
    return channel_from_dict(data, tol)


def load_channel(path, tol: Tolerance = DEFAULT_TOLERANCE) -> Channel:
    with open(path, encoding="utf-8") as fh:
        return loads_channel(fh.read(), tol)


def save_channel(ch: Channel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_channel(ch))
        fh.write("\n")
