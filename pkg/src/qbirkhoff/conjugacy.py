"""Conjugacy invariants and certificate verification for extremal channels.

Whether two channels are (anti-)unitarily cocycle conjugate is decided here
in two moves: data-matrix spectra give a cheap necessary condition, and a
supplied certificate (u, g, w) is verified against the defining relation

    u v_k u*  =  w · sum_j g_kj v'_j

with v_k entrywise-conjugated in the anti-unitary case.  Certificate search
is out of scope; the block projection ((v_i v_j*)) and its intertwiner give
the constructive half for doubly stochastic families.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .channels import (
    Channel,
    KrausFamily,
    matrix_from_pairs,
    matrix_to_pairs,
)
from .numerics import (
    DEFAULT_TOLERANCE,
    NumericalFailure,
    Tolerance,
    as_matrix,
    dagger,
    hermitian_eig,
    max_abs,
    phase_fixed,
)

__all__ = [
    "DataMatrix",
    "ConjugacyCertificate",
    "data_matrix",
    "spectrum_invariant",
    "conjugate_data_test",
    "verify_certificate",
    "choi_block_projection",
    "choi_block_intertwiner",
    "conjugate_channel",
    "certificate_to_dict",
    "certificate_from_dict",
    "load_certificate",
]

_VERIFY_TOL = 1e-7


def _family(obj) -> KrausFamily:
    if isinstance(obj, Channel):
        return obj.kraus
    if isinstance(obj, KrausFamily):
        return obj
    return KrausFamily.from_ops(obj)


@dataclass(frozen=True)
class DataMatrix:
    """Gram matrix D_ij = φ(v_i v_j*) at a state φ; hermitian PSD."""

    matrix: np.ndarray
    state_tag: str = "normalized trace"


@dataclass(frozen=True)
class ConjugacyCertificate:
    u: np.ndarray
    g: np.ndarray
    w: np.ndarray
    antiunitary: bool = False


def data_matrix(ch, state=None, tol: Tolerance = DEFAULT_TOLERANCE) -> DataMatrix:
    """Basic data matrix of a channel at a state (default: normalized trace)."""
    fam = _family(ch)
    n = fam.dim
    if state is None:
        rho = np.eye(n) / n
        tag = "normalized trace"
    else:
        rho = as_matrix(state)
        if rho.shape != (n, n):
            raise ValueError(f"state of shape {rho.shape} does not match dimension {n}")
        if max_abs(rho - dagger(rho)) > tol.eq_abs:
            raise ValueError("state is not hermitian")
        vals, _ = hermitian_eig(rho, tol)
        if float(vals[-1]) < -tol.psd_abs * max(1.0, float(np.max(np.abs(vals)))):
            raise ValueError("state is not positive semidefinite")
        if abs(np.trace(rho) - 1.0) > tol.eq_abs:
            raise ValueError("state does not have unit trace")
        tag = "custom state"
    d = fam.index
    mat = np.empty((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            mat[i, j] = np.trace(rho @ fam.ops[i] @ dagger(fam.ops[j]))
    # Gram structure forces hermitian PSD; symmetrize away roundoff
    return DataMatrix(matrix=(mat + dagger(mat)) / 2.0, state_tag=tag)


def spectrum_invariant(dm: DataMatrix, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Descending eigenvalues — invariant under every certified conjugacy."""
    vals, _ = hermitian_eig(dm.matrix, tol)
    return vals


def conjugate_data_test(dm: DataMatrix, dm2: DataMatrix, tol: Tolerance = DEFAULT_TOLERANCE):
    """A unitary g with g D g* = D' when the spectra match, else None."""
    a, b = as_matrix(dm.matrix), as_matrix(dm2.matrix)
    if a.shape != b.shape:
        return None
    vals_a, vecs_a = hermitian_eig(a, tol)
    vals_b, vecs_b = hermitian_eig(b, tol)
    if float(np.max(np.abs(vals_a - vals_b))) > 1e-8:
        return None
    g = vecs_b @ dagger(vecs_a)
    if max_abs(g @ a @ dagger(g) - b) > _VERIFY_TOL:
        return None
    return g


def verify_certificate(
    ch, ch2, cert: ConjugacyCertificate, tol: Tolerance = DEFAULT_TOLERANCE
) -> bool:
    """Check u v_k u* = w Σ_j g_kj v'_j for every k (conjugated v_k when
    anti-unitary); certificates relate the families as given, so raw Kraus
    families are accepted alongside channels."""
    fam, fam2 = _family(ch), _family(ch2)
    if fam.dim != fam2.dim:
        raise ValueError(f"dimension mismatch: {fam.dim} vs {fam2.dim}")
    if fam.index != fam2.index:
        raise ValueError(f"index mismatch: {fam.index} vs {fam2.index}")
    n, d = fam.dim, fam.index
    u, g, w = as_matrix(cert.u), as_matrix(cert.g), as_matrix(cert.w)
    if u.shape != (n, n) or w.shape != (n, n) or g.shape != (d, d):
        raise ValueError("certificate matrices do not match the channel sizes")
    check = max(tol.eq_abs, 1e-9)
    for k in range(d):
        vk = np.conj(fam.ops[k]) if cert.antiunitary else fam.ops[k]
        lhs = u @ vk @ dagger(u)
        rhs = w @ sum(g[k, j] * fam2.ops[j] for j in range(d))
        if max_abs(lhs - rhs) > check:
            return False
    return True


def choi_block_projection(k) -> tuple[np.ndarray, bool]:
    """The nd×nd block matrix ((v_i v_j*)) and whether it is a projection.

    The block matrix is a projection exactly when the family is doubly
    stochastic, and then its rank is n.
    """
    fam = _family(k)
    n, d = fam.dim, fam.index
    p = np.empty((n * d, n * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            p[i * n : (i + 1) * n, j * n : (j + 1) * n] = fam.ops[i] @ dagger(fam.ops[j])
    unital, tp = fam.validate()
    return p, bool(unital and tp)


def _range_basis(p: np.ndarray, n: int, tol: Tolerance) -> np.ndarray:
    vals, vecs = hermitian_eig(p, tol)
    rank = int(np.count_nonzero(vals > 0.5))
    if rank != n:
        raise NumericalFailure(f"block projection has rank {rank}, expected {n}")
    return np.column_stack([phase_fixed(vecs[:, k], tol.eq_abs) for k in range(vecs.shape[1])])


def choi_block_intertwiner(k, k2, tol: Tolerance = DEFAULT_TOLERANCE):
    """Unitary W with W* P W = P' for the two block projections, and the
    induced unitary u on C^n defined by u: v'_j* f -> Σ_k v_k* W_kj f."""
    fam, fam2 = _family(k), _family(k2)
    if fam.dim != fam2.dim or fam.index != fam2.index:
        raise ValueError("intertwiner needs equal dimension and index")
    for name, f in (("first", fam), ("second", fam2)):
        unital, tp = f.validate(tol)
        if not (unital and tp):
            raise ValueError(f"{name} family is not doubly stochastic")
    n, d = fam.dim, fam.index
    p, _ = choi_block_projection(fam)
    p2, _ = choi_block_projection(fam2)
    w_full = _range_basis(p, n, tol) @ dagger(_range_basis(p2, n, tol))
    if max_abs(dagger(w_full) @ p @ w_full - p2) > _VERIFY_TOL:
        raise NumericalFailure("intertwiner failed to conjugate the block projections")

    u = np.zeros((n, n), dtype=complex)
    blocks = []
    for j in range(d):
        m_j = sum(dagger(fam.ops[kk]) @ w_full[kk * n : (kk + 1) * n, j * n : (j + 1) * n]
                  for kk in range(d))
        blocks.append(m_j)
        u += m_j @ fam2.ops[j]
    if max_abs(u @ dagger(u) - np.eye(n)) > _VERIFY_TOL:
        raise NumericalFailure("induced vector map failed to be unitary")
    worst = max(max_abs(u @ dagger(fam2.ops[j]) - blocks[j]) for j in range(d))
    if worst > _VERIFY_TOL:
        raise NumericalFailure("induced vector map violates its defining relation")
    return w_full, u


def conjugate_channel(ch: Channel, tol: Tolerance = DEFAULT_TOLERANCE) -> Channel:
    """Entrywise complex conjugation of the Kraus family.

    The conjugated operators are kept as-is (no re-canonicalization): the
    map x -> conj(tau(conj(x))) has Kraus family {conj(v_k)} literally, and
    conjugation preserves both marginal sums exactly.
    """
    fam = _family(ch)
    conj = KrausFamily.from_ops(tuple(np.conj(v) for v in fam.ops))
    if isinstance(ch, Channel):
        return Channel(kraus=conj, unital=ch.unital, trace_preserving=ch.trace_preserving)
    unital, tp = conj.validate(tol)
    return Channel(kraus=conj, unital=unital, trace_preserving=tp)


# --- certificate files ----------------------------------------------------


def certificate_to_dict(cert: ConjugacyCertificate) -> dict:
    return {
        "u": matrix_to_pairs(cert.u),
        "g": matrix_to_pairs(cert.g),
        "w": matrix_to_pairs(cert.w),
        "antiunitary": bool(cert.antiunitary),
    }


def certificate_from_dict(data) -> ConjugacyCertificate:
    if not isinstance(data, dict):
        raise ValueError("certificate file must be a JSON object")
    missing = {"u", "g", "w"} - set(data)
    if missing:
        raise ValueError(f"certificate file lacks {sorted(missing)}")
    return ConjugacyCertificate(
        u=matrix_from_pairs(data["u"]),
        g=matrix_from_pairs(data["g"]),
        w=matrix_from_pairs(data["w"]),
        antiunitary=bool(data.get("antiunitary", False)),
    )


def load_certificate(path) -> ConjugacyCertificate:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return certificate_from_dict(data)
