"""Extremality certificates and convex decompositions of unital CP maps.

A unital channel is extremal among unital CP maps exactly when the products
v_i v_j* of a minimal Kraus family are linearly independent; among doubly
stochastic maps the products and the reversed products v_j* v_i must be
jointly independent (Choi / Landau-Streater criteria).  A failed test is
witnessed by a hermitian coefficient matrix, and the witness seeds a convex
split whose branches have strictly smaller index, so recursion yields a
finite decomposition into extremal channels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import Channel, KrausFamily
from .numerics import (
    DEFAULT_TOLERANCE,
    NumericalFailure,
    Tolerance,
    dagger,
    frobenius_norm,
    hermitian_eig,
    max_abs,
    operator_norm,
    vec,
)

__all__ = [
    "CP",
    "CP_PHI",
    "DependencyCertificate",
    "ExtremalDecomposition",
    "product_matrix",
    "stacked_matrix",
    "choi_extremal_test",
    "landau_streater_test",
    "hermitize_certificate",
    "convex_split",
    "decompose_extremal",
]

CP = "CP"
CP_PHI = "CP_phi"

# residual allowance for certificate checks; spec'd behaviour is < 1e-8
_CERT_RESIDUAL = 1e-8


@dataclass(frozen=True)
class DependencyCertificate:
    """Hermitian d×d witness λ of Kraus-product linear dependence.

    kind CP:      sum_ij λ_ij v_i v_j* = 0
    kind CP_phi:  additionally sum_ij λ_ij v_j* v_i = 0

    Normalized to operator norm 1 with a deterministic overall sign.
    """

    lam: np.ndarray
    kind: str

    def residuals(self, family: KrausFamily) -> tuple[float, float]:
        """Entrywise-max residuals of (product sum, reversed-product sum)."""
        ops = family.ops
        d = len(ops)
        n = family.dim
        fwd = np.zeros((n, n), dtype=complex)
        rev = np.zeros((n, n), dtype=complex)
        for i in range(d):
            for j in range(d):
                fwd += self.lam[i, j] * (ops[i] @ dagger(ops[j]))
                rev += self.lam[i, j] * (dagger(ops[j]) @ ops[i])
        return max_abs(fwd), max_abs(rev)


def product_matrix(family: KrausFamily) -> np.ndarray:
    """n²×d² matrix whose column i·d+j is vec(v_i v_j*)."""
    ops = family.ops
    n, d = family.dim, family.index
    cols = np.empty((n * n, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            cols[:, i * d + j] = vec(ops[i] @ dagger(ops[j]))
    return cols


def stacked_matrix(family: KrausFamily) -> np.ndarray:
    """2n²×d² matrix: column i·d+j is vec(v_i v_j*) over vec(v_j* v_i)."""
    ops = family.ops
    n, d = family.dim, family.index
    cols = np.empty((2 * n * n, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            cols[: n * n, i * d + j] = vec(ops[i] @ dagger(ops[j]))
            cols[n * n :, i * d + j] = vec(dagger(ops[j]) @ ops[i])
    return cols


def _rank_and_smallest(m, tol: Tolerance):
    # rank plus the right singular vector of the smallest singular value
    _, s, vh = np.linalg.svd(m)
    rank = int(np.count_nonzero(s > tol.rank_rel * s[0])) if s[0] > 0 else 0
    return rank, np.conj(vh[-1])


def _sign_fixed(h: np.ndarray, eq_abs: float) -> np.ndarray:
    for z in h.ravel(order="C"):
        for part in (z.real, z.imag):
            if abs(part) > eq_abs:
                return h if part > 0.0 else -h
    return h


def hermitize_certificate(
    nullvec,
    family: KrausFamily,
    kind: str = CP,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> DependencyCertificate:
    """Turn a null vector of the (stacked) product matrix into a certificate.

    The certificate space is closed under adjoints, so the hermitian part
    (λ+λ*)/2 — or, when that vanishes, (λ−λ*)/(2i) — is again a certificate;
    the result is normalized to operator norm 1.  Raises
    :class:`NumericalFailure` when no hermitian direction survives.
    """
    d = family.index
    arr = np.asarray(nullvec, dtype=complex)
    if arr.size != d * d:
        raise ValueError(f"null vector of size {arr.size} does not reshape to {d}×{d}")
    lam = arr.reshape(d, d)
    herm = (lam + dagger(lam)) / 2.0
    anti = (lam - dagger(lam)) / 2.0j
    candidates = [herm, anti] if operator_norm(herm) > tol.eq_abs else [anti]
    for part in candidates:
        nrm = operator_norm(part)
        if nrm <= tol.eq_abs:
            continue
        cert = DependencyCertificate(_sign_fixed(part / nrm, tol.eq_abs), kind)
        fwd, rev = cert.residuals(family)
        if fwd <= _CERT_RESIDUAL and (kind != CP_PHI or rev <= _CERT_RESIDUAL):
            return cert
    raise NumericalFailure("no hermitian certificate survives within tolerance")


def choi_extremal_test(ch: Channel, tol: Tolerance = DEFAULT_TOLERANCE):
    """Extremality in the unital CP cone: are the products v_i v_j* independent?

    Returns ``(extremal, certificate)``; the certificate (kind CP) is built
    from the smallest singular direction when the product matrix is
    rank-deficient.
    """
    if not ch.unital:
        raise ValueError("extremality in the unital cone needs a unital channel")
    fam = ch.kraus
    rank, nullvec = _rank_and_smallest(product_matrix(fam), tol)
    if rank == fam.index**2:
        return True, None
    return False, hermitize_certificate(nullvec, fam, CP, tol)


def landau_streater_test(ch: Channel, tol: Tolerance = DEFAULT_TOLERANCE):
    """Extremality among doubly stochastic maps via the stacked bi-independence
    test; refuses channels that are not trace-preserving."""
    if not ch.unital:
        raise ValueError("extremality test needs a unital channel")
    if not ch.trace_preserving:
        raise ValueError("the doubly stochastic test needs a trace-preserving channel")
    fam = ch.kraus
    rank, nullvec = _rank_and_smallest(stacked_matrix(fam), tol)
    if rank == fam.index**2:
        return True, None
    return False, hermitize_certificate(nullvec, fam, CP_PHI, tol)


def _check_certificate(ch: Channel, cert: DependencyCertificate, tol: Tolerance):
    lam = np.asarray(cert.lam)
    d = ch.index
    if lam.shape != (d, d):
        raise ValueError(f"certificate shape {lam.shape} does not match index {d}")
    if abs(operator_norm(lam) - 1.0) > 1e-8:
        raise ValueError("certificate is not normalized to operator norm 1")
    fwd, rev = cert.residuals(ch.kraus)
    worst = max(fwd, rev) if cert.kind == CP_PHI else fwd
    if worst > _CERT_RESIDUAL:
        raise ValueError(f"certificate residual {worst:.3e} too large for a split")


def _mix_family(family: KrausFamily, coeff: np.ndarray, tol: Tolerance) -> KrausFamily:
    # Kraus family of x -> sum_ij coeff_ij v_i x v_j* for PSD hermitian coeff
    gammas, basis = hermitian_eig(coeff, tol)
    top = float(gammas[0])
    if top <= 0.0:
        raise NumericalFailure("mixing coefficient matrix has no positive part")
    ops = []
    stacked = np.stack(family.ops)
    for m in range(gammas.size):
        if gammas[m] > tol.rank_rel * top:
            ops.append(np.sqrt(gammas[m]) * np.tensordot(basis[:, m], stacked, axes=(0, 0)))
    return KrausFamily(tuple(ops))


def convex_split(
    ch: Channel, cert: DependencyCertificate, tol: Tolerance = DEFAULT_TOLERANCE
) -> tuple[Channel, Channel]:
    """Split τ = ½τ₊ + ½τ₋ along a certificate, τ±(x) = Σ (δ_ij ± λ_ij) v_i x v_j*.

    With ‖λ‖ = 1 at least one of I±λ is singular, so at least one branch has
    strictly smaller index.
    """
    _check_certificate(ch, cert, tol)
    eye = np.eye(ch.index)
    plus = Channel.from_kraus(_mix_family(ch.kraus, eye + cert.lam, tol), tol)
    minus = Channel.from_kraus(_mix_family(ch.kraus, eye - cert.lam, tol), tol)
    return plus, minus


def _weighted_split(ch: Channel, cert: DependencyCertificate, tol: Tolerance):
    # τ = p·τ_a + (1−p)·τ_b with coefficient matrices I + aλ and I − bλ both
    # scaled to singularity, so the index drops strictly on both branches;
    # p·a = (1−p)·b keeps the average equal to τ.  Reduces to the plain
    # ½-split when the certificate spectrum is symmetric.
    vals, _ = hermitian_eig(cert.lam, tol)
    mu_max, mu_min = float(vals[0]), float(vals[-1])
    if mu_max <= tol.eq_abs or mu_min >= -tol.eq_abs:
        raise NumericalFailure("certificate spectrum does not straddle zero")
    a = 1.0 / (-mu_min)
    b = 1.0 / mu_max
    p = b / (a + b)
    eye = np.eye(ch.index)
    plus = Channel.from_kraus(_mix_family(ch.kraus, eye + a * cert.lam, tol), tol)
    minus = Channel.from_kraus(_mix_family(ch.kraus, eye - b * cert.lam, tol), tol)
    return (p, plus), (1.0 - p, minus)


@dataclass(frozen=True)
class ExtremalDecomposition:
    """Convex combination Σ w_k τ_k with extremal terms (when complete)."""

    terms: tuple
    depth: int
    complete: bool

    def total_weight(self) -> float:
        return float(sum(w for w, _ in self.terms))

    def mixture_choi(self) -> np.ndarray:
        return sum(w * term.choi() for w, term in self.terms)

    def reconstruction_error(self, ch: Channel) -> float:
        return frobenius_norm(self.mixture_choi() - ch.choi())


# Frobenius distance on Choi matrices below which two leaves are the same
_LEAF_MERGE = 1e-7


def decompose_extremal(
    ch: Channel,
    kind: str = CP_PHI,
    max_depth: int = 64,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> ExtremalDecomposition:
    """Decompose a channel into a convex combination of extremal channels.

    ``kind`` selects the extremality notion (CP: unital cone, CP_phi: doubly
    stochastic set).  Branches whose depth exceeds ``max_depth`` are kept
    as-is and the result is flagged incomplete.
    """
    if kind not in (CP, CP_PHI):
        raise ValueError(f"unknown extremality kind {kind!r}")
    test = landau_streater_test if kind == CP_PHI else choi_extremal_test
    # the test's own preconditions vet ch (unital, and TP for CP_phi)

    leaves = []
    complete = True
    deepest = 0
    stack = [(1.0, ch, 0)]
    while stack:
        weight, current, depth = stack.pop()
        deepest = max(deepest, depth)
        extremal, cert = test(current, tol)
        if extremal:
            leaves.append((weight, current))
            continue
        if depth >= max_depth:
            leaves.append((weight, current))
            complete = False
            continue
        (p, plus), (q, minus) = _weighted_split(current, cert, tol)
        stack.append((weight * p, plus, depth + 1))
        stack.append((weight * q, minus, depth + 1))

    merged = []  # entries [weight, channel, choi]
    for weight, leaf in leaves:
        c = leaf.choi()
        for entry in merged:
            if frobenius_norm(c - entry[2]) < _LEAF_MERGE:
                entry[0] += weight
                break
        else:
            merged.append([weight, leaf, c])
    merged.sort(key=lambda entry: (-entry[0], np.round(entry[2], 9).tobytes()))
    terms = tuple((w, leaf) for w, leaf, _ in merged)
    return ExtremalDecomposition(terms=terms, depth=deepest, complete=complete)
