"""Ergodic classification of doubly stochastic channels.

Everything here reads off the superoperator: the fixed-point space is the
kernel of T - I (a *-algebra for doubly stochastic maps), ergodicity means
that kernel is the scalars, the peripheral spectrum detects periodicity, and
a cyclic projection family can be deperiodized by an explicit unitary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channels import Channel, KrausFamily
from .numerics import (
    DEFAULT_TOLERANCE,
    NumericalFailure,
    Tolerance,
    dagger,
    hermitian_eig,
    max_abs,
    numerical_rank,
    phase_fixed,
    unvec,
    vec,
)

__all__ = [
    "SpectralClassification",
    "CyclicFamily",
    "fixed_point_space",
    "invariant_projection",
    "classify",
    "cyclic_projections",
    "deperiodize",
]

# eigenvalues this close to the unit circle count as peripheral
PERIPHERAL_BAND = 1e-8

# structural checks (normality, closure, projection defect) use a looser
# cutoff than entrywise equality: they sit behind an eigensolve
_STRUCT_TOL = 1e-7


@dataclass(frozen=True)
class SpectralClassification:
    """Spectral picture of a doubly stochastic channel."""

    eigenvalues: np.ndarray
    fixed_dim: int
    ergodic: bool
    peripheral: np.ndarray
    period: int | None
    aperiodic: bool
    strongly_mixing: bool


@dataclass(frozen=True)
class CyclicFamily:
    """Orthogonal projections E_0..E_{p-1} with τ(E_k) = E_{k+1 mod p}."""

    projections: tuple
    period: int


def _require_doubly_stochastic(ch: Channel):
    if not ch.is_doubly_stochastic():
        raise ValueError("spectral classification needs a unital trace-preserving channel")


def _sorted_eigs(eigs: np.ndarray) -> np.ndarray:
    order = np.lexsort(
        (np.round(eigs.imag, 12), np.round(eigs.real, 12), -np.round(np.abs(eigs), 12))
    )
    return eigs[order]


def fixed_point_space(ch: Channel, tol: Tolerance = DEFAULT_TOLERANCE) -> list:
    """Orthonormal (Hilbert-Schmidt) basis of {x : τ(x) = x}.

    The span is checked to be closed under adjoints and products — the
    *-algebra property that holds for every doubly stochastic channel.
    """
    _require_doubly_stochastic(ch)
    n = ch.dim
    t = ch.superoperator()
    gap = t - np.eye(n * n)
    _, s, vh = np.linalg.svd(gap)
    cutoff = tol.rank_rel * max(1.0, float(s[0]))
    kernel = [np.conj(vh[k]) for k in range(n * n) if s[k] <= cutoff]
    basis = [phase_fixed(unvec(x, n), tol.eq_abs) for x in kernel]
    if not basis:
        raise NumericalFailure("unital channel lost its fixed space — broken input")

    q = np.stack([vec(b) for b in basis], axis=1)
    proj = q @ dagger(q)
    eye = np.eye(n * n)
    for a in basis:
        if max_abs((eye - proj) @ vec(dagger(a))) > _STRUCT_TOL:
            raise NumericalFailure("fixed-point space is not adjoint-closed within tolerance")
        for b in basis:
            if max_abs((eye - proj) @ vec(a @ b)) > _STRUCT_TOL:
                raise NumericalFailure("fixed-point space is not product-closed within tolerance")
    return basis


def invariant_projection(ch: Channel, tol: Tolerance = DEFAULT_TOLERANCE):
    """A projection E ∉ {0, I} with τ(E) = E, or None for ergodic channels."""
    _require_doubly_stochastic(ch)
    basis = fixed_point_space(ch, tol)
    if len(basis) == 1:
        return None
    n = ch.dim
    for raw in basis:
        for h in ((raw + dagger(raw)) / 2.0, (raw - dagger(raw)) / 2.0j):
            scalar_part = (np.trace(h) / n) * np.eye(n)
            if max_abs(h - scalar_part) <= _STRUCT_TOL:
                continue
            vals, vecs = hermitian_eig(h, tol)
            # split the spectrum at its largest gap; both sides are nonempty
            gaps = vals[:-1] - vals[1:]
            cut = int(np.argmax(gaps)) + 1
            e = vecs[:, :cut] @ dagger(vecs[:, :cut])
            if max_abs(ch.apply(e) - e) <= max(tol.eq_abs, 1e-10):
                return e
    raise NumericalFailure("non-ergodic channel yielded no verified invariant projection")


def _snap_period(peripheral: np.ndarray, n: int) -> int:
    # cluster peripheral phases to rationals k/q with q ≤ n²; the group they
    # generate is cyclic of order lcm of the denominators
    denominators = set()
    for mu in peripheral:
        phase = float(np.angle(mu)) / (2.0 * np.pi) % 1.0
        frac = Fraction(phase).limit_denominator(n * n) % 1
        denominators.add(frac.denominator)
    return math.lcm(*denominators) if denominators else 1


def classify(ch: Channel, tol: Tolerance = DEFAULT_TOLERANCE) -> SpectralClassification:
    """Spectral classification: fixed space, ergodicity, period, mixing."""
    _require_doubly_stochastic(ch)
    n = ch.dim
    t = ch.superoperator()
    eigs = _sorted_eigs(np.linalg.eigvals(t))
    fixed_dim = n * n - numerical_rank(t - np.eye(n * n), tol)
    ergodic = fixed_dim == 1
    peripheral = eigs[np.abs(eigs) > 1.0 - PERIPHERAL_BAND]
    period = _snap_period(peripheral, n) if ergodic else None
    aperiodic = bool(ergodic and period == 1)
    strongly_mixing = bool(ergodic and peripheral.size == 1)
    return SpectralClassification(
        eigenvalues=eigs,
        fixed_dim=fixed_dim,
        ergodic=ergodic,
        peripheral=peripheral,
        period=period,
        aperiodic=aperiodic,
        strongly_mixing=strongly_mixing,
    )


def _principal_root(c: complex, p: int) -> complex:
    return complex(abs(c) ** (1.0 / p) * np.exp(1j * np.angle(c) / p))


def _projection_family(x: np.ndarray, p: int) -> list:
    theta = np.exp(2j * np.pi / p)
    powers = [np.linalg.matrix_power(x, m) for m in range(p)]
    return [sum(theta ** (k * m) * powers[m] for m in range(p)) / p for k in range(p)]


def _verify_family(ch: Channel, projections, tol: Tolerance) -> bool:
    n = ch.dim
    p = len(projections)
    check = max(tol.eq_abs, 1e-10)
    total = np.zeros((n, n), dtype=complex)
    for e in projections:
        if max_abs(e - dagger(e)) > check or max_abs(e @ e - e) > check:
            return False
        total = total + e
    if max_abs(total - np.eye(n)) > check:
        return False
    for k in range(p):
        for j in range(k + 1, p):
            if max_abs(projections[k] @ projections[j]) > check:
                return False
    for k in range(p):
        if max_abs(ch.apply(projections[k]) - projections[(k + 1) % p]) > check:
            return False
    return True


def cyclic_projections(ch: Channel, tol: Tolerance = DEFAULT_TOLERANCE):
    """Construct a verified cyclic projection family from the peripheral spectrum.

    Works from an eigenoperator x with τ(x) = e^{2πi/p} x, rescaled so its
    spectrum sits on the p-th roots of unity; the averaged powers of x are
    then the spectral projections.  This succeeds for the ergodic periodic
    case the construction is made for, and for non-ergodic channels whose
    peripheral structure happens to be as clean (a permutation-like part);
    when post-verification fails, None is returned rather than an unverified
    family.  Channels with trivial peripheral structure are refused.
    """
    _require_doubly_stochastic(ch)
    n = ch.dim
    t = ch.superoperator()
    eigs = np.linalg.eigvals(t)
    peripheral = eigs[np.abs(eigs) > 1.0 - PERIPHERAL_BAND]
    p = _snap_period(peripheral, n)
    if p <= 1:
        raise ValueError("channel has no nontrivial cyclic structure (period 1)")

    theta = np.exp(2j * np.pi / p)
    vals, vecs = np.linalg.eig(t)
    close = np.nonzero(np.abs(vals - theta) <= 1e-6)[0]
    if close.size == 0:
        close = np.array([int(np.argmin(np.abs(vals - theta)))])

    candidates = []
    for idx in close:
        x = unvec(vecs[:, idx], n)
        candidates.append(x)
        if p == 2:
            candidates.append((x + dagger(x)) / 2.0)
            candidates.append((x - dagger(x)) / 2.0j)

    for raw in candidates:
        c = complex(np.trace(np.linalg.matrix_power(raw, p)) / n)
        if abs(c) < 1e-10:
            continue
        x = raw / _principal_root(c, p)
        if max_abs(x @ dagger(x) - dagger(x) @ x) > _STRUCT_TOL:
            continue
        if max_abs(np.linalg.matrix_power(x, p) - np.eye(n)) > _STRUCT_TOL:
            continue
        projections = _projection_family(x, p)
        if _verify_family(ch, projections, tol):
            return CyclicFamily(projections=tuple(projections), period=p)
    return None


def deperiodize(ch: Channel, fam: CyclicFamily, tol: Tolerance = DEFAULT_TOLERANCE):
    """Unitary α cycling the family's ranges, plus the non-ergodic residual.

    α maps an orthonormal basis of range(E_k) onto one of range(E_{k+1});
    the residual channel x -> τ(α* x α) then fixes every E_k.
    """
    _require_doubly_stochastic(ch)
    p = fam.period
    bases = []
    ranks = []
    for e in fam.projections:
        vals, vecs = hermitian_eig(e, tol)
        r = int(np.count_nonzero(vals > 0.5))
        cols = [phase_fixed(vecs[:, k], tol.eq_abs) for k in range(r)]
        bases.append(np.stack(cols, axis=1))
        ranks.append(r)
    if len(set(ranks)) != 1:
        raise ValueError(f"cyclic projections have unequal ranks {ranks}")

    n = ch.dim
    alpha = np.zeros((n, n), dtype=complex)
    for k in range(p):
        alpha += bases[(k + 1) % p] @ dagger(bases[k])
    if max_abs(alpha @ dagger(alpha) - np.eye(n)) > _STRUCT_TOL:
        raise NumericalFailure("cycling map failed to be unitary")
    for k in range(p):
        if max_abs(alpha @ fam.projections[k] @ dagger(alpha) - fam.projections[(k + 1) % p]) > _STRUCT_TOL:
            raise NumericalFailure("cycling map does not shift the projections")

    residual = Channel.from_kraus(
        KrausFamily(tuple(v @ dagger(alpha) for v in ch.kraus.ops)), tol
    )
    for e in fam.projections:
        if max_abs(residual.apply(e) - e) > max(tol.eq_abs, 1e-9):
            raise NumericalFailure("residual channel does not fix the cyclic projections")
    return alpha, residual
