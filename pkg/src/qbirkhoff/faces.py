"""Face geometry in low dimensions.

Three concrete pictures: the disc of Schur-multiplier channels on M₂, the
complex and real faces of M₃ channels fixing the diagonal algebra, and the
two-parameter family covering every index-2 unital channel on M₂.

For the M₃ face the ground truth is always the minimum eigenvalue of the
displayed 3×3 coefficient matrix; the closed-form determinant

    1 - |z₁|² - |z₂|² - |z₃|² + 2·Re(z₁ z₂ conj(z₃))

is cross-checked against it on every membership call.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .channels import Channel, NotCompletelyPositive
from .numerics import (
    DEFAULT_TOLERANCE,
    NumericalFailure,
    Tolerance,
    as_matrix,
    dagger,
    hermitian_eig,
    max_abs,
)

__all__ = [
    "SchurSpec",
    "schur_channel",
    "m3_matrix",
    "m3_closed_form",
    "m3_face_membership",
    "M3FaceScan",
    "m3_real_face_scan",
    "scan_csv_lines",
    "M2CanonicalForm",
    "m2_index2_channel",
    "m2_index2_is_extremal",
]

# half-width of the boundary band around eigenvalue zero
_BOUNDARY_BAND = 1e-10

# the closed form is only trusted when it clears this margin
_CLOSED_FORM_MARGIN = 1e-9


@dataclass(frozen=True)
class SchurSpec:
    """Hermitian unit-diagonal coefficient matrix of an entrywise multiplier."""

    matrix: np.ndarray

    @classmethod
    def from_matrix(cls, m, tol: Tolerance = DEFAULT_TOLERANCE) -> "SchurSpec":
        arr = as_matrix(m)
        if arr.shape[0] != arr.shape[1]:
            raise ValueError(f"multiplier matrix must be square, got {arr.shape}")
        if max_abs(arr - dagger(arr)) > tol.eq_abs:
            raise ValueError("multiplier matrix is not hermitian")
        if max_abs(np.diag(arr) - 1.0) > tol.eq_abs:
            raise ValueError("multiplier matrix must have unit diagonal")
        return cls((arr + dagger(arr)) / 2.0)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def schur_channel(spec: SchurSpec, tol: Tolerance = DEFAULT_TOLERANCE) -> Channel:
    """Channel acting entrywise by the multiplier: e_ij -> m_ij e_ij.

    Kraus operators are the diagonal factors of m = Σ_r c_r c_r*; a
    non-PSD multiplier lies outside the face and is rejected.
    """
    m = spec.matrix
    k = spec.size
    vals, vecs = hermitian_eig(m, tol)
    allowance = tol.psd_abs * max(1.0, float(np.max(np.abs(vals))))
    if float(vals[-1]) < -allowance:
        raise NotCompletelyPositive("multiplier matrix is not PSD: outside the face")
    ops = []
    top = float(vals[0])
    for r in range(k):
        if vals[r] > tol.rank_rel * max(top, 1.0):
            ops.append(np.diag(np.sqrt(vals[r]) * vecs[:, r]))
    return Channel.from_kraus(ops, tol)


def m3_matrix(z1: complex, z2: complex, z3: complex) -> np.ndarray:
    return np.array(
        [
            [1.0, z1, z3],
            [np.conj(z1), 1.0, z2],
            [np.conj(z3), np.conj(z2), 1.0],
        ],
        dtype=complex,
    )


def m3_closed_form(z1: complex, z2: complex, z3: complex) -> float:
    """Determinant of the face matrix; positive inside, negative outside."""
    z1, z2, z3 = complex(z1), complex(z2), complex(z3)
    return float(
        1.0
        - abs(z1) ** 2
        - abs(z2) ** 2
        - abs(z3) ** 2
        + 2.0 * (z1 * z2 * np.conj(z3)).real
    )


def m3_face_membership(
    z1: complex, z2: complex, z3: complex, tol: Tolerance = DEFAULT_TOLERANCE
) -> str:
    """interior / boundary / outside, decided by the minimum eigenvalue.

    Inside the unit polydisc the determinant sign decides membership too
    (two negative eigenvalues would force an eigenvalue-square sum above 9);
    the closed form is compared against the oracle whenever it clears its
    margin, and disagreement raises :class:`NumericalFailure`.
    """
    vals, _ = hermitian_eig(m3_matrix(z1, z2, z3), tol)
    low = float(vals[-1])
    if low < -_BOUNDARY_BAND:
        cls = "outside"
    elif low > _BOUNDARY_BAND:
        cls = "interior"
    else:
        cls = "boundary"

    if max(abs(z1), abs(z2), abs(z3)) <= 1.0 + 1e-12:
        closed = m3_closed_form(z1, z2, z3)
        if closed > _CLOSED_FORM_MARGIN and cls != "interior":
            raise NumericalFailure(
                f"closed form {closed:.3e} says interior, oracle says {cls}"
            )
        if closed < -_CLOSED_FORM_MARGIN and cls != "outside":
            raise NumericalFailure(
                f"closed form {closed:.3e} says outside, oracle says {cls}"
            )
    return cls


@dataclass(frozen=True)
class M3FaceScan:
    """Classification of a real grid with the corner and extremality report."""

    entries: tuple  # ((x1, x2, x3), class) in scan order
    vertices: tuple  # corners of {-1,1}³ classified boundary
    extreme_candidates: tuple  # boundary points that are not grid midpoints


def m3_real_face_scan(grid_step: float, tol: Tolerance = DEFAULT_TOLERANCE) -> M3FaceScan:
    """Classify the uniform real grid on [-1,1]³ with approximately the
    requested step (endpoints always included)."""
    if not 0.0 < grid_step < 1.0:
        raise ValueError("grid_step must lie in (0, 1)")
    steps = max(2, round(2.0 / grid_step))
    xs = np.linspace(-1.0, 1.0, steps + 1)
    m = len(xs)

    classes = {}
    entries = []
    for idx in product(range(m), repeat=3):
        point = (float(xs[idx[0]]), float(xs[idx[1]]), float(xs[idx[2]]))
        cls = m3_face_membership(*point, tol=tol)
        classes[idx] = cls
        entries.append((point, cls))

    vertices = tuple(
        (float(s1), float(s2), float(s3))
        for s1, s2, s3 in product((-1.0, 1.0), repeat=3)
        if m3_face_membership(s1, s2, s3, tol=tol) == "boundary"
    )

    # a boundary point is dropped as non-extreme when it is the midpoint of
    # two distinct face points of the grid
    face = {idx for idx, cls in classes.items() if cls != "outside"}
    candidates = []
    for idx, cls in classes.items():
        if cls != "boundary":
            continue
        extreme = True
        for off in product(range(-(m - 1), m), repeat=3):
            if off == (0, 0, 0):
                continue
            hi = (idx[0] + off[0], idx[1] + off[1], idx[2] + off[2])
            lo = (idx[0] - off[0], idx[1] - off[1], idx[2] - off[2])
            if hi in face and lo in face:
                extreme = False
                break
        if extreme:
            candidates.append((float(xs[idx[0]]), float(xs[idx[1]]), float(xs[idx[2]])))
    return M3FaceScan(
        entries=tuple(entries), vertices=vertices, extreme_candidates=tuple(candidates)
    )


def scan_csv_lines(scan: M3FaceScan) -> list:
    return [f"{x1:.12g},{x2:.12g},{x3:.12g},{cls}" for (x1, x2, x3), cls in scan.entries]


@dataclass(frozen=True)
class M2CanonicalForm:
    """Parameters of the index-2 normal form on M₂: v₁ = diag(c₁, c₂),
    v₂ = d₁ e₁₂ − d₂ e₂₁ with c_k² + d_k² = 1."""

    c1: float
    c2: float
    d1: float
    d2: float

    @classmethod
    def from_c(cls, c1: float, c2: float) -> "M2CanonicalForm":
        if not (0.0 <= c1 <= 1.0 and 0.0 <= c2 <= 1.0):
            raise ValueError("diagonal coefficients must lie in [0, 1]")
        if c1 > c2:
            c1, c2 = c2, c1
        return cls(c1, c2, float(np.sqrt(1.0 - c1 * c1)), float(np.sqrt(1.0 - c2 * c2)))

    @property
    def degenerate(self) -> bool:
        return abs(self.c1 - self.c2) <= DEFAULT_TOLERANCE.eq_abs


def _check_form(form: M2CanonicalForm, tol: Tolerance):
    for name, c, d in (("1", form.c1, form.d1), ("2", form.c2, form.d2)):
        if c < -tol.eq_abs or d < -tol.eq_abs:
            raise ValueError(f"pair {name} has a negative coefficient")
        if abs(c * c + d * d - 1.0) > tol.eq_abs:
            raise ValueError(f"pair {name} violates c² + d² = 1")


def m2_index2_channel(form: M2CanonicalForm, tol: Tolerance = DEFAULT_TOLERANCE) -> Channel:
    """The two-Kraus unital channel of the normal form (trace-preserving only
    when d₁ = d₂; degenerate corners collapse to a unitary channel)."""
    _check_form(form, tol)
    v1 = np.array([[form.c1, 0.0], [0.0, form.c2]], dtype=complex)
    v2 = np.array([[0.0, form.d1], [-form.d2, 0.0]], dtype=complex)
    return Channel.from_kraus([v1, v2], tol)


def m2_index2_is_extremal(form: M2CanonicalForm, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """Closed-form extremality in the unital cone: d₁c₂ ≠ d₂c₁."""
    _check_form(form, tol)
    return abs(form.d1 * form.c2 - form.d2 * form.c1) > tol.eq_abs
