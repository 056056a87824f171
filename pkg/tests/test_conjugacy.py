import numpy as np
import pytest

from qbirkhoff import (
    Channel,
    ConjugacyCertificate,
    KrausFamily,
    choi_block_intertwiner,
    choi_block_projection,
    conjugate_channel,
    conjugate_data_test,
    data_matrix,
    spectrum_invariant,
    verify_certificate,
)
from qbirkhoff.catalog import diagonal_pair_family, spin_triple_family
from qbirkhoff.numerics import NumericalFailure, dagger, max_abs

import helpers


def test_diagonal_pair_data_matrix_frozen():
    dm = data_matrix(diagonal_pair_family())
    expect = np.array([[0.5, (1 - 1j) / 8], [(1 + 1j) / 8, 0.5]])
    assert max_abs(dm.matrix - expect) < 1e-12
    assert abs(np.trace(dm.matrix) - 1.0) < 1e-12


def test_data_matrix_trace_one_on_corpus(ds_corpus):
    for ch in ds_corpus[:8]:
        dm = data_matrix(ch)
        assert abs(np.trace(dm.matrix) - 1.0) < 1e-10
        vals = spectrum_invariant(dm)
        assert vals[-1] > -1e-10  # PSD


def test_data_matrix_with_custom_state(rng):
    fam = diagonal_pair_family()
    rho = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    dm = data_matrix(fam, state=rho)
    direct = np.array(
        [
            [np.trace(rho @ a @ dagger(b)) for b in fam.ops]
            for a in fam.ops
        ]
    )
    assert max_abs(dm.matrix - direct) < 1e-12
    with pytest.raises(ValueError):
        data_matrix(fam, state=np.diag([0.9, 0.3, -0.1, -0.1]))
    with pytest.raises(ValueError):
        data_matrix(fam, state=np.diag([1.0, 1.0, 0.0, 0.0]))


def test_trivial_certificate():
    ch = diagonal_pair_family()
    cert = ConjugacyCertificate(u=np.eye(4), g=np.eye(2), w=np.eye(4))
    assert verify_certificate(ch, ch, cert)


def test_antiunitary_certificate_against_adjoint_family():
    fam = diagonal_pair_family()
    adjoint = KrausFamily.from_ops([dagger(v) for v in fam.ops])
    cert = ConjugacyCertificate(
        u=np.eye(4), g=np.eye(2), w=np.eye(4), antiunitary=True
    )
    assert verify_certificate(fam, adjoint, cert)
    # and the invariant agrees, as it must for any verified certificate
    s1 = spectrum_invariant(data_matrix(fam))
    s2 = spectrum_invariant(data_matrix(adjoint))
    assert max_abs(s1 - s2) < 1e-9


def test_unitary_rotation_certificate(rng):
    for n in (2, 3):
        ch = helpers.random_ds_channel(n, rng)
        q = helpers.haar_unitary(n, rng)
        rotated = KrausFamily.from_ops([q @ v @ dagger(q) for v in ch.kraus.ops])
        d = ch.kraus.index
        cert = ConjugacyCertificate(u=q, g=np.eye(d), w=np.eye(n))
        assert verify_certificate(ch.kraus, rotated, cert)
        s1 = spectrum_invariant(data_matrix(ch.kraus))
        s2 = spectrum_invariant(data_matrix(rotated))
        assert max_abs(s1 - s2) < 1e-9


def test_wrong_certificate_rejected(rng):
    ch = helpers.random_ds_channel(2, rng)
    q = helpers.haar_unitary(2, rng)
    rotated = KrausFamily.from_ops([q @ v @ dagger(q) for v in ch.kraus.ops])
    bad = ConjugacyCertificate(
        u=helpers.haar_unitary(2, rng), g=np.eye(ch.kraus.index), w=np.eye(2)
    )
    assert not verify_certificate(ch.kraus, rotated, bad)


def test_conjugate_data_test_finds_g(rng):
    ch = helpers.random_ds_channel(3, rng)
    q = helpers.haar_unitary(3, rng)
    rotated = KrausFamily.from_ops([q @ v @ dagger(q) for v in ch.kraus.ops])
    da, db = data_matrix(ch.kraus), data_matrix(rotated)
    g = conjugate_data_test(da, db)
    assert g is not None
    assert max_abs(g @ da.matrix @ dagger(g) - db.matrix) < 1e-7


def test_conjugate_data_test_rejects_different_spectra(rng):
    a = data_matrix(helpers.random_ds_channel(3, rng))
    b = data_matrix(helpers.random_ds_channel(3, rng))
    # two independent random channels essentially never share a spectrum
    assert conjugate_data_test(a, b) is None


def test_block_projection_identity():
    p, is_proj = choi_block_projection(KrausFamily.from_ops([np.eye(2)]))
    assert is_proj
    assert max_abs(p - np.eye(2)) < 1e-12


def test_block_projection_diagonal_pair():
    p, is_proj = choi_block_projection(diagonal_pair_family())
    assert is_proj and p.shape == (8, 8)
    assert max_abs(p @ p - p) < 1e-12
    assert max_abs(p - dagger(p)) < 1e-12
    assert abs(np.trace(p).real - 4) < 1e-12  # rank n = 4


def test_block_projection_fails_off_the_class():
    # unital but not trace-preserving: idempotency genuinely breaks
    v1 = np.array([[1, 0], [0, np.sqrt(0.5)]], dtype=complex)
    v2 = np.array([[0, 0], [np.sqrt(0.5), 0]], dtype=complex)
    fam = KrausFamily.from_ops([v1, v2])
    unital, tp = fam.validate()
    assert unital and not tp
    p, is_proj = choi_block_projection(fam)
    assert not is_proj
    assert max_abs(p @ p - p) > 1e-6


def test_block_projection_trace_preserving_boundary():
    # P² = P needs only Σ v_i* v_i = I, so a trace-preserving family that is
    # not unital still yields an exact idempotent; the doubly stochastic flag
    # is the stronger classifier and stays false here.
    v1 = np.array([[1, 0], [0, np.sqrt(0.5)]], dtype=complex)
    v2 = np.array([[0, np.sqrt(0.5)], [0, 0]], dtype=complex)
    fam = KrausFamily.from_ops([v1, v2])
    unital, tp = fam.validate()
    assert tp and not unital
    p, is_proj = choi_block_projection(fam)
    assert not is_proj
    assert max_abs(p @ p - p) < 1e-12


def test_intertwiner_trivial():
    fam = diagonal_pair_family()
    w, u = choi_block_intertwiner(fam, fam)
    assert max_abs(w - np.eye(8)) < 1e-9
    assert max_abs(u - np.eye(4)) < 1e-9


def test_intertwiner_between_random_pairs(rng):
    # the (u, W) action is transitive: any two doubly stochastic families of
    # equal dimension and index admit a verified intertwining pair
    for n in (2, 3):
        a = helpers.random_ds_channel(n, rng)
        b = helpers.random_ds_channel(n, rng)
        if a.kraus.index != b.kraus.index:
            continue
        w, u = choi_block_intertwiner(a.kraus, b.kraus)
        nd = n * a.kraus.index
        assert max_abs(w @ dagger(w) - np.eye(nd)) < 1e-7
        assert max_abs(u @ dagger(u) - np.eye(n)) < 1e-7
        pa, _ = choi_block_projection(a.kraus)
        pb, _ = choi_block_projection(b.kraus)
        assert max_abs(dagger(w) @ pa @ w - pb) < 1e-7
        # defining relation: u l_j* = Σ_k v_k* W_kj
        for j in range(b.kraus.index):
            rhs = sum(
                dagger(a.kraus.ops[k]) @ w[k * n : (k + 1) * n, j * n : (j + 1) * n]
                for k in range(a.kraus.index)
            )
            assert max_abs(u @ dagger(b.kraus.ops[j]) - rhs) < 1e-7


def test_intertwiner_requires_doubly_stochastic():
    v1 = np.array([[1, 0], [0, np.sqrt(0.5)]], dtype=complex)
    v2 = np.array([[0, np.sqrt(0.5)], [0, 0]], dtype=complex)
    bad = KrausFamily.from_ops([v1, v2])
    with pytest.raises(ValueError):
        choi_block_intertwiner(bad, bad)


def test_conjugate_channel_spin_triple():
    fam = spin_triple_family()
    conj = conjugate_channel(fam)
    signs = (1.0, -1.0, 1.0)  # conjugation fixes l_x, l_z and negates l_y
    for sign, a, b in zip(signs, fam.ops, conj.kraus.ops):
        assert max_abs(b - sign * a) < 1e-12
    assert conj.unital and conj.trace_preserving


def test_conjugate_channel_diagonal_pair():
    fam = diagonal_pair_family()
    conj = conjugate_channel(fam)
    for a, b in zip(fam.ops, conj.kraus.ops):
        assert max_abs(b - dagger(a)) < 1e-12  # diagonal: conjugate = adjoint


def test_dimension_mismatch_raises():
    with pytest.raises(ValueError):
        verify_certificate(
            KrausFamily.from_ops([np.eye(2)]),
            KrausFamily.from_ops([np.eye(3)]),
            ConjugacyCertificate(u=np.eye(2), g=np.eye(1), w=np.eye(2)),
        )
