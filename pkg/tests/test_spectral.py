import numpy as np
import pytest

from qbirkhoff import (
    Channel,
    KrausFamily,
    classify,
    cyclic_projections,
    deperiodize,
    fixed_point_space,
    invariant_projection,
)
from qbirkhoff.catalog import (
    cycle_embed_channel,
    depolarizing_channel,
    identity_channel,
    swap_channel,
    weyl_mixture_channel,
    weyl_shift_clock_channel,
)
from qbirkhoff.numerics import dagger, max_abs, vec

import helpers


def test_identity_channel_is_maximally_non_ergodic():
    cl = classify(identity_channel())
    assert cl.fixed_dim == 4
    assert not cl.ergodic and not cl.strongly_mixing
    assert cl.period is None


def test_depolarizing_is_strongly_mixing():
    cl = classify(depolarizing_channel())
    assert cl.fixed_dim == 1 and cl.ergodic
    assert cl.period == 1 and cl.aperiodic and cl.strongly_mixing
    spectrum = np.sort(np.abs(cl.eigenvalues))
    assert abs(spectrum[-1] - 1.0) < 1e-9
    assert np.all(spectrum[:-1] < 1e-9)


def test_swap_channel_fixed_space():
    ch = swap_channel()
    cl = classify(ch)
    assert cl.fixed_dim == 2 and not cl.ergodic
    e = invariant_projection(ch)
    assert e is not None
    assert max_abs(e @ e - e) < 1e-9
    assert max_abs(e - dagger(e)) < 1e-9
    assert max_abs(ch.apply(e) - e) < 1e-9
    assert 0 < np.trace(e).real < ch.dim


def test_weyl_pair_period_three():
    cl = classify(weyl_shift_clock_channel(2))
    assert cl.fixed_dim == 1 and cl.ergodic
    assert cl.period == 3 and not cl.aperiodic and not cl.strongly_mixing
    theta = np.exp(2j * np.pi / 3)
    peripheral = sorted(np.round(cl.peripheral, 9).tolist(), key=lambda z: np.angle(z))
    expect = sorted([1.0, theta, theta**2], key=lambda z: np.angle(z))
    assert np.max(np.abs(np.array(peripheral) - np.array(expect))) < 1e-8


def test_weyl_mixture_is_strongly_mixing():
    cl = classify(weyl_mixture_channel(2, 0.5))
    assert cl.ergodic and cl.strongly_mixing and cl.period == 1


def test_spectral_radius_one_and_identity_fixed(ds_corpus):
    for ch in ds_corpus[:8]:
        t = ch.superoperator()
        eigs = np.linalg.eigvals(t)
        assert np.max(np.abs(eigs)) < 1.0 + 1e-8
        assert max_abs(t @ vec(np.eye(ch.dim)) - vec(np.eye(ch.dim))) < 1e-9


def test_fixed_space_is_star_algebra(ds_corpus):
    for ch in list(ds_corpus[:4]) + [swap_channel(), identity_channel()]:
        basis = fixed_point_space(ch)
        assert len(basis) == classify(ch).fixed_dim
        mat = np.column_stack([vec(b) for b in basis])
        proj = mat @ dagger(mat)
        for a in basis:
            for b in basis:
                prod = vec(a @ b)
                assert max_abs(proj @ prod - prod) < 1e-7 * max(1.0, max_abs(prod))
            adj = vec(dagger(a))
            assert max_abs(proj @ adj - adj) < 1e-7


def test_unitary_channel_peripheral_is_phase_differences(rng):
    phases = rng.uniform(0, 2 * np.pi, size=3)
    u = np.diag(np.exp(1j * phases))
    ch = Channel.from_kraus(KrausFamily.from_ops([u]))
    cl = classify(ch)
    expected = sorted(
        {round(float(np.angle(np.exp(1j * (a - b)))), 9) for a in phases for b in phases}
    )
    got = sorted({round(float(np.angle(z)), 9) for z in cl.peripheral})
    assert len(got) == len(expected)
    assert np.max(np.abs(np.array(got) - np.array(expected))) < 1e-6


def test_cyclic_family_weyl_pair():
    ch = weyl_shift_clock_channel(2)
    fam = cyclic_projections(ch)
    assert fam is not None and fam.period == 3
    check_cyclic_postconditions(ch, fam)


def test_cyclic_family_swap():
    ch = swap_channel()
    fam = cyclic_projections(ch)
    assert fam is not None and fam.period == 2
    check_cyclic_postconditions(ch, fam)
    # frozen: the coordinate projections cycle under the swap
    mats = sorted(fam.projections, key=lambda e: abs(e[0, 0]))
    assert max_abs(mats[0] - np.diag([0.0, 1.0])) < 1e-9
    assert max_abs(mats[1] - np.diag([1.0, 0.0])) < 1e-9


def check_cyclic_postconditions(ch, fam):
    p = fam.period
    total = sum(fam.projections)
    assert max_abs(total - np.eye(ch.dim)) < 1e-9
    for k, e in enumerate(fam.projections):
        assert max_abs(e @ e - e) < 1e-9
        assert max_abs(e - dagger(e)) < 1e-9
        nxt = fam.projections[(k + 1) % p]
        assert max_abs(ch.apply(e) - nxt) < 1e-9
        for j in range(k):
            assert max_abs(e @ fam.projections[j]) < 1e-9


def test_cyclic_projections_refuse_aperiodic():
    with pytest.raises(ValueError):
        cyclic_projections(depolarizing_channel())


def test_cycle_embed_deperiodizes():
    ch = cycle_embed_channel(3)
    cl = classify(ch)
    assert cl.ergodic and cl.period == 3
    fam = cyclic_projections(ch)
    assert fam is not None and fam.period == 3
    check_cyclic_postconditions(ch, fam)
    alpha, residual = deperiodize(ch, fam)
    assert max_abs(alpha @ dagger(alpha) - np.eye(3)) < 1e-9
    for e in fam.projections:
        assert max_abs(residual.apply(e) - e) < 1e-7
    rcl = classify(residual)
    assert not rcl.ergodic
    assert rcl.fixed_dim >= fam.period


def test_classify_consistency_on_corpus(ds_corpus):
    for ch in ds_corpus:
        cl = classify(ch)
        assert cl.fixed_dim >= 1
        if cl.strongly_mixing:
            assert cl.ergodic and len(cl.peripheral) == 1
        if cl.ergodic:
            assert cl.period is not None
            assert cl.aperiodic == (cl.period == 1)
        else:
            assert cl.period is None and not cl.strongly_mixing
