"""Shared generators and independent oracles for the test suite.

Everything here deliberately avoids the library's own linear-algebra routes:
superoperators are rebuilt by applying the channel to matrix units, ranks are
recomputed from Gram matrices, and random doubly stochastic objects are
produced by explicit projection/mixture constructions.
"""

import numpy as np

from qbirkhoff import Channel, KrausFamily
from qbirkhoff.numerics import dagger, partial_trace, vec


def haar_unitary(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_ds_choi(n, rng, mix=0.35, max_rounds=50):
    """Random Choi matrix of a doubly stochastic channel on M_n.

    Starts from a Wishart matrix pulled toward the maximally mixed Choi
    (so the iterate stays interior), then alternates a PSD clip with an
    exact two-marginal correction until both partial traces are I.
    """
    m = rng.normal(size=(n * n, n * n)) + 1j * rng.normal(size=(n * n, n * n))
    w = m @ dagger(m)
    w *= n / np.trace(w).real
    c = (1.0 - mix) * w + mix * np.eye(n * n) / n
    c *= n / np.trace(c).real
    eye = np.eye(n)
    for _ in range(max_rounds):
        vals, vecs = np.linalg.eigh((c + dagger(c)) / 2)
        c = (vecs * np.clip(vals, 0.0, None)) @ dagger(vecs)
        c *= n / np.trace(c).real
        a = partial_trace(c, (n, n), "first")
        b = partial_trace(c, (n, n), "second")
        c = c + np.kron(eye, eye - a) / n + np.kron(eye - b, eye) / n
        a = partial_trace(c, (n, n), "first")
        b = partial_trace(c, (n, n), "second")
        marg = max(np.max(np.abs(a - eye)), np.max(np.abs(b - eye)))
        if marg < 1e-12 and np.linalg.eigvalsh((c + dagger(c)) / 2)[0] > -1e-12:
            return c
    raise RuntimeError("doubly stochastic projection did not converge")


def random_ds_channel(n, rng):
    return Channel.from_choi(random_ds_choi(n, rng))


def random_unitary_mixture(n, k, rng):
    """Channel Σ p_i u_i x u_i* — doubly stochastic, index k generically."""
    p = rng.dirichlet(np.ones(k))
    ops = [np.sqrt(p[i]) * haar_unitary(n, rng) for i in range(k)]
    return Channel.from_kraus(KrausFamily.from_ops(ops))


def random_ds_matrix(n, rng, k=None):
    """Doubly stochastic matrix as a Dirichlet mixture of random permutations."""
    k = k or n * n
    s = np.zeros((n, n))
    for w in rng.dirichlet(np.ones(k)):
        s[np.arange(n), rng.permutation(n)] += w
    return s


def sinkhorn_ds_matrix(n, rng, rounds=2000):
    """Strictly positive doubly stochastic matrix via Sinkhorn balancing."""
    s = rng.uniform(0.1, 1.0, size=(n, n))
    for _ in range(rounds):
        s /= s.sum(axis=1, keepdims=True)
        s /= s.sum(axis=0, keepdims=True)
        if max(np.max(np.abs(s.sum(axis=1) - 1)), np.max(np.abs(s.sum(axis=0) - 1))) < 1e-14:
            break
    return s


# --- independent oracles ---------------------------------------------------


def super_by_apply(ch):
    """Superoperator rebuilt column by column from the channel's action."""
    n = ch.dim
    cols = []
    for j in range(n):
        for i in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            cols.append(vec(ch.apply(e)))
    return np.column_stack(cols)


def _gram_rank(vectors, rel=1e-9):
    g = np.array([[np.vdot(a, b) for b in vectors] for a in vectors])
    vals = np.linalg.eigvalsh((g + dagger(g)) / 2)
    top = max(vals[-1], 0.0)
    if top == 0.0:
        return 0
    return int(np.sum(vals > rel * top))


def gram_product_rank(family):
    """Rank of span{v_i v_j*} from the Gram matrix (no SVD of stacked columns)."""
    ops = family.ops
    return _gram_rank([(a @ dagger(b)).ravel() for a in ops for b in ops])


def gram_stacked_rank(family):
    """Rank of span{v_i v_j* ⊕ v_j* v_i} from the Gram matrix."""
    ops = family.ops
    vecs = []
    for a in ops:
        for b in ops:
            vecs.append(np.concatenate([(a @ dagger(b)).ravel(), (dagger(b) @ a).ravel()]))
    return _gram_rank(vecs)


def apply_by_kraus(family, x):
    return sum(v @ x @ dagger(v) for v in family.ops)
