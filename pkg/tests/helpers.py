"""Shared fixtures-in-code and independent oracles used across the tests.

The oracles here deliberately avoid the library code paths they check:
Kronecker products via four nested loops, partial traces via explicit
index sums, entropies straight from hand-listed spectra, and discord via
a dense grid over projective qubit measurements.
"""

import numpy as np

import qcorr as q


def bell_pair(a="A", b="B"):
    amp = np.zeros(4, dtype=complex)
    amp[0] = amp[3] = 1 / np.sqrt(2)
    return q.PureState(q.qubits(a, b), amp)


def ghz():
    amp = np.zeros(8, dtype=complex)
    amp[0] = amp[7] = 1 / np.sqrt(2)
    return q.PureState(q.qubits("A", "B", "C"), amp)


def singlet_vec():
    return np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def werner(visibility=2 / 3, a="A", b="B"):
    """visibility * singlet + (1 - visibility) * I/4.

    The default visibility 2/3 gives singlet fraction 3/4, concurrence 1/2.
    """
    s = singlet_vec()
    mat = visibility * np.outer(s, s.conj()) + (1 - visibility) * np.eye(4) / 4
    return q.DensityOperator(q.qubits(a, b), mat)


def classically_correlated(a="A", b="B"):
    """(|00><00| + |11><11|) / 2."""
    return q.DensityOperator(q.qubits(a, b), np.diag([0.5, 0, 0, 0.5]).astype(complex))


def random_density(dim, gen, rank=None):
    """Mixed state from a Ginibre factor, optionally rank-limited."""
    rank = rank or dim
    g = gen.standard_normal((dim, rank)) + 1j * gen.standard_normal((dim, rank))
    mat = g @ g.conj().T
    return mat / np.trace(mat)


def random_qubit_density(gen, labels=("A",)):
    return q.DensityOperator(q.qubits(*labels), random_density(2, gen))


def haar_states(n, dims=(2, 2, 2), seed=7):
    rs = q.RandomSource(seed)
    names = [chr(ord("A") + i) for i in range(len(dims))]
    lay = q.SystemLayout(zip(names, dims))
    return [q.haar_random_pure(lay, rs.generator("test-state", i)) for i in range(n)]


# --- oracles -----------------------------------------------------------


def kron_oracle(a, b):
    """Four nested loops; checks np.kron-based tensor composition."""
    (ra, ca), (rb, cb) = a.shape, b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def partial_trace_oracle(rho, dims, keep):
    """Explicit index-summation partial trace over positional subsystems."""
    n = len(dims)
    keep = sorted(keep)
    traced = [i for i in range(n) if i not in keep]
    kd = int(np.prod([dims[i] for i in keep]))
    out = np.zeros((kd, kd), dtype=complex)

    def unravel(flat):
        idx = []
        for d in reversed(dims):
            idx.append(flat % d)
            flat //= d
        return list(reversed(idx))

    def ravel(idx, subset):
        flat = 0
        for i in subset:
            flat = flat * dims[i] + idx[i]
        return flat

    total = int(np.prod(dims))
    for r in range(total):
        ri = unravel(r)
        for c in range(total):
            ci = unravel(c)
            if all(ri[i] == ci[i] for i in traced):
                out[ravel(ri, keep), ravel(ci, keep)] += rho[r, c]
    return out


def entropy_oracle(probs):
    """-sum p log2 p from an explicit list, skipping zeros."""
    return float(-sum(p * np.log2(p) for p in probs if p > 0))


def projective_qubit_grid(steps=60):
    """Rank-1 projective qubit measurements on a (theta, phi) grid."""
    povms = []
    for theta in np.linspace(0.0, np.pi, steps):
        for phi in np.linspace(0.0, 2 * np.pi, 2 * steps, endpoint=False):
            v0 = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
            v1 = np.array([-np.exp(-1j * phi) * np.sin(theta / 2), np.cos(theta / 2)])
            povms.append(
                q.Povm(2, (np.outer(v0, v0.conj()), np.outer(v1, v1.conj())))
            )
    return povms


def grid_min_measured_entropy(rho, measured, other, steps=40):
    """Dense-grid minimum of the average post-measurement entropy."""
    best = np.inf
    for povm in projective_qubit_grid(steps):
        val = q.measured_conditional_entropy(rho, measured, other, povm)
        best = min(best, val)
    return best
