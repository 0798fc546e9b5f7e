"""numba-jitted kernels for the optimizer hot loops.

Objectives take (x, payload) with payload an opaque tuple, so the shared
Nelder-Mead / direct-search drivers can be compiled once per objective.
"""

import numpy as np
from numba import njit

from . import _optim_core

NAME = "numba"

_jit = njit(cache=True, nogil=True)


@_jit
def _entropy_bits(w):
    s = 0.0
    for i in range(w.size):
        wi = w[i]
        if wi > 1e-12:
            s -= wi * np.log2(wi)
    return s


@_jit
def decode_unitary(x, k):
    """K x K unitary exp(iH) from K**2 reals: diagonal first, then (re, im) pairs."""
    h = np.empty((k, k), np.complex128)
    for i in range(k):
        h[i, i] = complex(x[i], 0.0)
    idx = k
    for i in range(k):
        for j in range(i + 1, k):
            re = x[idx]
            im = x[idx + 1]
            idx += 2
            h[i, j] = complex(re, im)
            h[j, i] = complex(re, -im)
    w, v = np.linalg.eigh(h)
    phases = np.exp(1j * w)
    return (v * phases) @ np.conj(v).T


@_jit
def decode_isometry(x, rows, cols):
    """rows x cols isometry from 2*rows*cols reals via phase-fixed QR.

    Column-major packing, real parts first.  An already-isometric packed
    matrix decodes to itself, which makes warm starts exact.
    """
    m = np.empty((rows, cols), np.complex128)
    half = rows * cols
    for c in range(cols):
        for r in range(rows):
            m[r, c] = complex(x[c * rows + r], x[half + c * rows + r])
    q, rr = np.linalg.qr(m)
    for c in range(cols):
        d = rr[c, c]
        a = abs(d)
        ph = d / a if a > 1e-300 else 1.0 + 0.0j
        for r in range(rows):
            q[r, c] = q[r, c] * ph
    return q


@_jit
def povm_objective(x, payload):
    """Average post-measurement entropy sum_j p_j S(rho_{other|j}).

    payload = (rho_t, K): rho_t indexed [a, u, b, t] with the measured
    subsystem second; x parametrizes a K-outcome rank-1 POVM.
    """
    rho_t, k = payload
    d_o = rho_t.shape[0]
    d_m = rho_t.shape[1]
    u_mat = decode_unitary(x, k)
    cond = np.empty((d_o, d_o), np.complex128)
    total = 0.0
    for j in range(k):
        for a in range(d_o):
            for b in range(d_o):
                acc = 0.0 + 0.0j
                for u in range(d_m):
                    vu = u_mat[j, u]
                    for t in range(d_m):
                        acc += vu * np.conj(u_mat[j, t]) * rho_t[a, u, b, t]
                cond[a, b] = acc
        p = 0.0
        for a in range(d_o):
            p += cond[a, a].real
        if p < 1e-12:
            continue
        w = np.linalg.eigvalsh(cond / p)
        total += p * _entropy_bits(w)
    return total


@_jit
def eof_objective(x, payload):
    """Average branch marginal entropy of an m-member ensemble.

    payload = (psi_t, m): psi_t indexed [a, b, e] is the purification of a
    bipartite state with ancilla e; x parametrizes an m-outcome rank-1
    measurement on the ancilla.
    """
    psi_t, m = payload
    d_a = psi_t.shape[0]
    d_b = psi_t.shape[1]
    r = psi_t.shape[2]
    u_mat = decode_unitary(x, m)
    phi = np.empty((d_a, d_b), np.complex128)
    sigma = np.empty((d_b, d_b), np.complex128)
    total = 0.0
    for i in range(m):
        p = 0.0
        for a in range(d_a):
            for b in range(d_b):
                acc = 0.0 + 0.0j
                for e in range(r):
                    acc += u_mat[i, e] * psi_t[a, b, e]
                phi[a, b] = acc
                p += acc.real * acc.real + acc.imag * acc.imag
        if p < 1e-12:
            continue
        for b in range(d_b):
            for bp in range(d_b):
                acc = 0.0 + 0.0j
                for a in range(d_a):
                    acc += phi[a, b] * np.conj(phi[a, bp])
                sigma[b, bp] = acc / p
        w = np.linalg.eigvalsh(sigma)
        total += p * _entropy_bits(w)
    return total


@_jit
def ep_objective(x, payload):
    """S(A A') after steering the purifying ancilla into a d_A' x d_C' split.

    payload = (psi_t, d_ap, d_cp): psi_t indexed [a, c, e]; x packs the
    ancilla isometry (d_ap*d_cp) x r.
    """
    psi_t, d_ap, d_cp = payload
    d_a = psi_t.shape[0]
    d_c = psi_t.shape[1]
    r = psi_t.shape[2]
    big = d_ap * d_cp
    w_iso = decode_isometry(x, big, r)
    psi2 = psi_t.copy().reshape(d_a * d_c, r)
    psip = np.empty((d_a * d_c, big), np.complex128)
    for row in range(d_a * d_c):
        for ep in range(big):
            acc = 0.0 + 0.0j
            for e in range(r):
                acc += psi2[row, e] * w_iso[ep, e]
            psip[row, ep] = acc
    n_aa = d_a * d_ap
    rho = np.empty((n_aa, n_aa), np.complex128)
    for a in range(d_a):
        for ap in range(d_ap):
            for b in range(d_a):
                for bp in range(d_ap):
                    acc = 0.0 + 0.0j
                    for c in range(d_c):
                        for cp in range(d_cp):
                            acc += psip[a * d_c + c, ap * d_cp + cp] * np.conj(
                                psip[b * d_c + c, bp * d_cp + cp]
                            )
                    rho[a * d_ap + ap, b * d_ap + bp] = acc
    w = np.linalg.eigvalsh(rho)
    return _entropy_bits(w)


@_jit
def ci_objective(x, payload):
    """Negative coherent information after a channel on the sender.

    payload = (rho_t, d_out, d_env, s_receiver): rho_t indexed
    [s, r, t, q] sender-first; x packs the Stinespring isometry
    (d_out*d_env) x d_s.  Returns S(out, receiver) - S(receiver).
    """
    rho_t, d_out, d_env, s_receiver = payload
    d_s = rho_t.shape[0]
    d_r = rho_t.shape[1]
    v = decode_isometry(x, d_out * d_env, d_s)
    n = d_out * d_r
    rho = np.zeros((n, n), np.complex128)
    for o in range(d_out):
        for rr in range(d_r):
            for p in range(d_out):
                for q in range(d_r):
                    acc = 0.0 + 0.0j
                    for e in range(d_env):
                        for s in range(d_s):
                            ves = v[o * d_env + e, s]
                            for t in range(d_s):
                                acc += ves * rho_t[s, rr, t, q] * np.conj(v[p * d_env + e, t])
                    rho[o * d_r + rr, p * d_r + q] = acc
    w = np.linalg.eigvalsh(rho)
    return _entropy_bits(w) - s_receiver


# Compiled drivers; objectives are passed as jitted first-class functions
# (numba disk-caches each driver/objective specialization).
nelder_mead = njit(cache=True, nogil=True)(_optim_core.nelder_mead)
direct_search = njit(cache=True, nogil=True)(_optim_core.direct_search)

OBJECTIVES = {
    "povm": povm_objective,
    "eof": eof_objective,
    "ep": ep_objective,
    "ci": ci_objective,
}
