"""Pure-numpy fallback kernels, vectorized with einsum and stacked eigvalsh.

Signatures match the numba backend exactly; parity is covered by tests.
"""

import numpy as np

from . import _optim_core

NAME = "numpy"

_EPS = 1e-12


def _entropy_bits(w):
    w = np.where(w > _EPS, w, 1.0)
    return float(-(w * np.log2(w)).sum())


def decode_unitary(x, k):
    h = np.zeros((k, k), dtype=np.complex128)
    h[np.diag_indices(k)] = x[:k]
    iu = np.triu_indices(k, 1)
    off = x[k:].reshape(-1, 2)
    h[iu] = off[:, 0] + 1j * off[:, 1]
    h[(iu[1], iu[0])] = off[:, 0] - 1j * off[:, 1]
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def decode_isometry(x, rows, cols):
    half = rows * cols
    m = (x[:half] + 1j * x[half:]).reshape(cols, rows).T
    q, rr = np.linalg.qr(m)
    d = np.diag(rr).copy()
    a = np.abs(d)
    ph = np.where(a > 1e-300, d / np.where(a > 1e-300, a, 1.0), 1.0)
    return q * ph[np.newaxis, :]


def povm_objective(x, payload):
    rho_t, k = payload
    d_m = rho_t.shape[1]
    v = decode_unitary(x, k)[:, :d_m]
    cond = np.einsum("ju,aubt,jt->jab", v, rho_t, v.conj(), optimize=True)
    p = np.einsum("jaa->j", cond).real
    keep = p > _EPS
    if not keep.any():
        return 0.0
    w = np.linalg.eigvalsh(cond[keep] / p[keep, None, None])
    w = np.where(w > _EPS, w, 1.0)
    return float(-(p[keep, None] * w * np.log2(w)).sum())


def eof_objective(x, payload):
    psi_t, m = payload
    r = psi_t.shape[2]
    v = decode_unitary(x, m)[:, :r]
    phi = np.einsum("ie,abe->iab", v, psi_t, optimize=True)
    p = np.einsum("iab,iab->i", phi, phi.conj()).real
    keep = p > _EPS
    if not keep.any():
        return 0.0
    sigma = np.einsum("iab,iac->ibc", phi[keep], phi[keep].conj(), optimize=True)
    sigma /= p[keep, None, None]
    w = np.linalg.eigvalsh(sigma)
    w = np.where(w > _EPS, w, 1.0)
    return float(-(p[keep, None] * w * np.log2(w)).sum())


def ep_objective(x, payload):
    psi_t, d_ap, d_cp = payload
    d_a, d_c, r = psi_t.shape
    w_iso = decode_isometry(x, d_ap * d_cp, r)
    psip = np.einsum("ace,fe->acf", psi_t, w_iso, optimize=True)
    psip = psip.reshape(d_a, d_c, d_ap, d_cp)
    rho = np.einsum("acpg,bcqg->apbq", psip, psip.conj(), optimize=True)
    n = d_a * d_ap
    return _entropy_bits(np.linalg.eigvalsh(rho.reshape(n, n)))


def ci_objective(x, payload):
    rho_t, d_out, d_env, s_receiver = payload
    d_s = rho_t.shape[0]
    v = decode_isometry(x, d_out * d_env, d_s).reshape(d_out, d_env, d_s)
    rho = np.einsum("oes,srtq,pet->orpq", v, rho_t, v.conj(), optimize=True)
    n = d_out * rho_t.shape[1]
    return _entropy_bits(np.linalg.eigvalsh(rho.reshape(n, n))) - s_receiver


nelder_mead = _optim_core.nelder_mead
direct_search = _optim_core.direct_search

OBJECTIVES = {
    "povm": povm_objective,
    "eof": eof_objective,
    "ep": ep_objective,
    "ci": ci_objective,
}
