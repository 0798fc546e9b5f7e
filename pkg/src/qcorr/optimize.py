"""Multi-start derivative-free minimization with deterministic seeding.

Every restart owns a substream derived from (seed, restart index), and the
reduction picks the minimal value with ties broken by the lowest restart
index, so results do not depend on execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Sequence

import numpy as np
import scipy.linalg

from . import backend
from .rng import RandomSource, haar_isometry, haar_unitary

POLISH_ROUNDS = 2
POLISH_STEP_SHRINK = 0.25


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 20
    max_iters: int = 2000
    value_tol: float = 1e-8
    step_tol: float = 1e-10
    seed: int = 0
    method: str = "simplex"  # or "adaptive-direct-search"

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.value_tol <= 0 or self.step_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.method not in ("simplex", "adaptive-direct-search"):
            raise ValueError(f"unknown method {self.method!r}")

    def with_seed(self, seed: int) -> "OptimizerConfig":
        return replace(self, seed=seed)


@dataclass(frozen=True)
class OptResult:
    """Outcome of a multi-start search; `value` is the reported quantity.

    `objective_value` is the raw minimized objective; quantities defined as
    an offset or sign flip of the objective keep the link explicit.
    """

    value: float
    params: Any
    restarts_run: int
    best_restart_index: int
    converged: bool
    objective_value: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        params = self.params.to_dict() if hasattr(self.params, "to_dict") else self.params
        return {
            "value": self.value,
            "converged": self.converged,
            "restarts_run": self.restarts_run,
            "best_restart_index": self.best_restart_index,
            "params": params,
        }


def multistart_minimize(
    objective: str,
    payload: tuple,
    starts: Sequence[np.ndarray],
    cfg: OptimizerConfig,
    init_step: float = 0.25,
    rounds: int = POLISH_ROUNDS,
):
    """Local search from every start; returns (value, x, index, converged).

    Each start is polished with `rounds` restarts of the simplex (the
    later rounds rebuild the simplex around the incumbent with a smaller
    step), which costs little and escapes collapsed simplexes.
    """
    best_value = np.inf
    best_x = None
    best_index = -1
    best_conv = False
    for idx, x0 in enumerate(starts):
        x = np.asarray(x0, dtype=np.float64).copy()
        value = None
        conv = False
        step = init_step
        for _ in range(max(rounds, 1)):
            new_value, x, _iters, conv = backend.minimize(
                objective,
                payload,
                x,
                method=cfg.method,
                max_iters=cfg.max_iters,
                value_tol=cfg.value_tol,
                step_tol=cfg.step_tol,
                init_step=step,
            )
            if value is not None and value - new_value <= cfg.value_tol:
                value = min(value, new_value)
                break
            value = new_value
            step *= POLISH_STEP_SHRINK
        if value < best_value:
            best_value = value
            best_x = x
            best_index = idx
            best_conv = conv
    return float(best_value), best_x, best_index, best_conv


# ---------------------------------------------------------------------------
# Parameter codecs.  decode_* live in the backends (they run in the hot
# loop); the inverse maps below run only when seeding starts.


def unitary_to_params(u: np.ndarray) -> np.ndarray:
    """Exact inverse of backend.decode_unitary: u = exp(iH) -> packed H.

    Uses a Schur decomposition so that degenerate unitaries (e.g. padded
    embeddings) still yield a Hermitian logarithm.
    """
    k = u.shape[0]
    t, z = scipy.linalg.schur(np.asarray(u, dtype=np.complex128), output="complex")
    theta = np.angle(np.diag(t))
    h = (z * theta) @ z.conj().T
    h = (h + h.conj().T) / 2.0
    x = np.empty(k * k, dtype=np.float64)
    x[:k] = h.diagonal().real
    idx = k
    for i in range(k):
        for j in range(i + 1, k):
            x[idx] = h[i, j].real
            x[idx + 1] = h[i, j].imag
            idx += 2
    return x


def isometry_to_params(v: np.ndarray) -> np.ndarray:
    """Pack an isometry column-major (real parts, then imaginary parts)."""
    flat = np.asarray(v, dtype=np.complex128).ravel(order="F")
    return np.concatenate([flat.real, flat.imag])


def complete_to_unitary(v: np.ndarray) -> np.ndarray:
    """Extend a k x d isometry to a k x k unitary deterministically."""
    k, d = v.shape
    cols = [v[:, i] for i in range(d)]
    for i in range(k):
        if len(cols) == k:
            break
        w = np.zeros(k, dtype=np.complex128)
        w[i] = 1.0
        for c in cols:
            w -= c * (c.conj() @ w)
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            cols.append(w / norm)
    if len(cols) != k:
        raise np.linalg.LinAlgError("failed to complete isometry to a unitary")
    return np.stack(cols, axis=1)


def unitary_starts(k: int, cfg: OptimizerConfig, substream: str) -> list[np.ndarray]:
    """Haar-random unitary parameter starts, one substream per restart."""
    rs = RandomSource(cfg.seed)
    return [
        unitary_to_params(haar_unitary(k, rs.generator(substream, i)))
        for i in range(cfg.restarts)
    ]


def isometry_starts(rows: int, cols: int, cfg: OptimizerConfig, substream: str) -> list[np.ndarray]:
    rs = RandomSource(cfg.seed)
    return [
        isometry_to_params(haar_isometry(cols, rows, rs.generator(substream, i)))
        for i in range(cfg.restarts)
    ]
