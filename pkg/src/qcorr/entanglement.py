"""Entanglement of formation and entanglement of purification.

Two-qubit E_F uses the concurrence closed form.  The general route
minimizes the average branch entropy over size-m pure-state ensembles,
generated by rank-1 measurements on the ancilla of the canonical
purification (every size-m ensemble of a state arises this way).  E_P
minimizes S(AA') over purifications with a d_A' x d_C' ancilla split,
parametrized by an isometry acting on the canonical purifying system.
Both optimized values are variational upper bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entropy import ProbDist, binary_entropy, subsystem_entropy
from .errors import DimensionError, EnsembleBudgetError, InvalidState, SplitBudgetError
from .optimize import (
    OptimizerConfig,
    OptResult,
    isometry_starts,
    isometry_to_params,
    multistart_minimize,
    unitary_starts,
)
from .measurements import MeasurementParams
from .states import DensityOperator, PROB_EPS, PureState, purify

_SIGMA_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=np.complex128
)


def _require_two_qubit(rho: DensityOperator):
    if rho.layout.dims != (2, 2):
        raise DimensionError(f"two-qubit operation on dims {rho.layout.dims}")


def concurrence(rho: DensityOperator) -> float:
    """Wootters concurrence max(0, l1-l2-l3-l4) of a two-qubit state."""
    _require_two_qubit(rho)
    m = rho.matrix
    r = m @ _SIGMA_YY @ m.conj() @ _SIGMA_YY
    ev = np.linalg.eigvals(r).real
    # spectrum is nonnegative in exact arithmetic; kill the noise floor
    # before the square root blows it up to sqrt(eps)
    ev = np.where(ev > ev.max(initial=0.0) * 1e-12, ev, 0.0)
    lam = np.sqrt(np.sort(ev)[::-1])
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def eof_two_qubit(rho: DensityOperator) -> float:
    """E_F = h((1 + sqrt(1 - C^2))/2) in ebits."""
    c = concurrence(rho)
    return binary_entropy((1.0 + np.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


@dataclass(frozen=True)
class EnsembleDecomposition:
    """Pure-state ensemble sum_i p_i |psi_i><psi_i| for a bipartite state."""

    probs: ProbDist
    states: tuple[PureState, ...]

    def average_state(self) -> DensityOperator:
        lay = self.states[0].layout
        acc = np.zeros((lay.total_dim, lay.total_dim), dtype=np.complex128)
        for p, psi in zip(self.probs.probs, self.states):
            acc += p * np.outer(psi.amplitudes, psi.amplitudes.conj())
        return DensityOperator(lay, acc)


def _purification_tensor(rho: DensityOperator):
    if len(rho.layout.parts) != 2:
        raise DimensionError(f"need a bipartite layout, got {rho.layout.labels}")
    psi = purify(rho)
    d_a, d_b = rho.layout.dims
    rank = psi.layout.dims[2]
    psi_t = np.ascontiguousarray(psi.amplitudes.reshape(d_a, d_b, rank))
    return psi_t, rank


def _decode_ensemble(rho: DensityOperator, params: MeasurementParams) -> EnsembleDecomposition:
    psi_t, rank = _purification_tensor(rho)
    v = params.unitary()[:, :rank]
    probs = []
    states = []
    for i in range(params.outcomes):
        phi = np.einsum("e,abe->ab", v[i], psi_t).reshape(-1)
        p = float(np.vdot(phi, phi).real)
        if p < PROB_EPS:
            continue
        probs.append(p)
        states.append(PureState(rho.layout, phi / np.sqrt(p)))
    dec = EnsembleDecomposition(ProbDist(np.array(probs)), tuple(states))
    dev = np.abs(dec.average_state().matrix - rho.matrix).max()
    if dev > 1e-8:
        raise InvalidState(f"decoded ensemble misses the target state by {dev}")
    return dec


def eof_ensemble(
    rho: DensityOperator,
    ensemble_size: int | None = None,
    cfg: OptimizerConfig | None = None,
) -> OptResult:
    """Variational E_F over size-m ensembles; upper-bounds the true E_F."""
    cfg = cfg or OptimizerConfig()
    psi_t, rank = _purification_tensor(rho)
    m = rank * rank if ensemble_size is None else int(ensemble_size)
    if not rank <= m <= rank * rank:
        raise EnsembleBudgetError(f"ensemble size must lie in [{rank}, {rank ** 2}], got {m}")
    starts = unitary_starts(m, cfg, "eof-restart")
    value, x, index, conv = multistart_minimize("eof", (psi_t, m), starts, cfg)
    params = MeasurementParams(m, rank, x)
    return OptResult(
        value=value,
        params=params,
        restarts_run=len(starts),
        best_restart_index=index,
        converged=conv,
        objective_value=value,
        extra={"decomposition": _decode_ensemble(rho, params), "ensemble_size": m},
    )


def eof_auto(rho: DensityOperator, cfg: OptimizerConfig | None = None):
    """(value, route): Wootters closed form when two-qubit, ensemble otherwise."""
    if rho.layout.dims == (2, 2):
        return eof_two_qubit(rho), "wootters"
    return eof_ensemble(rho, cfg=cfg).value, "ensemble"


@dataclass(frozen=True)
class PurificationSplit:
    """Ancilla isometry parameters for a purification with an A'C' split."""

    d_ap: int
    d_cp: int
    rank: int
    values: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "kind": "purification-split",
            "d_ap": self.d_ap,
            "d_cp": self.d_cp,
            "rank": self.rank,
            "values": self.values.tolist(),
        }


def _absorb_starts(rank: int, d_ap: int, d_cp: int) -> list[np.ndarray]:
    """Deterministic seeds steering the whole ancilla into one side.

    Sending the purifying system to A' evaluates to S(C); sending it to C'
    evaluates to S(A).  Including them caps the result at min(S(A), S(C)).
    """
    starts = []
    big = d_ap * d_cp
    if d_ap >= rank:
        w = np.zeros((big, rank), dtype=np.complex128)
        for e in range(rank):
            w[e * d_cp, e] = 1.0
        starts.append(isometry_to_params(w))
    if d_cp >= rank:
        w = np.zeros((big, rank), dtype=np.complex128)
        for e in range(rank):
            w[e, e] = 1.0
        starts.append(isometry_to_params(w))
    return starts


def embed_split_isometry(
    w: np.ndarray, old_split: tuple[int, int], new_split: tuple[int, int]
) -> np.ndarray:
    """Zero-pad an ancilla isometry into a larger split (value-preserving)."""
    (a1, c1), (a2, c2) = old_split, new_split
    if a2 < a1 or c2 < c1:
        raise DimensionError(f"split {new_split} does not contain {old_split}")
    out = np.zeros((a2 * c2, w.shape[1]), dtype=np.complex128)
    for ap in range(a1):
        for cp in range(c1):
            out[ap * c2 + cp] = w[ap * c1 + cp]
    return out


def entanglement_of_purification(
    rho: DensityOperator,
    split: tuple[int, int] | None = None,
    cfg: OptimizerConfig | None = None,
    warm_starts: tuple[np.ndarray, ...] = (),
) -> OptResult:
    """Variational E_P(A:C) for one ancilla split; first label plays A."""
    cfg = cfg or OptimizerConfig()
    psi_t, rank = _purification_tensor(rho)
    d_ap, d_cp = (rank, rank) if split is None else (int(split[0]), int(split[1]))
    if d_ap < 1 or d_cp < 1 or d_ap * d_cp < rank:
        raise SplitBudgetError(f"split {d_ap}x{d_cp} cannot hold a rank-{rank} ancilla")
    starts = list(warm_starts)
    starts += _absorb_starts(rank, d_ap, d_cp)
    starts += isometry_starts(d_ap * d_cp, rank, cfg, "ep-restart")
    payload = (psi_t, d_ap, d_cp)
    value, x, index, conv = multistart_minimize("ep", payload, starts, cfg)
    return OptResult(
        value=value,
        params=PurificationSplit(d_ap, d_cp, rank, x),
        restarts_run=len(starts),
        best_restart_index=index,
        converged=conv,
        objective_value=value,
        extra={"split": (d_ap, d_cp)},
    )


def ep_sweep(
    rho: DensityOperator,
    splits: tuple[tuple[int, int], ...],
    cfg: OptimizerConfig | None = None,
):
    """E_P over a split sweep with nested warm starts; returns (best, per-split).

    Each split is additionally seeded with the zero-padded best isometries
    of every smaller split already done, so enlarging the split can only
    lower the reported value (up to solver tolerance).
    """
    cfg = cfg or OptimizerConfig()
    results: dict[tuple[int, int], OptResult] = {}
    best = None
    for split in splits:
        warm = []
        for prev_split, prev in results.items():
            if split[0] >= prev_split[0] and split[1] >= prev_split[1]:
                w_prev = backend_decode_split(prev.params)
                warm.append(
                    isometry_to_params(embed_split_isometry(w_prev, prev_split, split))
                )
        res = entanglement_of_purification(rho, split, cfg, warm_starts=tuple(warm))
        results[tuple(split)] = res
        if best is None or res.value < best.value:
            best = res
    return best, results


def backend_decode_split(params: PurificationSplit) -> np.ndarray:
    from . import backend

    return backend.decode_isometry(params.values, params.d_ap * params.d_cp, params.rank)


def ep_lower_bound(rho: DensityOperator) -> float:
    """Known floor: E_P >= I(A:C)/2."""
    first = rho.layout.labels[0]
    second = rho.layout.labels[1]
    s_a = subsystem_entropy(rho, [first])
    s_c = subsystem_entropy(rho, [second])
    from .entropy import von_neumann_entropy

    return 0.5 * (s_a + s_c - von_neumann_entropy(rho))
