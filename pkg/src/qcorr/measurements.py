"""Generalized measurements and measurement-optimized correlation measures.

Quantum discord D(A|B) = S(A|B_c) - S(A|B) and the Henderson-Vedral
classical correlation I(A:B_c) = S(A) - S(A|B_c), where S(A|B_c) is the
minimum over POVMs on B of the average conditional entropy of A.  The
minimization runs over rank-1 POVMs with K outcomes obtained as
N_j = V^dag |j><j| V from the first dim(B) columns of a K x K unitary;
K = dim(B) gives projective measurements, K up to dim(B)**2 covers the
extremal rank-1 POVMs.  The returned minimum is an upper bound on the
true S(A|B_c), hence the returned discord upper-bounds the true discord.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import backend
from .entropy import entropy_of_probs, subsystem_entropy, von_neumann_entropy
from .errors import DimensionError, InvalidState, OutcomeBudgetError, UnknownLabel
from .optimize import (
    OptimizerConfig,
    OptResult,
    complete_to_unitary,
    multistart_minimize,
    unitary_starts,
    unitary_to_params,
)
from .states import ATOL, DensityOperator, PROB_EPS


@dataclass(frozen=True)
class MeasurementParams:
    """K**2 reals packing a Hermitian H; the POVM comes from exp(iH)."""

    outcomes: int
    target_dim: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if self.outcomes < self.target_dim:
            raise OutcomeBudgetError(
                f"need at least {self.target_dim} outcomes, got {self.outcomes}"
            )
        if vals.size != self.outcomes**2:
            raise DimensionError(f"expected {self.outcomes ** 2} parameters, got {vals.size}")
        object.__setattr__(self, "values", vals)

    def unitary(self) -> np.ndarray:
        return backend.decode_unitary(self.values, self.outcomes)

    def to_dict(self) -> dict:
        return {
            "kind": "measurement",
            "outcomes": self.outcomes,
            "target_dim": self.target_dim,
            "values": self.values.tolist(),
        }


@dataclass(frozen=True)
class Povm:
    """Finite POVM on one subsystem; optionally carries its parametrization."""

    target_dim: int
    effects: tuple[np.ndarray, ...] = field(repr=False)
    params: MeasurementParams | None = None

    def __post_init__(self):
        effs = tuple(np.ascontiguousarray(e, dtype=np.complex128) for e in self.effects)
        if not effs:
            raise InvalidState("POVM needs at least one effect")
        d = self.target_dim
        acc = np.zeros((d, d), dtype=np.complex128)
        for e in effs:
            if e.shape != (d, d):
                raise DimensionError(f"effect shape {e.shape}, expected {(d, d)}")
            if np.abs(e - e.conj().T).max() > ATOL:
                raise InvalidState("effect is not Hermitian")
            if np.linalg.eigvalsh(e).min() < -ATOL:
                raise InvalidState("effect has a negative eigenvalue")
            acc += e
        if np.abs(acc - np.eye(d)).max() > ATOL:
            raise InvalidState("effects do not sum to the identity")
        object.__setattr__(self, "effects", effs)


def decode_params(p: MeasurementParams, target_dim: int) -> Povm:
    """Rank-<=1 effects V^dag |j><j| V from the isometry V = U[:, :d]."""
    if p.target_dim != target_dim:
        raise DimensionError(f"params target_dim {p.target_dim} != {target_dim}")
    v = p.unitary()[:, :target_dim]
    effects = tuple(np.outer(v[j].conj(), v[j]) for j in range(p.outcomes))
    return Povm(target_dim, effects, params=p)


def computational_povm(d: int) -> Povm:
    eye = np.eye(d, dtype=np.complex128)
    return Povm(d, tuple(np.outer(eye[j], eye[j]) for j in range(d)))


def projective_povm(u: np.ndarray) -> Povm:
    """Projectors onto the rows of a unitary (measurement in basis U^dag)."""
    d = u.shape[0]
    return Povm(d, tuple(np.outer(u[j].conj(), u[j]) for j in range(d)))


def _partition_tensor(rho: DensityOperator, measured: str, other: Iterable[str] | None):
    """Reorder to (other..., measured) and reshape to [a, u, b, t]."""
    labels = rho.layout.labels
    if measured not in labels:
        raise UnknownLabel(f"measured label {measured!r} not in {labels}")
    if other is None:
        other_t = tuple(lab for lab in labels if lab != measured)
    else:
        other_t = rho.layout.check_labels(other)
        if measured in other_t:
            raise UnknownLabel(f"measured label {measured!r} cannot be on both sides")
        if set(other_t) | {measured} != set(labels):
            raise UnknownLabel(
                "measured and other must partition the state labels; trace out the rest first"
            )
    perm = rho.permuted(list(other_t) + [measured])
    d_m = rho.layout.dim_of(measured)
    d_o = perm.layout.total_dim // d_m
    rho_t = np.ascontiguousarray(perm.matrix.reshape(d_o, d_m, d_o, d_m))
    return rho_t, other_t, d_o, d_m


def measured_conditional_entropy(
    rho: DensityOperator, measured: str, other: Iterable[str] | None, povm: Povm
) -> float:
    """sum_j p_j S(rho_{other|j}) for one fixed POVM on `measured`."""
    rho_t, _, _, d_m = _partition_tensor(rho, measured, other)
    if povm.target_dim != d_m:
        raise DimensionError(f"POVM acts on dim {povm.target_dim}, subsystem has dim {d_m}")
    total = 0.0
    for eff in povm.effects:
        cond = np.einsum("tu,aubt->ab", eff, rho_t)
        p = cond.trace().real
        if p < PROB_EPS:
            continue
        w = np.linalg.eigvalsh(cond / p)
        total += p * entropy_of_probs(np.clip(w, 0.0, None))
    return total


def _embedded_params(best: MeasurementParams, k_big: int) -> np.ndarray:
    """Lift a K-outcome POVM parametrization to K_big outcomes, padding with
    never-firing effects, so the larger search starts at the smaller optimum."""
    d = best.target_dim
    v_small = best.unitary()[:, :d]
    v_big = np.zeros((k_big, d), dtype=np.complex128)
    v_big[: best.outcomes] = v_small
    return unitary_to_params(complete_to_unitary(v_big))


def _minimized_measured_entropy(
    rho: DensityOperator,
    measured: str,
    other: Iterable[str] | None,
    outcomes: int | None,
    cfg: OptimizerConfig,
):
    rho_t, _, _, d_m = _partition_tensor(rho, measured, other)
    k = d_m if outcomes is None else int(outcomes)
    if not d_m <= k <= d_m * d_m:
        raise OutcomeBudgetError(f"outcomes must lie in [{d_m}, {d_m ** 2}], got {k}")
    starts = unitary_starts(k, cfg, "measurement-restart")
    if k > d_m:
        # Nested schedule: the larger-K search additionally starts from the
        # embedded optimum of the K = d_m run with the same seeds.
        inner = _minimized_measured_entropy(rho, measured, other, d_m, cfg)
        starts = starts + [_embedded_params(inner.params, k)]
    payload = (rho_t, k)
    value, x, index, conv = multistart_minimize("povm", payload, starts, cfg)
    params = MeasurementParams(k, d_m, x)
    return OptResult(
        value=value,
        params=params,
        restarts_run=len(starts),
        best_restart_index=index,
        converged=conv,
        objective_value=value,
    )


def discord(
    rho: DensityOperator,
    measured: str,
    other: Iterable[str] | None = None,
    outcomes: int | None = None,
    cfg: OptimizerConfig | None = None,
) -> OptResult:
    """Upper bound on D(other|measured); subsystems not listed are traced out."""
    cfg = cfg or OptimizerConfig()
    rho, other = _restrict(rho, measured, other)
    best = _minimized_measured_entropy(rho, measured, other, outcomes, cfg)
    s_cond = von_neumann_entropy(rho) - subsystem_entropy(rho, [measured])
    return OptResult(
        value=best.value - s_cond,
        params=best.params,
        restarts_run=best.restarts_run,
        best_restart_index=best.best_restart_index,
        converged=best.converged,
        objective_value=best.objective_value,
        extra={"measured_conditional_entropy": best.value, "conditional_entropy": s_cond},
    )


def classical_correlation(
    rho: DensityOperator,
    measured: str,
    other: Iterable[str] | None = None,
    outcomes: int | None = None,
    cfg: OptimizerConfig | None = None,
) -> OptResult:
    """Lower bound on I(other:measured_c) = S(other) - min S(other|measured_c)."""
    cfg = cfg or OptimizerConfig()
    rho, other = _restrict(rho, measured, other)
    best = _minimized_measured_entropy(rho, measured, other, outcomes, cfg)
    s_other = subsystem_entropy(rho, other)
    return OptResult(
        value=s_other - best.value,
        params=best.params,
        restarts_run=best.restarts_run,
        best_restart_index=best.best_restart_index,
        converged=best.converged,
        objective_value=best.objective_value,
        extra={"measured_conditional_entropy": best.value, "marginal_entropy": s_other},
    )


def _restrict(rho: DensityOperator, measured: str, other: Iterable[str] | None):
    """Trace out labels not involved in the (other, measured) pair."""
    from .states import partial_trace

    labels = rho.layout.labels
    if measured not in labels:
        raise UnknownLabel(f"measured label {measured!r} not in {labels}")
    if other is None:
        other_t = tuple(lab for lab in labels if lab != measured)
    else:
        other_t = rho.layout.check_labels(other)
    keep = set(other_t) | {measured}
    if keep != set(labels):
        rho = partial_trace(rho, keep)
    return rho, other_t
