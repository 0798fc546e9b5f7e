"""Entropic functionals, all in bits (base-2 logarithms).

Conditional entropy, mutual information and coherent information act on a
`BipartiteSplit`, which carries the (first, second) role assignment
explicitly so that S(A|B) and S(B|A) cannot be confused.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DomainError, InvalidState
from .states import ATOL, DensityOperator, PROB_EPS, PureState, marginal


@dataclass(frozen=True)
class ProbDist:
    """Probability vector; entries in [-1e-12, 0) are clamped to zero."""

    probs: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64).reshape(-1)
        if p.size == 0:
            raise InvalidState("empty probability vector")
        if p.min() < -PROB_EPS:
            raise InvalidState(f"negative probability {p.min()}")
        p = np.where(p > 0.0, p, 0.0)
        if abs(p.sum() - 1.0) > ATOL:
            raise InvalidState(f"probabilities sum to {p.sum()}, expected 1")
        object.__setattr__(self, "probs", p)


@dataclass(frozen=True)
class BipartiteSplit:
    """A state with a disjoint cover of its labels into (first, second)."""

    state: DensityOperator
    first: frozenset[str]
    second: frozenset[str]

    def __init__(self, state, first: Iterable[str], second: Iterable[str] | None = None):
        if isinstance(state, PureState):
            state = state.density()
        first = frozenset(first)
        all_labels = frozenset(state.layout.labels)
        if second is None:
            second = all_labels - first
        second = frozenset(second)
        if first & second:
            raise InvalidState(f"sides overlap on {sorted(first & second)}")
        if first | second != all_labels:
            raise InvalidState("first and second must cover every label")
        if not first or not second:
            raise InvalidState("both sides must be nonempty")
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)


def entropy_of_probs(p: np.ndarray) -> float:
    """-sum p log2 p over entries above PROB_EPS (0 log 0 := 0)."""
    p = np.asarray(p, dtype=np.float64)
    nz = p[p > PROB_EPS]
    return float(-(nz * np.log2(nz)).sum()) if nz.size else 0.0


def shannon_entropy(p: ProbDist | np.ndarray) -> float:
    if not isinstance(p, ProbDist):
        p = ProbDist(np.asarray(p))
    return entropy_of_probs(p.probs)


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x) on [0, 1]."""
    if not -PROB_EPS <= x <= 1.0 + PROB_EPS:
        raise DomainError(f"binary entropy argument {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return entropy_of_probs(np.array([x, 1.0 - x]))


def von_neumann_entropy(rho: DensityOperator | PureState) -> float:
    """Shannon entropy of the clamped eigenvalue spectrum."""
    if isinstance(rho, PureState):
        return 0.0
    return entropy_of_probs(rho.spectrum())


def subsystem_entropy(state, labels: Iterable[str]) -> float:
    """Entropy of the reduced state on `labels`.

    Pure states use singular values of the reshaped amplitude matrix, which
    avoids forming the global density matrix.
    """
    if isinstance(state, PureState):
        kept = state.layout.check_labels(labels)
        if kept == state.layout.labels:
            return 0.0
        axes = [state.layout.axis(lab) for lab in kept]
        rest = [i for i in range(len(state.layout.parts)) if i not in axes]
        d_keep = int(np.prod([state.layout.dims[i] for i in axes], dtype=np.int64))
        m = state.tensor_view().transpose(axes + rest).reshape(d_keep, -1)
        s2 = np.linalg.svd(m, compute_uv=False) ** 2
        s2 = np.clip(s2, 0.0, None)
        s2 /= s2.sum()
        return entropy_of_probs(s2)
    return von_neumann_entropy(marginal(state, labels))


def conditional_entropy(split: BipartiteSplit) -> float:
    """S(first|second) = S(first second) - S(second); may be negative."""
    s_all = von_neumann_entropy(split.state)
    s_second = subsystem_entropy(split.state, split.second)
    return s_all - s_second


def mutual_information(split: BipartiteSplit) -> float:
    """S(first) + S(second) - S(first second)."""
    s_first = subsystem_entropy(split.state, split.first)
    return s_first - conditional_entropy(split)


def coherent_information(split: BipartiteSplit) -> float:
    """-S(first|second): positive only when the state is entangled."""
    return -conditional_entropy(split)
