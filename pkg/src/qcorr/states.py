"""Finite-dimensional quantum states over labeled subsystems.

States address their parts by label, never by position, so role
permutations (who is A, who is B) cannot silently transpose indices.
Amplitudes and matrices are stored row-major over the parts in layout
order, complex double precision throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionError,
    InvalidState,
    LabelCollision,
    UnknownLabel,
)
from .rng import RandomSource, haar_isometry, haar_state_vector, haar_unitary

# Shared numerics policy: one tolerance for Hermiticity/trace/norm checks,
# one clamping threshold for spectra, one rank cutoff.
ATOL = 1e-9
RANK_TOL = 1e-9
PROB_EPS = 1e-12


@dataclass(frozen=True)
class SystemLayout:
    """Ordered labeled subsystems with local dimensions."""

    parts: tuple[tuple[str, int], ...]

    def __init__(self, parts: Iterable[tuple[str, int]]):
        parts = tuple((str(label), int(dim)) for label, dim in parts)
        labels = [p[0] for p in parts]
        if len(set(labels)) != len(labels):
            raise LabelCollision(f"duplicate labels in {labels}")
        if any(dim < 1 for _, dim in parts):
            raise DimensionError("every subsystem dimension must be >= 1")
        object.__setattr__(self, "parts", parts)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.parts)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.parts)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.parts else 1

    def axis(self, label: str) -> int:
        for i, (lab, _) in enumerate(self.parts):
            if lab == label:
                return i
        raise UnknownLabel(f"label {label!r} not in layout {self.labels}")

    def dim_of(self, label: str) -> int:
        return self.parts[self.axis(label)][1]

    def check_labels(self, labels: Iterable[str]) -> tuple[str, ...]:
        """Validate a label subset and return it in layout order."""
        wanted = set(labels)
        unknown = wanted - set(self.labels)
        if unknown:
            raise UnknownLabel(f"labels {sorted(unknown)} not in layout {self.labels}")
        return tuple(lab for lab in self.labels if lab in wanted)

    def subset(self, labels: Iterable[str]) -> "SystemLayout":
        ordered = self.check_labels(labels)
        return SystemLayout((lab, self.dim_of(lab)) for lab in ordered)

    def concat(self, other: "SystemLayout") -> "SystemLayout":
        clash = set(self.labels) & set(other.labels)
        if clash:
            raise LabelCollision(f"labels {sorted(clash)} present on both sides")
        return SystemLayout(self.parts + other.parts)

    def replace_dim(self, label: str, dim: int) -> "SystemLayout":
        ax = self.axis(label)
        parts = list(self.parts)
        parts[ax] = (label, int(dim))
        return SystemLayout(parts)


def layout(*parts: tuple[str, int]) -> SystemLayout:
    """Convenience constructor: layout(("A", 2), ("B", 2))."""
    return SystemLayout(parts)


def qubits(*labels: str) -> SystemLayout:
    return SystemLayout((lab, 2) for lab in labels)


@dataclass(frozen=True)
class PureState:
    """Normalized state vector over a layout."""

    layout: SystemLayout
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amp = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amp.shape != (self.layout.total_dim,):
            raise DimensionError(
                f"amplitude vector has length {amp.shape}, layout needs {self.layout.total_dim}"
            )
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > ATOL:
            raise InvalidState(f"state vector norm {norm} deviates from 1 by more than {ATOL}")
        object.__setattr__(self, "amplitudes", amp)

    def tensor_view(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.dims)

    def density(self) -> "DensityOperator":
        return DensityOperator(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()))

    def permuted(self, order: Sequence[str]) -> "PureState":
        ordered = tuple(order)
        if set(ordered) != set(self.layout.labels) or len(ordered) != len(self.layout.labels):
            raise UnknownLabel(f"order {ordered} is not a permutation of {self.layout.labels}")
        axes = [self.layout.axis(lab) for lab in ordered]
        amp = self.tensor_view().transpose(axes).reshape(-1)
        return PureState(SystemLayout((lab, self.layout.dim_of(lab)) for lab in ordered), amp)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian PSD unit-trace matrix over a layout."""

    layout: SystemLayout
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        d = self.layout.total_dim
        if mat.shape != (d, d):
            raise DimensionError(f"matrix shape {mat.shape} does not match layout dim {d}")
        herm_dev = np.abs(mat - mat.conj().T).max()
        if herm_dev > ATOL:
            raise InvalidState(f"matrix deviates from Hermitian by {herm_dev}")
        tr = mat.trace()
        if abs(tr - 1.0) > ATOL:
            raise InvalidState(f"trace {tr} deviates from 1 by more than {ATOL}")
        evals = np.linalg.eigvalsh(mat)
        if evals.min() < -ATOL:
            raise InvalidState(f"negative eigenvalue {evals.min()} below -{ATOL}")
        object.__setattr__(self, "matrix", mat)

    def tensor_view(self) -> np.ndarray:
        dims = self.layout.dims
        return self.matrix.reshape(dims + dims)

    def spectrum(self) -> np.ndarray:
        """Eigenvalues clamped to [0, inf) and renormalized to unit sum, descending."""
        return clamp_spectrum(np.linalg.eigvalsh(self.matrix))

    def rank(self, tol: float = RANK_TOL) -> int:
        return int(np.count_nonzero(np.linalg.eigvalsh(self.matrix) > tol))

    def permuted(self, order: Sequence[str]) -> "DensityOperator":
        ordered = tuple(order)
        if set(ordered) != set(self.layout.labels) or len(ordered) != len(self.layout.labels):
            raise UnknownLabel(f"order {ordered} is not a permutation of {self.layout.labels}")
        n = len(self.layout.parts)
        axes = [self.layout.axis(lab) for lab in ordered]
        t = self.tensor_view().transpose(axes + [a + n for a in axes])
        d = self.layout.total_dim
        lay = SystemLayout((lab, self.layout.dim_of(lab)) for lab in ordered)
        return DensityOperator(lay, t.reshape(d, d))


def clamp_spectrum(evals: np.ndarray) -> np.ndarray:
    """Clamp eigenvalues in [-ATOL, 0) to zero and renormalize to unit sum."""
    if evals.min() < -ATOL:
        raise InvalidState(f"eigenvalue {evals.min()} below the clamping window -{ATOL}")
    w = np.where(evals > 0.0, evals, 0.0)
    s = w.sum()
    if s <= 0.0:
        raise InvalidState("spectrum sums to zero")
    return np.sort(w / s)[::-1]


@dataclass(frozen=True)
class QuantumChannel:
    """Completely positive trace-preserving map as a Kraus list."""

    dim_in: int
    dim_out: int
    kraus: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        ops = tuple(np.ascontiguousarray(k, dtype=np.complex128) for k in self.kraus)
        if not ops:
            raise InvalidState("channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise DimensionError(
                    f"Kraus operator shape {k.shape}, expected {(self.dim_out, self.dim_in)}"
                )
        acc = sum(k.conj().T @ k for k in ops)
        dev = np.abs(acc - np.eye(self.dim_in)).max()
        if dev > ATOL:
            raise InvalidState(f"sum K^dag K deviates from identity by {dev}")
        object.__setattr__(self, "kraus", ops)

    def stinespring(self) -> np.ndarray:
        """Isometry V: dim_in -> dim_out (x) env, with env index = Kraus index.

        Row ordering is (output, env) row-major, so tracing out the env of
        V rho V^dag recovers the Kraus action.
        """
        n_env = len(self.kraus)
        v = np.zeros((self.dim_out * n_env, self.dim_in), dtype=np.complex128)
        for e, k in enumerate(self.kraus):
            v[e::n_env, :] = k
        return v

    @classmethod
    def from_stinespring(cls, v: np.ndarray, dim_out: int, dim_env: int) -> "QuantumChannel":
        v = np.asarray(v, dtype=np.complex128)
        if v.ndim != 2 or v.shape[0] != dim_out * dim_env:
            raise DimensionError(f"isometry shape {v.shape} incompatible with {dim_out}x{dim_env}")
        dim_in = v.shape[1]
        blocks = v.reshape(dim_out, dim_env, dim_in)
        return cls(dim_in, dim_out, tuple(blocks[:, e, :] for e in range(dim_env)))


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel(d, d, (np.eye(d, dtype=np.complex128),))


def replace_channel(dim_in: int, output_vector: np.ndarray) -> QuantumChannel:
    """Trace the input and prepare a fixed pure output state."""
    out = np.asarray(output_vector, dtype=np.complex128)
    out = out / np.linalg.norm(out)
    kraus = tuple(np.outer(out, np.eye(dim_in)[i]) for i in range(dim_in))
    return QuantumChannel(dim_in, out.size, kraus)


def tensor(a, b):
    """Kronecker composition of two states of the same kind."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        lay = a.layout.concat(b.layout)
        return PureState(lay, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        lay = a.layout.concat(b.layout)
        return DensityOperator(lay, np.kron(a.matrix, b.matrix))
    raise TypeError(f"cannot tensor {type(a).__name__} with {type(b).__name__}")


def partial_trace(rho: DensityOperator, keep: Iterable[str]) -> DensityOperator:
    """Trace out all subsystems not listed in `keep` (kept order preserved)."""
    kept = rho.layout.check_labels(keep)
    if not kept:
        raise UnknownLabel("keep set must be nonempty")
    if kept == rho.layout.labels:
        return rho
    n = len(rho.layout.parts)
    keep_axes = [rho.layout.axis(lab) for lab in kept]
    row_sub = list(range(n))
    col_sub = [n + i if i in keep_axes else i for i in range(n)]
    out_sub = keep_axes + [n + i for i in keep_axes]
    reduced = np.einsum(rho.tensor_view(), row_sub + col_sub, out_sub)
    lay = rho.layout.subset(kept)
    d = lay.total_dim
    return DensityOperator(lay, reduced.reshape(d, d))


def marginal(state, keep: Iterable[str]) -> DensityOperator:
    """Reduced density operator of a pure or mixed state."""
    if isinstance(state, PureState):
        return partial_trace(state.density(), keep)
    return partial_trace(state, keep)


def _fresh_ancilla_label(lay: SystemLayout) -> str:
    if "R" not in lay.labels:
        return "R"
    i = 1
    while f"R{i}" in lay.labels:
        i += 1
    return f"R{i}"


def purify(rho: DensityOperator) -> PureState:
    """Canonical purification sum_i sqrt(l_i) |e_i>|i>, ancilla dim = rank.

    Eigenvalues are sorted descending and each eigenvector's phase is fixed
    by making its first component of magnitude > RANK_TOL real positive, so
    the construction is deterministic.
    """
    evals, evecs = np.linalg.eigh(rho.matrix)
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    evecs = evecs[:, order]
    rank = int(np.count_nonzero(evals > RANK_TOL))
    rank = max(rank, 1)
    lam = np.clip(evals[:rank], 0.0, None)
    lam /= lam.sum()
    mat = np.zeros((rho.layout.total_dim, rank), dtype=np.complex128)
    for i in range(rank):
        v = evecs[:, i]
        nz = np.flatnonzero(np.abs(v) > RANK_TOL)
        if nz.size:
            ph = v[nz[0]] / abs(v[nz[0]])
            v = v * ph.conj()
        mat[:, i] = np.sqrt(lam[i]) * v
    lay = rho.layout.concat(SystemLayout(((_fresh_ancilla_label(rho.layout), rank),)))
    return PureState(lay, mat.reshape(-1))


def apply_channel(rho: DensityOperator, ch: QuantumChannel, target: str) -> DensityOperator:
    """Apply a channel to one subsystem: sum_k (K_k (x) I) rho (K_k (x) I)^dag."""
    ax = rho.layout.axis(target)
    if rho.layout.dim_of(target) != ch.dim_in:
        raise DimensionError(
            f"subsystem {target!r} has dim {rho.layout.dim_of(target)}, channel expects {ch.dim_in}"
        )
    labels = list(rho.layout.labels)
    front = [target] + [lab for lab in labels if lab != target]
    rt = rho.permuted(front)
    d_rest = rt.layout.total_dim // ch.dim_in
    t = rt.matrix.reshape(ch.dim_in, d_rest, ch.dim_in, d_rest)
    out = np.zeros((ch.dim_out, d_rest, ch.dim_out, d_rest), dtype=np.complex128)
    for k in ch.kraus:
        out += np.einsum("oi,irjs,pj->orps", k, t, k.conj())
    d_new = ch.dim_out * d_rest
    new_front = SystemLayout(
        [(target, ch.dim_out)] + [(lab, rho.layout.dim_of(lab)) for lab in front[1:]]
    )
    result = DensityOperator(new_front, out.reshape(d_new, d_new))
    restored = [lab for lab in labels]  # original order, target dim replaced
    return result.permuted(restored)


def haar_random_pure(lay: SystemLayout, rng: RandomSource | np.random.Generator) -> PureState:
    """Haar-random pure state on the layout; pure function of (layout, seed)."""
    gen = rng.generator("haar-pure") if isinstance(rng, RandomSource) else rng
    return PureState(lay, haar_state_vector(lay.total_dim, gen))


def haar_random_unitary(d: int, rng: RandomSource | np.random.Generator) -> np.ndarray:
    gen = rng.generator("haar-unitary") if isinstance(rng, RandomSource) else rng
    return haar_unitary(d, gen)


def random_isometry(d_in: int, d_out: int, rng: RandomSource | np.random.Generator) -> np.ndarray:
    if d_out < d_in:
        raise DimensionError(f"isometry needs d_out >= d_in, got {d_out} < {d_in}")
    gen = rng.generator("haar-isometry") if isinstance(rng, RandomSource) else rng
    return haar_isometry(d_in, d_out, gen)
