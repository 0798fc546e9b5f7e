"""Operational correlation quantities on pure tripartite states.

For a pure state on parties A, B, C:

* total merging cost  G(A>B) = E_F(A:B) + S(A|B)  (state preparation plus
  merging, in ebits);
* discord closed form D(A|C) = E_F(A:B) + S(A|B), exact whenever the AB
  marginal is two-qubit (Koashi-Winter monogamy route), so discord and the
  merging cost can be cross-checked through independent code paths;
* dense-coding advantage  Ddc(A>B) = max over channels on A of the
  coherent information of the pre-processed state, a lower bound reported
  per output dimension;
* the monogamy residuals S(B) - E_F(A:B) - I(B:C_c)  and
  S(A) - E_P(A:C) - Ddc(B>A).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .entanglement import ep_sweep, eof_auto, eof_two_qubit
from .entropy import subsystem_entropy, von_neumann_entropy
from .errors import DimensionError, InvalidState, RouteUnavailable, UnknownLabel
from .measurements import classical_correlation, discord
from .optimize import (
    OptimizerConfig,
    OptResult,
    isometry_starts,
    isometry_to_params,
    multistart_minimize,
)
from .states import DensityOperator, PureState, QuantumChannel, partial_trace

ROLES = ("A", "B", "C")


@dataclass(frozen=True)
class TripartiteRoles:
    """A pure three-party state with an explicit {A, B, C} -> label map."""

    state: PureState
    roles: Mapping[str, str]

    def __init__(self, state: PureState, roles: Mapping[str, str] | None = None):
        if len(state.layout.parts) != 3:
            raise DimensionError(f"need exactly three parties, got {state.layout.labels}")
        if roles is None:
            roles = dict(zip(ROLES, state.layout.labels))
        roles = {str(k): str(v) for k, v in roles.items()}
        if sorted(roles) != sorted(ROLES):
            raise InvalidState(f"roles must map exactly A, B, C; got {sorted(roles)}")
        if sorted(roles.values()) != sorted(state.layout.labels):
            raise InvalidState(
                f"roles must hit every label of {state.layout.labels}, got {roles}"
            )
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "roles", dict(roles))

    def label(self, role: str) -> str:
        try:
            return self.roles[role]
        except KeyError:
            raise UnknownLabel(f"role {role!r} is not one of {ROLES}") from None

    def third(self, *used: str) -> str:
        rest = [r for r in ROLES if r not in used]
        if len(rest) != 1:
            raise UnknownLabel(f"roles {used} do not single out a third party")
        return rest[0]

    def entropy(self, role: str) -> float:
        return subsystem_entropy(self.state, [self.label(role)])

    def pair_marginal(self, first: str, second: str) -> DensityOperator:
        labs = (self.label(first), self.label(second))
        return partial_trace(self.state.density(), labs).permuted(labs)


@dataclass(frozen=True)
class ChannelParams:
    """Packed Stinespring isometry d_in -> d_out x d_env."""

    d_in: int
    d_out: int
    d_env: int
    values: np.ndarray = field(repr=False)

    def isometry(self) -> np.ndarray:
        from . import backend

        return backend.decode_isometry(self.values, self.d_out * self.d_env, self.d_in)

    def channel(self) -> QuantumChannel:
        return QuantumChannel.from_stinespring(self.isometry(), self.d_out, self.d_env)

    def to_dict(self) -> dict:
        return {
            "kind": "channel",
            "d_in": self.d_in,
            "d_out": self.d_out,
            "d_env": self.d_env,
            "values": self.values.tolist(),
        }


@dataclass(frozen=True)
class EsmCost:
    """Total merging cost with the route used for the formation term."""

    value: float
    eof_value: float
    conditional_value: float
    eof_route: str


def esm_total_cost(
    t: TripartiteRoles, sender: str, receiver: str, cfg: OptimizerConfig | None = None
) -> EsmCost:
    """G(sender>receiver) = E_F + S(sender|receiver) on the pair marginal."""
    rho = t.pair_marginal(sender, receiver)
    eof_value, route = eof_auto(rho, cfg)
    cond = von_neumann_entropy(rho) - subsystem_entropy(rho, [t.label(receiver)])
    return EsmCost(eof_value + cond, eof_value, cond, route)


def discord_koashi_winter(t: TripartiteRoles, measured: str, kept: str) -> float:
    """Exact D(kept|measured) via the complementary pair: E_F + S(kept|third).

    Valid because the global state is pure; requires the (kept, third)
    marginal to be two-qubit so the formation term has a closed form.
    """
    third = t.third(measured, kept)
    rho = t.pair_marginal(kept, third)
    if rho.layout.dims != (2, 2):
        raise RouteUnavailable(
            f"(kept, third) marginal has dims {rho.layout.dims}; closed form needs (2, 2)"
        )
    cond = von_neumann_entropy(rho) - subsystem_entropy(rho, [t.label(third)])
    return eof_two_qubit(rho) + cond


def discord_variational(
    t: TripartiteRoles,
    measured: str,
    kept: str,
    outcomes: int | None = None,
    cfg: OptimizerConfig | None = None,
) -> OptResult:
    """Direct POVM-optimized D(kept|measured) on the pair marginal."""
    rho = t.pair_marginal(kept, measured)
    return discord(rho, t.label(measured), outcomes=outcomes, cfg=cfg)


def discord_asymmetry(
    t: TripartiteRoles,
    route: str = "closed",
    outcomes: int | None = None,
    cfg: OptimizerConfig | None = None,
) -> tuple[float, float]:
    """(D(A|C) - D(C|A), G(A>B) - G(C>B)) via independent routes."""
    if route == "closed":
        left = discord_koashi_winter(t, "C", "A") - discord_koashi_winter(t, "A", "C")
    elif route == "variational":
        left = (
            discord_variational(t, "C", "A", outcomes, cfg).value
            - discord_variational(t, "A", "C", outcomes, cfg).value
        )
    else:
        raise ValueError(f"route must be closed or variational, got {route!r}")
    right = esm_total_cost(t, "A", "B").value - esm_total_cost(t, "C", "B").value
    return left, right


def _identity_start(d_s: int, d_out: int, d_env: int) -> np.ndarray:
    v = np.zeros((d_out * d_env, d_s), dtype=np.complex128)
    for i in range(d_s):
        v[i * d_env, i] = 1.0
    return isometry_to_params(v)


def _discard_start(d_s: int, d_out: int, d_env: int) -> np.ndarray:
    v = np.zeros((d_out * d_env, d_s), dtype=np.complex128)
    for i in range(d_s):
        v[i, i] = 1.0
    return isometry_to_params(v)


def dense_coding_advantage(
    rho: DensityOperator,
    sender: str,
    receiver: str,
    d_out: int | None = None,
    cfg: OptimizerConfig | None = None,
    d_env: int | None = None,
    warm_isometries: tuple[np.ndarray, ...] = (),
) -> OptResult:
    """Best coherent information over channels on the sender (fixed d_out).

    The start set always contains the discard channel (value 0) and, when
    d_out >= dim(sender), the identity channel (value I(sender>receiver)),
    so the result is never below max(0, I(sender>receiver)) and is a lower
    bound on the true advantage at this output dimension.
    """
    cfg = cfg or OptimizerConfig()
    keep = {sender, receiver}
    missing = keep - set(rho.layout.labels)
    if missing:
        raise UnknownLabel(f"labels {sorted(missing)} not in {rho.layout.labels}")
    if keep != set(rho.layout.labels):
        rho = partial_trace(rho, keep)
    rho = rho.permuted((sender, receiver))
    d_s, d_r = rho.layout.dims
    d_out = d_s if d_out is None else int(d_out)
    if not 1 <= d_out <= d_s * d_s:
        raise DimensionError(f"d_out must lie in [1, {d_s ** 2}], got {d_out}")
    d_env = d_s * d_out if d_env is None else int(d_env)
    s_recv = subsystem_entropy(rho, [receiver])
    rho_t = np.ascontiguousarray(rho.matrix.reshape(d_s, d_r, d_s, d_r))

    starts = [_discard_start(d_s, d_out, d_env)]
    if d_out >= d_s:
        starts.insert(0, _identity_start(d_s, d_out, d_env))
    starts += list(warm_isometries)
    starts += isometry_starts(d_out * d_env, d_s, cfg, "dc-restart")

    payload = (rho_t, d_out, d_env, float(s_recv))
    best_f, x, index, conv = multistart_minimize("ci", payload, starts, cfg)
    return OptResult(
        value=-best_f,
        params=ChannelParams(d_s, d_out, d_env, x),
        restarts_run=len(starts),
        best_restart_index=index,
        converged=conv,
        objective_value=best_f,
        extra={"receiver_entropy": s_recv, "d_out": d_out, "d_env": d_env},
    )


def embed_channel_isometry(
    v: np.ndarray, old: tuple[int, int], new: tuple[int, int]
) -> np.ndarray:
    """Zero-pad a Stinespring isometry into larger (d_out, d_env) spaces."""
    (o1, e1), (o2, e2) = old, new
    if o2 < o1 or e2 < e1:
        raise DimensionError(f"target {new} does not contain {old}")
    out = np.zeros((o2 * e2, v.shape[1]), dtype=np.complex128)
    for o in range(o1):
        for e in range(e1):
            out[o * e2 + e] = v[o * e1 + e]
    return out


def dc_advantage_sweep(
    rho: DensityOperator,
    sender: str,
    receiver: str,
    d_outs: Iterable[int],
    cfg: OptimizerConfig | None = None,
):
    """Advantage over an output-dimension sweep; returns (best, per-d_out).

    Later runs are warm-started with the embedded best isometry of every
    smaller d_out, making the sweep monotone nondecreasing up to solver
    tolerance.
    """
    cfg = cfg or OptimizerConfig()
    results: dict[int, OptResult] = {}
    best = None
    for d_out in sorted(set(int(d) for d in d_outs)):
        warm = []
        for prev_out, prev in results.items():
            params = prev.params
            if d_out >= prev_out:
                v_new = embed_channel_isometry(
                    params.isometry(),
                    (params.d_out, params.d_env),
                    (d_out, params.d_in * d_out),
                )
                warm.append(isometry_to_params(v_new))
        res = dense_coding_advantage(
            rho, sender, receiver, d_out, cfg, warm_isometries=tuple(warm)
        )
        results[d_out] = res
        if best is None or res.value > best.value:
            best = res
    return best, results


def dc_capacity(
    rho: DensityOperator,
    sender: str,
    receiver: str,
    d_out: int,
    cfg: OptimizerConfig | None = None,
) -> float:
    """log2(d_out) + advantage at that output dimension (bits per use)."""
    adv = dense_coding_advantage(rho, sender, receiver, d_out, cfg)
    return float(np.log2(d_out) + adv.value)


@dataclass(frozen=True)
class DcDiscordDifference:
    """Both sides of the discord/dense-coding difference plus the exact shortcut."""

    lhs: float
    dc_difference: float
    shortcut: float
    advantage_to_a: dict
    advantage_to_b: dict


def dc_discord_difference(
    t: TripartiteRoles,
    d_outs: Iterable[int] | None = None,
    cfg: OptimizerConfig | None = None,
) -> DcDiscordDifference:
    """D(A|C) - D(B|C) vs Ddc(C>A) - Ddc(C>B), with the S(A) - S(B) shortcut.

    Both receivers see the same d_out sweep (the identity needs equal
    output dimensions, large enough for the advantage to saturate).
    """
    cfg = cfg or OptimizerConfig()
    d_c = t.state.layout.dim_of(t.label("C"))
    d_outs = (d_c, d_c * d_c) if d_outs is None else tuple(d_outs)
    lhs = discord_koashi_winter(t, "C", "A") - discord_koashi_winter(t, "C", "B")
    shortcut = t.entropy("A") - t.entropy("B")
    best_a, per_a = dc_advantage_sweep(t.pair_marginal("C", "A"), t.label("C"), t.label("A"), d_outs, cfg)
    best_b, per_b = dc_advantage_sweep(t.pair_marginal("C", "B"), t.label("C"), t.label("B"), d_outs, cfg)
    return DcDiscordDifference(
        lhs=lhs,
        dc_difference=best_a.value - best_b.value,
        shortcut=shortcut,
        advantage_to_a={k: v.value for k, v in per_a.items()},
        advantage_to_b={k: v.value for k, v in per_b.items()},
    )


def koashi_winter_residual(
    t: TripartiteRoles,
    outcomes: int | None = None,
    cfg: OptimizerConfig | None = None,
) -> float:
    """|S(B) - E_F(A:B) - I(B:C_c)| on a pure tripartite state."""
    cfg = cfg or OptimizerConfig()
    s_b = t.entropy("B")
    ef, _route = eof_auto(t.pair_marginal("A", "B"), cfg)
    cc = classical_correlation(
        t.pair_marginal("B", "C"), t.label("C"), outcomes=outcomes, cfg=cfg
    ).value
    return float(abs(s_b - ef - cc))


@dataclass(frozen=True)
class HpResidual:
    """Monogamy residual S(A) - E_P(A:C) - Ddc(B>A) with its components."""

    residual: float
    signed: float
    s_a: float
    ep_value: float
    dc_value: float
    ep_per_split: dict
    dc_per_d_out: dict


def horodecki_piani_residual(
    t: TripartiteRoles,
    d_outs: Iterable[int] | None = None,
    splits: Iterable[tuple[int, int]] | None = None,
    cfg: OptimizerConfig | None = None,
    channel_cfg: OptimizerConfig | None = None,
) -> HpResidual:
    """S(A) vs E_P(A:C) + Ddc(B>A); E_P is upper-biased, the advantage
    lower-biased, so the signed residual can take either sign."""
    cfg = cfg or OptimizerConfig()
    s_a = t.entropy("A")
    rho_ac = t.pair_marginal("A", "C")
    rank = rho_ac.rank()
    if splits is None:
        splits = ((rank, rank), (rank, 2 * rank), (2 * rank, rank))
    ep_best, ep_all = ep_sweep(rho_ac, tuple(splits), cfg)
    d_b = t.state.layout.dim_of(t.label("B"))
    d_outs = (d_b, d_b * d_b) if d_outs is None else tuple(d_outs)
    dc_best, dc_all = dc_advantage_sweep(
        t.pair_marginal("B", "A"), t.label("B"), t.label("A"), d_outs, channel_cfg or cfg
    )
    signed = s_a - ep_best.value - dc_best.value
    return HpResidual(
        residual=abs(signed),
        signed=signed,
        s_a=s_a,
        ep_value=ep_best.value,
        dc_value=dc_best.value,
        ep_per_split={f"{a}x{c}": r.value for (a, c), r in ep_all.items()},
        dc_per_d_out={k: v.value for k, v in dc_all.items()},
    )
