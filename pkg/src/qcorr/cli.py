"""Command-line interface: compute, verify, sample.

stdout carries machine-readable output only (values, JSON, CSV); human
diagnostics go to stderr.  Exit codes: 0 success (verify: every sample
passed), 1 verification failures, 2 malformed state file, 3 dimension or
role errors, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (
    DimensionError,
    DomainError,
    EnsembleBudgetError,
    InvalidState,
    LabelCollision,
    OutcomeBudgetError,
    RouteUnavailable,
    SplitBudgetError,
    StateFormatError,
    UnknownLabel,
)
from .harness import (
    IDENTITIES,
    RunConfig,
    compute_quantity,
    report_csv,
    report_json,
    run_all,
    run_identity,
    sample_state,
)
from .stateio import load_state, save_state

EXIT_FAIL = 1
EXIT_BAD_STATE = 2
EXIT_BAD_DIMS = 3
EXIT_IO = 4

_DIM_ERRORS = (
    DimensionError,
    DomainError,
    EnsembleBudgetError,
    InvalidState,
    LabelCollision,
    OutcomeBudgetError,
    RouteUnavailable,
    SplitBudgetError,
    UnknownLabel,
)


def _parse_roles(text: str | None) -> dict | None:
    if not text:
        return None
    roles = {}
    for item in text.split(","):
        if "=" not in item:
            raise UnknownLabel(f"role assignment {item!r} is not ROLE=label")
        role, label = item.split("=", 1)
        roles[role.strip()] = label.strip()
    return roles


def _parse_dims(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _parse_int_list(text: str | None) -> tuple[int, ...] | None:
    if not text:
        return None
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _parse_splits(text: str | None):
    if not text:
        return None
    splits = []
    for item in text.split(";"):
        a, c = item.split("x")
        splits.append((int(a), int(c)))
    return tuple(splits)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcorr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="evaluate one quantity on a state file")
    p_compute.add_argument("--state", required=True, help="state JSON file")
    p_compute.add_argument("--quantity", required=True, help='e.g. "discord A|C"')
    p_compute.add_argument("--roles", help="role map, e.g. A=q0,B=q1,C=q2")
    p_compute.add_argument("--route", choices=["auto", "closed", "variational"], default="auto")
    p_compute.add_argument("--restarts", type=int, default=20)
    p_compute.add_argument("--max-iters", type=int, default=2000)
    p_compute.add_argument("--outcomes", type=int)
    p_compute.add_argument("--d-out", type=int)
    p_compute.add_argument("--seed", type=int, default=0)

    p_verify = sub.add_parser("verify", help="check an identity on random states")
    p_verify.add_argument("--identity", required=True, choices=IDENTITIES + ("all",))
    p_verify.add_argument("--dims", default="2,2,2")
    p_verify.add_argument("--samples", type=int, default=100)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--route", help="identity-specific route override")
    p_verify.add_argument("--restarts", type=int, default=20)
    p_verify.add_argument("--max-iters", type=int, default=2000)
    p_verify.add_argument("--outcomes", type=int)
    p_verify.add_argument("--d-out", dest="d_outs", help="comma-separated sweep, e.g. 2,4")
    p_verify.add_argument("--splits", help="ancilla splits, e.g. 2x2;2x4;4x2")
    p_verify.add_argument("--workers", type=int, default=1)
    p_verify.add_argument("--out", help="report path (stdout when omitted)")
    p_verify.add_argument("--format", choices=["json", "csv"], default="json")

    p_sample = sub.add_parser("sample", help="write Haar-random pure state files")
    p_sample.add_argument("--dims", default="2,2,2")
    p_sample.add_argument("--count", type=int, default=1)
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--out", required=True, help="output directory")
    return parser


def cmd_compute(args) -> int:
    state = load_state(args.state)
    result = compute_quantity(
        state,
        args.quantity,
        roles=_parse_roles(args.roles),
        outcomes=args.outcomes,
        restarts=args.restarts,
        max_iters=args.max_iters,
        d_out=args.d_out,
        seed=args.seed,
        route=None if args.route == "auto" else args.route,
    )
    print(repr(result["value"]))
    print(json.dumps(result, sort_keys=True))
    return 0


def cmd_verify(args) -> int:
    cfg = RunConfig(
        identity=args.identity,
        dims=_parse_dims(args.dims),
        samples=args.samples,
        seed=args.seed,
        route=args.route,
        restarts=args.restarts,
        max_iters=args.max_iters,
        outcomes=args.outcomes,
        d_outs=_parse_int_list(args.d_outs),
        splits=_parse_splits(args.splits),
        out_path=args.out,
        format=args.format,
        workers=args.workers,
    )
    reports = run_all(cfg) if cfg.identity == "all" else [run_identity(cfg)]
    text = report_json(reports) if cfg.format == "json" else report_csv(reports)
    if cfg.out_path:
        try:
            Path(cfg.out_path).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"cannot write report: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    for rep in reports:
        print(
            f"{rep.identity}: {rep.aggregate['pass_count']}/{rep.samples} within "
            f"{rep.tolerance} (max |residual| {rep.aggregate['max_abs_residual']:.3e})",
            file=sys.stderr,
        )
    return 0 if all(rep.all_passed for rep in reports) else EXIT_FAIL


def cmd_sample(args) -> int:
    dims = _parse_dims(args.dims)
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"cannot create {out_dir}: {exc}", file=sys.stderr)
        return EXIT_IO
    for i in range(args.count):
        state_seed, psi = sample_state(args.seed, i, dims)
        path = out_dir / f"state_{i:04d}.json"
        try:
            save_state(psi, path, seed=state_seed)
        except OSError as exc:
            print(f"cannot write {path}: {exc}", file=sys.stderr)
            return EXIT_IO
        print(str(path))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "compute":
            return cmd_compute(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_sample(args)
    except StateFormatError as exc:
        print(f"malformed state file: {exc}", file=sys.stderr)
        return EXIT_BAD_STATE
    except _DIM_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BAD_DIMS
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
