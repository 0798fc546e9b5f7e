"""JSON state files.

Schema: {"dims": [..], "labels": [..], "kind": "pure"|"mixed",
"data": [[re, im], ...]} with the amplitude vector (pure) or the row-major
matrix rows concatenated (mixed).  Files written by `save_state` may carry
an additional "seed" field recording how the state was sampled; readers
ignore unknown fields.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DimensionError, InvalidState, LabelCollision, StateFormatError
from .states import DensityOperator, PureState, SystemLayout


def state_to_dict(state: PureState | DensityOperator, seed: int | None = None) -> dict:
    lay = state.layout
    if isinstance(state, PureState):
        kind = "pure"
        flat = state.amplitudes
    elif isinstance(state, DensityOperator):
        kind = "mixed"
        flat = state.matrix.reshape(-1)
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    doc = {
        "dims": list(lay.dims),
        "labels": list(lay.labels),
        "kind": kind,
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }
    if seed is not None:
        doc["seed"] = int(seed)
    return doc


def state_from_dict(doc: dict) -> PureState | DensityOperator:
    try:
        dims = [int(d) for d in doc["dims"]]
        labels = [str(lab) for lab in doc["labels"]]
        kind = doc["kind"]
        data = doc["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFormatError(f"missing or malformed field: {exc}") from exc
    if len(dims) != len(labels):
        raise StateFormatError(f"{len(dims)} dims vs {len(labels)} labels")
    if kind not in ("pure", "mixed"):
        raise StateFormatError(f"kind must be pure or mixed, got {kind!r}")
    try:
        flat = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"data entries must be [re, im] pairs: {exc}") from exc
    try:
        lay = SystemLayout(zip(labels, dims))
        total = lay.total_dim
        if kind == "pure":
            if flat.size != total:
                raise StateFormatError(f"pure state needs {total} amplitudes, got {flat.size}")
            return PureState(lay, flat)
        if flat.size != total * total:
            raise StateFormatError(f"mixed state needs {total * total} entries, got {flat.size}")
        return DensityOperator(lay, flat.reshape(total, total))
    except StateFormatError:
        raise
    except (InvalidState, DimensionError, LabelCollision) as exc:
        # a file whose contents violate the state invariants is malformed
        raise StateFormatError(str(exc)) from exc


def save_state(state, path, seed: int | None = None) -> None:
    doc = state_to_dict(state, seed=seed)
    Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n", encoding="utf-8")


def load_state(path) -> PureState | DensityOperator:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFormatError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise StateFormatError("state file must hold a JSON object")
    return state_from_dict(doc)
