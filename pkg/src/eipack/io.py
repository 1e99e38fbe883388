"""JSON sequence files (schema version 1).

    {"schema_version": 1, "field": "R" | "C", "d": .., "r": .., "n": ..,
     "isometries": [[[...row...], ...], ...]}

Complex entries are ``[re, im]`` pairs.  Floats go through ``repr`` so a
write/read round trip is exact.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InvalidInput
from .numerics import DEFAULT_TOL, Field
from .subspaces import SubspaceSequence

SCHEMA_VERSION = 1


def sequence_to_dict(S: SubspaceSequence, extra: dict | None = None) -> dict:
    if S.field is Field.REAL:
        data = S.isometries.tolist()
    else:
        data = np.stack([S.isometries.real, S.isometries.imag], axis=-1).tolist()
    out = {"schema_version": SCHEMA_VERSION, "field": S.field.value, "d": S.d, "r": S.r, "n": S.n,
           "isometries": data}
    if extra:
        out.update(extra)
    return out


def sequence_from_dict(obj: dict, atol: float = DEFAULT_TOL.residual_abs) -> SubspaceSequence:
    try:
        version = obj["schema_version"]
        field = Field.parse(obj["field"])
        d, r, n = int(obj["d"]), int(obj["r"]), int(obj["n"])
        arr = np.asarray(obj["isometries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed sequence file: {exc}") from exc
    if version != SCHEMA_VERSION:
        raise InvalidInput(f"unsupported schema_version {version}")
    want = (n, d, r) if field is Field.REAL else (n, d, r, 2)
    if arr.shape != want:
        raise InvalidInput(f"isometries have shape {arr.shape}, expected {want}")
    if field is Field.COMPLEX:
        arr = arr[..., 0] + 1j * arr[..., 1]
    return SubspaceSequence(arr, field, atol=atol)


def write_sequence(path, S: SubspaceSequence, extra: dict | None = None) -> None:
    Path(path).write_text(json.dumps(sequence_to_dict(S, extra)) + "\n", encoding="utf-8")


def read_sequence(path, atol: float = DEFAULT_TOL.residual_abs) -> SubspaceSequence:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc
    return sequence_from_dict(obj, atol)
