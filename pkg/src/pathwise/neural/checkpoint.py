"""Model checkpoints as JSON with exact float64 round-trips."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import CheckpointError, MissingCheckpoint

__all__ = ["FORMAT_VERSION", "Checkpoint", "save_checkpoint", "load_checkpoint"]

FORMAT_VERSION = 1


@dataclass
class Checkpoint:
    model_kind: str
    hyperparams: dict[str, Any]
    params: dict[str, np.ndarray]


def save_checkpoint(
    path: str | Path,
    model_kind: str,
    hyperparams: dict[str, Any],
    params: dict[str, np.ndarray],
) -> None:
    """Write parameters to a JSON file.

    Values are serialized with Python's repr-based float formatting,
    which reproduces the exact float64 on load.
    """
    payload = {
        "format_version": FORMAT_VERSION,
        "model_kind": model_kind,
        "hyperparams": hyperparams,
        "params": {
            name: {"shape": list(arr.shape), "values": [float(v) for v in arr.reshape(-1)]}
            for name, arr in params.items()
        },
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
    tmp.replace(path)


def load_checkpoint(path: str | Path) -> Checkpoint:
    """Read a checkpoint written by :func:`save_checkpoint`.

    Raises:
        MissingCheckpoint: The file does not exist.
        CheckpointError: The file is unreadable or structurally wrong.
    """
    path = Path(path)
    if not path.exists():
        raise MissingCheckpoint(str(path))
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise CheckpointError(f"checkpoint {path} is not an object")
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise CheckpointError(
            f"checkpoint {path} has format_version {version!r}, expected {FORMAT_VERSION}"
        )
    try:
        params = {
            name: np.array(entry["values"], dtype=float).reshape(entry["shape"])
            for name, entry in payload["params"].items()
        }
        return Checkpoint(
            model_kind=payload["model_kind"],
            hyperparams=payload["hyperparams"],
            params=params,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"checkpoint {path} is malformed: {exc}") from exc
