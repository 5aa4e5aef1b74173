"""JSON state and channel files.

State file::

    {"version": "1", "dim": 2, "re": [[...], ...], "im": [[...], ...], "dims": [2, 1]}

Channel file::

    {"version": "1", "dim": 2, "terms": [{"weight": 0.75, "re": [[...]], "im": [[...]]}, ...]}

Floats are written with ``repr`` (shortest string that round-trips), so
reading back reproduces every entry bit for bit.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .coherence import MixedUnitaryChannel
from .matrixlab import DensityMatrix

VERSION = "1"


class StateFileError(ValueError):
    """File is unreadable or does not follow the schema."""


def _parse_matrix(obj: dict, dim: int, where: str) -> np.ndarray:
    try:
        re = np.asarray(obj["re"], dtype=np.float64)
        im = np.asarray(obj["im"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFileError(f"{where}: bad or missing re/im arrays ({exc})") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise StateFileError(f"{where}: re/im must be {dim}x{dim}, got {re.shape} and {im.shape}")
    return re + 1j * im


def _load_json(path: str | os.PathLike) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StateFileError(f"{path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise StateFileError(f"{path}: top level must be an object")
    if str(obj.get("version")) != VERSION:
        raise StateFileError(f"{path}: unsupported version {obj.get('version')!r}")
    dim = obj.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise StateFileError(f"{path}: dim must be a positive integer")
    return obj


def read_state_matrix(path: str | os.PathLike) -> tuple[np.ndarray, list[int] | None]:
    """Parse a state file without checking density-matrix invariants."""
    obj = _load_json(path)
    m = _parse_matrix(obj, obj["dim"], str(path))
    dims = obj.get("dims")
    if dims is not None:
        if not (isinstance(dims, list) and all(isinstance(x, int) and x >= 1 for x in dims)):
            raise StateFileError(f"{path}: dims must be a list of positive integers")
        if int(np.prod(dims)) != obj["dim"]:
            raise StateFileError(f"{path}: dims {dims} do not multiply to dim {obj['dim']}")
    return m, dims


def read_state(path: str | os.PathLike) -> tuple[DensityMatrix, list[int] | None]:
    """Returns the state and its optional factorization; invalid states raise ValidationError."""
    m, dims = read_state_matrix(path)
    return DensityMatrix(m), dims


def _matrix_fields(m: np.ndarray) -> dict:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def state_to_json(rho: DensityMatrix, dims: list[int] | None = None) -> str:
    obj = {"version": VERSION, "dim": rho.dim, **_matrix_fields(rho.matrix)}
    if dims is not None:
        obj["dims"] = list(dims)
    return json.dumps(obj) + "\n"


def channel_to_json(ch: MixedUnitaryChannel) -> str:
    obj = {
        "version": VERSION,
        "dim": ch.dim,
        "terms": [{"weight": w, **_matrix_fields(u)} for w, u in ch.terms],
    }
    return json.dumps(obj) + "\n"


def read_channel(path: str | os.PathLike) -> MixedUnitaryChannel:
    obj = _load_json(path)
    terms = obj.get("terms")
    if not isinstance(terms, list) or not terms:
        raise StateFileError(f"{path}: terms must be a nonempty list")
    weights, unitaries = [], []
    for i, t in enumerate(terms):
        if not isinstance(t, dict) or not isinstance(t.get("weight"), (int, float)):
            raise StateFileError(f"{path}: term {i} needs a numeric weight")
        weights.append(float(t["weight"]))
        unitaries.append(_parse_matrix(t, obj["dim"], f"{path}: term {i}"))
    return MixedUnitaryChannel(tuple(weights), tuple(unitaries))


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the target directory, then rename into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_state(path: str | os.PathLike, rho: DensityMatrix, dims: list[int] | None = None) -> None:
    atomic_write(path, state_to_json(rho, dims))


def write_channel(path: str | os.PathLike, ch: MixedUnitaryChannel) -> None:
    atomic_write(path, channel_to_json(ch))
