"""JSON state, witness and factor files.

State file::

    {
      "dims": [2, 2, 2],
      "label": "GHZ",
      "amplitudes": [
        [0.7071067811865475, 0.0],
        ...
      ]
    }

Amplitudes are ``[re, im]`` pairs in row-major order over 0-based indices
(first index slowest). Floats are written with Python's shortest round-trip
``repr``, so save followed by load reproduces every bit.

Witness files carry ``"unitaries"`` (one flat row-major ``[re, im]`` list per
party), ``"residual"``, ``"tolerances"`` and ``"version"``. Factor files
written by ``canon`` use the same matrix layout under ``"factors"``.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from math import isqrt, prod
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .errors import DimensionMismatch, ParseError
from .tensor import StateTensor, new_state, normalize

log = logging.getLogger(__name__)

RENORMALIZE_ABOVE = 1e-6


@dataclass
class StateFile:
    state: StateTensor
    label: str | None = None


@dataclass
class WitnessFile:
    unitaries: list[np.ndarray]
    residual: float
    tolerances: dict = field(default_factory=dict)
    version: str = __version__
    dims: tuple[int, ...] | None = None


# --- encoding -------------------------------------------------------------


def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be written")
    return repr(x)


def _pair(z: complex) -> str:
    return f"[{_num(z.real)}, {_num(z.imag)}]"


def _pairs_block(values: Sequence[complex], indent: str) -> str:
    if len(values) == 0:
        return "[]"
    inner = ",\n".join(indent + "  " + _pair(complex(z)) for z in values)
    return "[\n" + inner + "\n" + indent + "]"


def _matrix_list(mats: Sequence[np.ndarray]) -> str:
    parts = []
    for m in mats:
        flat = np.asarray(m, dtype=np.complex128).reshape(-1)
        parts.append("    [" + ", ".join(_pair(complex(z)) for z in flat) + "]")
    return "[\n" + ",\n".join(parts) + "\n  ]"


def dump_state(t: StateTensor, label: str | None = None) -> str:
    lines = ["{", f'  "dims": {json.dumps(list(t.dims))},']
    if label is not None:
        lines.append(f'  "label": {json.dumps(label)},')
    lines.append(f'  "amplitudes": {_pairs_block(t.amplitudes, "  ")}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def save_state(t: StateTensor, path, label: str | None = None) -> None:
    Path(path).write_text(dump_state(t, label))


def dump_witness(w: WitnessFile) -> str:
    dims = list(w.dims) if w.dims is not None else [int(u.shape[0]) for u in w.unitaries]
    tol = json.dumps({k: float(v) if isinstance(v, float) else v for k, v in sorted(w.tolerances.items())})
    return (
        "{\n"
        f'  "version": {json.dumps(w.version)},\n'
        f'  "dims": {json.dumps(dims)},\n'
        f'  "residual": {_num(w.residual)},\n'
        f'  "tolerances": {tol},\n'
        f'  "unitaries": {_matrix_list(w.unitaries)}\n'
        "}\n"
    )


def save_witness(w: WitnessFile, path) -> None:
    Path(path).write_text(dump_witness(w))


def dump_factors(factors: Sequence[np.ndarray], spectra: Sequence[np.ndarray]) -> str:
    spec = ",\n".join("    [" + ", ".join(_num(s) for s in row) + "]" for row in spectra)
    return (
        "{\n"
        f'  "version": {json.dumps(__version__)},\n'
        f'  "dims": {json.dumps([int(f.shape[0]) for f in factors])},\n'
        f'  "spectra": [\n{spec}\n  ],\n'
        f'  "factors": {_matrix_list(factors)}\n'
        "}\n"
    )


def save_factors(factors, spectra, path) -> None:
    Path(path).write_text(dump_factors(factors, spectra))


# --- decoding -------------------------------------------------------------


def _read_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except UnicodeDecodeError as exc:
        raise ParseError("file is not UTF-8 text", str(path)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}: line {exc.lineno}, column {exc.colno}") from exc


def _field(obj: dict, key: str, path) -> Any:
    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object", str(path))
    if key not in obj:
        raise ParseError(f"missing field {key!r}", str(path))
    return obj[key]


def _complex_pair(item, where: str) -> complex:
    if (
        not isinstance(item, list)
        or len(item) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in item)
    ):
        raise ParseError("expected an [re, im] pair of numbers", where)
    re, im = float(item[0]), float(item[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise ParseError("non-finite amplitude", where)
    return complex(re, im)


def _dims(raw, where: str) -> tuple[int, ...]:
    if (
        not isinstance(raw, list)
        or not raw
        or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in raw)
    ):
        raise ParseError("dims must be a non-empty list of positive integers", where)
    return tuple(raw)


def _complex_list(raw, where: str) -> np.ndarray:
    if not isinstance(raw, list):
        raise ParseError("expected a list of [re, im] pairs", where)
    return np.array([_complex_pair(x, f"{where}[{k}]") for k, x in enumerate(raw)], dtype=np.complex128)


def read_state_file(path, renormalize: bool = True) -> StateFile:
    """Parse a state file.

    States whose norm is off by more than ``1e-6`` are renormalized (with a
    warning logged) when ``renormalize`` is set; smaller deviations are kept
    as-is so that save/load round trips stay bit exact.
    """
    obj = _read_json(path)
    dims = _dims(_field(obj, "dims", path), f"{path}: field 'dims'")
    amps = _complex_list(_field(obj, "amplitudes", path), f"{path}: field 'amplitudes'")
    if amps.size != prod(dims):
        raise ParseError(
            f"{amps.size} amplitudes for dims {list(dims)} (expected {prod(dims)})",
            f"{path}: field 'amplitudes'",
        )
    label = obj.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError("label must be a string", f"{path}: field 'label'")
    try:
        state = new_state(dims, amps)
    except (DimensionMismatch, ValueError) as exc:
        raise ParseError(str(exc), str(path)) from exc
    nrm = state.norm()
    if renormalize and abs(nrm - 1.0) > RENORMALIZE_ABOVE:
        log.warning("%s: norm %.12g is not 1; normalizing", path, nrm)
        state = normalize(state)
    return StateFile(state, label)


def load_state(path) -> StateTensor:
    return read_state_file(path).state


def _matrices(raw, where: str) -> list[np.ndarray]:
    if not isinstance(raw, list):
        raise ParseError("expected a list of matrices", where)
    out = []
    for n, flat in enumerate(raw):
        vals = _complex_list(flat, f"{where}[{n}]")
        d = isqrt(vals.size)
        if d * d != vals.size or d == 0:
            raise ParseError(f"{vals.size} entries do not form a square matrix", f"{where}[{n}]")
        out.append(vals.reshape(d, d))
    return out


def load_witness(path) -> WitnessFile:
    obj = _read_json(path)
    unitaries = _matrices(_field(obj, "unitaries", path), f"{path}: field 'unitaries'")
    residual = _field(obj, "residual", path)
    if not isinstance(residual, (int, float)):
        raise ParseError("residual must be a number", f"{path}: field 'residual'")
    tolerances = obj.get("tolerances", {})
    dims = obj.get("dims")
    if dims is not None:
        dims = _dims(dims, f"{path}: field 'dims'")
        if tuple(u.shape[0] for u in unitaries) != dims:
            raise ParseError("unitary sizes disagree with dims", f"{path}: field 'unitaries'")
    return WitnessFile(unitaries, float(residual), tolerances, str(obj.get("version", "")), dims)


def load_factors(path) -> tuple[list[np.ndarray], list[np.ndarray]]:
    obj = _read_json(path)
    factors = _matrices(_field(obj, "factors", path), f"{path}: field 'factors'")
    spectra = [np.asarray(row, dtype=float) for row in _field(obj, "spectra", path)]
    return factors, spectra
