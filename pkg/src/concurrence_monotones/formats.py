"""JSON state and scenario files.

State documents carry a ``type`` discriminator::

    {"type": "pure", "dims": [dA, dB], "amplitudes": [[re, im], ...]}     # row-major, dA*dB entries
    {"type": "density", "dims": [dA, dB], "matrix": [[[re, im], ...], ...]}
    {"type": "ensemble", "members": [{"p": 0.5, "state": {pure state}}, ...]}

Complex entries are ``[re, im]`` pairs; a bare real number is accepted as a
shorthand for ``[x, 0]``. Validation failures raise :class:`FormatError`
naming the offending field.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .states import DensityMatrix, Ensemble, PureState


class FormatError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def read_json(source: str | Path):
    """Parse a JSON file (``"-"`` reads standard input)."""
    try:
        text = sys.stdin.read() if str(source) == "-" else Path(source).read_text()
    except OSError as exc:
        raise FormatError(str(source), f"cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from exc


def parse_complex(x, where: str) -> complex:
    if isinstance(x, bool):
        raise FormatError(where, "expected a number or [re, im] pair")
    if isinstance(x, (int, float)):
        return complex(float(x), 0.0)
    if isinstance(x, list) and len(x) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in x
    ):
        return complex(float(x[0]), float(x[1]))
    raise FormatError(where, f"expected a number or [re, im] pair, got {x!r}")


def _field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise FormatError(where, "expected an object")
    if key not in obj:
        raise FormatError(f"{where}.{key}", "missing field")
    return obj[key]


def _dims(obj, where: str) -> tuple[int, int]:
    dims = _field(obj, "dims", where)
    if (
        not isinstance(dims, list)
        or len(dims) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in dims)
    ):
        raise FormatError(f"{where}.dims", f"expected two positive integers, got {dims!r}")
    return dims[0], dims[1]


def _validated(build, where: str):
    try:
        return build()
    except (ValueError, TypeError) as exc:
        raise FormatError(where, str(exc)) from exc


def parse_pure(obj, where: str = "$") -> PureState:
    dims = _dims(obj, where)
    amps = _field(obj, "amplitudes", where)
    if not isinstance(amps, list) or len(amps) != dims[0] * dims[1]:
        raise FormatError(f"{where}.amplitudes", f"expected {dims[0] * dims[1]} entries")
    vec = np.array([parse_complex(a, f"{where}.amplitudes[{i}]") for i, a in enumerate(amps)])
    return _validated(lambda: PureState.from_vector(vec, dims), where)


def parse_density(obj, where: str = "$") -> DensityMatrix:
    dims = _dims(obj, where)
    rows = _field(obj, "matrix", where)
    n = dims[0] * dims[1]
    if not isinstance(rows, list) or len(rows) != n:
        raise FormatError(f"{where}.matrix", f"expected {n} rows")
    mat = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise FormatError(f"{where}.matrix[{i}]", f"expected {n} entries")
        for j, x in enumerate(row):
            mat[i, j] = parse_complex(x, f"{where}.matrix[{i}][{j}]")
    return _validated(lambda: DensityMatrix(mat, dims=dims), where)


def parse_ensemble(obj, where: str = "$") -> Ensemble:
    members = _field(obj, "members", where)
    if not isinstance(members, list) or not members:
        raise FormatError(f"{where}.members", "expected a non-empty list")
    parsed = []
    for i, m in enumerate(members):
        w = f"{where}.members[{i}]"
        p = _field(m, "p", w)
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise FormatError(f"{w}.p", "expected a number")
        parsed.append((float(p), parse_pure(_field(m, "state", w), f"{w}.state")))
    return _validated(lambda: Ensemble(tuple(parsed)), where)


def parse_state(obj, where: str = "$"):
    kind = _field(obj, "type", where)
    if kind == "pure":
        return parse_pure(obj, where)
    if kind == "density":
        return parse_density(obj, where)
    if kind == "ensemble":
        return parse_ensemble(obj, where)
    raise FormatError(f"{where}.type", f"expected 'pure', 'density' or 'ensemble', got {kind!r}")


def parse_decomposition(obj, where: str = "$") -> Ensemble:
    """A pure state or an explicit ensemble; density matrices carry no decomposition."""
    state = parse_state(obj, where)
    if isinstance(state, PureState):
        return Ensemble.pure(state)
    if isinstance(state, DensityMatrix):
        raise FormatError(where, "an explicit decomposition is required (use type 'pure' or 'ensemble')")
    return state


def parse_matrix(obj, where: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise FormatError(where, "expected a nested list matrix")
    n = len(obj[0])
    if any(len(r) != n for r in obj):
        raise FormatError(where, "ragged matrix")
    return np.array(
        [[parse_complex(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(obj)]
    )


def complex_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def pure_to_json(state: PureState) -> dict:
    return {
        "type": "pure",
        "dims": list(state.dims),
        "amplitudes": [complex_json(z) for z in state.vector()],
    }


def density_to_json(rho: DensityMatrix) -> dict:
    dims = list(rho.dims) if rho.dims else [rho.dim, 1]
    return {
        "type": "density",
        "dims": dims,
        "matrix": [[complex_json(z) for z in row] for row in rho.mat],
    }


def ensemble_to_json(ens: Ensemble) -> dict:
    return {
        "type": "ensemble",
        "members": [{"p": float(p), "state": pure_to_json(s)} for p, s in ens.members],
    }


def dumps(report) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"
