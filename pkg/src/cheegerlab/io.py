"""JSON readers and writers for graphs and kernels, plus canonical dumping."""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .graphs import Graph, build_graph
from .kernels import Kernel, kernel_from_json


class InputError(ValueError):
    """Malformed input file."""


def _read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _as_int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{what} must be an integer, got {value!r}")
    return value


def graph_from_json(data: Any, name: str = "") -> Graph:
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise InputError('graph JSON must be an object with "n" and "edges"')
    n = _as_int(data["n"], "n")
    edges = data["edges"]
    if not isinstance(edges, list):
        raise InputError('"edges" must be a list of [u, v] pairs')
    pairs = []
    for e in edges:
        if not isinstance(e, list) or len(e) != 2:
            raise InputError(f"bad edge {e!r}; expected [u, v]")
        pairs.append((_as_int(e[0], "edge endpoint"), _as_int(e[1], "edge endpoint")))
    try:
        return build_graph(n, pairs, name=data.get("name", name))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def graph_to_json(graph: Graph) -> dict:
    return {"n": graph.n, "edges": [list(e) for e in graph.undirected_edges], "name": graph.name}


def load_graph(path: str | Path) -> Graph:
    return graph_from_json(_read_json(path), name=Path(path).stem)


def dump_graph(graph: Graph, path: str | Path) -> None:
    Path(path).write_text(dumps(graph_to_json(graph)))


def load_kernel(path: str | Path, space, cls=Kernel) -> Kernel:
    data = _read_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("rows"), dict):
        raise InputError('kernel JSON must be an object with "rows"')
    try:
        return kernel_from_json(space, data, cls)
    except (ValueError, IndexError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def dump_kernel(kernel: Kernel, path: str | Path) -> None:
    Path(path).write_text(dumps(kernel.to_json()))


def to_plain(obj: Any) -> Any:
    """Recursively convert to JSON-safe builtins.

    Fractions become ``"p/q"`` strings, non-finite floats become ``"inf"``,
    ``"-inf"`` or ``"nan"``, numpy scalars and arrays become Python values.
    """
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return obj


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(to_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def digest(obj: Any) -> str:
    return hashlib.sha256(json.dumps(to_plain(obj), sort_keys=True).encode()).hexdigest()[:16]


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]
