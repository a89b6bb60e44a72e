"""JSON state files.

Schema::

    {"theory": "classical" | "quantum" | "boxworld",
     "signature": [...],
     "table": [...],
     "names": [...]}            # optional

``signature`` lists alphabet sizes (classical), Hilbert dimensions (quantum)
or ``[inputs, outputs]`` pairs (box world). ``table`` is flat and row-major
over the table shape: for box world the input indices come first, then the
output indices, each ordered by subsystem. Classical and box-world entries
are ``[numerator, denominator]`` (a bare integer or a ``"num/den"`` string is
also accepted); quantum entries are ``[re, im]`` of a ``d x d`` matrix.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .boxworld import BoxState, validate_nonsignalling
from .classical import ClassicalState, classical_state
from .core import THEORIES
from .errors import SchemaError
from .quantum import DensityMatrix, density_matrix


def _rational(entry, path: str) -> Fraction:
    if isinstance(entry, bool):
        raise SchemaError(path, "expected a rational entry")
    if isinstance(entry, int):
        return Fraction(entry)
    if isinstance(entry, str):
        try:
            return Fraction(entry)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(path, f"cannot parse {entry!r} as a rational") from None
    if isinstance(entry, list) and len(entry) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in entry):
        if entry[1] == 0:
            raise SchemaError(path, "zero denominator")
        return Fraction(entry[0], entry[1])
    raise SchemaError(path, "expected [numerator, denominator] with integer parts")


def _complex(entry, path: str) -> complex:
    if isinstance(entry, list) and len(entry) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry):
        return complex(entry[0], entry[1])
    raise SchemaError(path, "expected [re, im]")


def _signature(doc: dict, theory: str):
    if "signature" not in doc:
        raise SchemaError("signature", "missing")
    sig = doc["signature"]
    if not isinstance(sig, list) or not sig:
        raise SchemaError("signature", "expected a non-empty list")
    out = []
    for i, item in enumerate(sig):
        p = f"signature[{i}]"
        if theory == "boxworld":
            if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, int) and x >= 1 for x in item)):
                raise SchemaError(p, "expected [inputs, outputs] with positive integers")
            out.append(tuple(item))
        else:
            if not (isinstance(item, int) and not isinstance(item, bool) and item >= 1):
                raise SchemaError(p, "expected a positive integer")
            out.append(item)
    return tuple(out)


def state_from_dict(doc: dict):
    """Validated state from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected a JSON object")
    theory = doc.get("theory")
    if theory not in THEORIES:
        raise SchemaError("theory", f"expected one of {list(THEORIES)}, got {theory!r}")
    sig = _signature(doc, theory)
    table = doc.get("table")
    if not isinstance(table, list):
        raise SchemaError("table", "expected a flat list")
    names = doc.get("names")
    if names is not None:
        if not (isinstance(names, list) and all(isinstance(n, str) for n in names) and len(names) == len(sig)):
            raise SchemaError("names", "expected one string per subsystem")
    if theory == "quantum":
        d = math.prod(sig)
        if len(table) != d * d:
            raise SchemaError("table", f"expected {d * d} entries, got {len(table)}")
        mat = np.array([_complex(e, f"table[{i}]") for i, e in enumerate(table)]).reshape(d, d)
        return density_matrix(mat, sig, names)
    shape = tuple(k for k, _ in sig) + tuple(m for _, m in sig) if theory == "boxworld" else sig
    size = math.prod(shape)
    if len(table) != size:
        raise SchemaError("table", f"expected {size} entries, got {len(table)}")
    values = [_rational(e, f"table[{i}]") for i, e in enumerate(table)]
    if theory == "classical":
        return classical_state(values, sig, names)
    return validate_nonsignalling(values, sig, names)


def load_state(path):
    """Read a state file. Malformed content raises :class:`SchemaError` naming the field."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    return state_from_dict(doc)


def _rational_out(x: Fraction) -> list[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def state_to_dict(s) -> dict:
    if isinstance(s, ClassicalState):
        return {"theory": "classical", "signature": list(s.table.shape),
                "table": [_rational_out(x) for x in s.table.ravel()], "names": list(s.names)}
    if isinstance(s, BoxState):
        return {"theory": "boxworld", "signature": [list(p) for p in s.signature],
                "table": [_rational_out(x) for x in s.table.ravel()], "names": list(s.names)}
    if isinstance(s, DensityMatrix):
        return {"theory": "quantum", "signature": list(s.dims),
                "table": [[float(z.real), float(z.imag)] for z in s.table.ravel()], "names": list(s.names)}
    raise TypeError(f"unsupported state type {type(s).__name__}")


def dump_state(s, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(s), indent=1) + "\n")
