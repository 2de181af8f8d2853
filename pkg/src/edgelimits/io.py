"""JSON documents for every object the package reads or writes.

Floats are written with ``repr`` precision, so a write/read round trip is
bit-exact for every finite 64-bit value.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ParseError
from .graphon import StepGraphon
from .graphs import SimpleGraph
from .hilbert import SymTensor, dictionary_from_dict
from .regularity import Decomposition
from .vertex_model import EdgeModel

_REQUIRED = {
    "tensor": ("order", "dim", "values"),
    "model": ("dim", "tensors"),
    "graph": ("n_vertices", "edges"),
    "graphon": ("q", "mu", "vals"),
    "dictionary": ("variant",),
    "decomposition": ("target", "atoms", "coeffs", "residual", "energy_log", "k"),
}

_BUILDERS = {
    "tensor": SymTensor.from_dict,
    "model": EdgeModel.from_dict,
    "graph": SimpleGraph.from_dict,
    "graphon": StepGraphon.from_dict,
    "dictionary": dictionary_from_dict,
    "decomposition": Decomposition.from_dict,
}


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, doc) -> None:
    Path(path).write_text(dumps(doc))


def read_document(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(path), "<file>", exc.strerror or str(exc)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(path), "<document>", f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc


def from_document(doc, kind: str, source: str = "<memory>"):
    """Build an object of ``kind`` from a parsed document, naming the bad field on failure."""
    if not isinstance(doc, dict):
        raise ParseError(source, "<document>", f"expected a JSON object for a {kind}")
    for key in _REQUIRED[kind]:
        if key not in doc:
            raise ParseError(source, key, "missing")
    try:
        return _BUILDERS[kind](doc)
    except KeyError as exc:
        raise ParseError(source, exc.args[0], "missing") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(source, ",".join(_REQUIRED[kind]), str(exc)) from exc


def load(path, kind: str):
    return from_document(read_document(path), kind, str(path))


def sniff_kind(doc) -> str:
    """Guess whether a document holds a tensor, a model, a graphon or a graph."""
    if isinstance(doc, dict):
        for kind in ("model", "graphon", "tensor", "graph"):
            if all(k in doc for k in _REQUIRED[kind]):
                return kind
    raise ParseError("<document>", "<document>", "unrecognized document type")
