"""JSON forms of networks, staged networks and decompositions.

Floats are written with Python's shortest round-trip repr, so a value read
back is bit-identical to the one written.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .network import RELU, AffineLayer, LinearStage, MlpNetwork, OutputHead, StagedNetwork, collapse
from .regions import Decomposition, decomposition_to_json


class NetworkFormatError(ValueError):
    """A network document is malformed or violates the schema."""


def _layer_json(layer: AffineLayer) -> dict:
    return {"weights": layer.weights.tolist(), "bias": layer.bias.tolist()}


def _head_json(head: OutputHead) -> dict:
    return {"a": head.a, "b": head.b, "c": head.c}


def network_to_json(net: MlpNetwork) -> dict:
    doc = {"hidden_layers": [_layer_json(l) for l in net.hidden_layers], "head": _head_json(net.head)}
    if net.readout is not None:
        doc["readout"] = _layer_json(net.readout)
    return doc


def staged_to_json(staged: StagedNetwork) -> dict:
    """Collapsed network document plus a ``stages`` array."""
    doc = network_to_json(collapse(staged))
    stages = []
    for i, st in enumerate(staged.stages):
        if isinstance(st, LinearStage):
            entry = {"type": "linear", **_layer_json(st.layer)}
        else:
            entry = {"type": "relu"}
        if i < len(staged.labels):
            entry["label"] = staged.labels[i]
        stages.append(entry)
    doc["stages"] = stages
    return doc


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise NetworkFormatError(f"{where}: expected a finite number, got {x!r}")
    return float(x)


def _layer_from(doc, where) -> AffineLayer:
    if not isinstance(doc, dict) or "weights" not in doc or "bias" not in doc:
        raise NetworkFormatError(f"{where}: layer needs 'weights' and 'bias'")
    rows = doc["weights"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise NetworkFormatError(f"{where}: weights must be a list of rows")
    w = [[_number(x, where) for x in r] for r in rows]
    if len({len(r) for r in w}) != 1:
        raise NetworkFormatError(f"{where}: ragged weight rows")
    if not isinstance(doc["bias"], list):
        raise NetworkFormatError(f"{where}: bias must be a list")
    b = [_number(x, where) for x in doc["bias"]]
    try:
        return AffineLayer(np.array(w), np.array(b))
    except ValueError as e:
        raise NetworkFormatError(f"{where}: {e}") from e


def network_from_json(doc) -> MlpNetwork:
    if not isinstance(doc, dict):
        raise NetworkFormatError("network document must be an object")
    if "hidden_layers" not in doc or "head" not in doc:
        raise NetworkFormatError("network needs 'hidden_layers' and 'head'")
    if not isinstance(doc["hidden_layers"], list):
        raise NetworkFormatError("'hidden_layers' must be a list")
    layers = tuple(_layer_from(l, f"hidden_layers[{i}]") for i, l in enumerate(doc["hidden_layers"]))
    h = doc["head"]
    if not isinstance(h, dict) or not {"a", "b", "c"} <= set(h):
        raise NetworkFormatError("head needs 'a', 'b', 'c'")
    readout = _layer_from(doc["readout"], "readout") if doc.get("readout") is not None else None
    try:
        head = OutputHead(_number(h["a"], "head"), _number(h["b"], "head"), _number(h["c"], "head"))
        return MlpNetwork(layers, head, readout)
    except ValueError as e:
        raise NetworkFormatError(str(e)) from e


def staged_from_json(doc) -> StagedNetwork:
    if not isinstance(doc, dict) or not isinstance(doc.get("stages"), list):
        raise NetworkFormatError("staged network needs a 'stages' list")
    stages, labels = [], []
    for i, st in enumerate(doc["stages"]):
        kind = st.get("type") if isinstance(st, dict) else None
        if kind == "relu":
            stages.append(RELU)
        elif kind == "linear":
            stages.append(LinearStage(_layer_from(st, f"stages[{i}]")))
        else:
            raise NetworkFormatError(f"stages[{i}]: type must be 'linear' or 'relu'")
        labels.append(str(st.get("label", "")))
    head = network_from_json(doc).head
    try:
        return StagedNetwork(tuple(stages), head, tuple(labels))
    except ValueError as e:
        raise NetworkFormatError(str(e)) from e


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, allow_nan=False)


def save_network(net: MlpNetwork | StagedNetwork, path) -> None:
    doc = staged_to_json(net) if isinstance(net, StagedNetwork) else network_to_json(net)
    Path(path).write_text(dumps(doc) + "\n")


def load_network(path) -> MlpNetwork:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise NetworkFormatError(f"cannot read network {path}: {e}") from e
    return network_from_json(doc)


def save_decomposition(d: Decomposition, path) -> None:
    Path(path).write_text(dumps(decomposition_to_json(d)) + "\n")
