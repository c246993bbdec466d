"""Canonical JSON text format for instances and alignments.

Instance documents look like::

    {"g1": {"n": 2, "edges": [[0, 1]]},
     "g2": {"n": 2, "edges": [[0, 1]]},
     "beta": [[0, 0, 0.5], [1, 1, 0.5]],
     "labels1": ["a1", "a2"],
     "labels2": ["b1", "b2"]}

Field order is fixed, weights carry at most nine fractional digits, and
the label lists are optional.  Vertices are dense 0-based integers
everywhere; string labels exist only in this layer.
"""

from __future__ import annotations

import json

from .core import Alignment, AlignmentInstance, build_dag, make_instance, validate_alignment
from .errors import ParseError

__all__ = [
    "format_weight",
    "parse_instance",
    "parse_instance_with_labels",
    "serialize_instance",
    "parse_alignment",
    "serialize_alignment",
]


def format_weight(w: float) -> str:
    """Render a weight with up to nine fractional digits, no trailing zeros."""
    s = f"{w:.9f}"
    s = s.rstrip("0")
    if s.endswith("."):
        s += "0"
    return s


def _graph_text(n: int, edges) -> str:
    body = ", ".join(f"[{u}, {v}]" for u, v in edges)
    return f'{{"n": {n}, "edges": [{body}]}}'


def serialize_instance(
    instance: AlignmentInstance,
    labels1: list[str] | None = None,
    labels2: list[str] | None = None,
) -> str:
    """Serialize an instance to its canonical single-line JSON form."""
    parts = [
        f'"g1": {_graph_text(instance.g1.vertex_count, instance.g1.edges)}',
        f'"g2": {_graph_text(instance.g2.vertex_count, instance.g2.edges)}',
        '"beta": [{}]'.format(
            ", ".join(
                f"[{e.left}, {e.right}, {format_weight(e.weight)}]" for e in instance.beta
            )
        ),
    ]
    if labels1 is not None:
        parts.append(f'"labels1": {json.dumps(list(labels1))}')
    if labels2 is not None:
        parts.append(f'"labels2": {json.dumps(list(labels2))}')
    return "{" + ", ".join(parts) + "}"


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ParseError(message)


def _parse_graph(obj, name: str):
    _require(isinstance(obj, dict), f"{name} must be an object")
    _require(isinstance(obj.get("n"), int), f"{name}.n must be an integer")
    edges = obj.get("edges")
    _require(isinstance(edges, list), f"{name}.edges must be a list")
    out = []
    for pair in edges:
        _require(
            isinstance(pair, list)
            and len(pair) == 2
            and all(isinstance(x, int) for x in pair),
            f"{name}.edges entries must be [u, v] integer pairs",
        )
        out.append((pair[0], pair[1]))
    return build_dag(obj["n"], out)


def _parse_labels(obj, name: str, n: int) -> list[str] | None:
    if obj is None:
        return None
    _require(
        isinstance(obj, list) and all(isinstance(x, str) for x in obj),
        f"{name} must be a list of strings",
    )
    _require(len(obj) == n, f"{name} must have one entry per vertex")
    return list(obj)


def parse_instance_with_labels(
    text: str,
) -> tuple[AlignmentInstance, list[str] | None, list[str] | None]:
    """Parse an instance document, returning the optional label lists too."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "document must be a JSON object")
    for key in ("g1", "g2", "beta"):
        _require(key in doc, f"missing required field {key!r}")
    g1 = _parse_graph(doc["g1"], "g1")
    g2 = _parse_graph(doc["g2"], "g2")
    beta = doc["beta"]
    _require(isinstance(beta, list), "beta must be a list")
    triples = []
    for entry in beta:
        _require(
            isinstance(entry, list)
            and len(entry) == 3
            and isinstance(entry[0], int)
            and isinstance(entry[1], int)
            and isinstance(entry[2], (int, float)),
            "beta entries must be [left, right, weight] triples",
        )
        triples.append((entry[0], entry[1], float(entry[2])))
    instance = make_instance(g1, g2, triples)
    labels1 = _parse_labels(doc.get("labels1"), "labels1", g1.vertex_count)
    labels2 = _parse_labels(doc.get("labels2"), "labels2", g2.vertex_count)
    return instance, labels1, labels2


def parse_instance(text: str) -> AlignmentInstance:
    """Parse an instance document, discarding any label lists."""
    instance, _, _ = parse_instance_with_labels(text)
    return instance


def serialize_alignment(
    instance: AlignmentInstance,
    alignment: Alignment,
    extra_fields: list[tuple[str, str]] | None = None,
) -> str:
    """Serialize an alignment as {"chosen": [[left, right, weight], ...], ...}.

    extra_fields entries are (key, preformatted JSON value) pairs emitted
    after the standard fields, used by the CLI for ratio reporting.
    """
    chosen = sorted(alignment.chosen)
    body = ", ".join(
        "[{}, {}, {}]".format(
            instance.beta[i].left,
            instance.beta[i].right,
            format_weight(instance.beta[i].weight),
        )
        for i in chosen
    )
    valid = validate_alignment(instance, chosen).valid
    parts = [
        f'"chosen": [{body}]',
        f'"weight": {format_weight(alignment.total_weight)}',
        f'"valid": {"true" if valid else "false"}',
    ]
    for key, value in extra_fields or []:
        parts.append(f'"{key}": {value}')
    return "{" + ", ".join(parts) + "}"


def parse_alignment(text: str, instance: AlignmentInstance) -> Alignment:
    """Parse an alignment document against its instance.

    Each chosen triple must name an existing candidate pair and repeat
    its weight (within 1e-9).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "document must be a JSON object")
    _require(isinstance(doc.get("chosen"), list), "missing or invalid 'chosen' list")
    indices = []
    for entry in doc["chosen"]:
        _require(
            isinstance(entry, list)
            and len(entry) == 3
            and isinstance(entry[0], int)
            and isinstance(entry[1], int)
            and isinstance(entry[2], (int, float)),
            "chosen entries must be [left, right, weight] triples",
        )
        pair = (entry[0], entry[1])
        _require(pair in instance.pair_index, f"pair {pair} is not a candidate edge")
        i = instance.pair_index[pair]
        _require(
            abs(instance.beta[i].weight - float(entry[2])) <= 1e-9,
            f"weight mismatch for pair {pair}",
        )
        indices.append(i)
    total = sum(instance.beta[i].weight for i in indices)
    return Alignment(tuple(sorted(indices)), total)
