"""Graph file format (JSON) and helpers.

Schema::

    {
      "vertices": [{"id": 0, "pos": [x, y]}, ...],          # pos optional
      "edges":    [{"id": 0, "ends": [[u, su], [v, sv]]}],  # slots 0..3
      "outer_face": [[edge, end], ...]                      # optional
    }

``slot`` fixes the position of that edge end in the counterclockwise
rotation at the vertex, which pins the embedding even for loops and parallel
edges.  Slots may be omitted (null) on every end, in which case all vertex
positions are required and the rotation is derived from the straight-line
drawing (see :func:`knotwork.layout.rotation_from_coordinates`); mixing
slotted and slotless ends is rejected.
"""

from __future__ import annotations

import json
from typing import Any

from .graph import KnotworkError, PlaneMultigraph, dart


class GraphFormatError(KnotworkError):
    """The input document does not match the graph file schema."""

    code = "GRAPH_FORMAT"


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphFormatError(msg)


def graph_from_dict(doc: dict[str, Any]) -> PlaneMultigraph:
    _require(isinstance(doc, dict), "top level must be an object")
    _require("vertices" in doc and "edges" in doc, "missing 'vertices' or 'edges'")

    positions: dict[int, tuple[float, float]] = {}
    vertex_ids: set[int] = set()
    for v in doc["vertices"]:
        _require(isinstance(v, dict) and "id" in v, "vertex entries need an 'id'")
        vid = v["id"]
        _require(isinstance(vid, int) and vid >= 0, f"vertex id {vid!r} must be a non-negative int")
        _require(vid not in vertex_ids, f"duplicate vertex id {vid}")
        vertex_ids.add(vid)
        if v.get("pos") is not None:
            x, y = v["pos"]
            positions[vid] = (float(x), float(y))

    ends: dict[int, tuple[tuple[int, int], tuple[int, int]]] = {}
    slotless: list[tuple[int, int, int]] = []  # (edge, end, vertex)
    any_slots = False
    for e in doc["edges"]:
        _require(isinstance(e, dict) and "id" in e and "ends" in e, "edge entries need 'id' and 'ends'")
        eid = e["id"]
        _require(isinstance(eid, int) and eid >= 0, f"edge id {eid!r} must be a non-negative int")
        _require(eid not in ends and not any(eid == x[0] for x in slotless), f"duplicate edge id {eid}")
        _require(len(e["ends"]) == 2, f"edge {eid} needs exactly two ends")
        parsed = []
        for k, end in enumerate(e["ends"]):
            _require(len(end) == 2, f"edge {eid} end {k} must be [vertex, slot]")
            u, s = end
            _require(u in vertex_ids, f"edge {eid} references unknown vertex {u}")
            if s is None:
                slotless.append((eid, k, u))
                parsed.append((u, None))
            else:
                _require(isinstance(s, int) and 0 <= s <= 3, f"edge {eid}: slot {s!r} out of range")
                any_slots = True
                parsed.append((u, s))
        ends[eid] = (parsed[0], parsed[1])

    if slotless and any_slots:
        raise GraphFormatError(
            "AMBIGUOUS_ROTATION: mixing slotted and slotless edge ends is not supported"
        )
    if slotless:
        from .layout import Layout, rotation_from_coordinates

        missing = vertex_ids - set(positions)
        _require(not missing, f"slotless input needs positions for all vertices, missing {sorted(missing)}")
        abstract = {e: (uv[0][0], uv[1][0]) for e, uv in ends.items()}
        return rotation_from_coordinates(abstract, Layout(positions))

    outer = None
    if doc.get("outer_face"):
        ref = doc["outer_face"][0]
        _require(len(ref) == 2, "outer_face entries must be [edge, end]")
        outer = dart(int(ref[0]), int(ref[1]))

    try:
        g = PlaneMultigraph.from_edge_slots(ends, positions, outer)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc
    return g


def graph_to_dict(g: PlaneMultigraph) -> dict[str, Any]:
    vertices = []
    for v in g.vertices:
        entry: dict[str, Any] = {"id": v}
        if v in g.positions:
            x, y = g.positions[v]
            entry["pos"] = [x, y]
        vertices.append(entry)
    edges = []
    for e in g.edges:
        u, v = g.edge_ends(e)
        edges.append({"id": e, "ends": [[u, g.slot(2 * e)], [v, g.slot(2 * e + 1)]]})
    doc: dict[str, Any] = {"vertices": vertices, "edges": edges}
    if g.outer_dart is not None:
        doc["outer_face"] = [[g.outer_dart >> 1, g.outer_dart & 1]]
    return doc


def load_graph(path: str) -> PlaneMultigraph:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"not valid JSON: {exc}") from exc
    return graph_from_dict(doc)


def save_graph(g: PlaneMultigraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_dict(g), fh, indent=2)
        fh.write("\n")


def dumps_canonical(doc: Any) -> bytes:
    """Deterministic JSON bytes: sorted keys, no whitespace variance.

    Floats round-trip exactly (json uses repr), so export/import/export is
    the identity on bytes.
    """
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
