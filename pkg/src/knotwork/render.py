"""Knot drawings: curve assembly, SVG output, and the interchange format.

A drawing binds the combinatorics (circuits, under-over signs) to geometry
(one cubic per edge, endpoints at the vertex positions, control tangents on
the cross arms).  Alternation guarantees every edge passes over at exactly
one of its ends and under at the other, so rendering breaks each edge once:
the curve is clipped back by a fixed arc length at its under end and drawn
in full strength, which keeps the output valid in renderers that do not
honor paint order.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .bezier import CubicBezier, arc_length, derivatives, edge_curve, split_at, t_at_arc_length
from .crosses import Cross, Strategy, build_crosses
from .graph import Face, KnotworkError, PlaneMultigraph, dart, trace_faces, two_color_faces
from .io import dumps_canonical
from .layout import Layout, tutte_layout
from .threads import CircuitPartition, UnderOverAssignment, threaded_circuit_partition, under_over

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
)


@dataclass(frozen=True)
class RenderStyle:
    strand_width: float
    gap_width: float
    palette: tuple[str, ...] = PALETTE
    background: str | None = "#ffffff"
    scale: float = 1.0

    def __post_init__(self):
        if not self.gap_width > self.strand_width:
            raise KnotworkError("gap_width must exceed strand_width")

    @staticmethod
    def auto(drawing: "KnotDrawing") -> "RenderStyle":
        """Sizes derived from the median chord length; gap = 2.2 x strand."""
        chords = []
        for e in drawing.graph.edges:
            a, b = drawing.graph.edge_ends(e)
            if a != b:
                chords.append(math.dist(drawing.layout[a], drawing.layout[b]))
        med = sorted(chords)[len(chords) // 2] if chords else 1.0
        strand = 0.10 * med
        span = drawing.extent()
        scale = 512.0 / span if span > 0 else 1.0
        return RenderStyle(strand_width=strand, gap_width=2.2 * strand, scale=scale)


@dataclass(frozen=True)
class KnotDrawing:
    graph: PlaneMultigraph
    layout: Layout
    partition: CircuitPartition
    assignment: UnderOverAssignment
    crosses: Mapping[int, Cross]
    edges: Mapping[int, CubicBezier]
    edge_dart: Mapping[int, int]   # edge -> its dart in circuit orientation

    def circuit_of(self, e: int) -> int:
        return self.partition.edge_to_circuit[e]

    def under_end(self, e: int) -> int:
        """Which end (0 or 1) of edge e passes under.

        The circuit dart w of e arrives at the vertex end 1 - (w & 1); the
        thread there has sign value[w].  Alternation puts the opposite sign
        at the other end, so exactly one end is the under side.
        """
        w = self.edge_dart[e]
        head_end = 1 - (w & 1)
        return head_end if self.assignment.sign(w) == -1 else (w & 1)

    def extent(self) -> float:
        pts = np.array(list(self.layout.positions.values()), dtype=float)
        if len(pts) == 0:
            return 1.0
        span = pts.max(axis=0) - pts.min(axis=0)
        return float(max(span.max(), 1e-9))


def assemble_drawing(
    g: PlaneMultigraph,
    layout: Layout,
    partition: CircuitPartition,
    assignment: UnderOverAssignment,
    crosses: Mapping[int, Cross],
) -> KnotDrawing:
    """Bind combinatorics and geometry into a drawing (one cubic per edge)."""
    curves: dict[int, CubicBezier] = {}
    for e in g.edges:
        d0, d1 = dart(e, 0), dart(e, 1)
        a, b = g.origin(d0), g.origin(d1)
        curves[e] = edge_curve(
            layout[a],
            layout[b],
            crosses[a].dart_direction(d0),
            crosses[b].dart_direction(d1),
            crosses[a].dart_length(d0),
            crosses[b].dart_length(d1),
        )
    edge_dart: dict[int, int] = {}
    for c in partition.circuits:
        for w in c.darts:
            edge_dart[w >> 1] = w
    return KnotDrawing(g, layout, partition, assignment, crosses, curves, edge_dart)


def draw_knot(
    g: PlaneMultigraph, strategy: Strategy, layout: Layout | None = None
) -> KnotDrawing:
    """Full pipeline: faces, coloring, partition, signs, crosses, curves."""
    if layout is None:
        if g.positions:
            layout = Layout(dict(g.positions))
        else:
            faces = trace_faces(g)
            from .graph import outer_face_index

            layout = tutte_layout(g, faces[outer_face_index(g, faces)])
    colored = two_color_faces(g)
    partition = threaded_circuit_partition(g)
    assignment = under_over(g, partition, colored)
    crosses = build_crosses(g, layout, strategy)
    return assemble_drawing(g, layout, partition, assignment, crosses)


# ---------------------------------------------------------------------------
# Smoothness and crossing diagnostics
# ---------------------------------------------------------------------------

def c1_defects(drawing: KnotDrawing, tol: float = 1e-9) -> list[tuple[int, float]]:
    """Threads whose tangents fail to be collinear at the midpoint.

    Returns (vertex, sine of deviation angle) for each defect; empty means
    every circuit is C1-smooth.
    """
    defects: list[tuple[int, float]] = []
    for c in drawing.partition.circuits:
        k = len(c.darts)
        for i in range(k):
            w_in = c.darts[i]
            w_out = c.darts[(i + 1) % k]
            e_in, e_out = w_in >> 1, w_out >> 1
            cin = drawing.edges[e_in]
            cout = drawing.edges[e_out]
            vin, _ = derivatives(cin, 1.0 if (w_in & 1) == 0 else 0.0)
            if w_in & 1:
                vin = -vin
            vout, _ = derivatives(cout, 0.0 if (w_out & 1) == 0 else 1.0)
            if w_out & 1:
                vout = -vout
            nin = np.linalg.norm(vin)
            nout = np.linalg.norm(vout)
            if nin == 0 or nout == 0:
                defects.append((drawing.graph.head(w_in), 1.0))
                continue
            sin_dev = abs(vin[0] * vout[1] - vin[1] * vout[0]) / (nin * nout)
            aligned = float(np.dot(vin, vout)) > 0
            if sin_dev > tol or not aligned:
                defects.append((drawing.graph.head(w_in), float(sin_dev)))
    return defects


def flatten_curve(b: CubicBezier, tol: float = 1e-3) -> np.ndarray:
    """Polyline approximation within tol (recursive flatness subdivision)."""
    out: list[tuple[float, float]] = []

    def flat_enough(c: CubicBezier) -> bool:
        pts = c.points
        chord = pts[3] - pts[0]
        n = np.linalg.norm(chord)
        if n < tol:
            return True
        d1 = abs(np.cross(chord, pts[1] - pts[0])) / n
        d2 = abs(np.cross(chord, pts[2] - pts[0])) / n
        return max(d1, d2) <= tol

    def rec(c: CubicBezier, depth: int):
        if depth >= 16 or flat_enough(c):
            out.append(tuple(c.points[3]))
            return
        left, right = split_at(c, 0.5)
        rec(left, depth + 1)
        rec(right, depth + 1)

    out.append(tuple(b.points[0]))
    rec(b, 0)
    return np.array(out)


def _segments_intersect(p, q, r, s, eps=1e-6):
    d1 = q - p
    d2 = s - r
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(denom) < 1e-18:
        return None
    w = r - p
    t = (w[0] * d2[1] - w[1] * d2[0]) / denom
    u = (w[0] * d1[1] - w[1] * d1[0]) / denom
    if eps < t < 1 - eps and eps < u < 1 - eps:
        return p + t * d1
    return None


def extra_crossings(drawing: KnotDrawing, flatten_tol: float = 1e-3) -> list[tuple[int, int, tuple[float, float]]]:
    """Curve intersections away from the vertices.

    In a correct drawing curves meet only at the crossings; anything else
    (usually ballooning) is reported as (edge, edge, point) and is a
    warning, not an error.
    """
    polys = {e: flatten_curve(b, flatten_tol) for e, b in drawing.edges.items()}
    verts = np.array(list(drawing.layout.positions.values()), dtype=float)
    vertex_radius = 0.05 * drawing.extent()
    found = []
    edges = sorted(polys)
    for i, e1 in enumerate(edges):
        for e2 in edges[i:]:
            a, b = polys[e1], polys[e2]
            for k in range(len(a) - 1):
                j0 = k + 2 if e1 == e2 else 0
                for j in range(j0, len(b) - 1):
                    if e1 == e2 and abs(k - j) <= 1:
                        continue
                    pt = _segments_intersect(a[k], a[k + 1], b[j], b[j + 1])
                    if pt is None:
                        continue
                    if len(verts) and np.min(np.linalg.norm(verts - pt, axis=1)) <= vertex_radius:
                        continue
                    found.append((e1, e2, (float(pt[0]), float(pt[1]))))
    if found:
        warnings.warn(f"{len(found)} unintended curve crossings", stacklevel=2)
    return found


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _clipped_curve(drawing: KnotDrawing, e: int, gap: float) -> CubicBezier:
    """The edge curve with ``gap`` arc length removed at its under end."""
    b = drawing.edges[e]
    total = arc_length(b)
    g = min(gap, 0.45 * total)
    if drawing.under_end(e) == 0:
        t = t_at_arc_length(b, g)
        return split_at(b, t)[1]
    t = t_at_arc_length(b, total - g)
    return split_at(b, t)[0]


def render_svg(drawing: KnotDrawing, style: RenderStyle | None = None) -> bytes:
    """Deterministic SVG 1.1 document; one path per edge, colored by circuit.

    Output bytes are identical across runs for identical inputs: fixed
    float formatting, sorted edge iteration, no metadata.
    """
    if style is None:
        style = RenderStyle.auto(drawing)
    s = style.scale

    pieces: dict[int, CubicBezier] = {
        e: _clipped_curve(drawing, e, style.gap_width) for e in sorted(drawing.edges)
    }

    all_pts = np.array(
        [p for b in pieces.values() for p in b.points] or [(0.0, 0.0)], dtype=float
    )
    margin = 3.0 * style.strand_width + 0.03 * drawing.extent()
    x0, y0 = (all_pts.min(axis=0) - margin) * s
    x1, y1 = (all_pts.max(axis=0) + margin) * s
    # SVG y grows downward; flip so the drawing keeps its orientation.
    view = (x0, -y1, x1 - x0, y1 - y0)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(view[0])} {_fmt(view[1])} {_fmt(view[2])} {_fmt(view[3])}">',
    ]
    if style.background:
        lines.append(
            f'<rect x="{_fmt(view[0])}" y="{_fmt(view[1])}" width="{_fmt(view[2])}" '
            f'height="{_fmt(view[3])}" fill="{style.background}"/>'
        )
    width = _fmt(style.strand_width * s)
    for e in sorted(pieces):
        b = pieces[e]
        color = style.palette[drawing.circuit_of(e) % len(style.palette)]
        pts = [(p[0] * s, -p[1] * s) for p in b.points]
        d = (
            f"M {_fmt(pts[0][0])} {_fmt(pts[0][1])} "
            f"C {_fmt(pts[1][0])} {_fmt(pts[1][1])}, "
            f"{_fmt(pts[2][0])} {_fmt(pts[2][1])}, "
            f"{_fmt(pts[3][0])} {_fmt(pts[3][1])}"
        )
        lines.append(
            f'<path id="edge-{e}" d="{d}" fill="none" stroke="{color}" '
            f'stroke-width="{width}" stroke-linecap="butt"/>'
        )
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Interchange JSON
# ---------------------------------------------------------------------------

INTERCHANGE_VERSION = "1"


def export_interchange(drawing: KnotDrawing, style: RenderStyle | None = None) -> dict[str, Any]:
    """Control points, circuits and crossing data as a JSON document.

    ``clipped`` carries the render-ready sub-curve (under-end gap already
    applied) so thin clients can draw without any curve math.
    """
    if style is None:
        style = RenderStyle.auto(drawing)
    g = drawing.graph
    vertices = []
    for v in g.vertices:
        over = drawing.assignment.over_dart_at(v)
        unders = [d for d in drawing.assignment.in_darts_at(v) if d != over]
        vertices.append(
            {
                "id": v,
                "pos": list(drawing.layout[v]),
                "over": [over >> 1, over & 1],
                "under": [unders[0] >> 1, unders[0] & 1],
            }
        )
    edges = []
    for e in g.edges:
        b = drawing.edges[e]
        clipped = _clipped_curve(drawing, e, style.gap_width)
        u, v = g.edge_ends(e)
        edges.append(
            {
                "id": e,
                "ends": [[u, g.slot(dart(e, 0))], [v, g.slot(dart(e, 1))]],
                "circuit": drawing.circuit_of(e),
                "under_end": drawing.under_end(e),
                "controls": [list(b.p0), list(b.p1), list(b.p2), list(b.p3)],
                "clipped": [list(clipped.p0), list(clipped.p1), list(clipped.p2), list(clipped.p3)],
            }
        )
    circuits = []
    for c in drawing.partition.circuits:
        circuits.append(
            {
                "id": c.id,
                "edges": c.edge_ids(),
                "vertices": c.vertex_sequence(g),
                "color": style.palette[c.id % len(style.palette)],
            }
        )
    return {
        "version": INTERCHANGE_VERSION,
        "vertices": vertices,
        "edges": edges,
        "circuits": circuits,
    }


def interchange_bytes(doc: dict[str, Any]) -> bytes:
    return dumps_canonical(doc)


def load_interchange(doc: dict[str, Any] | bytes | str) -> dict[int, CubicBezier]:
    """Curves from an interchange document (the round-trip inverse)."""
    if isinstance(doc, (bytes, str)):
        doc = json.loads(doc)
    if doc.get("version") != INTERCHANGE_VERSION:
        raise KnotworkError(f"unsupported interchange version {doc.get('version')!r}")
    return {
        e["id"]: CubicBezier(*(tuple(p) for p in e["controls"])) for e in doc["edges"]
    }
