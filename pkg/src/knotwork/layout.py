"""Straight-line drawings: barycentric (Tutte) layout and coordinate input.

The drawing pipeline needs vertex coordinates; input files either carry them
or a layout is computed here.  Conversely, files without explicit rotation
slots get their embedding read off the drawing by sorting incident edges by
angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .graph import Face, KnotworkError, PlaneMultigraph, dart

Point = tuple[float, float]


class AmbiguousRotationError(KnotworkError):
    """Two incident edges leave a vertex at the same angle."""

    code = "AMBIGUOUS_ROTATION"


class SingularSystemError(KnotworkError):
    """The barycentric linear system is singular (degenerate skeleton)."""

    code = "SINGULAR_SYSTEM"


@dataclass(frozen=True)
class Layout:
    positions: Mapping[int, Point]

    def __getitem__(self, v: int) -> Point:
        return self.positions[v]

    def min_separation(self) -> float:
        pts = list(self.positions.values())
        best = math.inf
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                best = min(best, math.dist(pts[i], pts[j]))
        return best

    def check(self, min_sep: float = 1e-9) -> None:
        if len(self.positions) > 1 and self.min_separation() < min_sep:
            raise KnotworkError(f"two vertices closer than {min_sep}")


def _skeleton(g: PlaneMultigraph) -> dict[int, set[int]]:
    """Simple-graph adjacency: loops dropped, parallel edges merged."""
    adj: dict[int, set[int]] = {v: set() for v in g.vertices}
    for e in g.edges:
        u, v = g.edge_ends(e)
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def outer_cycle_vertices(g: PlaneMultigraph, outer: Face) -> list[int]:
    """Distinct vertices along the outer face walk, in walk order."""
    seen: set[int] = set()
    cycle: list[int] = []
    for d in outer.darts:
        v = g.origin(d)
        if v not in seen:
            seen.add(v)
            cycle.append(v)
    return cycle


def tutte_layout(g: PlaneMultigraph, outer: Face, radius: float = 1.0) -> Layout:
    """Barycentric layout: outer face on a convex polygon, interior vertices
    at the average of their skeleton neighbours.

    Exact for 3-connected simple skeletons (Tutte's theorem); best effort
    otherwise.  The outer walk is placed clockwise so that the drawing's
    orientation matches counterclockwise rotation lists.
    """
    adj = _skeleton(g)
    boundary = outer_cycle_vertices(g, outer)
    n = len(boundary)
    positions: dict[int, Point] = {}
    for k, v in enumerate(boundary):
        ang = math.pi / 2 - 2.0 * math.pi * k / max(n, 1)
        positions[v] = (radius * math.cos(ang), radius * math.sin(ang))

    interior = [v for v in g.vertices if v not in positions]
    if not interior:
        return Layout(positions)

    index = {v: i for i, v in enumerate(interior)}
    m = len(interior)
    a = np.zeros((m, m))
    bx = np.zeros(m)
    by = np.zeros(m)
    for v in interior:
        i = index[v]
        neigh = adj[v]
        if not neigh:
            raise SingularSystemError(f"vertex {v} has no skeleton neighbours")
        a[i, i] = len(neigh)
        for w in neigh:
            if w in index:
                a[i, index[w]] -= 1.0
            else:
                bx[i] += positions[w][0]
                by[i] += positions[w][1]
    try:
        xs = np.linalg.solve(a, bx)
        ys = np.linalg.solve(a, by)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    if max(
        float(np.max(np.abs(a @ xs - bx), initial=0.0)),
        float(np.max(np.abs(a @ ys - by), initial=0.0)),
    ) > 1e-9:
        raise SingularSystemError("barycentric solve residual above 1e-9")

    for v in interior:
        positions[v] = (float(xs[index[v]]), float(ys[index[v]]))
    return Layout(positions)


def rotation_from_coordinates(
    edges: Mapping[int, tuple[int, int]],
    layout: Layout,
    angle_hints: Mapping[tuple[int, int], float] | None = None,
) -> PlaneMultigraph:
    """Embed an abstract multigraph using a plane straight-line drawing.

    edges maps edge id -> (u, v).  The rotation at each vertex is its
    incident darts sorted by counterclockwise angle of the initial edge
    direction.  Loops and parallel straight edges have coincident angles and
    need angle_hints, keyed by (edge, end), giving the departure direction
    in radians; otherwise AmbiguousRotationError is raised.
    """
    hints = dict(angle_hints or {})
    incident: dict[int, list[tuple[float, int]]] = {}
    for e, (u, v) in edges.items():
        for end, (a, b) in (((0), (u, v)), ((1), (v, u))):
            if (e, end) in hints:
                ang = hints[(e, end)]
            elif a == b:
                raise AmbiguousRotationError(
                    f"loop {e} at vertex {a} needs angle hints or explicit slots"
                )
            else:
                ax, ay = layout[a]
                bx, by = layout[b]
                ang = math.atan2(by - ay, bx - ax)
            incident.setdefault(a, []).append((ang % (2 * math.pi), dart(e, end)))

    rotation: dict[int, tuple[int, ...]] = {}
    for v, items in incident.items():
        items.sort()
        for (a1, d1), (a2, d2) in zip(items, items[1:]):
            if abs(a1 - a2) < 1e-12:
                raise AmbiguousRotationError(
                    f"edges {d1 >> 1} and {d2 >> 1} leave vertex {v} at the same angle"
                )
        rotation[v] = tuple(d for _, d in items)
    for v in layout.positions:
        rotation.setdefault(v, ())

    return PlaneMultigraph(rotation, dict(layout.positions))
