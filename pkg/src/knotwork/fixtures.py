"""Named example graphs and generators.

The medial construction is the main generator: the medial of any connected
plane multigraph is a 4-regular plane multigraph (one crossing per host
edge), so random plane graphs give an endless supply of valid inputs.  The
named fixtures are small graphs with known circuit structure, used
throughout the tests and demos.
"""

from __future__ import annotations

import math
import random
from typing import Mapping

from .graph import PlaneMultigraph, dart
from .layout import Layout, rotation_from_coordinates


# ---------------------------------------------------------------------------
# Medial graphs
# ---------------------------------------------------------------------------

def medial(h: PlaneMultigraph) -> PlaneMultigraph:
    """The medial of a plane multigraph.

    One medial vertex per edge of ``h`` (placed at its midpoint when
    positions are known); one medial edge per corner, i.e. per consecutive
    dart pair in a rotation.  The medial rotation at the vertex on edge e,
    with darts d (end 0) and d' (end 1), is counterclockwise::

        (after d', before d', after d, before d)

    where "after"/"before" are the corners e shares with its rotation
    successor/predecessor at that end.  Hosts may have any degrees: pendant
    vertices produce medial loops, degree-2 vertices produce parallel
    medial edges.
    """
    corner_id: dict[tuple[int, int], int] = {}
    corners: list[tuple[int, int]] = []
    for v in h.vertices:
        rot = h.rotation[v]
        for i in range(len(rot)):
            corner_id[(v, i)] = len(corners)
            corners.append((v, i))

    def corner_after(d: int) -> int:
        # corner between d and its rotation successor
        return corner_id[(h.origin(d), h.slot(d))]

    def corner_before(d: int) -> int:
        v = h.origin(d)
        deg = len(h.rotation[v])
        return corner_id[(v, (h.slot(d) - 1) % deg)]

    rotation: dict[int, tuple[int, ...]] = {}
    for e in h.edges:
        d0, d1 = 2 * e, 2 * e + 1
        rotation[e] = (
            dart(corner_after(d1), 0),
            dart(corner_before(d1), 1),
            dart(corner_after(d0), 0),
            dart(corner_before(d0), 1),
        )

    positions: dict[int, tuple[float, float]] = {}
    if h.positions:
        for e in h.edges:
            u, v = h.edge_ends(e)
            if u in h.positions and v in h.positions:
                (ux, uy), (vx, vy) = h.positions[u], h.positions[v]
                positions[e] = ((ux + vx) / 2.0, (uy + vy) / 2.0)
    return PlaneMultigraph(rotation, positions)


def relabel(g: PlaneMultigraph, vertex_map: Mapping[int, int]) -> PlaneMultigraph:
    """Rename vertices and renumber edges compactly (sorted by endpoints).

    The rotation lists are carried over unchanged, so the embedding (and
    hence the circuit structure) is preserved.
    """
    order = sorted(
        g.edges, key=lambda e: tuple(sorted(vertex_map[v] for v in g.edge_ends(e))) + (e,)
    )
    edge_map = {e: i for i, e in enumerate(order)}
    rotation = {
        vertex_map[v]: tuple(dart(edge_map[d >> 1], d & 1) for d in rot)
        for v, rot in g.rotation.items()
    }
    positions = {vertex_map[v]: p for v, p in g.positions.items()}
    outer = None
    if g.outer_dart is not None:
        outer = dart(edge_map[g.outer_dart >> 1], g.outer_dart & 1)
    return PlaneMultigraph(rotation, positions, outer)


# ---------------------------------------------------------------------------
# Small named fixtures
# ---------------------------------------------------------------------------

def two_loops() -> PlaneMultigraph:
    """One vertex with two side-by-side loops (a figure eight)."""
    rotation = {0: (dart(0, 0), dart(0, 1), dart(1, 0), dart(1, 1))}
    return PlaneMultigraph(rotation, {0: (0.0, 0.0)})


def nested_loops() -> PlaneMultigraph:
    """One vertex with one loop drawn inside the other.

    The outer face is a 1-gon, so it is marked explicitly; the longest
    boundary here is the annulus between the loops.
    """
    rotation = {0: (dart(0, 0), dart(1, 0), dart(1, 1), dart(0, 1))}
    return PlaneMultigraph(rotation, {0: (0.0, 0.0)}, outer_dart=dart(0, 0))


def _regular_polygon(ids, radius: float, phase: float = math.pi / 2) -> dict[int, tuple[float, float]]:
    n = len(ids)
    return {
        v: (radius * math.cos(phase + 2 * math.pi * k / n),
            radius * math.sin(phase + 2 * math.pi * k / n))
        for k, v in enumerate(ids)
    }


def triangle() -> PlaneMultigraph:
    """Plain 3-cycle (degree 2 everywhere); host graph for the trefoil."""
    pos = _regular_polygon([0, 1, 2], 1.0)
    return rotation_from_coordinates({0: (0, 1), 1: (1, 2), 2: (2, 0)}, Layout(pos))


def trefoil() -> PlaneMultigraph:
    """The trefoil knot shadow: 3 crossings, doubled triangle edges."""
    return medial(triangle())


def three_prism() -> PlaneMultigraph:
    """The 3-prism (two nested triangles plus rungs); host for prism_knot."""
    outer = _regular_polygon([0, 1, 2], 2.0)
    inner = _regular_polygon([3, 4, 5], 1.0)
    pos = {**outer, **inner}
    edges = {
        0: (0, 1), 1: (1, 2), 2: (2, 0),
        3: (3, 4), 4: (4, 5), 5: (5, 3),
        6: (0, 3), 7: (1, 4), 8: (2, 5),
    }
    return rotation_from_coordinates(edges, Layout(pos))


def prism_knot() -> PlaneMultigraph:
    """The 3-prism made 4-regular by doubling its three rungs.

    Exactly three threaded circuits (the three square faces of the prism),
    each woven through 4 crossings; short rungs next to long triangle edges
    make it the standard stress test for arm-length strategies.
    """
    outer = _regular_polygon([0, 1, 2], 2.0)
    inner = _regular_polygon([3, 4, 5], 1.0)
    pos = {**outer, **inner}
    edges = {
        0: (0, 1), 1: (1, 2), 2: (2, 0),
        3: (3, 4), 4: (4, 5), 5: (5, 3),
        6: (0, 3), 7: (0, 3), 8: (1, 4), 9: (1, 4), 10: (2, 5), 11: (2, 5),
    }
    hints: dict[tuple[int, int], float] = {}
    for e, (u, v) in edges.items():
        if e >= 6:
            # Bow the rung copies slightly to either side of the straight rung.
            base = math.atan2(pos[v][1] - pos[u][1], pos[v][0] - pos[u][0])
            off = -0.15 if e % 2 == 0 else 0.15
            hints[(e, 0)] = base + off
            hints[(e, 1)] = (base + math.pi) - off
    return rotation_from_coordinates(edges, Layout(pos), hints)


def endless_knot_9() -> PlaneMultigraph:
    """A 9-crossing graph with a threaded Euler circuit (a single strand).

    This is the medial of the 3-prism; it is 3-connected, so its embedding
    is unique up to reflection and the single circuit of length 18 is forced.
    Vertices are relabeled so the strand reads
    (0,1,2,3,4,0,5,6,3,7,1,5,8,4,7,2,6,8).
    """
    return relabel(medial(three_prism()), {0: 0, 6: 1, 5: 2, 4: 3, 7: 4, 2: 5, 8: 6, 3: 7, 1: 8})


def doubled_k4() -> PlaneMultigraph:
    """K4 with the edges (0,1) and (2,3) doubled: 4 vertices, 8 edges.

    Edge ids: 0=(0,1) 1=(0,1)' 2=(2,3) 3=(2,3)' 4=(0,2) 5=(0,3) 6=(1,2)
    7=(1,3).  Vertex 3 sits inside triangle 0-1-2; the duplicate of (0,1)
    runs below it and the duplicate of (2,3) beside it.
    """
    ends = {
        0: ((0, 1), (1, 2)),   # (0,1) straight
        1: ((0, 0), (1, 3)),   # (0,1) bowed outward (below)
        2: ((2, 1), (3, 1)),   # (2,3) straight
        3: ((2, 2), (3, 0)),   # (2,3) bowed right
        4: ((0, 3), (2, 0)),   # (0,2)
        5: ((0, 2), (3, 2)),   # (0,3)
        6: ((1, 0), (2, 3)),   # (1,2)
        7: ((1, 1), (3, 3)),   # (1,3)
    }
    pos = {0: (0.0, 0.0), 1: (4.0, 0.0), 2: (2.0, 3.0), 3: (2.0, 1.0)}
    return PlaneMultigraph.from_edge_slots(ends, pos)


# ---------------------------------------------------------------------------
# Bridge-chain construction (re-embedding demo)
# ---------------------------------------------------------------------------

class _GadgetBuilder:
    """Allocates vertex/edge ids while assembling strand gadgets."""

    def __init__(self, reserved_vertices: int):
        self.next_v = reserved_vertices
        self.next_e = 0
        self.rot: dict[int, tuple[int, ...]] = {}

    def vertex(self) -> int:
        self.next_v += 1
        return self.next_v - 1

    def edge(self) -> int:
        self.next_e += 1
        return self.next_e - 1


def _build_bridge(b: _GadgetBuilder, beads: list[str]) -> tuple[int, int]:
    """A strand from pole 0 to pole 1 decorated with gadgets.

    'curl': the strand crosses itself once (one vertex, a loop).
    'ring6': a separate 6-cycle strand clasps the bridge at two crossings
    and carries two curls of its own.
    Returns the darts to attach at the two poles.
    """
    e0 = b.edge()
    start = dart(e0, 0)
    incoming = e0
    for kind in beads:
        if kind == "curl":
            x = b.vertex()
            l = b.edge()
            n = b.edge()
            b.rot[x] = (dart(incoming, 1), dart(l, 0), dart(l, 1), dart(n, 0))
            incoming = n
        elif kind == "ring6":
            x, y, r1, r2 = (b.vertex() for _ in range(4))
            m = b.edge()
            a1, l1, a2, l2, a3, a4 = (b.edge() for _ in range(6))
            n = b.edge()
            b.rot[x] = (dart(incoming, 1), dart(a1, 0), dart(m, 0), dart(a4, 1))
            b.rot[y] = (dart(a4, 0), dart(m, 1), dart(a3, 1), dart(n, 0))
            b.rot[r1] = (dart(a1, 1), dart(l1, 0), dart(l1, 1), dart(a2, 0))
            b.rot[r2] = (dart(a2, 1), dart(l2, 0), dart(l2, 1), dart(a3, 0))
            incoming = n
        else:
            raise ValueError(f"unknown bead {kind!r}")
    return start, dart(incoming, 1)


_BRIDGE_BEADS = {
    1: ["ring6", "curl"],
    2: ["ring6", "curl", "curl", "curl"],
    3: ["curl", "curl", "curl"],
    4: ["curl"],
}


def four_bridge_knot(order: tuple[int, int, int, int]) -> PlaneMultigraph:
    """Two poles joined by four decorated strand bridges.

    ``order`` is the counterclockwise arrangement of the bridges around pole
    0 (pole 1 sees them reversed).  Threads pair opposite slots, so the
    arrangement decides which bridge strands join into circuits; the two
    clasped rings contribute a 6-circuit each no matter what.
    """
    if sorted(order) != [1, 2, 3, 4]:
        raise ValueError("order must arrange bridges 1..4")
    b = _GadgetBuilder(reserved_vertices=2)
    start: dict[int, int] = {}
    end: dict[int, int] = {}
    for i in sorted(_BRIDGE_BEADS):
        start[i], end[i] = _build_bridge(b, _BRIDGE_BEADS[i])
    b.rot[0] = tuple(start[i] for i in order)
    b.rot[1] = tuple(end[i] for i in reversed(order))
    return PlaneMultigraph(b.rot)


def reembedding_pair() -> tuple[PlaneMultigraph, PlaneMultigraph]:
    """Two plane embeddings of one graph with different circuit lengths.

    Both embeddings partition into 4 circuits, but the first has length
    multiset {6,6,12,12} and the second {6,6,10,14}: rearranging bridges
    around the poles re-pairs the long strands while the clasped rings are
    untouched.  The circuit count is the invariant; the lengths are not.
    """
    return four_bridge_knot((1, 2, 3, 4)), four_bridge_knot((1, 3, 2, 4))


# ---------------------------------------------------------------------------
# Cut-and-glue constructions
# ---------------------------------------------------------------------------

def subdivide_edge(g: PlaneMultigraph, e: int) -> tuple[PlaneMultigraph, int]:
    """Insert a degree-2 vertex on edge e; returns (graph, new vertex id)."""
    c = max(g.vertices) + 1
    eb = max(g.edges) + 1
    old = dart(e, 1)
    rotation = {v: list(rot) for v, rot in g.rotation.items()}
    at = rotation[g.origin(old)]
    at[at.index(old)] = dart(eb, 1)
    rotation[c] = [old, dart(eb, 0)]
    positions = dict(g.positions)
    u, v = g.edge_ends(e)
    if u in positions and v in positions:
        positions[c] = ((positions[u][0] + positions[v][0]) / 2.0,
                        (positions[u][1] + positions[v][1]) / 2.0)
    return PlaneMultigraph({k: tuple(r) for k, r in rotation.items()}, positions), c


def glue_at_degree2(
    ga: PlaneMultigraph, ca: int, gb: PlaneMultigraph, cb: int
) -> tuple[PlaneMultigraph, int]:
    """Merge two degree-2 vertices into one degree-4 cut vertex.

    gb is inserted whole into a face corner of ga at ca, which is always a
    plane operation, so the result validates whenever both inputs do.
    Positions are dropped (the fixture is combinatorial).
    """
    if len(ga.rotation[ca]) != 2 or len(gb.rotation[cb]) != 2:
        raise ValueError("both glue vertices must have degree 2")
    v_off = max(ga.vertices) + 1
    e_off = max(ga.edges) + 1
    vb_map = {v: (ca if v == cb else v_off + i)
              for i, v in enumerate(w for w in gb.vertices if w != cb)} | {cb: ca}

    def b_dart(d: int) -> int:
        return dart(e_off + (d >> 1), d & 1)

    rotation: dict[int, tuple[int, ...]] = {
        v: tuple(rot) for v, rot in ga.rotation.items() if v != ca
    }
    for v, rot in gb.rotation.items():
        if v != cb:
            rotation[vb_map[v]] = tuple(b_dart(d) for d in rot)
    rotation[ca] = tuple(ga.rotation[ca]) + tuple(b_dart(d) for d in gb.rotation[cb])
    return PlaneMultigraph(rotation), ca


def glued_knots(
    ga: PlaneMultigraph, ea: int, gb: PlaneMultigraph, eb: int
) -> tuple[PlaneMultigraph, int]:
    """Two 4-regular graphs joined at a cutpoint placed on the given edges."""
    sa,ca = subdivide_edge(ga, ea)
    sb, cb = subdivide_edge(gb, eb)
    return glue_at_degree2(sa, ca, sb, cb)


def glued_trefoils() -> tuple[PlaneMultigraph, int]:
    """Two trefoil shadows sharing one crossing (the smallest nontrivial
    cutpoint fixture beyond the figure eight)."""
    return glued_knots(trefoil(), 0, trefoil(), 0)


# ---------------------------------------------------------------------------
# Random generators
# ---------------------------------------------------------------------------

def random_plane_graph(
    seed: int, n_points: int = 8, delete_fraction: float = 0.25
) -> PlaneMultigraph:
    """Random connected plane graph from a Delaunay triangulation.

    Points are sampled in the unit square, triangulated, then a fraction of
    edges is deleted as long as the graph stays connected.  The rotation
    system comes from the coordinates.
    """
    from scipy.spatial import Delaunay

    rng = random.Random(seed)
    while True:
        pts = [(rng.random(), rng.random()) for _ in range(n_points)]
        # Degenerate point sets (collinear) make Delaunay fail; resample.
        try:
            tri = Delaunay(pts)
        except Exception:
            continue
        edge_set: set[tuple[int, int]] = set()
        for simplex in tri.simplices:
            a, b, c = (int(x) for x in simplex)
            for u, v in ((a, b), (b, c), (c, a)):
                edge_set.add((min(u, v), max(u, v)))
        edges = sorted(edge_set)
        adj: dict[int, set[int]] = {i: set() for i in range(n_points)}
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)

        def connected(adjacency: dict[int, set[int]]) -> bool:
            verts = [v for v in adjacency if adjacency[v]]
            if not verts:
                return False
            seen = {verts[0]}
            stack = [verts[0]]
            while stack:
                x = stack.pop()
                for y in adjacency[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            return len(seen) == n_points

        if not connected(adj):
            continue

        order = list(edges)
        rng.shuffle(order)
        keep = set(edges)
        target = max(0, int(delete_fraction * len(edges)))
        removed = 0
        for u, v in order:
            if removed >= target:
                break
            keep.discard((u, v))
            adj[u].discard(v)
            adj[v].discard(u)
            if connected(adj):
                removed += 1
            else:
                keep.add((u, v))
                adj[u].add(v)
                adj[v].add(u)

        edge_map = {i: uv for i, uv in enumerate(sorted(keep))}
        layout = Layout({i: pts[i] for i in range(n_points)})
        try:
            return rotation_from_coordinates(edge_map, layout)
        except Exception:
            continue


def random_knot_graph(seed: int, n_points: int = 8, delete_fraction: float = 0.25) -> PlaneMultigraph:
    """Random 4-regular plane multigraph: the medial of a random plane graph."""
    return medial(random_plane_graph(seed, n_points, delete_fraction))


def random_cutpoint_fixture(seed: int) -> tuple[PlaneMultigraph, int]:
    """Random barbell: two random 4-regular graphs glued at a cut vertex."""
    rng = random.Random(seed)
    ga = random_knot_graph(rng.randrange(1 << 30), n_points=rng.randint(4, 7))
    gb = random_knot_graph(rng.randrange(1 << 30), n_points=rng.randint(4, 7))
    ea = rng.choice(ga.edges)
    eb = rng.choice(gb.edges)
    return glued_knots(ga, ea, gb, eb)
