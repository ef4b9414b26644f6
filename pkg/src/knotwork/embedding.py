"""Embedding enumeration and the two invariance theorems, made executable.

Two facts about the number of threaded circuits are checked by brute force
here rather than taken on trust:

* splitting a graph at a cutpoint and capping each side with a loop keeps
  the circuit count additive: |C| = |C1| + |C2| - 1;
* for 2-connected graphs the circuit count is an invariant of the abstract
  graph: every plane embedding gives the same cardinality (circuit lengths
  may differ).

Plane embeddings of a small abstract graph are enumerated exhaustively: each
vertex has (4-1)! = 6 cyclic dart orders, and a candidate assignment is kept
when every component satisfies V - E + F = 2.  This is an independent oracle;
nothing from the threading code influences which embeddings are produced.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .graph import KnotworkError, PlaneMultigraph, dart, twin
from .threads import threaded_circuit_partition


class TooLargeError(KnotworkError):
    """Exhaustive enumeration requested above the vertex cap."""

    code = "TOO_LARGE"


class NotBiconnectedError(KnotworkError):
    """The invariance check needs a 2-connected graph; use the cutpoint check."""

    code = "NOT_BICONNECTED"


class NotACutpointError(KnotworkError):
    code = "NOT_A_CUTPOINT"


EXHAUSTIVE_VERTEX_CAP = 8


def _dart_sides(edges: Sequence[tuple[int, int]]) -> dict[int, list[int]]:
    """Vertex -> darts based there, for an abstract edge list."""
    at: dict[int, list[int]] = {}
    for e, (u, v) in enumerate(edges):
        at.setdefault(u, []).append(dart(e, 0))
        at.setdefault(v, []).append(dart(e, 1))
    return at


def _is_connected(edges: Sequence[tuple[int, int]]) -> bool:
    if not edges:
        return False
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj)


def count_faces(rotation: dict[int, tuple[int, ...]]) -> int:
    """Orbit count of the face-walk permutation d -> succ(twin(d))."""
    succ: dict[int, int] = {}
    for rot in rotation.values():
        n = len(rot)
        for i, d in enumerate(rot):
            succ[d] = rot[(i + 1) % n]
    seen: set[int] = set()
    faces = 0
    for start in succ:
        if start in seen:
            continue
        faces += 1
        d = start
        while True:
            seen.add(d)
            d = succ[twin(d)]
            if d == start:
                break
    return faces


def enumerate_plane_embeddings(
    edges: Sequence[tuple[int, int]], max_vertices: int = EXHAUSTIVE_VERTEX_CAP
) -> Iterator[PlaneMultigraph]:
    """All plane rotation systems of a connected abstract 4-regular graph.

    Yields every assignment of cyclic dart orders whose face count satisfies
    Euler's formula.  Reflections (and loop-dart relabelings) are counted as
    distinct embeddings, which only makes invariance checks stronger.
    """
    if not _is_connected(edges):
        raise KnotworkError("embedding enumeration expects a connected graph")
    at = _dart_sides(edges)
    if any(len(ds) != 4 for ds in at.values()):
        raise KnotworkError("graph is not 4-regular")
    if len(at) > max_vertices:
        raise TooLargeError(
            f"{len(at)} vertices > cap {max_vertices}; use sample_plane_embeddings"
        )
    vertices = sorted(at)
    e_count = len(edges)
    v_count = len(vertices)

    per_vertex: list[list[tuple[int, ...]]] = []
    for v in vertices:
        first, *rest = sorted(at[v])
        per_vertex.append([(first, *perm) for perm in itertools.permutations(rest)])

    for combo in itertools.product(*per_vertex):
        rotation = dict(zip(vertices, combo))
        if v_count - e_count + count_faces(rotation) == 2:
            yield PlaneMultigraph(rotation)


def sample_plane_embeddings(
    edges: Sequence[tuple[int, int]], n: int, seed: int = 0, max_tries: int | None = None
) -> list[PlaneMultigraph]:
    """Up to n distinct plane rotation systems found by random sampling."""
    if not _is_connected(edges):
        raise KnotworkError("embedding sampling expects a connected graph")
    at = _dart_sides(edges)
    rng = random.Random(seed)
    vertices = sorted(at)
    found: dict[tuple, PlaneMultigraph] = {}
    tries = 0
    cap = max_tries if max_tries is not None else 2000 * n
    while len(found) < n and tries < cap:
        tries += 1
        rotation = {}
        for v in vertices:
            first, *rest = sorted(at[v])
            rng.shuffle(rest)
            rotation[v] = (first, *rest)
        if len(vertices) - len(edges) + count_faces(rotation) == 2:
            key = tuple(rotation[v] for v in vertices)
            found.setdefault(key, PlaneMultigraph(rotation))
    return list(found.values())


def articulation_points(edges: Sequence[tuple[int, int]]) -> set[int]:
    """Cut vertices of the underlying multigraph (loops ignored for DFS,
    but a vertex carrying loops plus a separable rest still shows up via
    the edge-class rule used by split_at_cutpoint)."""
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        if u != v:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        else:
            adj.setdefault(u, set())
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    cuts: set[int] = set()
    counter = itertools.count()

    for root in adj:
        if root in disc:
            continue
        parent[root] = None
        stack = [(root, iter(adj[root]))]
        disc[root] = low[root] = next(counter)
        children = {root: 0}
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w not in disc:
                    parent[w] = v
                    children[v] = children.get(v, 0) + 1
                    children.setdefault(w, 0)
                    disc[w] = low[w] = next(counter)
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
                elif w != parent[v]:
                    low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                p = parent[v]
                if p is not None:
                    low[p] = min(low[p], low[v])
                    if p != root and low[v] >= disc[p]:
                        cuts.add(p)
                    if p == root and children[root] > 1:
                        cuts.add(root)
    return cuts


@dataclass(frozen=True)
class CardinalityReport:
    cardinalities: tuple[int, ...]   # one entry per enumerated embedding
    invariant: bool
    length_multisets: tuple[tuple[int, ...], ...]  # distinct sorted-length tuples


def check_cardinality_invariance(
    edges: Sequence[tuple[int, int]], max_vertices: int = EXHAUSTIVE_VERTEX_CAP
) -> CardinalityReport:
    """Partition cardinality over every plane embedding of a 2-connected graph."""
    if articulation_points(edges):
        raise NotBiconnectedError(
            "graph has a cutpoint; use check_cutpoint_additivity instead"
        )
    cards: list[int] = []
    multisets: set[tuple[int, ...]] = set()
    for g in enumerate_plane_embeddings(edges, max_vertices):
        p = threaded_circuit_partition(g)
        cards.append(len(p))
        multisets.add(tuple(p.lengths()))
    if not cards:
        raise KnotworkError("no plane embedding found; graph is not planar")
    return CardinalityReport(tuple(cards), len(set(cards)) == 1, tuple(sorted(multisets)))


def split_at_cutpoint(
    g: PlaneMultigraph, cut_vertex: int
) -> tuple[PlaneMultigraph, PlaneMultigraph]:
    """The two loop-capped sides of a cutpoint.

    Each side keeps its own edges plus a fresh loop at the cut vertex,
    restoring 4-regularity.  Raises NotACutpointError when the incident
    edges do not fall into two classes.
    """
    if cut_vertex not in g.rotation:
        raise NotACutpointError(f"vertex {cut_vertex} not in graph")

    # Vertex components with the cut vertex removed.
    comp: dict[int, int] = {}
    next_comp = 0
    for v in g.vertices:
        if v == cut_vertex or v in comp:
            continue
        comp[v] = next_comp
        stack = [v]
        while stack:
            x = stack.pop()
            for d in g.rotation[x]:
                w = g.head(d)
                if w != cut_vertex and w not in comp:
                    comp[w] = next_comp
                    stack.append(w)
        next_comp += 1

    def edge_class(e: int) -> tuple[str, int]:
        u, v = g.edge_ends(e)
        if u == cut_vertex and v == cut_vertex:
            return ("loop", e)
        other = v if u == cut_vertex else u
        return ("comp", comp[other])

    classes = sorted({edge_class(e) for e in g.edges})
    if len(classes) != 2:
        raise NotACutpointError(
            f"vertex {cut_vertex} separates edges into {len(classes)} classes, expected 2"
        )

    sides = []
    rot_c = g.rotation[cut_vertex]
    for cls in classes:
        side_darts = [d for d in rot_c if edge_class(d >> 1) == cls]
        if len(side_darts) != 2:
            raise NotACutpointError(
                f"side {cls} attaches to the cutpoint with {len(side_darts)} darts"
            )
        i, j = (rot_c.index(side_darts[0]), rot_c.index(side_darts[1]))
        if (j - i) % 4 == 1:
            p, q = rot_c[i], rot_c[j]
        elif (i - j) % 4 == 1:
            p, q = rot_c[j], rot_c[i]
        else:
            raise NotACutpointError(
                "side darts are interleaved at the cutpoint; not a plane cut"
            )
        side_edges = sorted(e for e in g.edges if edge_class(e) == cls)
        loop_edge = max(g.edges) + 1
        rotation: dict[int, tuple[int, ...]] = {}
        for v in g.vertices:
            if v == cut_vertex:
                continue
            if all(edge_class(d >> 1) == cls for d in g.rotation[v]):
                rotation[v] = tuple(g.rotation[v])
            elif any(edge_class(d >> 1) == cls for d in g.rotation[v]):
                raise NotACutpointError(f"vertex {v} touches both sides")
        rotation[cut_vertex] = (p, q, dart(loop_edge, 0), dart(loop_edge, 1))
        positions = {v: g.positions[v] for v in rotation if v in g.positions}
        sides.append(PlaneMultigraph(rotation, positions))
    return sides[0], sides[1]


@dataclass(frozen=True)
class CutpointReport:
    lhs: int
    rhs: int
    equal: bool
    side_cardinalities: tuple[int, int]


def check_cutpoint_additivity(g: PlaneMultigraph, cut_vertex: int) -> CutpointReport:
    """Verify |C| = |C1| + |C2| - 1 at a cutpoint of g."""
    g1, g2 = split_at_cutpoint(g, cut_vertex)
    lhs = len(threaded_circuit_partition(g))
    c1 = len(threaded_circuit_partition(g1))
    c2 = len(threaded_circuit_partition(g2))
    rhs = c1 + c2 - 1
    return CutpointReport(lhs, rhs, lhs == rhs, (c1, c2))
