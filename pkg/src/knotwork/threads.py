"""Threaded circuit partitions and alternating under-over assignments.

A length-2 path through a vertex is a *thread* when its two edges are not
adjacent in the rotation there; with degree 4 that means the outgoing dart
sits exactly two cyclic positions from the twin of the incoming dart.  Every
dart has a unique thread continuation, so tracing continuations partitions
the edge set into circuits.  The partition is an invariant of the embedding:
no choice made during extraction affects it.

The under-over assignment gives each thread a sign: +1 when the face to the
left of the incoming dart is green (that strand passes over at its midpoint),
-1 otherwise.  Properness of the face 2-coloring makes the signs alternate
along every circuit and disagree between the two threads at every vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .graph import (
    GREEN,
    Face,
    KnotworkError,
    PlaneMultigraph,
    edge_of,
    require_valid,
    twin,
)


class InconsistentAssignmentError(KnotworkError):
    """Internal invariant trap: the computed assignment failed its checks."""

    code = "INCONSISTENT_ASSIGNMENT"


def next_dart_after(g: PlaneMultigraph, d: int) -> int:
    """The dart continuing the thread of d past its head vertex.

    d is read as arriving at its head; the continuation leaves two rotation
    slots away from twin(d), i.e. on the opposite side of the crossing.
    """
    t = twin(d)
    rot = g.rotation[g.origin(t)]
    return rot[(g.slot(t) + 2) % 4]


@dataclass(frozen=True)
class Circuit:
    """A closed threaded walk, stored as the cyclic dart sequence."""

    id: int
    darts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.darts)

    def edge_ids(self) -> list[int]:
        return [edge_of(d) for d in self.darts]

    def vertex_sequence(self, g: PlaneMultigraph) -> list[int]:
        return [g.origin(d) for d in self.darts]


@dataclass(frozen=True)
class CircuitPartition:
    circuits: tuple[Circuit, ...]

    @property
    def edge_to_circuit(self) -> dict[int, int]:
        return {e: c.id for c in self.circuits for e in c.edge_ids()}

    def lengths(self) -> list[int]:
        return sorted(len(c) for c in self.circuits)

    def __len__(self) -> int:
        return len(self.circuits)


def _canonical_cycle(darts: Sequence[int]) -> tuple[int, ...]:
    """Canonical representative of a cyclic dart sequence and its reversal.

    The reverse traversal uses the twin darts in reverse order.  Both
    orientations are rotated to start at their smallest dart; the
    lexicographically smaller sequence wins, so identical circuits always
    canonicalize identically no matter where extraction started.
    """
    def min_rotation(seq: list[int]) -> tuple[int, ...]:
        k = seq.index(min(seq))
        return tuple(seq[k:] + seq[:k])

    forward = min_rotation(list(darts))
    backward = min_rotation([twin(d) for d in reversed(darts)])
    return min(forward, backward)


def threaded_circuit_partition(
    g: PlaneMultigraph, seed_order: Iterable[int] | None = None
) -> CircuitPartition:
    """The unique partition of all edges into threaded circuits.

    seed_order optionally fixes the order in which unused edges are tried as
    starting points; the resulting partition is the same for every order
    (uniqueness), and the canonical output is byte-for-byte identical.
    Linear time in the number of edges.
    """
    require_valid(g)
    edges = g.edges
    order = list(seed_order) if seed_order is not None else edges
    if sorted(order) != edges:
        raise ValueError("seed_order must be a permutation of the edge ids")

    used: set[int] = set()
    raw: list[tuple[int, ...]] = []
    for e in order:
        if e in used:
            continue
        start = 2 * e
        cycle = []
        d = start
        while True:
            cycle.append(d)
            ed = edge_of(d)
            if ed in used:
                raise KnotworkError(
                    f"edge {ed} reached twice while tracing a circuit; "
                    "the rotation system is not a plane embedding"
                )
            used.add(ed)
            d = next_dart_after(g, d)
            if d == start:
                break
        raw.append(_canonical_cycle(cycle))

    raw.sort(key=lambda c: min(c))
    circuits = tuple(Circuit(i, c) for i, c in enumerate(raw))
    return CircuitPartition(circuits)


def is_threaded_euler(p: CircuitPartition) -> bool:
    """True when the whole graph is a single endless strand (a knot)."""
    return len(p.circuits) == 1


@dataclass(frozen=True)
class UnderOverAssignment:
    """Sign per thread, keyed by the incoming dart of the oriented circuit.

    +1 means the thread passes over at its midpoint.  ``in_darts_at`` gives
    the two incoming darts at a vertex (they always carry opposite signs).
    """

    value: Mapping[int, int]
    _by_vertex: Mapping[int, tuple[int, ...]] = field(default=None, repr=False, compare=False)

    def sign(self, in_dart: int) -> int:
        return self.value[in_dart]

    def in_darts_at(self, vertex: int) -> tuple[int, ...]:
        return self._by_vertex[vertex]

    def over_dart_at(self, vertex: int) -> int:
        a, b = self._by_vertex[vertex]
        return a if self.value[a] == +1 else b


def under_over(
    g: PlaneMultigraph, partition: CircuitPartition, colored_faces: Sequence[Face]
) -> UnderOverAssignment:
    """Consistent alternating under-over assignment from the face coloring.

    colored_faces must be the output of :func:`knotwork.graph.two_color_faces`.
    The result is checked post-hoc: opposite signs at every vertex, strict
    alternation along every circuit.
    """
    color_left: dict[int, str] = {}
    for f in colored_faces:
        if f.color is None:
            raise ValueError("faces must be colored; call two_color_faces first")
        for d in f.darts:
            color_left[d] = f.color

    value: dict[int, int] = {}
    for c in partition.circuits:
        for d in c.darts:
            value[d] = +1 if color_left[d] == GREEN else -1

    by_vertex: dict[int, list[int]] = {}
    for c in partition.circuits:
        for d in c.darts:
            by_vertex.setdefault(g.head(d), []).append(d)

    for v, ins in by_vertex.items():
        if len(ins) != 2 or value[ins[0]] == value[ins[1]]:
            raise InconsistentAssignmentError(f"threads at vertex {v} do not carry opposite signs")
    for c in partition.circuits:
        k = len(c.darts)
        for i in range(k):
            if value[c.darts[i]] == value[c.darts[(i + 1) % k]]:
                raise InconsistentAssignmentError(
                    f"assignment fails to alternate along circuit {c.id}"
                )

    return UnderOverAssignment(value, {v: tuple(ins) for v, ins in by_vertex.items()})


def knot_pipeline_combinatorics(g: PlaneMultigraph):
    """Faces, coloring, partition and assignment in one call."""
    from .graph import two_color_faces

    faces = two_color_faces(g)
    partition = threaded_circuit_partition(g)
    assignment = under_over(g, partition, faces)
    return faces, partition, assignment
