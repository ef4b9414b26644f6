"""4-regular plane multigraphs as rotation systems.

A graph is stored as a half-edge ("dart") structure.  Edge ``e`` owns the
two darts ``2*e`` and ``2*e + 1`` (its ends 0 and 1), so ``twin(d) == d ^ 1``.
The embedding is fixed by a rotation system: for every vertex, the
counterclockwise cyclic order of the darts leaving it.  Loops contribute two
darts to the same rotation list; parallel edges are ordinary distinct edges.

Faces are the orbits of ``d -> rotation-successor of twin(d)``; with
counterclockwise rotations this walks the face lying to the *left* of each
dart.  A rotation system describes a plane (genus 0) embedding exactly when
every connected component satisfies V - E + F = 2, which is what
:func:`validate_graph` certifies.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

GREEN = "green"
BLUE = "blue"
UNCOLORED = None

Point = tuple[float, float]


class KnotworkError(Exception):
    """Base class for errors raised by this package."""

    code = "ERROR"


class InvalidGraphError(KnotworkError):
    """An operation was applied to a graph that fails validation."""

    code = "INVALID_GRAPH"

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("invalid graph: " + "; ".join(v.message for v in report.violations))


class DualNotBipartiteError(KnotworkError):
    """Face 2-coloring failed; the input cannot be a valid 4-regular plane graph."""

    code = "DUAL_NOT_BIPARTITE"


def twin(d: int) -> int:
    """The other dart of the same edge."""
    return d ^ 1


def edge_of(d: int) -> int:
    """The edge a dart belongs to."""
    return d >> 1


def dart(edge: int, end: int) -> int:
    """The dart for (edge, end) with end in {0, 1}."""
    return 2 * edge + end


@dataclass(frozen=True)
class Violation:
    code: str
    locus: object
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Face:
    """A face boundary: the darts whose left side is this face."""

    darts: tuple[int, ...]
    color: str | None = UNCOLORED

    def __len__(self) -> int:
        return len(self.darts)

    @property
    def key(self) -> int:
        return min(self.darts)


@dataclass(frozen=True)
class PlaneMultigraph:
    """A multigraph with a rotation system and optional vertex positions.

    rotation maps vertex id -> counterclockwise tuple of darts leaving it.
    positions maps vertex id -> (x, y); may be empty when only combinatorial
    operations are needed.  outer_dart optionally marks a dart on the outer
    face boundary.
    """

    rotation: Mapping[int, tuple[int, ...]]
    positions: Mapping[int, Point] = field(default_factory=dict)
    outer_dart: int | None = None

    # Derived lookups, built eagerly; the dataclass is treated as immutable.
    _origin: dict[int, int] = field(init=False, repr=False, compare=False)
    _slot: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        origin: dict[int, int] = {}
        slot: dict[int, int] = {}
        for v, rot in self.rotation.items():
            for i, d in enumerate(rot):
                origin[d] = v
                slot[d] = i
        object.__setattr__(self, "_origin", origin)
        object.__setattr__(self, "_slot", slot)

    # -- basic accessors -------------------------------------------------

    @property
    def vertices(self) -> list[int]:
        return sorted(self.rotation)

    @property
    def darts(self) -> list[int]:
        return sorted(self._origin)

    @property
    def edges(self) -> list[int]:
        return sorted({edge_of(d) for d in self._origin})

    def origin(self, d: int) -> int:
        return self._origin[d]

    def head(self, d: int) -> int:
        return self._origin[twin(d)]

    def slot(self, d: int) -> int:
        """Index of d in the rotation at its origin."""
        return self._slot[d]

    def edge_ends(self, e: int) -> tuple[int, int]:
        """(origin of end 0, origin of end 1)."""
        return self._origin[2 * e], self._origin[2 * e + 1]

    def has_dart(self, d: int) -> bool:
        return d in self._origin

    def with_positions(self, positions: Mapping[int, Point]) -> "PlaneMultigraph":
        return replace(self, positions=dict(positions))

    # -- construction helpers --------------------------------------------

    @staticmethod
    def from_edge_slots(
        ends: Mapping[int, tuple[tuple[int, int], tuple[int, int]]],
        positions: Mapping[int, Point] | None = None,
        outer_dart: int | None = None,
    ) -> "PlaneMultigraph":
        """Build from per-edge ((vertex, slot), (vertex, slot)) placements.

        Slot ``s`` means the dart occupies position ``s`` in the
        counterclockwise rotation at that vertex.  Rotation lists are as long
        as the largest slot used; validation catches vertices that do not end
        up with exactly four darts.
        """
        slots: dict[int, dict[int, int]] = {}
        for e, ((u, su), (v, sv)) in ends.items():
            for vertex, s, end in ((u, su, 0), (v, sv, 1)):
                at = slots.setdefault(vertex, {})
                if s in at:
                    raise ValueError(f"slot {s} at vertex {vertex} used twice")
                at[s] = dart(e, end)
        rotation = {
            v: tuple(at[s] for s in sorted(at)) for v, at in sorted(slots.items())
        }
        return PlaneMultigraph(rotation, dict(positions or {}), outer_dart)


def connected_components(g: PlaneMultigraph) -> list[set[int]]:
    """Vertex sets of the connected components."""
    seen: set[int] = set()
    comps: list[set[int]] = []
    for start in g.vertices:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for d in g.rotation[v]:
                w = g.head(d)
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def validate_graph(g: PlaneMultigraph) -> ValidationReport:
    """Check 4-regularity, twin involution, rotation partition and planarity.

    Violation codes: DEGREE_NOT_4, TWIN_UNPAIRED, ROTATION_PARTITION,
    EULER_CHARACTERISTIC.  All failures are report entries; nothing raises.
    """
    violations: list[Violation] = []

    seen_darts: dict[int, int] = {}
    for v, rot in g.rotation.items():
        if len(rot) != 4:
            violations.append(
                Violation("DEGREE_NOT_4", v, f"vertex {v} has degree {len(rot)}, expected 4")
            )
        for d in rot:
            if d in seen_darts:
                violations.append(
                    Violation("ROTATION_PARTITION", d, f"dart {d} appears in two rotation slots")
                )
            seen_darts[d] = v

    for d in seen_darts:
        if twin(d) not in seen_darts:
            violations.append(
                Violation("TWIN_UNPAIRED", d, f"dart {d} has no twin {twin(d)} in the graph")
            )

    if violations:
        return ValidationReport(False, tuple(violations))

    # Euler characteristic per connected component certifies planarity of
    # the rotation system.
    faces = _trace_faces_unchecked(g)
    comp_of: dict[int, int] = {}
    for i, comp in enumerate(connected_components(g)):
        for v in comp:
            comp_of[v] = i
    n_comps = len(set(comp_of.values())) if comp_of else 0
    v_count = [0] * n_comps
    e_count = [0] * n_comps
    f_count = [0] * n_comps
    for v in g.vertices:
        v_count[comp_of[v]] += 1
    for e in g.edges:
        e_count[comp_of[g.edge_ends(e)[0]]] += 1
    for f in faces:
        f_count[comp_of[g.origin(f.darts[0])]] += 1
    for i in range(n_comps):
        chi = v_count[i] - e_count[i] + f_count[i]
        if chi != 2:
            violations.append(
                Violation(
                    "EULER_CHARACTERISTIC",
                    i,
                    f"component {i}: V - E + F = {chi}, expected 2 (not a plane rotation)",
                )
            )

    return ValidationReport(not violations, tuple(violations))


def require_valid(g: PlaneMultigraph) -> None:
    report = validate_graph(g)
    if not report.ok:
        raise InvalidGraphError(report)


def next_face_dart(g: PlaneMultigraph, d: int) -> int:
    """Successor of d along the boundary of the face to its left."""
    t = twin(d)
    rot = g.rotation[g.origin(t)]
    return rot[(g.slot(t) + 1) % len(rot)]


def _trace_faces_unchecked(g: PlaneMultigraph) -> list[Face]:
    seen: set[int] = set()
    faces: list[Face] = []
    for start in g.darts:
        if start in seen:
            continue
        boundary = []
        d = start
        while True:
            boundary.append(d)
            seen.add(d)
            d = next_face_dart(g, d)
            if d == start:
                break
        # Canonical form: start the cycle at the smallest dart.
        k = boundary.index(min(boundary))
        faces.append(Face(tuple(boundary[k:] + boundary[:k])))
    faces.sort(key=lambda f: f.key)
    return faces


def trace_faces(g: PlaneMultigraph) -> list[Face]:
    """All faces of the embedding, each dart on exactly one boundary.

    Faces are returned in a canonical order (sorted by smallest dart), so
    repeated calls give identical output.
    """
    require_valid(g)
    return _trace_faces_unchecked(g)


def outer_face_index(g: PlaneMultigraph, faces: Sequence[Face]) -> int:
    """Index of the outer face.

    Uses the dart marked in the graph when present, otherwise the face with
    the longest boundary, ties broken by smallest dart id.
    """
    if g.outer_dart is not None:
        for i, f in enumerate(faces):
            if g.outer_dart in f.darts:
                return i
        raise KnotworkError(f"outer dart {g.outer_dart} not found on any face")
    best = max(range(len(faces)), key=lambda i: (len(faces[i]), -faces[i].key))
    return best


def two_color_faces(g: PlaneMultigraph) -> list[Face]:
    """Proper 2-coloring of the faces (the dual graph is bipartite).

    The outer face of each component is GREEN; neighbors alternate.  Raises
    DualNotBipartiteError if the dual has an odd cycle, which cannot happen
    for a graph that passed validation; the check is kept as a defensive
    invariant.
    """
    faces = trace_faces(g)
    face_of_dart: dict[int, int] = {}
    for i, f in enumerate(faces):
        for d in f.darts:
            face_of_dart[d] = i

    colors: dict[int, str] = {}
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(connected_components(g)):
        for v in comp:
            comp_of[v] = ci
    comps_of_faces: dict[int, list[int]] = {}
    for i, f in enumerate(faces):
        comps_of_faces.setdefault(comp_of[g.origin(f.darts[0])], []).append(i)

    global_outer = outer_face_index(g, faces)
    for ci, members in sorted(comps_of_faces.items()):
        if global_outer in members:
            root = global_outer
        else:
            root = max(members, key=lambda i: (len(faces[i]), -faces[i].key))
        colors[root] = GREEN
        queue = [root]
        while queue:
            i = queue.pop()
            for d in faces[i].darts:
                j = face_of_dart[twin(d)]
                want = BLUE if colors[i] == GREEN else GREEN
                if j not in colors:
                    colors[j] = want
                    queue.append(j)
                elif colors[j] != want:
                    raise DualNotBipartiteError(
                        f"faces {i} and {j} share edge {edge_of(d)} but need equal colors"
                    )
    return [replace(f, color=colors[i]) for i, f in enumerate(faces)]
