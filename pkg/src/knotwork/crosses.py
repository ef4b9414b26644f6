"""Crosses: per-vertex frames of four orthogonal arms.

Each vertex gets a cross of 4 arms at right angles; the dart in rotation
slot i uses arm i, so the counterclockwise arm order equals the rotation
order and the two darts of each thread land on opposite, collinear arms.
That collinearity is exactly what makes circuits meet C1-smoothly.

The free parameters per cross are its rotation angle theta (fitted to the
straight-line edge directions by circular least squares) and the four arm
lengths (delegated to an arm-length strategy; the optimal one lives in
:mod:`knotwork.bezier`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .bezier import optimize_arm_lengths
from .graph import KnotworkError, PlaneMultigraph, twin
from .layout import Layout

TAU = 2.0 * math.pi


def circ(a: float) -> float:
    """Reduce an angle to the principal value in (-pi, pi]."""
    r = math.fmod(a, TAU)
    if r <= -math.pi:
        r += TAU
    elif r > math.pi:
        r -= TAU
    return r


def rotation_objective(phis: Sequence[float | None], theta: float) -> float:
    """Sum of squared circular residuals between arm i and edge angle phi_i."""
    total = 0.0
    for i, phi in enumerate(phis):
        if phi is None:
            continue
        total += circ(theta + i * math.pi / 2.0 - phi) ** 2
    return total


def optimal_rotation(phis: Sequence[float | None]) -> float:
    """Least-squares cross orientation for up to four edge angles.

    The flat closed form theta* = mean(phi_i - i pi/2) is only valid per
    branch of the wrapped residuals, so the true objective (squared
    *circular* residuals) is evaluated at all branch stationary points --
    theta* shifted by multiples of pi/2 -- and at every wrap breakpoint,
    which together contain the global minimum of the piecewise-quadratic
    objective.  Ties resolve to the smallest angle in [0, 2 pi).

    Entries of ``phis`` may be None (loops have no straight-line direction);
    those arms follow the cross rigidly and contribute no residual.
    """
    known = [(i, phi) for i, phi in enumerate(phis) if phi is not None]
    if len(phis) != 4:
        raise KnotworkError("a cross has exactly four arms")
    if not known:
        return 0.0

    # Piece vertices repeat with spacing 2 pi / n for n known angles
    # (pi/2 for a full cross).
    base = sum(circ(phi - i * math.pi / 2.0) for i, phi in known) / len(known)
    spacing = TAU / len(known)
    candidates = [base + m * spacing for m in range(len(known))]
    candidates += [phi + math.pi - i * math.pi / 2.0 for i, phi in known]
    best = None
    for cand in candidates:
        theta = cand % TAU
        value = rotation_objective(phis, theta)
        key = (round(value, 12), theta)
        if best is None or key < best[0]:
            best = (key, theta)
    return best[1]


@dataclass(frozen=True)
class Cross:
    """Arm frame at one vertex: orientation plus per-arm lengths."""

    vertex: int
    theta: float
    arm_of_dart: Mapping[int, int]
    arm_length: Mapping[int, float]

    def arm_angle(self, arm: int) -> float:
        return self.theta + arm * math.pi / 2.0

    def arm_direction(self, arm: int) -> tuple[float, float]:
        a = self.arm_angle(arm)
        return (math.cos(a), math.sin(a))

    def dart_direction(self, d: int) -> tuple[float, float]:
        return self.arm_direction(self.arm_of_dart[d])

    def dart_length(self, d: int) -> float:
        return self.arm_length[self.arm_of_dart[d]]


def edge_arm_mapping(g: PlaneMultigraph, u: int) -> dict[int, int]:
    """Dart at rotation slot i maps to arm i; opposite slots face each other."""
    return {d: i for i, d in enumerate(g.rotation[u])}


def _edge_angles(g: PlaneMultigraph, layout: Layout, u: int) -> list[float | None]:
    """Straight-line departure angle per rotation slot; None for loops."""
    phis: list[float | None] = []
    ux, uy = layout[u]
    for d in g.rotation[u]:
        w = g.head(d)
        if w == u:
            phis.append(None)
        else:
            wx, wy = layout[w]
            phis.append(math.atan2(wy - uy, wx - ux))
    return phis


# -- arm-length strategies ----------------------------------------------------

@dataclass(frozen=True)
class UniformLengths:
    """The same absolute length for every arm everywhere."""

    value: float

    def __post_init__(self):
        if self.value <= 0:
            raise KnotworkError("uniform arm length must be positive")


@dataclass(frozen=True)
class ProportionalLengths:
    """Each end of edge (u,v) gets alpha * d(u,v)."""

    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise KnotworkError("alpha must lie in (0, 1)")


@dataclass(frozen=True)
class OptimalLengths:
    """Per-edge constrained min-max curvature; bound epsilon_factor * d(u,v)."""

    epsilon_factor: float = 0.75


Strategy = UniformLengths | ProportionalLengths | OptimalLengths


def parse_strategy(spec: str) -> Strategy:
    """Parse 'uniform:<lambda>' | 'proportional:<alpha>' | 'optimal'."""
    name, _, arg = spec.partition(":")
    if name == "uniform":
        return UniformLengths(float(arg))
    if name == "proportional":
        return ProportionalLengths(float(arg))
    if name == "optimal":
        return OptimalLengths(float(arg) if arg else 0.75)
    raise KnotworkError(f"unknown strategy {spec!r}")


def _loop_scale(g: PlaneMultigraph, layout: Layout, u: int) -> float:
    """Fallback length scale for loops: mean non-loop edge length at u,
    else the global mean, else 1."""
    local = []
    for d in g.rotation[u]:
        w = g.head(d)
        if w != u:
            local.append(math.dist(layout[u], layout[w]))
    if local:
        return sum(local) / len(local)
    lens = []
    for e in g.edges:
        a, b = g.edge_ends(e)
        if a != b:
            lens.append(math.dist(layout[a], layout[b]))
    return sum(lens) / len(lens) if lens else 1.0


def build_crosses(
    g: PlaneMultigraph, layout: Layout, strategy: Strategy
) -> dict[int, Cross]:
    """Oriented, sized crosses for every vertex.

    Orientation first (it fixes the control-tangent directions), then arm
    lengths.  Uniform and proportional lengths are direct; the optimal
    strategy optimizes both ends of each edge jointly, which is exact
    because every arm belongs to exactly one edge.
    """
    thetas: dict[int, float] = {}
    arm_maps: dict[int, dict[int, int]] = {}
    for u in g.vertices:
        phis = _edge_angles(g, layout, u)
        thetas[u] = optimal_rotation(phis)
        arm_maps[u] = edge_arm_mapping(g, u)

    lengths: dict[int, dict[int, float]] = {u: {} for u in g.vertices}

    def chord_or_scale(e: int) -> float:
        a, b = g.edge_ends(e)
        if a == b:
            return _loop_scale(g, layout, a)
        return math.dist(layout[a], layout[b])

    if isinstance(strategy, UniformLengths):
        for u in g.vertices:
            lengths[u] = {i: strategy.value for i in range(4)}
    elif isinstance(strategy, ProportionalLengths):
        for e in g.edges:
            d = strategy.alpha * chord_or_scale(e)
            for end in (0, 1):
                dart_id = 2 * e + end
                u = g.origin(dart_id)
                lengths[u][arm_maps[u][dart_id]] = d
    elif isinstance(strategy, OptimalLengths):
        for e in g.edges:
            scale = chord_or_scale(e)
            eps = strategy.epsilon_factor * scale
            d0, d1 = 2 * e, 2 * e + 1
            a, b = g.origin(d0), g.origin(d1)
            ca = Cross(a, thetas[a], arm_maps[a], {})
            cb = Cross(b, thetas[b], arm_maps[b], {})
            sol = optimize_arm_lengths(
                layout[a], layout[b], ca.dart_direction(d0), cb.dart_direction(d1), eps, eps
            )
            lengths[a][arm_maps[a][d0]] = sol.lambda_u
            lengths[b][arm_maps[b][d1]] = sol.lambda_v
    else:
        raise KnotworkError(f"unknown strategy {strategy!r}")

    return {
        u: Cross(u, thetas[u], arm_maps[u], lengths[u]) for u in g.vertices
    }
