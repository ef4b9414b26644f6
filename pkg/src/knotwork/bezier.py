"""Cubic Bezier curves: evaluation, curvature, and arm-length optimization.

Curvature is computed from the exact polynomial derivatives,

    kappa(t) = |x' y'' - x'' y'| / (x'^2 + y'^2)^1.5,

never from finite differences (those appear only in test oracles).  The
maximum over t is located numerically: dense sampling plus golden-section
refinement of the best brackets.  A closed form exists in principle but its
edge cases (cusps, vanishing speed) make the search both simpler and more
trustworthy.

Arm lengths: an edge curve leaves its endpoints along fixed directions (the
cross arms); the free parameters are the control-tangent lengths lambda_u,
lambda_v.  ``optimize_arm_lengths`` minimizes the maximum curvature over a
box 0 < lambda <= epsilon, by default epsilon = 0.75 * chord, which keeps
curves from ballooning while giving the optimizer room to work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import KnotworkError

Vec = tuple[float, float]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


class DomainError(KnotworkError):
    code = "DOMAIN"


class SingularPointError(KnotworkError):
    """Both x'(t) and y'(t) vanish: curvature is undefined at this t."""

    code = "SINGULAR_POINT"


@dataclass(frozen=True)
class CubicBezier:
    p0: Vec
    p1: Vec
    p2: Vec
    p3: Vec

    @property
    def points(self) -> np.ndarray:
        return np.array([self.p0, self.p1, self.p2, self.p3], dtype=float)

    def scale_measure(self) -> float:
        """Characteristic length: the control polygon's extent."""
        pts = self.points
        return float(np.max(np.abs(pts - pts[0]), initial=0.0)) or 1.0


def eval_point(b: CubicBezier, t) -> np.ndarray:
    """Bernstein-form evaluation; t may be a scalar or an array in [0, 1]."""
    ts = np.asarray(t, dtype=float)
    if np.any(ts < -1e-12) or np.any(ts > 1 + 1e-12):
        raise DomainError(f"parameter {t} outside [0, 1]")
    ts = np.clip(ts, 0.0, 1.0)
    s = 1.0 - ts
    pts = b.points
    out = (
        (s ** 3)[..., None] * pts[0]
        + (3 * s * s * ts)[..., None] * pts[1]
        + (3 * s * ts * ts)[..., None] * pts[2]
        + (ts ** 3)[..., None] * pts[3]
    )
    return out


def derivatives(b: CubicBezier, t) -> tuple[np.ndarray, np.ndarray]:
    """First and second derivative vectors at t (exact polynomials)."""
    ts = np.asarray(t, dtype=float)
    s = 1.0 - ts
    pts = b.points
    d1 = 3 * (pts[1] - pts[0])
    d2 = 3 * (pts[2] - pts[1])
    d3 = 3 * (pts[3] - pts[2])
    vel = (s * s)[..., None] * d1 + (2 * s * ts)[..., None] * d2 + (ts * ts)[..., None] * d3
    a1 = 2 * (d2 - d1)
    a2 = 2 * (d3 - d2)
    acc = s[..., None] * a1 + ts[..., None] * a2
    return vel, acc


def curvature(b: CubicBezier, t) -> float:
    """kappa(t) >= 0 from the exact derivatives.

    Raises SingularPointError when the speed vanishes (relative to the
    curve's scale), where curvature is undefined.
    """
    vel, acc = derivatives(b, t)
    speed_sq = float(vel[..., 0] ** 2 + vel[..., 1] ** 2)
    scale = b.scale_measure()
    if speed_sq <= (1e-12 * scale) ** 2:
        raise SingularPointError(f"speed vanishes at t={t}")
    cross = float(vel[..., 0] * acc[..., 1] - acc[..., 0] * vel[..., 1])
    return abs(cross) / speed_sq ** 1.5


def _curvature_samples(b: CubicBezier, ts: np.ndarray) -> np.ndarray:
    """Vectorized curvature; singular samples come back as NaN."""
    vel, acc = derivatives(b, ts)
    speed_sq = vel[..., 0] ** 2 + vel[..., 1] ** 2
    cross = vel[..., 0] * acc[..., 1] - acc[..., 0] * vel[..., 1]
    scale = b.scale_measure()
    with np.errstate(divide="ignore", invalid="ignore"):
        kap = np.abs(cross) / speed_sq ** 1.5
    kap[speed_sq <= (1e-12 * scale) ** 2] = np.nan
    return kap


def _is_exact_line(b: CubicBezier) -> bool:
    pts = b.points
    rel = pts[1:] - pts[0]
    span = np.max(np.abs(rel), initial=0.0)
    if span == 0.0:
        return True
    crosses = [rel[i, 0] * rel[j, 1] - rel[j, 0] * rel[i, 1] for i in range(3) for j in range(i + 1, 3)]
    return max(abs(c) for c in crosses) <= 1e-14 * span * span


@dataclass(frozen=True)
class CurvatureProfile:
    samples: tuple[tuple[float, float], ...]
    max_t: float
    max_kappa: float


def _kappa_or_nearby(b: CubicBezier, t: float) -> float:
    """Curvature at t, falling back to adjacent parameters at singularities."""
    for tt in (t, t - 1e-7, t + 1e-7, t - 1e-5, t + 1e-5):
        if 0.0 <= tt <= 1.0:
            try:
                return curvature(b, tt)
            except SingularPointError:
                continue
    return 0.0


def _golden_max(f, lo: float, hi: float, iters: int = 80) -> tuple[float, float]:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
        if b - a < 1e-14:
            break
    tm = (a + b) / 2.0
    return tm, f(tm)


def max_curvature(b: CubicBezier, n_samples: int = 256, refine_top: int = 3) -> CurvatureProfile:
    """Maximum curvature over t in [0, 1], within 1e-6 relative.

    Dense uniform sampling followed by golden-section refinement in the
    best bracketing intervals.  Exact straight lines report 0; isolated
    singular parameters are handled by sampling nearby.
    """
    ts = np.linspace(0.0, 1.0, n_samples + 1)
    if _is_exact_line(b):
        samples = tuple((float(t), 0.0) for t in ts[:: max(1, n_samples // 16)])
        return CurvatureProfile(samples, 0.0, 0.0)

    kap = _curvature_samples(b, ts)
    bad = np.isnan(kap)
    if np.any(bad):
        for i in np.nonzero(bad)[0]:
            kap[i] = _kappa_or_nearby(b, float(ts[i]))

    order = np.argsort(kap)[::-1]
    brackets: list[tuple[float, float]] = []
    for i in order[: max(refine_top, 1)]:
        lo = ts[max(i - 1, 0)]
        hi = ts[min(i + 1, n_samples)]
        brackets.append((float(lo), float(hi)))

    def f(t: float) -> float:
        return _kappa_or_nearby(b, t)

    best_t = float(ts[order[0]])
    best_k = float(kap[order[0]])
    for lo, hi in brackets:
        tm, km = _golden_max(f, lo, hi)
        if km > best_k:
            best_t, best_k = tm, km

    step = max(1, n_samples // 32)
    samples = tuple((float(t), float(k)) for t, k in zip(ts[::step], kap[::step]))
    return CurvatureProfile(samples, best_t, best_k)


def arc_length(b: CubicBezier, t0: float = 0.0, t1: float = 1.0) -> float:
    """Gauss-Legendre quadrature of |p'(t)| on [t0, t1]."""
    mid = (t0 + t1) / 2.0
    half = (t1 - t0) / 2.0
    ts = mid + half * _GL_NODES
    vel, _ = derivatives(b, ts)
    speed = np.hypot(vel[..., 0], vel[..., 1])
    return float(half * np.sum(_GL_WEIGHTS * speed))


def split_at(b: CubicBezier, t: float) -> tuple[CubicBezier, CubicBezier]:
    """De Casteljau subdivision at t."""
    pts = b.points
    q = pts[:-1] + t * (pts[1:] - pts[:-1])
    r = q[:-1] + t * (q[1:] - q[:-1])
    s = r[0] + t * (r[1] - r[0])

    def pt(a) -> tuple[float, float]:
        return (float(a[0]), float(a[1]))

    left = CubicBezier(pt(pts[0]), pt(q[0]), pt(r[0]), pt(s))
    right = CubicBezier(pt(s), pt(r[1]), pt(q[2]), pt(pts[3]))
    return left, right


def t_at_arc_length(b: CubicBezier, s: float) -> float:
    """Parameter where arc length from 0 reaches s (clamped to [0, 1])."""
    total = arc_length(b)
    if s <= 0.0:
        return 0.0
    if s >= total:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2.0
        if arc_length(b, 0.0, mid) < s:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


# ---------------------------------------------------------------------------
# Edge curves and arm-length optimization
# ---------------------------------------------------------------------------

def edge_curve(
    u: Vec, v: Vec, dir_u: Vec, dir_v: Vec, lambda_u: float, lambda_v: float
) -> CubicBezier:
    """The cubic for an edge: endpoints u, v; control tangents along the
    given unit directions with lengths lambda_u, lambda_v."""
    if lambda_u < 0 or lambda_v < 0:
        raise DomainError("arm lengths must be non-negative")
    p1 = (u[0] + lambda_u * dir_u[0], u[1] + lambda_u * dir_u[1])
    p2 = (v[0] + lambda_v * dir_v[0], v[1] + lambda_v * dir_v[1])
    return CubicBezier(tuple(u), p1, p2, tuple(v))


@dataclass(frozen=True)
class ArmLengthSolution:
    lambda_u: float
    lambda_v: float
    kappa_star_min: float


def _kappa_star_grid(
    u, v, du, dv, lus: np.ndarray, lvs: np.ndarray, n_t: int = 257
) -> np.ndarray:
    """Sampled max-curvature surface over a (lambda_u, lambda_v) grid.

    Shape (len(lus), len(lvs)).  Sampling only, no refinement: callers use
    it either to rank cells (the optimizer) or as a brute-force surface.
    """
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    du = np.asarray(du, float)
    dv = np.asarray(dv, float)
    nu, nv = len(lus), len(lvs)
    ts = np.linspace(0.0, 1.0, n_t)

    # Velocity is a quadratic with controls 3(p1-p0), 3(p2-p1), 3(p3-p2);
    # only the middle one couples lambda_u and lambda_v.
    v0 = 3.0 * lus[:, None, None] * du[None, None, :]            # (Lu,1,2)
    v2 = -3.0 * lvs[None, :, None] * dv[None, None, :]           # (1,Lv,2)
    p1 = u[None, :] + lus[:, None] * du[None, :]                 # (Lu,2)
    p2 = v[None, :] + lvs[:, None] * dv[None, :]                 # (Lv,2)
    v1 = 3.0 * (p2[None, :, :] - p1[:, None, :])                 # (Lu,Lv,2)
    a0 = 2.0 * (v1 - v0)                                         # (Lu,Lv,2)
    a1 = 2.0 * (v2 - v1)                                         # (Lu,Lv,2)

    best = np.zeros((nu, nv))
    chunk = 64
    for k0 in range(0, n_t, chunk):
        tt = ts[k0 : k0 + chunk][:, None, None, None]
        ss = 1.0 - tt
        vel = ss * ss * v0[None] + 2 * ss * tt * v1[None] + tt * tt * v2[None]
        acc = ss * a0[None] + tt * a1[None]
        speed_sq = vel[..., 0] ** 2 + vel[..., 1] ** 2
        cross = vel[..., 0] * acc[..., 1] - acc[..., 0] * vel[..., 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            kap = np.abs(cross) / speed_sq ** 1.5
        kap = np.nan_to_num(kap, nan=0.0, posinf=np.inf)
        best = np.maximum(best, kap.max(axis=0))
    return best


def _facing_line(u, v, du, dv) -> bool:
    """True when the configuration draws a straight chord for every lambda."""
    chord = (v[0] - u[0], v[1] - u[1])
    d = math.hypot(*chord)
    if d == 0.0:
        return False
    cu = (chord[0] * du[1] - chord[1] * du[0], chord[0] * du[0] + chord[1] * du[1])
    cv = (chord[0] * dv[1] - chord[1] * dv[0], chord[0] * dv[0] + chord[1] * dv[1])
    return abs(cu[0]) < 1e-12 * d and cu[1] > 0 and abs(cv[0]) < 1e-12 * d and cv[1] < 0


def optimize_arm_lengths(
    u: Vec,
    v: Vec,
    dir_u: Vec,
    dir_v: Vec,
    eps_u: float,
    eps_v: float,
) -> ArmLengthSolution:
    """Minimize the maximum curvature over 0 < lambda <= epsilon.

    Method: a 16x16 log-spaced grid over [0.05 d, eps] (d = chord length,
    or the epsilon scale for loops), plus fixed seed points (d/3 and d/2
    per side), then three rounds of coordinate descent with halving steps.
    Deterministic; ties at flat optima resolve to the smallest total length.
    """
    if eps_u <= 0 or eps_v <= 0:
        raise DomainError("epsilon bounds must be positive")
    d = math.dist(u, v)
    scale_u = d if d > 0 else eps_u
    scale_v = d if d > 0 else eps_v

    if d > 0 and _facing_line(u, v, dir_u, dir_v):
        lam = min(d / 3.0, eps_u, eps_v)
        return ArmLengthSolution(lam, lam, 0.0)

    lo_u, lo_v = 0.05 * scale_u, 0.05 * scale_v

    def score(lu: float, lv: float) -> float:
        return max_curvature(edge_curve(u, v, dir_u, dir_v, lu, lv)).max_kappa

    lus = np.geomspace(lo_u, eps_u, 16)
    lvs = np.geomspace(lo_v, eps_v, 16)
    surface = _kappa_star_grid(u, v, dir_u, dir_v, lus, lvs)
    flat = np.argsort(surface, axis=None)
    candidates = [(float(lus[i // 16]), float(lvs[i % 16])) for i in flat[:8]]
    for seed in (
        (min(scale_u / 3.0, eps_u), min(scale_v / 3.0, eps_v)),
        (min(scale_u / 2.0, eps_u), min(scale_v / 2.0, eps_v)),
        (eps_u, eps_v),
    ):
        candidates.append(seed)

    tol = 1e-9
    best = None
    for lu, lv in candidates:
        k = score(lu, lv)
        key = (k, lu + lv)
        if best is None or key < best[0]:
            best = (key, lu, lv)
    (best_k, _), best_lu, best_lv = best

    step_u = (eps_u - lo_u) / 15.0
    step_v = (eps_v - lo_v) / 15.0
    for _ in range(3):
        for _ in range(2):
            moved = True
            while moved:
                moved = False
                for dlu, dlv in ((step_u, 0.0), (-step_u, 0.0), (0.0, step_v), (0.0, -step_v)):
                    lu = min(max(best_lu + dlu, lo_u), eps_u)
                    lv = min(max(best_lv + dlv, lo_v), eps_v)
                    if (lu, lv) == (best_lu, best_lv):
                        continue
                    k = score(lu, lv)
                    if k < best_k * (1.0 - 1e-12) - tol or (
                        abs(k - best_k) <= tol + 1e-12 * best_k and lu + lv < best_lu + best_lv
                    ):
                        best_k, best_lu, best_lv = k, lu, lv
                        moved = True
        step_u *= 0.5
        step_v *= 0.5

    return ArmLengthSolution(best_lu, best_lv, best_k)
