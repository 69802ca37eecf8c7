"""Planar primitives: circle-circle relations, union of disks, triangles, gauges.

All lengths are in the arrangement's own units. A single absolute tolerance,
``EPS_GEOM``, decides tangency and containment.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import qmc

from .errors import EmptyFamilyError

EPS_GEOM = 1e-9
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Disk:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        cx, cy = (float(c) for c in self.center)
        r = float(self.radius)
        if not (math.isfinite(cx) and math.isfinite(cy) and math.isfinite(r)):
            raise ValueError(f"disk has non-finite data: {self.center}, {self.radius}")
        if r <= 0:
            raise ValueError(f"disk radius must be positive, got {r}")
        object.__setattr__(self, "center", (cx, cy))
        object.__setattr__(self, "radius", r)

    @property
    def x(self) -> float:
        return self.center[0]

    @property
    def y(self) -> float:
        return self.center[1]

    def contains(self, p, eps: float = 0.0, closed: bool = False) -> bool:
        d = math.hypot(p[0] - self.x, p[1] - self.y)
        return d <= self.radius + eps if closed else d < self.radius - eps


@dataclass(frozen=True)
class AngleInterval:
    """Counterclockwise arc of a circle, ``start`` in [0, 2pi), ``sweep`` in (0, 2pi]."""

    start: float
    sweep: float

    @property
    def end(self) -> float:
        return self.start + self.sweep

    def contains(self, theta: float) -> bool:
        return (theta - self.start) % TWO_PI <= self.sweep


class Relation(enum.Enum):
    DISJOINT = "disjoint"
    EXTERNALLY_TANGENT = "externally_tangent"
    DIGON = "digon"
    INTERNALLY_TANGENT = "internally_tangent"
    CONTAINED = "contained"


class CircleRelation(NamedTuple):
    kind: Relation
    points: tuple = ()


def circle_relation(d1: Disk, d2: Disk, eps: float = EPS_GEOM) -> CircleRelation:
    """Classify how two disks meet.

    For a digon the two boundary intersection points are returned so that
    walking counterclockwise around ``d1`` from the first to the second
    traverses the part of its circle outside ``d2``.
    """
    (x1, y1), r1 = d1.center, d1.radius
    (x2, y2), r2 = d2.center, d2.radius
    dx, dy = x2 - x1, y2 - y1
    d = math.hypot(dx, dy)
    if d > r1 + r2 + eps:
        return CircleRelation(Relation.DISJOINT)
    if abs(d - (r1 + r2)) <= eps:
        return CircleRelation(Relation.EXTERNALLY_TANGENT, ((x1 + r1 * dx / d, y1 + r1 * dy / d),))
    if d > abs(r1 - r2) + eps:
        return CircleRelation(Relation.DIGON, digon_vertices(d1.center, r1, d2.center, r2))
    if abs(d - abs(r1 - r2)) <= eps and d > eps:
        # the touching point lies on the ray from the larger center through the smaller one
        big, rb, sign = ((x1, y1), r1, 1.0) if r1 >= r2 else ((x2, y2), r2, -1.0)
        ux, uy = sign * dx / d, sign * dy / d
        return CircleRelation(Relation.INTERNALLY_TANGENT, ((big[0] + rb * ux, big[1] + rb * uy),))
    return CircleRelation(Relation.CONTAINED)


def digon_vertices(c1, r1: float, c2, r2: float):
    """Intersection points of two crossing circles, left-of-axis point first."""
    dx, dy = c2[0] - c1[0], c2[1] - c1[1]
    d = math.hypot(dx, dy)
    ex, ey = dx / d, dy / d
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    bx, by = c1[0] + a * ex, c1[1] + a * ey
    return (bx - h * ey, by + h * ex), (bx + h * ey, by - h * ex)


def _pair_candidates(centers: np.ndarray, reach: float) -> np.ndarray:
    if len(centers) < 2:
        return np.empty((0, 2), dtype=int)
    if len(centers) <= 64:
        i, j = np.triu_indices(len(centers), k=1)
        return np.column_stack([i, j])
    pairs = cKDTree(centers).query_pairs(reach, output_type="ndarray")
    return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]


def _merge_intervals(intervals: list[tuple[float, float]], tol: float) -> list[tuple[float, float]]:
    merged: list[list[float]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1] + tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def _free_arcs(covered: list[tuple[float, float]], tol: float) -> list[AngleInterval]:
    """Complement in [0, 2pi) of covered arcs given as (start, end) with start in [0, 2pi)."""
    pieces = []
    for lo, hi in covered:
        if hi - lo >= TWO_PI - tol:
            return []
        if hi > TWO_PI:
            pieces.append((lo, TWO_PI))
            pieces.append((0.0, hi - TWO_PI))
        else:
            pieces.append((lo, hi))
    merged = _merge_intervals(pieces, tol)
    if not merged:
        return [AngleInterval(0.0, TWO_PI)]
    gaps = []
    for (_, hi), (lo, _) in zip(merged, merged[1:]):
        if lo - hi > tol:
            gaps.append((hi, lo))
    wrap = (merged[-1][1], merged[0][0] + TWO_PI)
    if wrap[1] - wrap[0] > tol:
        gaps.append(wrap)
    arcs = [AngleInterval(lo % TWO_PI, hi - lo) for lo, hi in gaps]
    return sorted(arcs, key=lambda a: a.start)


def arc_boundaries(disks: Sequence[Disk], eps: float = EPS_GEOM) -> list[list[AngleInterval]]:
    """For each disk, the maximal arcs of its circle lying in no other open disk."""
    n = len(disks)
    centers = np.array([d.center for d in disks], dtype=float).reshape(n, 2)
    radii = np.array([d.radius for d in disks], dtype=float)
    covered: list[list[tuple[float, float]]] = [[] for _ in range(n)]
    swallowed = np.zeros(n, dtype=bool)
    reach = 2.0 * float(radii.max()) + eps if n else 0.0
    for i, j in _pair_candidates(centers, reach):
        ri, rj = radii[i], radii[j]
        dx, dy = centers[j] - centers[i]
        d = math.hypot(dx, dy)
        if d >= ri + rj - eps:
            continue
        # closure containment; identical disks keep the lower index
        if d + ri <= rj + eps and d + rj <= ri + eps:
            swallowed[j] = True
            continue
        if d + ri <= rj + eps:
            swallowed[i] = True
            continue
        if d + rj <= ri + eps:
            swallowed[j] = True
            continue
        phi = math.atan2(dy, dx)
        ai = math.acos(min(1.0, max(-1.0, (d * d + ri * ri - rj * rj) / (2.0 * d * ri))))
        aj = math.acos(min(1.0, max(-1.0, (d * d + rj * rj - ri * ri) / (2.0 * d * rj))))
        lo = (phi - ai) % TWO_PI
        covered[i].append((lo, lo + 2.0 * ai))
        lo = (phi + math.pi - aj) % TWO_PI
        covered[j].append((lo, lo + 2.0 * aj))
    out = []
    for k in range(n):
        if swallowed[k]:
            out.append([])
        else:
            out.append(_free_arcs(covered[k], eps / radii[k]))
    return out


def arc_green_term(cx: float, cy: float, r: float, arc: AngleInterval) -> float:
    """Contribution of one counterclockwise arc to the Green's-theorem area integral."""
    t0, s = arc.start, arc.sweep
    return 0.5 * (
        r * r * s
        + cx * r * (math.sin(t0 + s) - math.sin(t0))
        - cy * r * (math.cos(t0 + s) - math.cos(t0))
    )


def union_area(disks: Sequence[Disk], eps: float = EPS_GEOM):
    """Area of the union of open disks, with the boundary arcs that produce it.

    Returns ``(area, boundary)`` where ``boundary[k]`` lists the uncovered
    arcs of disk ``k``. The line integral is evaluated about the mean center,
    which keeps it accurate for families far from the origin.
    """
    if len(disks) == 0:
        raise EmptyFamilyError("union_area needs at least one disk")
    boundary = arc_boundaries(disks, eps)
    ox = math.fsum(d.x for d in disks) / len(disks)
    oy = math.fsum(d.y for d in disks) / len(disks)
    terms = []
    for disk, arcs in zip(disks, boundary):
        for arc in arcs:
            terms.append(arc_green_term(disk.x - ox, disk.y - oy, disk.radius, arc))
    return math.fsum(terms), boundary


@dataclass(frozen=True)
class Triangle:
    a: tuple[float, float]
    b: tuple[float, float]
    c: tuple[float, float]


class TriangleMetrics(NamedTuple):
    area: float
    angle_a: float
    angle_b: float
    angle_c: float
    degenerate: bool


def _angle(p, q, r) -> float:
    """Angle at ``p`` between rays toward ``q`` and ``r`` (0 if either ray is null)."""
    ux, uy = q[0] - p[0], q[1] - p[1]
    vx, vy = r[0] - p[0], r[1] - p[1]
    if (ux == 0 and uy == 0) or (vx == 0 and vy == 0):
        return 0.0
    return math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)


def triangle_metrics(t: Triangle, eps: float = EPS_GEOM) -> TriangleMetrics:
    a, b, c = t.a, t.b, t.c
    cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    area = 0.5 * abs(cross)
    longest = max(math.dist(a, b), math.dist(b, c), math.dist(c, a))
    # height over the longest side below eps means collinear for our purposes
    degenerate = longest == 0.0 or 2.0 * area / longest <= eps
    if degenerate:
        area = 0.0 if longest == 0.0 else area
    return TriangleMetrics(area, _angle(a, b, c), _angle(b, c, a), _angle(c, a, b), degenerate)


@dataclass(frozen=True)
class SymmetricGauge:
    """Origin-symmetric convex polygon, used as the unit ball of a norm."""

    vertices: tuple[tuple[float, float], ...]
    _normals: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 4 or len(v) % 2:
            raise ValueError("gauge needs an even number (>= 4) of planar vertices")
        n = len(v)
        half = n // 2
        scale = float(np.abs(v).max())
        if not np.allclose(v[half:], -v[:half], atol=1e-12 * scale):
            raise ValueError("gauge vertices are not antipodally symmetric")
        e = np.roll(v, -1, axis=0) - v
        turn = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        if not np.all(turn > 0):
            raise ValueError("gauge vertices must be strictly convex and counterclockwise")
        normals = np.column_stack([e[:, 1], -e[:, 0]])
        support = np.einsum("ij,ij->i", normals, v)
        if not np.all(support > 0):
            raise ValueError("origin must lie strictly inside the gauge")
        object.__setattr__(self, "vertices", tuple(map(tuple, v.tolist())))
        object.__setattr__(self, "_normals", normals / support[:, None])

    @classmethod
    def regular(cls, sides: int, circumradius: float = 1.0, rotation: float = 0.0) -> "SymmetricGauge":
        k = np.arange(sides)
        ang = rotation + 2 * np.pi * k / sides
        return cls(tuple(zip(circumradius * np.cos(ang), circumradius * np.sin(ang))))

    @classmethod
    def square(cls, half_side: float = 1.0) -> "SymmetricGauge":
        h = half_side
        return cls(((h, -h), (h, h), (-h, h), (-h, -h)))

    @property
    def area(self) -> float:
        v = np.asarray(self.vertices)
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    @property
    def circumradius(self) -> float:
        return float(np.hypot(*np.asarray(self.vertices).T).max())


def gauge_norm(K: SymmetricGauge, v) -> float | np.ndarray:
    """Minkowski functional of ``K`` at ``v``; accepts one vector or an (m, 2) array."""
    arr = np.asarray(v, dtype=float)
    vals = np.max(arr @ K._normals.T, axis=-1)
    vals = np.maximum(vals, 0.0)
    return float(vals) if arr.ndim == 1 else vals


def points_in_triangle(a, b, c, count: int, seed: int = 0) -> np.ndarray:
    """Low-discrepancy points of the closed triangle (Halton sequence folded into it)."""
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(count)
    flip = u.sum(axis=1) > 1.0
    u[flip] = 1.0 - u[flip]
    a, b, c = (np.asarray(p, dtype=float) for p in (a, b, c))
    return a + u[:, :1] * (b - a) + u[:, 1:] * (c - a)


def covers_triangle(disks: Sequence[Disk], samples: int = 100_000, eps: float = EPS_GEOM, seed: int = 0):
    """Whether three closed disks cover the closed triangle of their centers.

    Returns ``(covered, witness)``; ``witness`` is an uncovered point when one
    is found. Dense sampling is backed by exact checks at the corners and at
    the pairwise circle intersections inside the triangle: such an
    intersection point outside the third closed disk opens an uncovered wedge.
    """
    centers = np.array([d.center for d in disks], dtype=float)
    radii = np.array([d.radius for d in disks], dtype=float)
    a, b, c = centers

    def uncovered(p):
        return bool(np.all(np.hypot(*(centers - p).T) > radii + eps))

    def inside(p):
        d = [
            (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]),
            (c[0] - b[0]) * (p[1] - b[1]) - (c[1] - b[1]) * (p[0] - b[0]),
            (a[0] - c[0]) * (p[1] - c[1]) - (a[1] - c[1]) * (p[0] - c[0]),
        ]
        return min(d) > eps or max(d) < -eps

    for u, v in ((0, 1), (1, 2), (0, 2)):
        w = 3 - u - v
        rel = circle_relation(disks[u], disks[v], eps)
        if rel.kind is Relation.DISJOINT:
            mid = (radii[v] * centers[u] + radii[u] * centers[v]) / (radii[u] + radii[v])
            if np.hypot(*(mid - centers[w])) > radii[w] + eps:
                return False, tuple(mid)
        if rel.kind is Relation.DIGON:
            for p in rel.points:
                p = np.asarray(p)
                if inside(p) and np.hypot(*(p - centers[w])) > radii[w] + eps:
                    return False, tuple(p)
    pts = points_in_triangle(a, b, c, samples, seed=seed)
    dist = np.hypot(pts[:, None, 0] - centers[None, :, 0], pts[:, None, 1] - centers[None, :, 1])
    bad = np.all(dist > radii[None, :] + eps, axis=1)
    if bad.any():
        return False, tuple(pts[np.argmax(bad)])
    return True, None
