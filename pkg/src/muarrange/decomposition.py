"""Outer shell, inner shell and core of a mu-arrangement."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arrangement import MuArrangement, find_digons, vertex_extents
from .geometry import EPS_GEOM, AngleInterval, Triangle, arc_boundaries, arc_green_term, triangle_metrics

EPS_ANG = 1e-6
TANGENCY_TOL = 1e-9


@dataclass(frozen=True)
class OuterSector:
    disk: int
    arc: AngleInterval
    area: float


@dataclass(frozen=True)
class ShellTriangle:
    i: int
    j: int
    q: tuple[float, float]
    area: float


@dataclass(frozen=True)
class CorePolygon:
    vertices: tuple[int, ...]
    inscribed_center: tuple[float, float]
    inscribed_radius: float
    q: tuple[float, float]
    area: float


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    detail: str
    polygon: CorePolygon | None = None


@dataclass(frozen=True)
class RegionDecomposition:
    outer: tuple[OuterSector, ...]
    shell: tuple[ShellTriangle, ...]
    core_polys: tuple[CorePolygon, ...]
    area_U: float
    area_O: float
    area_I: float
    area_C: float
    core_polygon_area: float
    diagnostics: tuple[Diagnostic, ...] = field(default=())

    @property
    def core_mismatch(self) -> float:
        """|sum of core polygons - area_C|; small for generic arrangements."""
        return abs(self.core_polygon_area - self.area_C)


def outer_shell(arr: MuArrangement, boundary=None):
    """Sectors under the uncovered boundary arcs, and their total area."""
    if boundary is None:
        boundary = arc_boundaries(arr.disks)
    sectors = []
    for k, arcs in enumerate(boundary):
        r = arr.radii[k]
        for arc in arcs:
            sectors.append(OuterSector(k, arc, 0.5 * r * r * arc.sweep))
    return sectors, math.fsum(s.area for s in sectors)


def _on_union_boundary(arr: MuArrangement, q, i: int, j: int, eps: float) -> bool:
    # ties (q on a third circle) count as boundary points
    return not arr.interior_members(q, (i, j), eps)


def _strictly_inside_cone(apex, a, b, p, eps: float) -> bool:
    ax, ay = a[0] - apex[0], a[1] - apex[1]
    bx, by = b[0] - apex[0], b[1] - apex[1]
    px, py = p[0] - apex[0], p[1] - apex[1]
    orient = ax * by - ay * bx
    s1 = (ax * py - ay * px) / math.hypot(ax, ay)
    s2 = (px * by - py * bx) / math.hypot(bx, by)
    if orient < 0:
        s1, s2 = -s1, -s2
    return s1 > eps and s2 > eps


def inner_shell(arr: MuArrangement, digons=None, eps: float = EPS_GEOM):
    """Shell triangles [x_i, x_j, q] over digon vertices q on the union boundary.

    A triangle is kept when no disk whose circle passes through ``q`` has its
    centre strictly inside the angle at ``q`` spanned by ``x_i`` and ``x_j``.
    """
    if digons is None:
        digons = find_digons(arr, eps)
    out = []
    for dg in digons:
        xi, xj = arr.disks[dg.i].center, arr.disks[dg.j].center
        for q in dg.vertices:
            if not _on_union_boundary(arr, q, dg.i, dg.j, eps):
                continue
            m = triangle_metrics(Triangle(xi, xj, q), eps)
            if m.degenerate:
                continue
            blocked = any(
                _strictly_inside_cone(q, xi, xj, arr.disks[k].center, eps)
                for k in arr.boundary_members(q, (dg.i, dg.j), eps)
            )
            if not blocked:
                out.append(ShellTriangle(dg.i, dg.j, q, m.area))
    out.sort(key=lambda s: (s.i, s.j, s.q[0], s.q[1]))
    return out, math.fsum(s.area for s in out)


def _polygon_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))


def _point_in_convex(pts: np.ndarray, p, eps: float) -> bool:
    e = np.roll(pts, -1, axis=0) - pts
    rel = np.asarray(p) - pts
    cross = e[:, 0] * rel[:, 1] - e[:, 1] * rel[:, 0]
    return bool(np.all(cross > eps * np.hypot(e[:, 0], e[:, 1])))


def _polygon_problems(arr: MuArrangement, poly: CorePolygon, eps: float) -> list[str]:
    idx = list(poly.vertices)
    pts = arr.centers[idx]
    problems = []
    if not 3 <= len(idx) <= 5:
        problems.append(f"vertex count {len(idx)} outside 3..5")
    if len(idx) >= 3:
        e = np.roll(pts, -1, axis=0) - pts
        turn = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        if not np.all(turn > 0):
            problems.append("vertices not in convex position")
        c = np.asarray(poly.inscribed_center)
        ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
        central = (np.roll(ang, -1) - ang) % (2 * np.pi)
        if np.any(central <= np.pi / 3 - EPS_ANG):
            problems.append(f"central angle {central.min():.6g} not above pi/3")
        reach = float(np.hypot(*(pts - c).T).max())
        for k in arr.disks_near(c, reach):
            if k not in idx and _point_in_convex(pts, arr.disks[k].center, eps):
                problems.append(f"foreign centre {k} inside")
    for k in idx:
        gap = math.dist(poly.inscribed_center, arr.disks[k].center) + poly.inscribed_radius - arr.radii[k]
        if abs(gap) > TANGENCY_TOL:
            problems.append(f"disk {k} not tangent to inscribed disk (gap {gap:.3g})")
    return problems


def core_polygons(arr: MuArrangement, digons=None, eps: float = EPS_GEOM):
    """Core polygons grown from digon vertices of adjacent pairs lying inside the union.

    Returns ``(polygons, area_sum, diagnostics)``. Polygons failing the
    structural checks are still returned, and also reported in diagnostics.
    """
    if digons is None:
        digons = find_digons(arr, eps)
    found: dict[tuple[int, ...], CorePolygon] = {}
    diagnostics = []
    for dg in digons:
        if not dg.free:
            continue
        extents = vertex_extents(arr, dg, eps)
        (_, e1), (_, e2) = extents
        if max(e1.values(), default=0.0) + max(e2.values(), default=0.0) >= 1.0 - 1e-9:
            continue
        for (fam, ext), q in zip(extents, dg.vertices):
            if _on_union_boundary(arr, q, dg.i, dg.j, eps):
                continue
            inner = {k: t for k, t in ext.items() if arr.disks[k].contains(q, eps)}
            if not inner:
                continue
            t0 = max(inner.values())
            b = fam.at(t0)
            c = np.asarray(b.center)
            touching = [
                k for k in arr.disks_near(b.center, arr.max_radius)
                if abs(math.dist(b.center, arr.disks[k].center) + b.radius - arr.radii[k]) <= TANGENCY_TOL
            ]
            for k in (dg.i, dg.j):
                if k not in touching:
                    touching.append(k)
            touching.sort(key=lambda k: math.atan2(arr.centers[k][1] - c[1], arr.centers[k][0] - c[0]))
            key = tuple(sorted(touching))
            if key in found:
                if math.dist(found[key].inscribed_center, b.center) > 1e-7:
                    diagnostics.append(Diagnostic("inscribed-mismatch", f"polygon {key} reached with different inscribed disks"))
                continue
            poly = CorePolygon(tuple(touching), b.center, b.radius, tuple(q), _polygon_area(arr.centers[touching]))
            found[key] = poly
            for msg in _polygon_problems(arr, poly, eps):
                diagnostics.append(Diagnostic("core-polygon", msg, poly))
    polys = sorted(found.values(), key=lambda p: (sorted(p.vertices), p.inscribed_center))
    return polys, math.fsum(p.area for p in polys), diagnostics


def decompose(arr: MuArrangement, eps: float = EPS_GEOM) -> RegionDecomposition:
    if len(arr.disks) == 0:
        from .errors import EmptyFamilyError

        raise EmptyFamilyError("cannot decompose an empty arrangement")
    boundary = arc_boundaries(arr.disks, eps)
    ox, oy = arr.centers.mean(axis=0)
    area_U = math.fsum(
        arc_green_term(d.x - ox, d.y - oy, d.radius, arc)
        for d, arcs in zip(arr.disks, boundary)
        for arc in arcs
    )
    outer, area_O = outer_shell(arr, boundary)
    digons = find_digons(arr, eps)
    shell, area_I = inner_shell(arr, digons, eps)
    polys, core_sum, diags = core_polygons(arr, digons, eps)
    return RegionDecomposition(
        tuple(outer), tuple(shell), tuple(polys),
        area_U, area_O, area_I, area_U - area_O - area_I, core_sum, tuple(diags),
    )
