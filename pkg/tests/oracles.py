"""Independent reference computations used only by the tests.

Nothing here calls into the package's area or decomposition code: the
Monte-Carlo estimators work from raw disk, sector and triangle data.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.stats import qmc


def bounding_box(centers, radii):
    centers = np.asarray(centers, dtype=float)
    radii = np.asarray(radii, dtype=float)
    lo = (centers - radii[:, None]).min(axis=0)
    hi = (centers + radii[:, None]).max(axis=0)
    return lo, hi


class SortedSample:
    """Uniform points in a box, sorted by x so shapes only test points under their own extent."""

    def __init__(self, lo, hi, count, seed, method="sobol"):
        if method == "sobol":
            # scrambled Sobol points; count is rounded up to a power of two
            m = max(1, math.ceil(math.log2(count)))
            unit = qmc.Sobol(d=2, scramble=True, seed=seed).random_base2(m)
            count = len(unit)
        else:
            unit = np.random.default_rng(seed).random((count, 2))
        pts = lo + (hi - lo) * unit
        order = np.argsort(pts[:, 0])
        self.pts = pts[order]
        self.box_area = float(np.prod(hi - lo))
        self.count = count

    def window(self, xmin, xmax):
        a = np.searchsorted(self.pts[:, 0], xmin, side="left")
        b = np.searchsorted(self.pts[:, 0], xmax, side="right")
        return a, b

    def mark_disks(self, centers, radii):
        mask = np.zeros(self.count, dtype=bool)
        for (cx, cy), r in zip(centers, radii):
            a, b = self.window(cx - r, cx + r)
            p = self.pts[a:b]
            mask[a:b] |= (p[:, 0] - cx) ** 2 + (p[:, 1] - cy) ** 2 < r * r
        return mask

    def mark_sectors(self, sectors):
        """``sectors``: iterable of (cx, cy, r, start, sweep)."""
        mask = np.zeros(self.count, dtype=bool)
        for cx, cy, r, start, sweep in sectors:
            a, b = self.window(cx - r, cx + r)
            p = self.pts[a:b]
            dx, dy = p[:, 0] - cx, p[:, 1] - cy
            inside = dx * dx + dy * dy < r * r
            ang = (np.arctan2(dy, dx) - start) % (2 * math.pi)
            mask[a:b] |= inside & (ang <= sweep)
        return mask

    def mark_triangles(self, triangles):
        mask = np.zeros(self.count, dtype=bool)
        for tri in triangles:
            tri = np.asarray(tri, dtype=float)
            a, b = self.window(tri[:, 0].min(), tri[:, 0].max())
            p = self.pts[a:b]
            s = []
            for k in range(3):
                u, v = tri[k], tri[(k + 1) % 3]
                s.append((v[0] - u[0]) * (p[:, 1] - u[1]) - (v[1] - u[1]) * (p[:, 0] - u[0]))
            s = np.array(s)
            mask[a:b] |= np.all(s > 0, axis=0) | np.all(s < 0, axis=0)
        return mask

    def estimate(self, mask):
        """Area estimate and its binomial standard error, floored at one-sample resolution."""
        p = mask.mean()
        var = max(p * (1 - p), 1.0 / self.count)
        return self.box_area * p, self.box_area * math.sqrt(var / self.count)


def mc_union_area(centers, radii, count=10**7, seed=0, chunk=2 * 10**6):
    """Monte-Carlo area of a union of disks with its standard error."""
    lo, hi = bounding_box(centers, radii)
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    centers = np.asarray(centers, dtype=float)
    radii = np.asarray(radii, dtype=float)
    while done < count:
        m = min(chunk, count - done)
        pts = lo + (hi - lo) * rng.random((m, 2))
        inside = np.zeros(m, dtype=bool)
        for (cx, cy), r in zip(centers, radii):
            inside |= (pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2 < r * r
        hits += int(inside.sum())
        done += m
    box = float(np.prod(hi - lo))
    p = hits / count
    return box * p, box * math.sqrt(p * (1 - p) / count)


def mc_region_areas(centers, radii, sectors, triangles, count=10**6, seed=0, method="sobol"):
    """Estimate areas of U, O, I, C by classifying uniform points.

    A point of U is outer if some sector holds it, else inner if some shell
    triangle holds it, else core. Returns {name: (estimate, std_error)}.
    """
    lo, hi = bounding_box(centers, radii)
    s = SortedSample(lo, hi, count, seed, method)
    in_u = s.mark_disks(centers, radii)
    in_o = in_u & s.mark_sectors(sectors)
    in_i = in_u & ~in_o & s.mark_triangles(triangles)
    in_c = in_u & ~in_o & ~in_i
    return {"U": s.estimate(in_u), "O": s.estimate(in_o), "I": s.estimate(in_i), "C": s.estimate(in_c)}


def brute_force_boundary_vertices(centers, radii, eps=1e-9):
    """All pairwise circle intersection points not inside any other open disk.

    Returns a list of (i, j, point).
    """
    out = []
    n = len(radii)
    for i in range(n):
        for j in range(i + 1, n):
            (x1, y1), (x2, y2) = centers[i], centers[j]
            r1, r2 = radii[i], radii[j]
            d = math.hypot(x2 - x1, y2 - y1)
            if not abs(r1 - r2) + eps < d < r1 + r2 - eps:
                continue
            a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
            h = math.sqrt(r1 * r1 - a * a)
            ex, ey = (x2 - x1) / d, (y2 - y1) / d
            for sgn in (1, -1):
                p = (x1 + a * ex - sgn * h * ey, y1 + a * ey + sgn * h * ex)
                if all(
                    math.hypot(p[0] - centers[k][0], p[1] - centers[k][1]) >= radii[k] - eps
                    for k in range(n) if k not in (i, j)
                ):
                    out.append((i, j, p))
    return out


def gauge_norm_by_rays(vertices, v):
    """Gauge value by intersecting the ray through ``v`` with every polygon edge."""
    vx, vy = v
    if vx == 0 and vy == 0:
        return 0.0
    best = math.inf
    n = len(vertices)
    for k in range(n):
        (ax, ay), (bx, by) = vertices[k], vertices[(k + 1) % n]
        # solve s*(vx, vy) = a + u*(b - a), s > 0, u in [0, 1]
        ex, ey = bx - ax, by - ay
        det = vx * (-ey) - vy * (-ex)
        if abs(det) < 1e-15:
            continue
        s = (ax * (-ey) - ay * (-ex)) / det
        u = (vx * ay - vy * ax) / det
        if s > 0 and -1e-12 <= u <= 1 + 1e-12:
            best = min(best, s)
    return 1.0 / best
