"""Total-area bound for mu-arrangements and the local inequalities behind it."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arrangement import MuArrangement, find_digons, required_distance
from .decomposition import RegionDecomposition, decompose
from .errors import DomainError, HypothesisError, NonOverlappingError
from .geometry import EPS_GEOM, Disk, SymmetricGauge, Triangle, covers_triangle, digon_vertices, gauge_norm, triangle_metrics

MU_CRIT = math.sqrt(3.0) - 1.0
TOL_EQ = 1e-6
CHECK_SLACK = 1e-9


@dataclass(frozen=True)
class Coefficients:
    mu: float
    sigma_core: float
    sigma_shell: float


def sigma_core(mu):
    return 2.0 * np.pi / (np.sqrt(3.0) * (1.0 + mu) ** 2)


def sigma_shell(mu):
    return 4.0 * np.arccos((1.0 + mu) / 2.0) / ((1.0 + mu) * np.sqrt((3.0 + mu) * (1.0 - mu)))


def coefficients(mu: float) -> Coefficients:
    if not 0.0 <= mu < 1.0:
        raise DomainError(f"mu must lie in [0, 1), got {mu}")
    return Coefficients(float(mu), float(sigma_core(mu)), float(sigma_shell(mu)))


@dataclass(frozen=True)
class BoundReport:
    mu: float
    mode: str
    total_disk_area: float
    rhs: float
    slack: float
    equality: bool
    holds: bool
    non_thick_free_digons: tuple[tuple[int, int], ...]
    tol_eq: float
    decomposition: RegionDecomposition

    @property
    def consistent(self) -> bool:
        """Tolerance verdict and digon verdict agree."""
        near = self.slack <= self.tol_eq * max(self.total_disk_area, 1.0)
        return near == (not self.non_thick_free_digons)


def theorem_bound(arr: MuArrangement, tol_eq: float = TOL_EQ, decomposition: RegionDecomposition | None = None) -> BoundReport:
    """Compare the total disk area against the weighted shell/core areas.

    Above sqrt(3) - 1 the core term is dropped; that variant is only
    conjectured beyond a small range of mu and is labelled as such.
    """
    dec = decomposition or decompose(arr)
    coef = coefficients(arr.mu)
    T = math.pi * math.fsum(r * r for r in arr.radii)
    if arr.mu <= MU_CRIT + 1e-12:
        mode = "theorem"
        rhs = coef.sigma_core * dec.area_C + coef.sigma_shell * dec.area_I + dec.area_O
    else:
        mode = "conjectural"
        rhs = coef.sigma_shell * dec.area_I + dec.area_O
    slack = rhs - T
    non_thick = tuple((d.i, d.j) for d in find_digons(arr) if d.free and not d.thick)
    scale = max(T, 1.0)
    equality = slack <= tol_eq * scale and not non_thick
    return BoundReport(arr.mu, mode, T, rhs, slack, equality, slack >= -CHECK_SLACK * scale, non_thick, tol_eq, dec)


@dataclass(frozen=True)
class LocalCheck:
    lhs_over_delta: float
    bound: float
    tight: bool

    @property
    def holds(self) -> bool:
        return self.lhs_over_delta <= self.bound + CHECK_SLACK


def shell_triangle_check(rho_i: float, rho_j: float, mu: float, center_distance: float, eps: float = EPS_GEOM) -> LocalCheck:
    """Sector-area density of the triangle spanned by two centres and a digon vertex."""
    d = float(center_distance)
    if not abs(rho_i - rho_j) + eps < d < rho_i + rho_j - eps:
        raise NonOverlappingError(f"distance {d} gives no digon for radii {rho_i}, {rho_j}")
    if d < required_distance(rho_i, rho_j, mu) - eps:
        raise DomainError(f"distance {d} violates the mu-condition for radii {rho_i}, {rho_j}")
    xi, xj = (0.0, 0.0), (d, 0.0)
    v, _ = digon_vertices(xi, rho_i, xj, rho_j)
    m = triangle_metrics(Triangle(xi, xj, v))
    lhs = 0.5 * m.angle_a * rho_i**2 + 0.5 * m.angle_b * rho_j**2
    tight = abs(rho_i - rho_j) <= eps and abs(d - (1.0 + mu) * rho_i) <= eps
    return LocalCheck(lhs / m.area, float(sigma_shell(mu)), tight)


def core_triangle_hypotheses(disks: Sequence[Disk], mu: float, samples: int = 100_000, eps: float = EPS_GEOM):
    """Raise HypothesisError unless the triple satisfies the core-triangle premises."""
    for u, v in ((0, 1), (1, 2), (0, 2)):
        du, dv = disks[u], disks[v]
        d = math.dist(du.center, dv.center)
        if d < required_distance(du.radius, dv.radius, mu) - eps:
            raise HypothesisError("mu-arrangement", (u, v))
    for u, v in ((0, 1), (1, 2), (0, 2)):
        w = 3 - u - v
        du, dv, dw = disks[u], disks[v], disks[w]
        d = math.dist(du.center, dv.center)
        if d > du.radius + dv.radius + eps:
            raise HypothesisError("pairwise closed intersection nonempty", (u, v))
        if d >= du.radius + dv.radius - eps:
            dx = (dv.x - du.x) / d
            dy = (dv.y - du.y) / d
            witnesses = [(du.x + du.radius * dx, du.y + du.radius * dy)]
        else:
            witnesses = list(digon_vertices(du.center, du.radius, dv.center, dv.radius))
        if all(dw.contains(p) for p in witnesses):
            raise HypothesisError("closed intersection not inside third open disk", (u, v, w))
    covered, witness = covers_triangle(disks, samples, eps)
    if not covered:
        raise HypothesisError("triangle covered by closed disks", witness)


def core_triangle_check(disks: Sequence[Disk], mu: float, samples: int = 100_000, eps: float = EPS_GEOM) -> LocalCheck:
    """Sector-area density of a triangle of three centres covered by their disks."""
    if len(disks) != 3:
        raise ValueError("core_triangle_check takes exactly three disks")
    core_triangle_hypotheses(disks, mu, samples, eps)
    m = triangle_metrics(Triangle(*(d.center for d in disks)))
    if m.degenerate:
        raise HypothesisError("non-collinear centres", tuple(d.center for d in disks))
    angles = (m.angle_a, m.angle_b, m.angle_c)
    lhs = 0.5 * sum(a * d.radius**2 for a, d in zip(angles, disks))
    r = disks[0].radius
    side = (1.0 + mu) * r
    tight = all(abs(d.radius - r) <= eps for d in disks) and all(
        abs(math.dist(disks[u].center, disks[v].center) - side) <= eps for u, v in ((0, 1), (1, 2), (0, 2))
    )
    return LocalCheck(lhs / m.area, float(sigma_core(mu)), tight)


@dataclass(frozen=True)
class PackingReport:
    valid: bool
    violations: tuple[tuple[int, int, float, float], ...]
    packing_ok: bool
    min_packing_slack: float
    window_radius: float | None
    window_count: int
    window_density: float | None
    density_bound: float


def prop1_packing_check(K: SymmetricGauge, homothets, mu: float, window_radius: float | None = None,
                        window_center=(0.0, 0.0), eps: float = EPS_GEOM) -> PackingReport:
    """Homothets of a symmetric polygon: mu-condition, induced packing, window density.

    ``homothets`` is a sequence of ``(center, lambda)``. Pairs farther apart
    than the circumradius bound cannot be tight, so only near pairs are
    examined.
    """
    centers = np.array([c for c, _ in homothets], dtype=float).reshape(-1, 2)
    lam = np.array([l for _, l in homothets], dtype=float)
    reach = K.circumradius * (1.0 + mu) * float(lam.max()) * (1.0 + 1e-9) + eps
    if len(centers) > 1:
        from scipy.spatial import cKDTree

        pairs = cKDTree(centers).query_pairs(reach, output_type="ndarray")
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    else:
        pairs = np.empty((0, 2), dtype=int)
    i, j = pairs[:, 0], pairs[:, 1]
    norms = np.asarray(gauge_norm(K, centers[j] - centers[i])).reshape(-1)
    li, lj = lam[i], lam[j]
    need = np.maximum(li, lj) + mu * np.minimum(li, lj)
    bad = norms < need - eps
    violations = tuple((int(a), int(b), float(n), float(r)) for a, b, n, r in zip(i[bad], j[bad], need[bad], norms[bad]))
    pack_slack = norms - (1.0 + mu) * (li + lj) / 2.0
    min_slack = float(pack_slack.min()) if len(pack_slack) else math.inf
    count, density = 0, None
    if window_radius is not None:
        inside = np.hypot(*(centers - np.asarray(window_center)).T) <= window_radius
        count = int(inside.sum())
        density = float(np.sum(lam[inside] ** 2) * K.area / (math.pi * window_radius**2))
    return PackingReport(
        not violations, violations, min_slack >= -eps, min_slack,
        window_radius, count, density, 4.0 / (1.0 + mu) ** 2,
    )
