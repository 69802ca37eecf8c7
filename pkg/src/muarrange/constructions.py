"""Hexagonal extremal arrangements, scaled refinements, random arrangements, densities."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .arrangement import MuArrangement
from .errors import DomainError, EmptyFamilyError, ShortfallError
from .geometry import EPS_GEOM, union_area

SQRT3 = math.sqrt(3.0)
# stage-0 lattice is generated this far beyond the window so that refinements
# see the same neighbourhood as in the infinite construction
REFINE_MARGIN = 2.0


@dataclass(frozen=True)
class Window:
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 10.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"window radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class DensityEstimate:
    delta: float
    delta_U: float
    n_disks: int
    window: Window


def _check_mu(mu):
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")


def lattice_points(spacing: float, center, radius: float) -> np.ndarray:
    """Triangular-lattice points {k u + m v} * spacing within ``radius`` of ``center``."""
    cx, cy = center
    reach = radius / spacing
    kmax = int(math.ceil(2.0 * (reach + abs(cx / spacing) + abs(cy / spacing)) / SQRT3)) + 2
    k, m = np.meshgrid(np.arange(-kmax, kmax + 1), np.arange(-kmax, kmax + 1), indexing="ij")
    x = spacing * (k + 0.5 * m).ravel()
    y = spacing * (0.5 * SQRT3 * m).ravel()
    keep = np.hypot(x - cx, y - cy) <= radius * (1 + 1e-12)
    pts = np.column_stack([x[keep], y[keep]])
    return pts[np.lexsort((pts[:, 0], pts[:, 1]))]


def hex_radius(mu: float) -> float:
    return 1.0 / (1.0 + mu)


def hex_arrangement(mu: float, window: Window) -> MuArrangement:
    """Unit triangular lattice clipped to the window, radii 1/(1+mu): each disk touches six mu-cores."""
    _check_mu(mu)
    pts = lattice_points(1.0, window.center, window.radius)
    return MuArrangement.from_arrays(mu, pts, np.full(len(pts), hex_radius(mu)))


def iterate_hex(mu: float, tau: float, k: int, window: Window, eps: float = EPS_GEOM) -> MuArrangement:
    """Add tau^s-scaled hexagonal disks, stage by stage, wherever they miss every present disk."""
    _check_mu(mu)
    if not 0.0 < tau < 1.0:
        raise DomainError(f"tau must lie in (0, 1), got {tau}")
    if k < 0 or int(k) != k:
        raise ValueError(f"iteration count must be a non-negative integer, got {k}")
    if k == 0:
        return hex_arrangement(mu, window)
    rho = hex_radius(mu)
    reach = window.radius + REFINE_MARGIN
    centers = lattice_points(1.0, window.center, reach)
    radii = np.full(len(centers), rho)
    for stage in range(1, k + 1):
        s = tau**stage
        cand = s * lattice_points(1.0, (window.center[0] / s, window.center[1] / s), reach / s)
        tree = cKDTree(centers)
        rmax = float(radii.max())
        hits = tree.query_ball_point(cand, s * rho + rmax)
        keep = np.ones(len(cand), dtype=bool)
        for idx, near in enumerate(hits):
            if near:
                d = np.hypot(*(centers[near] - cand[idx]).T)
                if np.any(d < radii[near] + s * rho - eps):
                    keep[idx] = False
        centers = np.vstack([centers, cand[keep]])
        radii = np.concatenate([radii, np.full(int(keep.sum()), s * rho)])
    inside = np.hypot(*(centers - np.asarray(window.center)).T) <= window.radius * (1 + 1e-12)
    return MuArrangement.from_arrays(mu, centers[inside], radii[inside])


def random_arrangement(mu: float, window: Window, target_n: int, seed: int,
                       radius_range: tuple[float, float] = (0.3, 1.0)) -> MuArrangement:
    """Sequential rejection sampling of a mu-arrangement; deterministic in ``seed``.

    Raises ShortfallError (carrying the partial arrangement) after
    10^4 * target_n proposals without reaching ``target_n`` disks.
    """
    _check_mu(mu)
    if target_n < 1:
        raise ValueError("target_n must be at least 1")
    rng = np.random.default_rng(seed)
    lo, hi = math.log(radius_range[0]), math.log(radius_range[1])
    cx, cy = window.center
    centers = np.empty((target_n, 2))
    radii = np.empty(target_n)
    n = 0
    for _ in range(10_000 * target_n):
        r = window.radius * math.sqrt(rng.random())
        th = 2.0 * math.pi * rng.random()
        x, y = cx + r * math.cos(th), cy + r * math.sin(th)
        rad = math.exp(rng.uniform(lo, hi))
        if n:
            d = np.hypot(centers[:n, 0] - x, centers[:n, 1] - y)
            need = np.maximum(radii[:n], rad) + mu * np.minimum(radii[:n], rad)
            if np.any(d < need):
                continue
        centers[n] = x, y
        radii[n] = rad
        n += 1
        if n == target_n:
            break
    arr = MuArrangement.from_arrays(mu, centers[:n], radii[:n])
    if n < target_n:
        raise ShortfallError(arr, target_n)
    return arr


def density_estimate(arr: MuArrangement, window: Window) -> DensityEstimate:
    """Disk-area density of the disks lying entirely inside the window."""
    inside = np.hypot(*(arr.centers - np.asarray(window.center)).T) + arr.radii <= window.radius * (1 + 1e-12)
    disks = [d for d, ok in zip(arr.disks, inside) if ok]
    if not disks:
        raise EmptyFamilyError("no disk lies entirely inside the window")
    total = math.pi * math.fsum(d.radius**2 for d in disks)
    area_u, _ = union_area(disks)
    return DensityEstimate(total / (math.pi * window.radius**2), total / area_u, len(disks), window)


def corollary_density(mu: float) -> float:
    """Upper bound on the union density: core coefficient up to sqrt(3)-1, shell coefficient above."""
    from .bounds import MU_CRIT, sigma_core, sigma_shell

    return float(sigma_core(mu) if mu <= MU_CRIT else sigma_shell(mu))
