"""Mu-arrangements of disks: validation, digons, adjacency."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc
from scipy.spatial import cKDTree

from .errors import DomainError, EmptyFamilyError, NonOverlappingError
from .geometry import EPS_GEOM, Disk, digon_vertices

EPS_PARAM = 1e-9
BISECT_TOL = 1e-12


@dataclass(frozen=True)
class MuArrangement:
    mu: float
    disks: tuple[Disk, ...]
    units: str = "abstract"

    def __post_init__(self):
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "disks", tuple(self.disks))

    @classmethod
    def from_arrays(cls, mu, centers, radii) -> "MuArrangement":
        return cls(mu, tuple(Disk((float(x), float(y)), float(r)) for (x, y), r in zip(centers, radii)))

    def __len__(self):
        return len(self.disks)

    @cached_property
    def centers(self) -> np.ndarray:
        return np.array([d.center for d in self.disks], dtype=float).reshape(len(self.disks), 2)

    @cached_property
    def radii(self) -> np.ndarray:
        return np.array([d.radius for d in self.disks], dtype=float)

    @cached_property
    def tree(self) -> cKDTree:
        return cKDTree(self.centers)

    @property
    def max_radius(self) -> float:
        return float(self.radii.max()) if len(self.disks) else 0.0

    def pairs_within(self, reach: float) -> np.ndarray:
        """Index pairs (i < j) whose centers are at most ``reach`` apart, sorted."""
        if len(self.disks) < 2:
            return np.empty((0, 2), dtype=int)
        pairs = self.tree.query_pairs(reach, output_type="ndarray")
        return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]

    def disks_near(self, p, reach: float) -> list[int]:
        return sorted(self.tree.query_ball_point(p, reach))

    def interior_members(self, p, exclude: Iterable[int] = (), eps: float = EPS_GEOM) -> list[int]:
        """Indices of disks whose open interior contains ``p`` by more than ``eps``."""
        skip = set(exclude)
        out = []
        for k in self.disks_near(p, self.max_radius):
            if k in skip:
                continue
            if math.dist(p, self.disks[k].center) < self.disks[k].radius - eps:
                out.append(k)
        return out

    def boundary_members(self, p, exclude: Iterable[int] = (), eps: float = EPS_GEOM) -> list[int]:
        """Indices of disks whose boundary circle passes within ``eps`` of ``p``."""
        skip = set(exclude)
        out = []
        for k in self.disks_near(p, self.max_radius + eps):
            if k in skip:
                continue
            if abs(math.dist(p, self.disks[k].center) - self.disks[k].radius) <= eps:
                out.append(k)
        return out


class Violation(NamedTuple):
    i: int
    j: int
    required_distance: float
    actual_distance: float


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[Violation, ...] = ()


def required_distance(r1: float, r2: float, mu: float) -> float:
    return max(r1, r2) + mu * min(r1, r2)


def validate(disks: Sequence[Disk] | MuArrangement, mu: float | None = None, eps: float = EPS_GEOM) -> ValidationReport:
    """Check the mu-condition for every pair; touching a mu-core is allowed."""
    arr = disks if isinstance(disks, MuArrangement) else MuArrangement(mu, tuple(disks))
    mu = arr.mu if mu is None else float(mu)
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")
    if len(arr.disks) == 0:
        raise EmptyFamilyError("an arrangement needs at least one disk")
    violations = []
    reach = (1.0 + mu) * arr.max_radius
    for i, j in arr.pairs_within(reach):
        ri, rj = arr.radii[i], arr.radii[j]
        need = required_distance(ri, rj, mu)
        d = math.dist(arr.disks[i].center, arr.disks[j].center)
        if d < need - eps or d <= eps:
            violations.append(Violation(int(i), int(j), need, d))
    return ValidationReport(not violations, tuple(violations))


@dataclass(frozen=True)
class Digon:
    i: int
    j: int
    vertices: tuple[tuple[float, float], tuple[float, float]]
    free: bool
    thick: bool
    contained_in: tuple[int, ...] = field(default=())


def is_thick(arr: MuArrangement, i: int, j: int, eps: float = EPS_GEOM) -> bool:
    ri, rj = arr.radii[i], arr.radii[j]
    d = math.dist(arr.disks[i].center, arr.disks[j].center)
    return abs(d - (ri + arr.mu * rj)) <= eps and abs(d - (rj + arr.mu * ri)) <= eps


def _overlaps(arr: MuArrangement, i: int, j: int, eps: float) -> bool:
    ri, rj = arr.radii[i], arr.radii[j]
    d = math.dist(arr.disks[i].center, arr.disks[j].center)
    return abs(ri - rj) + eps < d < ri + rj - eps


def classify_digon(arr: MuArrangement, i: int, j: int, eps: float = EPS_GEOM) -> Digon:
    """Digon of disks ``i`` and ``j`` with its free/thick classification.

    A third disk holds the digon exactly when its closure holds both vertices.
    """
    i, j = (int(i), int(j)) if i < j else (int(j), int(i))
    if not _overlaps(arr, i, j, eps):
        raise NonOverlappingError(f"disks {i} and {j} do not form a digon")
    di, dj = arr.disks[i], arr.disks[j]
    v1, v2 = digon_vertices(di.center, di.radius, dj.center, dj.radius)
    near = set(arr.disks_near(v1, arr.max_radius + eps)) & set(arr.disks_near(v2, arr.max_radius + eps))
    holders = []
    for k in sorted(near - {i, j}):
        dk = arr.disks[k]
        if dk.contains(v1, eps, closed=True) and dk.contains(v2, eps, closed=True):
            holders.append(k)
    return Digon(i, j, (v1, v2), not holders, is_thick(arr, i, j, eps), tuple(holders))


def find_digons(arr: MuArrangement, eps: float = EPS_GEOM) -> list[Digon]:
    out = []
    for i, j in arr.pairs_within(2.0 * arr.max_radius):
        if _overlaps(arr, i, j, eps):
            out.append(classify_digon(arr, i, j, eps))
    return out


class InscribedFamilyPoint(NamedTuple):
    t: float
    center: tuple[float, float]
    radius: float


class InscribedFamily:
    """Disks inside the digon of ``i`` and ``j`` touching both circles from inside.

    Centres run along the branch of the hyperbola |c - x_i| - |c - x_j| =
    rho_i - rho_j joining the two vertices. The parameter ``t`` is the
    fraction of the way from ``q`` to the other vertex, measured along the
    common chord, so the disk shrinks to ``q`` as ``t -> 0``.
    """

    def __init__(self, arr: MuArrangement, i: int, j: int, q, q_other):
        self.arr, self.i, self.j = arr, i, j
        self.q, self.q_other = tuple(q), tuple(q_other)
        ci, cj = np.asarray(arr.disks[i].center), np.asarray(arr.disks[j].center)
        self.ri, self.rj = arr.radii[i], arr.radii[j]
        self.d = float(np.hypot(*(cj - ci)))
        self.ci = ci
        self.e = (cj - ci) / self.d
        self.n = np.array([-self.e[1], self.e[0]])
        self.w_q = float(np.dot(np.asarray(q) - ci, self.n))
        self.w_o = float(np.dot(np.asarray(q_other) - ci, self.n))
        delta = self.ri - self.rj
        self.A = (self.d * self.d + delta * (self.ri + self.rj)) / (2.0 * self.d)
        self.B = delta / self.d

    def at(self, t: float) -> InscribedFamilyPoint:
        w = self.w_q + t * (self.w_o - self.w_q)
        A, B, ri = self.A, self.B, self.ri
        p = ri - A * B
        c = ri * ri - A * A - w * w
        a = 1.0 - B * B
        disc = max(p * p - a * c, 0.0)
        r = c / (p + math.sqrt(disc)) if c > 0 else 0.0
        u = A - B * r
        center = self.ci + u * self.e + w * self.n
        return InscribedFamilyPoint(t, (float(center[0]), float(center[1])), r)

    def inside(self, k: int, t: float) -> bool:
        b = self.at(t)
        dk = self.arr.disks[k]
        return math.dist(b.center, dk.center) + b.radius <= dk.radius

    def extent(self, k: int) -> float:
        """Largest t with B(t) inside the closed disk ``k`` (0 when none is)."""
        lo, hi = 0.0, 1.0
        if not self.inside(k, BISECT_TOL):
            return 0.0
        if self.inside(k, 1.0 - BISECT_TOL):
            return 1.0
        lo = BISECT_TOL
        while hi - lo > BISECT_TOL:
            mid = 0.5 * (lo + hi)
            if self.inside(k, mid):
                lo = mid
            else:
                hi = mid
        return lo


def vertex_extents(arr: MuArrangement, digon: Digon, eps: float = EPS_GEOM):
    """Per vertex of a digon: its inscribed family and the containment extents.

    Returns two ``(family, {k: t_k})`` tuples, one per vertex, where the
    dictionaries cover third disks whose interiors hold the vertex.
    """
    v1, v2 = digon.vertices
    out = []
    for q, other in ((v1, v2), (v2, v1)):
        fam = InscribedFamily(arr, digon.i, digon.j, q, other)
        ext = {k: fam.extent(k) for k in arr.interior_members(q, (digon.i, digon.j), eps=-eps)}
        out.append((fam, ext))
    return out


def is_adjacent(arr: MuArrangement, digon: Digon, eps: float = EPS_GEOM) -> bool:
    """Some inscribed disk of the digon avoids every third member.

    Each third disk that holds inscribed disks holds an initial segment of
    the family seen from one vertex, so coverage from the two ends is
    compared against the full parameter range.
    """
    if not digon.free:
        return False
    (_, e1), (_, e2) = vertex_extents(arr, digon, eps)
    t1 = max(e1.values(), default=0.0)
    t2 = max(e2.values(), default=0.0)
    return t1 + t2 < 1.0 - EPS_PARAM


def adjacency_pairs(arr: MuArrangement, eps: float = EPS_GEOM) -> list[tuple[int, int]]:
    return [(dg.i, dg.j) for dg in find_digons(arr, eps) if is_adjacent(arr, dg, eps)]


def connected_components(arr: MuArrangement, eps: float = EPS_GEOM) -> list[list[int]]:
    """Components of the overlap graph, each sorted, ordered by smallest index."""
    n = len(arr.disks)
    edges = [(dg.i, dg.j) for dg in find_digons(arr, eps)]
    if edges:
        rows, cols = np.array(edges).T
    else:
        rows = cols = np.empty(0, dtype=int)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    _, labels = _cc(graph, directed=False)
    groups: dict[int, list[int]] = {}
    for idx, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(idx)
    return sorted(groups.values(), key=lambda g: g[0])
