"""Numerical certification of the shell inequality and related one-variable facts.

The shell density of the triangle with sides 1, rho and 1 + mu*rho is
f/(g/4), where g is four times the triangle's area. Monotonicity in rho is
certified through h = f'_rho * D - D'_rho * f with D = g/4, evaluated on a
grid and corrected by Lipschitz bounds on h.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .bounds import MU_CRIT, sigma_shell
from .errors import DomainError
from .geometry import Disk, circle_relation, covers_triangle, Relation, Triangle, triangle_metrics

RHO_RANGE = (0.2, 1.0)
MU_RANGE = (0.0, MU_CRIT)
LIPSCHITZ = (4.78, 28.49)
ROUNDING_SLACK = 1e-9
DEFAULT_RESOLUTION = (8691, 8691)
CLAMP_LIMIT = 1e-12
CHUNK_ROWS = 32


def _check_domain(rho, mu, rho_lo=0.0, rho_lo_open=True):
    rho = np.asarray(rho, dtype=float)
    mu = np.asarray(mu, dtype=float)
    lo_bad = rho <= rho_lo if rho_lo_open else rho < rho_lo
    if np.any(lo_bad | (rho > 1.0) | (mu < 0.0) | (mu > MU_CRIT) | ~np.isfinite(rho) | ~np.isfinite(mu)):
        raise DomainError(f"(rho, mu) outside the certified domain: rho={rho}, mu={mu}")
    return rho, mu


def _acos(x):
    excess = np.max(np.abs(x)) - 1.0 if np.size(x) else 0.0
    if excess > CLAMP_LIMIT:
        raise DomainError(f"arccos argument leaves [-1, 1] by {excess:.3g}")
    return np.arccos(np.clip(x, -1.0, 1.0))


def _fg(rho, mu):
    c = 1.0 + mu * rho
    f = 0.5 * _acos((1.0 + c * c - rho * rho) / (2.0 * c)) + 0.5 * rho * rho * _acos(
        (rho * rho + c * c - 1.0) / (2.0 * rho * c)
    )
    g = rho * np.sqrt((2.0 + rho + mu * rho) * (2.0 - rho + mu * rho) * (1.0 - mu * mu))
    return f, g


def _fg_and_rho_partials(rho, mu):
    c = 1.0 + mu * rho
    n1 = 1.0 + c * c - rho * rho
    a1 = n1 / (2.0 * c)
    n2 = rho * rho + c * c - 1.0
    a2 = n2 / (2.0 * rho * c)
    pa = 2.0 + rho * (1.0 + mu)
    pb = 2.0 - rho * (1.0 - mu)
    s = 1.0 - mu * mu
    root = np.sqrt(pa * pb * s)
    g = rho * root
    area = 0.25 * g
    ang_i = _acos(a1)
    ang_j = _acos(a2)
    f = 0.5 * ang_i + 0.5 * rho * rho * ang_j
    # sines of the angles via the area avoid sqrt(1 - cos^2) cancellation
    sin_i = 2.0 * area / c
    sin_j = 2.0 * area / (rho * c)
    da1 = ((2.0 * c * mu - 2.0 * rho) * c - n1 * mu) / (2.0 * c * c)
    da2 = ((2.0 * rho + 2.0 * c * mu) * rho * c - n2 * (c + rho * mu)) / (2.0 * rho * rho * c * c)
    df = -0.5 * da1 / sin_i + rho * ang_j - 0.5 * rho * rho * da2 / sin_j
    dp = ((1.0 + mu) * pb - (1.0 - mu) * pa) * s
    dg = root + rho * dp / (2.0 * root)
    return f, g, df, dg


def shell_fg(rho, mu):
    """Twice the sector area and four times the triangle area for sides 1, rho, 1 + mu*rho."""
    rho, mu = _check_domain(rho, mu)
    f, g = _fg(rho, mu)
    if np.ndim(f) == 0:
        return float(f), float(g)
    return f, g


def shell_fg_partials(rho, mu):
    """Closed-form rho-partials ``(df, dg)`` of :func:`shell_fg`."""
    rho, mu = _check_domain(rho, mu)
    _, _, df, dg = _fg_and_rho_partials(rho, mu)
    if np.ndim(df) == 0:
        return float(df), float(dg)
    return df, dg


def _h(rho, mu):
    f, g, df, dg = _fg_and_rho_partials(rho, mu)
    return 0.25 * (df * g - dg * f)


def shell_h(rho, mu):
    """Numerator of the rho-derivative of f/D, where D = g/4 is the triangle area."""
    rho, mu = _check_domain(rho, mu, rho_lo=RHO_RANGE[0], rho_lo_open=False)
    h = _h(rho, mu)
    return float(h) if np.ndim(h) == 0 else h


@dataclass(frozen=True)
class DerivativeGate:
    samples: int
    max_error_f: float
    max_error_g: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return max(self.max_error_f, self.max_error_g) <= self.tolerance


def derivative_gate(samples: int = 10_000, step: float = 1e-6, tolerance: float = 1e-6, seed: int = 0) -> DerivativeGate:
    """Closed-form rho-partials against central differences on random domain points."""
    rng = np.random.default_rng(seed)
    rho = rng.uniform(RHO_RANGE[0], RHO_RANGE[1] - step, samples)
    mu = rng.uniform(*MU_RANGE, samples)
    _, _, df, dg = _fg_and_rho_partials(rho, mu)
    fp, gp = _fg(rho + step, mu)
    fm, gm = _fg(rho - step, mu)
    err_f = float(np.max(np.abs(df - (fp - fm) / (2 * step))))
    err_g = float(np.max(np.abs(dg - (gp - gm) / (2 * step))))
    return DerivativeGate(samples, err_f, err_g, tolerance)


@dataclass(frozen=True)
class CertificationGrid:
    rho_range: tuple[float, float]
    mu_range: tuple[float, float]
    resolution: tuple[int, int]
    grid_min: float
    argmin: tuple[float, float]
    lipschitz: tuple[float, float]
    rounding_slack: float
    global_lower_bound: float
    verdict: bool
    steps: tuple[float, float]
    lipschitz_loss: float
    threads: int
    seconds: float = field(compare=False)


def _chunk_min(rho_rows: np.ndarray, mu_grid: np.ndarray, row0: int):
    R, M = np.meshgrid(rho_rows, mu_grid, indexing="ij")
    h = _h(R, M)
    if np.isnan(h).any():
        r, m = np.argwhere(np.isnan(h))[0]
        raise FloatingPointError(f"h is NaN at rho={rho_rows[r]!r}, mu={mu_grid[m]!r}")
    flat = int(np.argmin(h))
    r, m = divmod(flat, h.shape[1])
    return float(h[r, m]), row0 + r, m


def certify_h_positive(resolution: tuple[int, int] = DEFAULT_RESOLUTION, threads: int | None = None,
                       lipschitz: tuple[float, float] = LIPSCHITZ, rounding_slack: float = ROUNDING_SLACK) -> CertificationGrid:
    """Evaluate h on a grid including both endpoints and derive a global lower bound.

    Rows are cut into fixed chunks regardless of thread count and chunk
    minima are reduced in chunk order, so the result does not depend on
    ``threads``.
    """
    n_rho, n_mu = resolution
    if n_rho < 2 or n_mu < 2:
        raise ValueError(f"resolution must be at least (2, 2), got {resolution}")
    threads = threads or os.cpu_count() or 1
    rho = np.linspace(*RHO_RANGE, n_rho)
    mu = np.linspace(*MU_RANGE, n_mu)
    starts = range(0, n_rho, CHUNK_ROWS)
    t0 = time.perf_counter()
    if threads == 1:
        results = [_chunk_min(rho[s:s + CHUNK_ROWS], mu, s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda s: _chunk_min(rho[s:s + CHUNK_ROWS], mu, s), starts))
    best = min(results, key=lambda t: t[0])  # first chunk wins ties
    seconds = time.perf_counter() - t0
    grid_min, r, m = best
    d_rho = (RHO_RANGE[1] - RHO_RANGE[0]) / (n_rho - 1)
    d_mu = (MU_RANGE[1] - MU_RANGE[0]) / (n_mu - 1)
    loss = lipschitz[0] * d_rho / 2 + lipschitz[1] * d_mu / 2
    lower = grid_min - loss - rounding_slack
    return CertificationGrid(
        RHO_RANGE, MU_RANGE, (n_rho, n_mu), grid_min, (float(rho[r]), float(mu[m])),
        tuple(lipschitz), rounding_slack, lower, lower > 0, (d_rho, d_mu), loss, threads, seconds,
    )


def refine_minimum(start: tuple[float, float]):
    """Local minimisation of h inside the domain box, from a grid point."""
    res = minimize(
        lambda x: _h(x[0], x[1]), np.asarray(start, dtype=float), method="L-BFGS-B",
        bounds=[RHO_RANGE, MU_RANGE], options={"ftol": 1e-15, "gtol": 1e-12},
    )
    return float(res.fun), (float(res.x[0]), float(res.x[1]))


def lipschitz_spot_check(samples: int = 100_000, step: float = 1e-6, seed: int = 1):
    """Largest observed |dh/drho| and |dh/dmu| from central differences."""
    rng = np.random.default_rng(seed)
    rho = rng.uniform(RHO_RANGE[0] + step, RHO_RANGE[1] - step, samples)
    mu = rng.uniform(MU_RANGE[0] + step, MU_RANGE[1] - step, samples)
    h_rho = (_h(rho + step, mu) - _h(rho - step, mu)) / (2 * step)
    h_mu = (_h(rho, mu + step) - _h(rho, mu - step)) / (2 * step)
    return float(np.abs(h_rho).max()), float(np.abs(h_mu).max())


def case1_margin(mu):
    """Gap between the shell coefficient and the small-rho bound (7 - mu)/(5 + mu)."""
    m = np.asarray(mu, dtype=float)
    if np.any((m < 0) | (m > MU_CRIT)):
        raise DomainError(f"mu outside [0, sqrt(3) - 1]: {mu}")
    val = sigma_shell(m) - (7.0 - m) / (5.0 + m)
    return float(val) if np.ndim(val) == 0 else val


@dataclass(frozen=True)
class MarginScan:
    samples: int
    minimum: float
    argmin: float
    positive: bool
    decreasing: bool


def case1_scan(samples: int = 10_000) -> MarginScan:
    mu = np.linspace(*MU_RANGE, samples)
    vals = case1_margin(mu)
    k = int(np.argmin(vals))
    return MarginScan(samples, float(vals[k]), float(mu[k]), bool(np.all(vals > 0)), bool(np.all(np.diff(vals) < 0)))


@dataclass(frozen=True)
class MonotonicityVerdict:
    A: float
    B: float
    gammas: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    @property
    def decreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) < 0))


def fab_value(A: float, B: float, gamma: float) -> float:
    """(alpha A^2 + beta B^2) / area for the triangle with sides A, B around angle gamma."""
    z, x, y = (0.0, 0.0), (A, 0.0), (B * math.cos(gamma), B * math.sin(gamma))
    m = triangle_metrics(Triangle(x, y, z), eps=0.0)
    return (m.angle_a * A * A + m.angle_b * B * B) / m.area


def fab_monotonicity(A: float, B: float, gamma_samples: int) -> MonotonicityVerdict:
    if A <= 0 or B <= 0:
        raise DomainError("A and B must be positive")
    if gamma_samples < 3:
        raise ValueError("need at least three gamma samples")
    gammas = np.pi * np.arange(1, gamma_samples + 1) / (gamma_samples + 1)
    vals = np.array([fab_value(A, B, g) for g in gammas])
    return MonotonicityVerdict(float(A), float(B), gammas, vals)


@dataclass(frozen=True)
class NocoreProbe:
    max_nu: float
    pairwise_intersecting: bool
    covers_center_triangle: bool
    witness: tuple | None = None


def nocore_probe(disks: Sequence[Disk], samples: int = 100_000, seed: int = 0) -> NocoreProbe:
    """Largest order of the triple, pairwise intersection, and coverage of its centre triangle."""
    if len(disks) != 3:
        raise ValueError("nocore_probe takes exactly three disks")
    if triangle_metrics(Triangle(*(d.center for d in disks))).degenerate:
        raise DomainError("centres are collinear")
    nu = math.inf
    meets = True
    for u, v in ((0, 1), (1, 2), (0, 2)):
        du, dv = disks[u], disks[v]
        d = math.dist(du.center, dv.center)
        nu = min(nu, (d - max(du.radius, dv.radius)) / min(du.radius, dv.radius))
        meets = meets and circle_relation(du, dv).kind is not Relation.DISJOINT
    covered, witness = covers_triangle(disks, samples, seed=seed)
    return NocoreProbe(nu, meets, covered, witness)
