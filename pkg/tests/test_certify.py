import math

import mpmath as mp
import numpy as np
import pytest

from muarrange import (
    MU_CRIT,
    DomainError,
    case1_margin,
    certify_h_positive,
    derivative_gate,
    fab_monotonicity,
    nocore_probe,
    refine_minimum,
    shell_fg,
    shell_fg_partials,
    shell_h,
)
from muarrange.certify import case1_scan, fab_value, lipschitz_spot_check
from muarrange.geometry import Disk

SQ3 = math.sqrt(3)
# mpmath references
F_1_02 = 0.9272952180016122  # acos(0.6)
CASE1_CRIT = 0.11570801391203197
CASE1_ZERO = 1.0183991523122905
# local minimum of h over the box, reached from the grid argmin
H_MIN = 0.00146046085


def mp_fg(rho, mu):
    rho, mu = mp.mpf(rho), mp.mpf(mu)
    c = 1 + mu * rho
    f = mp.acos((1 + c**2 - rho**2) / (2 * c)) / 2 + rho**2 * mp.acos((rho**2 + c**2 - 1) / (2 * rho * c)) / 2
    g = rho * mp.sqrt((2 + rho + mu * rho) * (2 - rho + mu * rho) * (1 - mu**2))
    return f, g


def test_shell_fg_values():
    f, g = shell_fg(1.0, 0.2)
    assert f == pytest.approx(F_1_02, abs=1e-12)
    assert g == pytest.approx(1.92, abs=1e-12)
    f, g = shell_fg(1.0, MU_CRIT)
    assert f == pytest.approx(math.pi / 6, abs=1e-12)
    assert g == pytest.approx(SQ3, abs=1e-12)


def test_g_is_four_times_triangle_area():
    for rho, mu in ((0.3, 0.1), (0.7, 0.5), (1.0, 0.6)):
        _, g = shell_fg(rho, mu)
        a, b, c = 1.0, rho, 1 + mu * rho
        s = (a + b + c) / 2
        heron = math.sqrt(s * (s - a) * (s - b) * (s - c))
        assert g == pytest.approx(4 * heron, rel=1e-12)


def test_partials_against_mpmath():
    mp.mp.dps = 30
    rng = np.random.default_rng(4)
    for rho, mu in zip(rng.uniform(0.2, 1.0, 25), rng.uniform(0, MU_CRIT, 25)):
        df, dg = shell_fg_partials(rho, mu)
        ef = mp.diff(lambda r: mp_fg(r, mu)[0], rho)
        eg = mp.diff(lambda r: mp_fg(r, mu)[1], rho)
        assert df == pytest.approx(float(ef), abs=1e-10)
        assert dg == pytest.approx(float(eg), abs=1e-10)


def test_h_matches_mpmath_definition():
    mp.mp.dps = 30
    for rho, mu in ((0.2, MU_CRIT), (0.5, 0.3), (1.0, 0.2)):
        f, g = mp_fg(rho, mu)
        df = mp.diff(lambda r: mp_fg(r, mu)[0], rho)
        dg = mp.diff(lambda r: mp_fg(r, mu)[1], rho)
        expected = df * g / 4 - dg / 4 * f
        assert shell_h(rho, mu) == pytest.approx(float(expected), abs=1e-12)


def test_h_positive_at_sample_and_domain_checks():
    assert shell_h(1.0, 0.2) > 0
    with pytest.raises(DomainError):
        shell_h(0.1, 0.2)
    with pytest.raises(DomainError):
        shell_h(0.5, 0.9)


def test_derivative_gate_small():
    gate = derivative_gate(samples=2000)
    assert gate.passed


def test_coarse_grid_fails_with_expected_loss():
    grid = certify_h_positive((100, 100), threads=1)
    assert not grid.verdict
    expected = 4.78 * (0.8 / 99) / 2 + 28.49 * (MU_CRIT / 99) / 2
    assert grid.lipschitz_loss == pytest.approx(expected, rel=1e-12)
    assert grid.lipschitz_loss == pytest.approx(0.1246, abs=5e-4)
    assert grid.global_lower_bound == pytest.approx(grid.grid_min - expected - 1e-9, rel=1e-12)


def test_thread_count_does_not_change_result():
    a = certify_h_positive((301, 257), threads=1)
    b = certify_h_positive((301, 257), threads=4)
    assert (a.grid_min, a.argmin) == (b.grid_min, b.argmin)


def test_refinement_reaches_known_minimum():
    grid = certify_h_positive((401, 401), threads=1)
    value, at = refine_minimum(grid.argmin)
    assert value == pytest.approx(H_MIN, abs=1e-5)
    assert value <= grid.grid_min + 1e-15


def test_lipschitz_constants_dominate_observed_slopes():
    lr, lm = lipschitz_spot_check(samples=20_000)
    assert lr < 4.78 and lm < 28.49


def test_case1_margin_values():
    assert case1_margin(MU_CRIT) == pytest.approx(CASE1_CRIT, abs=1e-12)
    assert case1_margin(0.0) == pytest.approx(CASE1_ZERO, abs=1e-12)
    scan = case1_scan(2000)
    assert scan.positive and scan.decreasing and scan.minimum > 0.115
    with pytest.raises(DomainError):
        case1_margin(0.8)


def test_fab_examples():
    vals = [fab_value(1, 1, g) for g in (math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert fab_monotonicity(1, 3, 200).decreasing
    near_pi = [fab_value(1, 2, math.pi - e) for e in (1e-1, 1e-2, 1e-3)]
    assert near_pi[0] > near_pi[1] > near_pi[2] > 0
    assert fab_value(1, 2, 1e-3) > 100 * fab_value(1, 2, 1.0)
    with pytest.raises(DomainError):
        fab_monotonicity(0, 1, 10)


def equilateral(nu, rho=1.0):
    s = (1 + nu) * rho
    return [Disk(p, rho) for p in ((0, 0), (s, 0), (s / 2, s * SQ3 / 2))]


def test_nocore_probe_threshold():
    p = nocore_probe(equilateral(MU_CRIT))
    assert p.covers_center_triangle and p.pairwise_intersecting
    assert p.max_nu == pytest.approx(MU_CRIT, abs=1e-12)
    p = nocore_probe(equilateral(MU_CRIT + 0.05))
    assert not p.covers_center_triangle and p.witness is not None
