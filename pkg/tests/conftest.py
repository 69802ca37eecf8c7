import math
from functools import lru_cache

import pytest

from muarrange import MU_CRIT, ShortfallError, Window, decompose, random_arrangement, theorem_bound

CORPUS_MUS = (0.1, 0.25, 0.5, MU_CRIT)
CORPUS_SIZE = 500


def corpus_params(seed: int, mus=CORPUS_MUS):
    n = 5 + (7 * seed) % 36
    return mus[seed % len(mus)], n, 0.55 * math.sqrt(n)


@lru_cache(maxsize=None)
def corpus_arrangement(seed: int, mu_override: float | None = None):
    mu, n, radius = corpus_params(seed)
    if mu_override is not None:
        mu = mu_override
    try:
        return random_arrangement(mu, Window((0.0, 0.0), radius), n, seed)
    except ShortfallError as exc:
        return exc.arrangement


@lru_cache(maxsize=None)
def corpus_bound(seed: int, mu_override: float | None = None):
    arr = corpus_arrangement(seed, mu_override)
    return arr, theorem_bound(arr, decomposition=decompose(arr))


@pytest.fixture(scope="session")
def corpus():
    return [corpus_bound(s) for s in range(CORPUS_SIZE)]


@pytest.fixture(scope="session")
def corpus_high_mu():
    return [corpus_bound(s, 0.8) for s in range(CORPUS_SIZE)]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
