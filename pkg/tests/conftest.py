import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for helpers.py

import distsurf as ds
from distsurf.surface import _all_collinear


@pytest.fixture(scope="session")
def oracle_h3():
    """All maximal-clique rational sets at k=1, height 3."""
    return ds.grid_search_rational_sets(1, 3, 3)


@pytest.fixture(scope="session")
def oracle_h4():
    return ds.grid_search_rational_sets(1, 4, 3)


@pytest.fixture(scope="session")
def oracle_k3():
    return ds.grid_search_rational_sets(3, 2, 3)


@pytest.fixture(scope="session")
def noncollinear6_h4(oracle_h4):
    """Oracle sets at height 4 with at least 6 points, not all collinear."""
    return [s for s in oracle_h4 if s.size >= 6 and not _all_collinear(s.points)]


def random_similarity(rng: random.Random) -> ds.SimilarityTransform:
    """Deterministic pseudo-random rational similarity (rotation via a
    tangent half-angle, nonzero rational scale, rational translation)."""
    t = Fraction(rng.randint(-6, 6), rng.randint(1, 5))
    scale = Fraction(0)
    while not scale:
        scale = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    tx = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
    ty = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
    return ds.rotation_scale_translate(t, scale, tx, ty)


def random_noncollinear_subset(rng: random.Random, s: ds.RationalDistanceSet, size: int):
    """Seeded random non-collinear subset of the given size, or None."""
    indices = list(range(s.size))
    for _ in range(200):
        rng.shuffle(indices)
        chosen = [s.points[i] for i in sorted(indices[:size])]
        if not _all_collinear(chosen):
            return chosen
    return None
