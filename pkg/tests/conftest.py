import numpy as np
import pytest

from dirichletlab import Region, WeightedSpace


@pytest.fixture
def path3():
    """Unit path 0-1-2: unit measure, unit conductances."""
    return WeightedSpace(np.ones(3), [[0, 1], [1, 2]], np.ones(2))


@pytest.fixture
def path5():
    return WeightedSpace(np.ones(5), [[i, i + 1] for i in range(4)], np.ones(4))


@pytest.fixture
def two_vertex():
    """Single unit edge on two unit-measure vertices; H = [[1,-1],[-1,1]]."""
    return WeightedSpace(np.ones(2), [[0, 1]], np.ones(1))


def random_space(rng, n, extra_edges=0):
    """Connected space with random tree + extra chords, random m and w."""
    edges = [(int(rng.integers(0, k)), k) for k in range(1, n)]
    seen = {tuple(e) for e in edges}
    tries = 0
    while len(edges) < n - 1 + extra_edges and tries < 50 * (extra_edges + 1):
        a, b = sorted(rng.integers(0, n, size=2).tolist())
        tries += 1
        if a != b and (a, b) not in seen:
            seen.add((a, b))
            edges.append((a, b))
    weights = rng.uniform(0.5, 2.0, size=len(edges))
    measure = rng.uniform(0.5, 2.0, size=n)
    return WeightedSpace(measure, np.array(edges), weights)


def random_region(rng, space, lo=2, hi=None):
    """Random proper subregion with at least one boundary vertex."""
    hi = space.n - 1 if hi is None else hi
    size = int(rng.integers(lo, max(lo + 1, hi)))
    members = rng.choice(space.n, size=min(size, space.n - 1), replace=False)
    return Region(space, members)
