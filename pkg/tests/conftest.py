import numpy as np
import pytest


def planted_dataset(rng, n, d, n_queries, per_query=2, r_low=0.1, r_high=1.0,
                    bg_scale=1.2, center_radius=(4.0, 10.0)):
    """Dataset with `per_query` points planted within [r_low, r_high] of each
    query center; the rest is Gaussian background.

    Returns (points, queries, wanted) where wanted[i] is the set of planted
    ids for query i.
    """
    centers = rng.standard_normal((n_queries, d))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    centers *= rng.uniform(*center_radius, size=(n_queries, 1))
    planted = []
    wanted = [set() for _ in range(n_queries)]
    for i in range(n_queries):
        for _ in range(per_query):
            u = rng.standard_normal(d)
            u /= np.linalg.norm(u)
            r = rng.uniform(r_low, r_high)
            wanted[i].add(len(planted))
            planted.append(centers[i] + r * u)
    planted = np.asarray(planted)
    background = rng.standard_normal((n - len(planted), d)) * bg_scale
    points = np.vstack([planted, background])
    return points, centers, wanted


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
