import numpy as np
import pytest

from mmkit.space import MMSpace


def planar_space(rng: np.random.Generator, n: int, uniform_measure: bool = False) -> MMSpace:
    """Random points in the unit square with Euclidean metric.

    Euclidean distances satisfy the triangle inequality for free; edges
    form the complete graph with random positive conductances so nothing
    degenerates structurally.
    """
    pts = rng.uniform(0.0, 1.0, size=(n, 2))
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1))
    np.fill_diagonal(dist, 0.0)
    if uniform_measure:
        measure = np.full(n, 1.0 / n)
    else:
        measure = rng.dirichlet(np.ones(n) * 5.0)
        measure = np.maximum(measure, 1e-4)
        measure /= measure.sum()
    edges = tuple(
        (i, j, float(rng.uniform(0.2, 2.0))) for i in range(n) for j in range(i + 1, n)
    )
    return MMSpace(n=n, dist=dist, measure=measure, edges=edges)


def path_space(n: int, measure=None) -> MMSpace:
    dist = np.abs(np.subtract.outer(np.arange(float(n)), np.arange(float(n))))
    if measure is None:
        measure = np.full(n, 1.0 / n)
    edges = tuple((i, i + 1, 1.0) for i in range(n - 1))
    return MMSpace(n=n, dist=dist, measure=np.asarray(measure, float), edges=edges)


@pytest.fixture
def two_point():
    return MMSpace(
        n=2,
        dist=np.array([[0.0, 1.0], [1.0, 0.0]]),
        measure=np.array([0.5, 0.5]),
        edges=((0, 1, 1.0),),
    )


@pytest.fixture
def triangle():
    return MMSpace(
        n=3,
        dist=np.ones((3, 3)) - np.eye(3),
        measure=np.full(3, 1.0 / 3.0),
        edges=((0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)),
    )


@pytest.fixture
def path4():
    return path_space(4)
