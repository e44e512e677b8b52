import numpy as np
import pytest

from mapswarm.graph import build_graph, laplacian

R, EPS, GAMMA = 24.0, 0.1, 0.2


def test_coincident_maps_fully_linked():
    g = build_graph([[0.0, 0.0], [0.0, 0.0]], R, EPS, GAMMA)
    assert g.adjacency[0, 1] == 1.0


def test_out_of_range_unlinked():
    g = build_graph([[0.0, 0.0], [24.5, 0.0]], R, EPS, GAMMA)
    assert g.adjacency[0, 1] == 0.0
    assert not g.neighbors[0, 1]


def test_link_strength_at_12m():
    # mpmath: bump(|12|_s / |24|_s) with |12|_s = 29.24283374, |24|_s = 66.55063684
    g = build_graph([[0.0, 0.0], [12.0, 0.0]], R, EPS, GAMMA)
    assert g.adjacency[0, 1] == pytest.approx(0.794833379252137762, rel=1e-12)


def test_laplacian_small_cases():
    assert laplacian(build_graph(np.zeros((0, 2)), R, EPS, GAMMA)).shape == (0, 0)
    np.testing.assert_array_equal(laplacian(build_graph([[1.0, 2.0]], R, EPS, GAMMA)), [[0.0]])
    g = build_graph([[0.0, 0.0], [1.0, 0.0]], R, EPS, GAMMA)
    g.adjacency[:] = [[0.0, 0.5], [0.5, 0.0]]
    np.testing.assert_array_equal(laplacian(g), [[0.5, -0.5], [-0.5, 0.5]])


@pytest.mark.parametrize("seed", range(5))
def test_structure(seed):
    rng = np.random.default_rng(seed)
    pos = rng.uniform(-40, 40, (30, 2))
    g = build_graph(pos, R, EPS, GAMMA, ids=np.arange(30) * 2)
    a = g.adjacency
    assert np.array_equal(a, a.T)
    assert np.all(np.diag(a) == 0)
    assert np.all((a >= 0) & (a <= 1))
    d = np.linalg.norm(pos[:, None] - pos[None], axis=2)
    assert np.all(d[a > 0] < R)
    assert np.all((g.count_degree >= 0) & (g.count_degree <= 29))
    lap = laplacian(g)
    assert np.max(np.abs(lap.sum(axis=1))) < 1e-12
    assert np.linalg.eigvalsh(lap).min() >= -1e-9
    assert g.index_of(10) == 5


def test_link_strength_nonincreasing_in_distance():
    dists = np.linspace(0, 30, 3001)
    vals = [build_graph([[0.0, 0.0], [x, 0.0]], R, EPS, GAMMA).adjacency[0, 1] for x in dists]
    assert np.all(np.diff(vals) <= 0)
