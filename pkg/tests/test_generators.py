import numpy as np
import pytest

from clusterlab.density import build_grid, grid_threshold_cluster, levelset_components_1d
from clusterlab.dataset import n_clusters
from clusterlab.errors import InvalidMixture
from clusterlab.generators import gen_blobs, gen_gauss1d, gen_moons
from clusterlab.prototypes import kmeans
from clusterlab.validation import rand_ari


def test_moons_sizes_and_labels(moons2000):
    assert moons2000.n == 2000 and moons2000.m == 2
    assert int((moons2000.true_labels == 1).sum()) == 1000
    assert int((moons2000.true_labels == 2).sum()) == 1000


def test_moons_noiseless_on_curves():
    ds = gen_moons(400, noise_sd=0.0, seed=3)
    upper = ds.points[ds.true_labels == 1]
    lower = ds.points[ds.true_labels == 2]
    assert np.allclose((upper**2).sum(axis=1), 1.0, atol=1e-12)
    assert np.allclose(
        (lower[:, 0] - 1.0) ** 2 + (lower[:, 1] - 0.5) ** 2, 1.0, atol=1e-12
    )


def test_moons_noiseless_grid_two_clusters():
    # the exact curves never share a grid cell face, so any threshold that
    # keeps each arc intact (here every nonempty cell) yields the two moons
    ds = gen_moons(2000, noise_sd=0.0, seed=0)
    grid = build_grid(ds, n_bins=10)
    labels = grid_threshold_cluster(grid, 1)
    assert n_clusters(labels) == 2
    assert np.all(labels > 0)


def test_moons_deterministic():
    a = gen_moons(100, seed=5)
    b = gen_moons(100, seed=5)
    assert np.array_equal(a.points, b.points)


def test_blobs_kmeans_perfect():
    ds = gen_blobs(120, [[0, 0], [10, 0], [0, 10]], sd=0.3, seed=2)
    model = kmeans(ds, 3, seed=0)
    assert rand_ari(model.labels, ds.true_labels)[1] == pytest.approx(1.0)


def test_blobs_single_center():
    ds = gen_blobs(17, [[1.0, 2.0]], sd=0.1, seed=0)
    assert np.all(ds.true_labels == 1)
    assert ds.n == 17


def test_blobs_rejects_empty():
    with pytest.raises(ValueError):
        gen_blobs(0, [[0, 0]])


def test_gauss1d_levelset_sweep():
    ds, mix = gen_gauss1d([0.5, 0.3, 0.2], [-4, 0, 3], [1, 0.6, 0.8], 500, seed=1)
    assert ds.n == 500 and ds.m == 1
    counts = [
        len(levelset_components_1d(mix, lam, (-9, 8)))
        for lam in (1e-4, 0.05, 0.12, 0.3)
    ]
    assert counts[0] == 1
    assert max(counts) == 3  # all three modes appear somewhere in the sweep
    assert counts[-1] == 0 or counts[-1] < counts[1]


def test_gauss1d_single_mode():
    _, mix = gen_gauss1d([1.0], [0.0], [1.0], 10, seed=0)
    for lam in (0.01, 0.1, 0.3, 0.5):
        assert len(levelset_components_1d(mix, lam, (-5, 5))) <= 1


def test_gauss1d_invalid_mixture():
    with pytest.raises(InvalidMixture):
        gen_gauss1d([0.5, 0.2], [0, 1], [1, 1], 10)
    with pytest.raises(InvalidMixture):
        gen_gauss1d([0.5, 0.5], [0, 1], [1, -1], 10)
