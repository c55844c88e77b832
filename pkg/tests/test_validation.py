import itertools

import numpy as np
import pytest

from clusterlab.dataset import make_dataset
from clusterlab.errors import NoiseNotAllowed, SingleCluster
from clusterlab.metrics import pairwise
from clusterlab.validation import (
    calinski_harabasz,
    contingency,
    expected_mutual_information,
    homogeneity_completeness_v,
    inertia,
    mi_nmi_ami,
    mutual_information,
    rand_ari,
    silhouette,
)


def test_inertia_singletons(rng):
    points = rng.random((6, 2))
    assert inertia(make_dataset(points), np.arange(1, 7)) == pytest.approx(0.0)


def test_inertia_two_points():
    ds = make_dataset([[0.0], [2.0]])
    assert inertia(ds, [1, 1]) == pytest.approx(2.0)


def test_inertia_rejects_noise():
    with pytest.raises(NoiseNotAllowed):
        inertia(make_dataset([[0.0], [1.0]]), [0, 1])


def test_inertia_decreases_under_refinement(rng):
    points = rng.random((24, 2))
    ds = make_dataset(points)
    labels = np.r_[np.ones(12, int), 2 * np.ones(12, int)]
    base = inertia(ds, labels)
    refined = labels.copy()
    refined[:6] = 3  # split the first cluster in two
    assert inertia(ds, refined) < base


def test_silhouette_two_tight_pairs():
    # within-pair distance eps, between-pair distance 1000*eps
    eps = 1e-3
    points = np.array([[0.0], [eps], [1.0], [1.0 + eps]])
    scores, mean = silhouette(pairwise(points), [1, 1, 2, 2])
    assert mean > 0.99
    assert np.all(scores > 0.99)


def test_silhouette_equidistant_zero():
    # point 0 is exactly as far from its partner as from the other cluster
    pts = np.array([[0.0], [2.0], [-2.0]])
    scores, _ = silhouette(pairwise(pts), [1, 1, 2])
    assert scores[0] == pytest.approx(0.0)  # a = b = 2


def test_silhouette_singleton_scores_zero():
    points = np.array([[0.0], [0.1], [5.0]])
    scores, _ = silhouette(pairwise(points), [1, 1, 2])
    assert scores[2] == 0.0


def test_silhouette_excludes_noise():
    points = np.array([[0.0], [0.1], [5.0], [5.1], [99.0]])
    scores, mean = silhouette(pairwise(points), [1, 1, 2, 2, 0])
    assert np.isnan(scores[4])
    assert -1.0 <= mean <= 1.0


def test_silhouette_needs_two_clusters():
    with pytest.raises(SingleCluster):
        silhouette(pairwise(np.array([[0.0], [1.0]])), [1, 1])


def test_calinski_blobs_beat_overclustering(rng):
    a = rng.normal(0, 0.2, (20, 2))
    b = rng.normal(0, 0.2, (20, 2)) + [10.0, 0.0]
    ds = make_dataset(np.vstack([a, b]))
    two = calinski_harabasz(ds, np.r_[np.ones(20, int), 2 * np.ones(20, int)])
    four = calinski_harabasz(
        ds, np.r_[np.ones(10, int), 2 * np.ones(10, int), 3 * np.ones(10, int), 4 * np.ones(10, int)]
    )
    assert two > four


def test_calinski_collapsed_clusters_inf():
    ds = make_dataset([[0.0], [0.0], [1.0], [1.0]])
    assert calinski_harabasz(ds, [1, 1, 2, 2]) == float("inf")


def test_hcv_identity(iris):
    h, c, v = homogeneity_completeness_v(iris.true_labels, iris.true_labels)
    assert (h, c, v) == (1.0, 1.0, 1.0)


def test_hcv_single_cluster_pred():
    h, c, v = homogeneity_completeness_v([1, 1, 1, 1], [1, 1, 2, 2])
    assert h == 0.0 and c == 1.0 and v == 0.0


def test_hcv_singleton_pred_clusters():
    h, c, v = homogeneity_completeness_v([1, 2, 3, 4], [1, 1, 2, 2])
    assert h == 1.0 and c < 1.0


def test_rand_ari_identity_and_permutation():
    assert rand_ari([1, 1, 2, 2], [1, 1, 2, 2]) == (1.0, 1.0)
    assert rand_ari([1, 1, 2, 2], [2, 2, 1, 1]) == (1.0, 1.0)


def test_rand_counts_pairs():
    # hand-counted: pairs (0,1) together in both; (2,3) split in pred only
    rand, _ = rand_ari([1, 1, 2, 3], [1, 1, 2, 2])
    assert rand == pytest.approx(5 / 6)


def test_ari_near_zero_for_random_labelings(rng):
    truth = rng.integers(1, 4, size=60)
    values = []
    for _ in range(20):
        values.append(rand_ari(rng.integers(1, 4, size=60), truth)[1])
    assert abs(np.mean(values)) <= 0.05


def test_mi_nmi_ami_identity():
    labels = [1, 1, 2, 2, 3, 3]
    mi, nmi, ami = mi_nmi_ami(labels, labels)
    assert nmi == pytest.approx(1.0)
    assert ami == pytest.approx(1.0)
    assert mi == pytest.approx(np.log(3))


def test_ami_near_zero_for_random_labelings(rng):
    truth = rng.integers(1, 4, size=60)
    values = []
    for _ in range(20):
        values.append(mi_nmi_ami(rng.integers(1, 4, size=60), truth)[2])
    assert abs(np.mean(values)) <= 0.05


def permutation_model_emi(pred, truth):
    """Exact E[MI] by averaging over all permutations of the truth labels."""
    truth = list(truth)
    total = 0.0
    count = 0
    for perm in itertools.permutations(truth):
        total += mutual_information(contingency(pred, list(perm)))
        count += 1
    return total / count


def test_emi_matches_permutation_enumeration_2x2():
    pred = [1, 1, 2, 2]
    truth = [1, 2, 1, 2]
    emi = expected_mutual_information(contingency(pred, truth))
    assert emi == pytest.approx(permutation_model_emi(pred, truth), abs=1e-12)


def test_emi_matches_permutation_enumeration_2x3():
    pred = [1, 1, 1, 2, 2, 2]
    truth = [1, 2, 3, 1, 2, 3]
    emi = expected_mutual_information(contingency(pred, truth))
    assert emi == pytest.approx(permutation_model_emi(pred, truth), abs=1e-12)


def test_v_and_ari_one_iff_same_partition(rng):
    for _ in range(25):
        labels = rng.integers(1, 4, size=30)
        relabeled = np.array([{1: 2, 2: 3, 3: 1}[v] for v in labels])
        assert homogeneity_completeness_v(labels, relabeled)[2] == pytest.approx(1.0)
        assert rand_ari(labels, relabeled)[1] == pytest.approx(1.0)
        other = rng.integers(1, 4, size=30)
        if not np.array_equal(
            contingency(labels, labels).counts, contingency(labels, other).counts
        ):
            same = (labels[:, None] == labels[None, :])
            osame = (other[:, None] == other[None, :])
            if not np.array_equal(same, osame):
                assert homogeneity_completeness_v(labels, other)[2] < 1.0
