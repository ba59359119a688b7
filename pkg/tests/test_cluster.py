import numpy as np
import pytest

from streetpatterns.cluster import (
    ClusteringConfig,
    ClusterModel,
    Method,
    Metric,
    Strategy,
    adjusted_rand_index,
    agglomerative,
    assign,
    choose_k,
    estimate_bandwidth,
    kmeans,
    load_model,
    meanshift,
    save_model,
    select_k,
    silhouette,
    ward_merge_history,
)
from streetpatterns.features import FeatureKind, FeatureMatrix

from oracles import (
    kmeans_bruteforce_inertia,
    nearest_centroid_oracle,
    silhouette_oracle,
    ward_oracle_merges,
)

# frozen from silhouette_oracle on clusters {0.0, 0.1} and {10.0, 10.1}
SILHOUETTE_4PT = 0.9899997499937498


def blobs(centers, per=30, std=0.3, seed=0):
    rng = np.random.default_rng(seed)
    parts = [rng.normal(c, std, size=(per, len(np.atleast_1d(c)))) for c in centers]
    return np.vstack(parts)


def cfg(method=Method.KMEANS, **kw):
    return ClusteringConfig(method=method, **kw)


class TestKMeans:
    def test_k1_mean_is_forced(self):
        model = kmeans(np.array([[0.0, 0.0], [2.0, 2.0]]), cfg(k=1))
        assert np.allclose(model.centroids, [[1.0, 1.0]])
        assert model.inertia == pytest.approx(4.0, abs=1e-12)

    def test_k2_separated_1d(self):
        X = np.array([[0.0], [0.1], [10.0], [10.1]])
        model = kmeans(X, cfg(k=2, seed=5))
        assert list(model.assignments) == [0, 0, 1, 1]

    def test_matches_bruteforce_on_12_points(self):
        rng = np.random.default_rng(1)
        X = np.vstack(
            [rng.normal(0, 0.4, (4, 2)), rng.normal(6, 0.4, (4, 2)), rng.normal((0, 7), 0.4, (4, 2))]
        )
        best = kmeans_bruteforce_inertia(X, 3)
        model = kmeans(X, cfg(k=3, seed=0))
        assert model.inertia <= best * (1 + 1e-9)
        assert model.inertia >= best * (1 - 1e-9)

    def test_rows_less_than_k(self):
        with pytest.raises(ValueError):
            kmeans(np.zeros((2, 3)), cfg(k=5))

    def test_deterministic_given_seed(self):
        X = blobs([0, 7, 20], seed=9)
        a = kmeans(X, cfg(k=3, seed=123))
        b = kmeans(X, cfg(k=3, seed=123))
        assert np.array_equal(a.assignments, b.assignments)
        assert np.array_equal(a.centroids, b.centroids)

    def test_canonical_first_occurrence_labels(self):
        model = kmeans(blobs([0, 10], seed=2), cfg(k=2, seed=4))
        assert model.assignments[0] == 0
        first_of_1 = int(np.argmax(model.assignments == 1))
        assert np.all(model.assignments[:first_of_1] == 0)

    def test_row_permutation_permutes_assignments(self):
        X = blobs([0, 8, 16], per=20, seed=3)
        perm = np.random.default_rng(0).permutation(X.shape[0])
        a = kmeans(X, cfg(k=3, seed=11))
        b = kmeans(X[perm], cfg(k=3, seed=12))
        # identical partitions up to canonical relabeling
        assert adjusted_rand_index(a.assignments[perm], b.assignments) == 1.0

    def test_inertia_non_increasing_over_iterations(self):
        X = blobs([0, 3, 6], per=25, std=0.8, seed=8)
        inertias = [
            kmeans(X, cfg(k=3, seed=2, max_iter=i)).inertia for i in range(1, 8)
        ]
        assert all(a >= b - 1e-9 for a, b in zip(inertias, inertias[1:]))

    def test_final_assignment_is_fixed_point(self):
        X = blobs([0, 5], per=15, seed=6)
        model = kmeans(X, cfg(k=2, seed=6))
        relabeled = np.array([assign(model, row) for row in X])
        assert np.array_equal(relabeled, model.assignments)
        for c in range(model.k_effective):
            assert np.allclose(model.centroids[c], X[model.assignments == c].mean(axis=0), atol=1e-9)

    def test_every_cluster_non_empty(self):
        # k close to n forces the empty-cluster repair path
        X = np.array([[0.0], [0.0], [0.0], [10.0], [10.0], [20.0]])
        model = kmeans(X, cfg(k=4, seed=0))
        assert np.bincount(model.assignments, minlength=4).min() >= 1


class TestAgglomerative:
    def test_k_equals_rows(self):
        X = np.arange(8, dtype=float).reshape(4, 2)
        model = agglomerative(X, cfg(Method.AGGLOMERATIVE, k=4))
        assert model.k_effective == 4
        assert len(set(map(int, model.assignments))) == 4

    def test_two_blobs_match_kmeans(self):
        X = blobs([0, 12], per=20, seed=5)
        a = agglomerative(X, cfg(Method.AGGLOMERATIVE, k=2))
        b = kmeans(X, cfg(k=2, seed=3))
        assert adjusted_rand_index(a.assignments, b.assignments) == 1.0

    def test_merge_order_matches_naive_oracle(self):
        rng = np.random.default_rng(17)
        X = rng.normal(0, 1, (6, 2))
        got = ward_merge_history(X)
        want = ward_oracle_merges(X)
        assert [(a, b) for a, b, _ in got] == [(a, b) for a, b, _ in want]
        for (_, _, ca), (_, _, cb) in zip(got, want):
            assert ca == pytest.approx(cb, rel=1e-9)

    def test_rows_less_than_k(self):
        with pytest.raises(ValueError):
            agglomerative(np.zeros((2, 2)), cfg(Method.AGGLOMERATIVE, k=3))

    def test_centroids_are_member_means(self):
        X = blobs([0, 6, 12], per=10, seed=4)
        model = agglomerative(X, cfg(Method.AGGLOMERATIVE, k=3))
        for c in range(3):
            assert np.allclose(model.centroids[c], X[model.assignments == c].mean(axis=0))


class TestMeanShift:
    def test_single_tight_blob(self):
        X = blobs([0.0], per=30, std=0.1, seed=1)
        model = meanshift(X, bandwidth=2.0)
        assert model.k_effective == 1

    def test_two_far_blobs(self):
        X = blobs([0.0, 50.0], per=25, std=0.3, seed=2)
        model = meanshift(X, bandwidth=3.0)
        assert model.k_effective == 2

    def test_three_planted_modes_recovered(self):
        centers = np.array([[0.0, 0.0], [8.0, 0.0], [0.0, 8.0]])
        X = blobs(centers, per=40, std=0.4, seed=3)
        bw = 2.5
        model = meanshift(X, bandwidth=bw)
        assert model.k_effective == 3
        for centroid in model.centroids:
            gaps = np.linalg.norm(centers - centroid, axis=1)
            assert gaps.min() < bw / 2.0

    def test_bad_bandwidth(self):
        with pytest.raises(ValueError):
            meanshift(np.zeros((3, 2)), bandwidth=-1.0)

    def test_auto_bandwidth_positive(self):
        X = blobs([0, 5], per=10, seed=4)
        assert estimate_bandwidth(X) > 0
        model = meanshift(X)
        assert model.k_effective >= 1

    def test_labels_first_occurrence_order(self):
        X = blobs([0.0, 30.0], per=5, std=0.1, seed=5)
        model = meanshift(X, bandwidth=2.0)
        assert model.assignments[0] == 0


class TestSilhouette:
    def test_four_point_fixture(self):
        X = np.array([[0.0], [0.1], [10.0], [10.1]])
        got = silhouette(X, [0, 0, 1, 1])
        assert got == pytest.approx(SILHOUETTE_4PT, abs=1e-12)
        # the per-point hand value for the outer points is ~0.99005
        assert got == pytest.approx(0.99005, abs=1e-3)

    def test_identical_interleaved_clusters(self):
        X = np.array([[0.0], [1.0], [0.0], [1.0]])
        assert silhouette(X, [0, 0, 1, 1]) <= 0.0

    def test_single_cluster_error(self):
        with pytest.raises(ValueError):
            silhouette(np.zeros((4, 1)), [0, 0, 0, 0])

    def test_matches_oracle_random_instances(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            n = int(rng.integers(10, 60))
            k = int(rng.integers(2, 5))
            X = rng.normal(0, 1, (n, 3))
            labels = rng.integers(0, k, n)
            if np.unique(labels).size < 2:
                continue
            assert silhouette(X, labels) == pytest.approx(silhouette_oracle(X, labels), abs=1e-9)

    def test_translation_and_scale_invariant(self):
        rng = np.random.default_rng(33)
        X = rng.normal(0, 1, (40, 2))
        labels = rng.integers(0, 3, 40)
        base = silhouette(X, labels)
        assert silhouette(X + 100.0, labels) == pytest.approx(base, abs=1e-9)
        assert silhouette(X * 7.5, labels) == pytest.approx(base, abs=1e-9)

    def test_singletons_score_zero(self):
        X = np.array([[0.0], [10.0], [10.1]])
        got = silhouette(X, [0, 1, 1])
        per_point = [0.0, (10.0 - 0.1) / 10.0, (10.1 - 0.1) / 10.1]
        assert got == pytest.approx(sum(per_point) / 3, abs=1e-12)


class TestSelectK:
    def test_predrop_spec_profile(self):
        assert choose_k({2: 0.41, 3: 0.43, 4: 0.44, 5: 0.22}, Strategy.PRE_DROP) == 4

    def test_predrop_monotone_decreasing(self):
        assert choose_k({2: 0.9, 3: 0.5, 4: 0.3}, Strategy.PRE_DROP) == 2

    def test_max_score_tie_takes_smaller_k(self):
        assert choose_k({2: 0.5, 3: 0.5, 4: 0.2}, Strategy.MAX_SCORE) == 2

    def test_planted_four_blobs_both_strategies(self):
        X = blobs([[0, 0], [10, 0], [0, 10], [10, 10]], per=30, std=0.5, seed=12)
        for strategy in (Strategy.PRE_DROP, Strategy.MAX_SCORE):
            report = select_k(X, k_range=(2, 8), strategy=strategy, seed=1)
            assert report.chosen_k == 4
            assert set(report.per_k) == set(range(2, 9))

    def test_bad_range(self):
        with pytest.raises(ValueError):
            select_k(blobs([0, 5]), k_range=(2, 2))
        with pytest.raises(ValueError):
            select_k(blobs([0, 5]), k_range=(1, 4))

    def test_report_depends_only_on_scores(self):
        profile = {2: 0.3, 3: 0.6, 4: 0.58, 5: 0.2}
        assert choose_k(profile, Strategy.PRE_DROP) == choose_k(dict(profile), Strategy.PRE_DROP)

    def test_agglomerative_backend(self):
        X = blobs([0, 9], per=12, seed=3)
        report = select_k(X, method=Method.AGGLOMERATIVE, k_range=(2, 4), seed=0)
        assert report.chosen_k == 2


class TestAssign:
    def test_centroid_maps_to_own_label(self):
        model = kmeans(blobs([0, 10, 20], per=10, seed=2), cfg(k=3, seed=2))
        for c in range(3):
            assert assign(model, model.centroids[c]) == c

    def test_equidistant_tie_takes_smaller_label(self):
        model = ClusterModel(
            method=Method.KMEANS,
            k_effective=2,
            centroids=np.array([[0.0], [2.0]]),
            assignments=np.array([0, 1]),
            inertia=0.0,
        )
        assert assign(model, np.array([1.0])) == 0

    def test_dimension_mismatch(self):
        model = kmeans(blobs([0, 5], per=5, seed=1), cfg(k=2, seed=1))
        with pytest.raises(ValueError):
            assign(model, np.zeros(model.dim + 1))

    def test_matches_exhaustive_scan(self):
        rng = np.random.default_rng(14)
        model = kmeans(rng.normal(0, 3, (60, 4)), cfg(k=5, seed=7))
        for _ in range(100):
            v = rng.normal(0, 3, 4)
            assert assign(model, v) == nearest_centroid_oracle(model.centroids, v)


class TestAdjustedRandIndex:
    def test_identical(self):
        assert adjusted_rand_index([0, 0, 1, 1], [0, 0, 1, 1]) == 1.0

    def test_permuted_labels(self):
        assert adjusted_rand_index([0, 0, 1, 1, 2], [2, 2, 0, 0, 1]) == 1.0

    def test_unrelated_is_low(self):
        rng = np.random.default_rng(0)
        a = rng.integers(0, 4, 2000)
        b = rng.integers(0, 4, 2000)
        assert abs(adjusted_rand_index(a, b)) < 0.05


class TestModelSerialization:
    def test_round_trip(self, tmp_path):
        matrix = FeatureMatrix(FeatureKind.LATENT, blobs([0, 6, 12], per=8, seed=5))
        model = kmeans(matrix, cfg(k=3, seed=42))
        save_model(model, tmp_path)
        back = load_model(tmp_path)
        assert back.method == model.method
        assert back.k_effective == model.k_effective
        assert back.seed == model.seed
        assert back.metric == model.metric
        assert back.inertia == pytest.approx(model.inertia)
        assert np.array_equal(back.assignments, model.assignments)
        assert np.allclose(back.centroids, model.centroids, atol=1e-6)

    def test_files_exist(self, tmp_path):
        model = kmeans(blobs([0, 5], per=5, seed=0), cfg(k=2, seed=0))
        save_model(model, tmp_path)
        assert (tmp_path / "model.json").exists()
        assert (tmp_path / "centroids.vivf").exists()
        assert (tmp_path / "assignments.u32").exists()


class TestCosineMetric:
    def test_direction_clusters(self):
        rng = np.random.default_rng(9)
        a = rng.normal([1, 0], 0.05, (20, 2)) * rng.uniform(1, 10, (20, 1))
        b = rng.normal([0, 1], 0.05, (20, 2)) * rng.uniform(1, 10, (20, 1))
        X = np.vstack([a, b])
        model = kmeans(X, cfg(k=2, seed=0, metric=Metric.COSINE))
        assert adjusted_rand_index(model.assignments, [0] * 20 + [1] * 20) == 1.0

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            kmeans(np.array([[0.0, 0.0], [1.0, 0.0]]), cfg(k=2, metric=Metric.COSINE))
