import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from streetpatterns.features import (
    CLASS_NAMES,
    MAJOR_INDICES,
    MAJOR_NAMES,
    NUM_CLASSES,
    FeatureKind,
    FeatureMatrix,
    LabelMask,
    category_histogram,
    dispersion_ratios,
    reduce_to_major,
    select_features,
)

from oracles import am_gm_ratio, pixel_count_histogram

# frozen from the am_gm_ratio oracle
RATIO_01_10 = 5.049999975497499
RATIO_2_8 = 1.249999999859375

SKY = CLASS_NAMES.index("sky")
ROAD = CLASS_NAMES.index("road")
SIDEWALK = CLASS_NAMES.index("sidewalk")
BUILDING = CLASS_NAMES.index("building")
BICYCLE = CLASS_NAMES.index("bicycle")


def table1_mask() -> LabelMask:
    """100x100 mask with 3100 road, 300 sidewalk, 1800 building pixels."""
    labels = np.full(10_000, SKY, dtype=np.uint8)
    labels[:3100] = ROAD
    labels[3100:3400] = SIDEWALK
    labels[3400:5200] = BUILDING
    return LabelMask(labels.reshape(100, 100))


class TestLabelMask:
    def test_dimensions(self):
        mask = LabelMask(np.zeros((4, 6), dtype=np.uint8))
        assert mask.height == 4 and mask.width == 6

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            LabelMask(np.zeros((0, 5), dtype=np.uint8))

    def test_rejects_out_of_range_ids(self):
        with pytest.raises(ValueError):
            LabelMask(np.full((2, 2), NUM_CLASSES, dtype=np.uint8))


class TestCategoryHistogram:
    def test_single_class_mask(self):
        mask = LabelMask(np.full((10, 10), SKY, dtype=np.uint8))
        hist = category_histogram(mask)
        assert hist[SKY] == 1.0
        assert hist.sum() == 1.0
        assert np.count_nonzero(hist) == 1

    def test_table1_distribution(self):
        hist = category_histogram(table1_mask())
        assert hist[ROAD] == 0.31
        assert hist[SIDEWALK] == 0.03
        assert hist[BUILDING] == 0.18
        assert hist[BICYCLE] == 0.0
        assert hist.sum() == pytest.approx(1.0, abs=1e-12)

    def test_matches_per_pixel_count_oracle(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            h, w = int(rng.integers(1, 40)), int(rng.integers(1, 40))
            labels = rng.integers(0, NUM_CLASSES, size=(h, w)).astype(np.uint8)
            got = category_histogram(LabelMask(labels))
            assert np.allclose(got, pixel_count_histogram(labels), atol=1e-12)

    def test_pixel_order_irrelevant(self):
        rng = np.random.default_rng(23)
        labels = rng.integers(0, NUM_CLASSES, size=(16, 16)).astype(np.uint8)
        shuffled = labels.ravel().copy()
        rng.shuffle(shuffled)
        a = category_histogram(LabelMask(labels))
        b = category_histogram(LabelMask(shuffled.reshape(16, 16)))
        assert np.array_equal(a, b)


class TestReduceToMajor:
    def test_major_names_and_indices(self):
        assert MAJOR_NAMES == ("road", "sidewalk", "building", "vegetation", "terrain", "sky")
        assert MAJOR_INDICES == (0, 1, 2, 8, 9, 10)

    def test_table1_components_preserved(self):
        v6 = reduce_to_major(category_histogram(table1_mask()))
        assert v6[0] == 0.31 and v6[1] == 0.03 and v6[2] == 0.18

    def test_zero_vector(self):
        assert np.array_equal(reduce_to_major(np.zeros(19)), np.zeros(6))

    def test_one_hot_dropped_category(self):
        v = np.zeros(19)
        v[BICYCLE] = 1.0
        assert np.array_equal(reduce_to_major(v), np.zeros(6))

    def test_wrong_width_rejected(self):
        with pytest.raises(ValueError):
            reduce_to_major(np.zeros(6))

    def test_linearity(self):
        rng = np.random.default_rng(5)
        a, b = rng.random(19), rng.random(19)
        assert np.allclose(reduce_to_major(a) + reduce_to_major(b), reduce_to_major(a + b))

    def test_matrix_form(self):
        rng = np.random.default_rng(6)
        m = rng.random((7, 19))
        out = reduce_to_major(m)
        assert out.shape == (7, 6)
        assert np.array_equal(out[3], reduce_to_major(m[3]))


class TestDispersionRatios:
    def test_constant_column_is_one(self):
        ratios = dispersion_ratios(np.full((3, 1), 0.5))
        assert ratios[0] == pytest.approx(1.0, abs=1e-12)

    def test_hand_computed_examples(self):
        got = dispersion_ratios(np.array([[0.1, 2.0], [10.0, 8.0]]))
        assert got[0] == pytest.approx(RATIO_01_10, rel=1e-12)
        assert got[1] == pytest.approx(RATIO_2_8, rel=1e-12)
        assert got[0] == pytest.approx(5.05, abs=1e-6)
        assert got[1] == pytest.approx(1.25, abs=1e-6)

    def test_rejects_negative_values(self):
        with pytest.raises(ValueError):
            dispersion_ratios(np.array([[0.5], [-0.1]]))

    def test_rejects_single_row(self):
        with pytest.raises(ValueError):
            dispersion_ratios(np.ones((1, 3)))

    def test_zero_column_tolerated(self):
        ratios = dispersion_ratios(np.array([[0.0, 0.3], [0.4, 0.3]]))
        assert np.all(np.isfinite(ratios))

    @given(
        arrays(
            np.float64,
            st.tuples(st.integers(2, 12), st.integers(1, 6)),
            elements=st.floats(0, 1, allow_nan=False),
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_am_gm_inequality(self, data):
        ratios = dispersion_ratios(data)
        assert np.all(ratios >= 1.0 - 1e-12)

    def test_matches_oracle(self):
        rng = np.random.default_rng(31)
        data = rng.random((25, 19))
        got = dispersion_ratios(data)
        for j in range(19):
            assert got[j] == pytest.approx(am_gm_ratio(data[:, j]), rel=1e-9)


def six_major_corpus(n_rows: int = 60, seed: int = 13) -> np.ndarray:
    """Rows where only the six major columns vary; every other column is constant."""
    rng = np.random.default_rng(seed)
    data = np.full((n_rows, NUM_CLASSES), 0.1 / 13.0)
    shares = rng.dirichlet(np.ones(6) * 0.8, size=n_rows) * 0.9
    data[:, list(MAJOR_INDICES)] = shares
    return data


class TestSelectFeatures:
    def test_six_major_corpus_selected(self):
        data = six_major_corpus()
        ratios = dispersion_ratios(data)
        # construction sanity, per the oracle: varying columns clear 1 + 1e-3
        assert all(ratios[j] > 1.0 + 1e-3 for j in MAJOR_INDICES)
        report = select_features(data, cutoff=1.0)
        assert sorted(report.selected) == sorted(MAJOR_INDICES)

    def test_all_constant_matrix_selects_nothing(self):
        report = select_features(np.full((5, 19), 0.1), cutoff=1.0)
        assert report.selected == ()

    def test_cutoff_zero_selects_all(self):
        report = select_features(six_major_corpus(), cutoff=0.0)
        assert len(report.selected) == 19

    def test_order_is_descending_ratio(self):
        report = select_features(six_major_corpus(), cutoff=0.0)
        values = [report.ratios[j] for j in report.selected]
        assert values == sorted(values, reverse=True)

    def test_report_keeps_all_ratios(self):
        report = select_features(six_major_corpus())
        assert report.ratios.shape == (19,)

    def test_row_permutation_invariant(self):
        data = six_major_corpus()
        rng = np.random.default_rng(2)
        perm = rng.permutation(data.shape[0])
        assert select_features(data).selected == select_features(data[perm]).selected

    def test_kind_checked_for_feature_matrix(self):
        m = FeatureMatrix(FeatureKind.LATENT, np.ones((3, 19)))
        with pytest.raises(ValueError):
            select_features(m)
