"""
Tests for src/data — table I/O, scaling, PCA, splitting and synthetic data.
"""

import numpy as np
import pytest

from src.data import (
    Dataset,
    SplitSpec,
    apply_pca,
    apply_scaler,
    fit_pca,
    fit_scaler,
    invert_scaler,
    load_table,
    save_table,
    split,
    split_indices,
    synth_dataset,
)
from src.data.preprocessing import scale_columns, unscale_columns
from src.data.synthetic import cosine_weights, linear_weights
from src.errors import ConfigError, DataFormatError
from src.evaluation.baseline import RidgeRegressor
from src.evaluation.metrics import r2


class TestDataset:
    """Container validation."""

    def test_shape_mismatch(self):
        with pytest.raises(DataFormatError):
            Dataset(np.zeros((3, 2)), np.zeros(4), ("a", "b"))

    def test_names_must_match_columns(self):
        with pytest.raises(DataFormatError):
            Dataset(np.zeros((3, 2)), np.zeros(3), ("a",))

    def test_non_finite(self):
        with pytest.raises(DataFormatError):
            Dataset(np.array([[np.nan]]), np.zeros(1), ("a",))

    def test_take_keeps_row_ids(self):
        ds = Dataset(np.arange(10.0).reshape(5, 2), np.arange(5.0), ("a", "b"))
        sub = ds.take([4, 1])
        np.testing.assert_array_equal(sub.row_ids, [4, 1])
        np.testing.assert_array_equal(sub.y, [4.0, 1.0])


class TestTableIO:
    """load_table / save_table."""

    def test_three_rows(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("f1,f2,target\n1,2,3\n4,5,6\n7,8,9\n")
        ds = load_table(path, "target")
        assert (ds.n_samples, ds.n_features) == (3, 2)
        assert ds.feature_names == ("f1", "f2")
        np.testing.assert_array_equal(ds.y, [3, 6, 9])

    def test_target_in_middle(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("a,y,b\n1,2,3\n4,5,6\n")
        ds = load_table(path, "y")
        assert ds.feature_names == ("a", "b")
        np.testing.assert_array_equal(ds.X, [[1, 3], [4, 6]])

    def test_nan_cell_names_location(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("f1,f2,target\n1,2,3\n4,NaN,6\n")
        with pytest.raises(DataFormatError, match=r"row 2, column 'f2'"):
            load_table(path, "target")

    def test_text_cell(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("f1,target\n1,abc\n")
        with pytest.raises(DataFormatError, match="abc"):
            load_table(path, "target")

    def test_missing_target(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("f1,f2\n1,2\n")
        with pytest.raises(DataFormatError, match="target"):
            load_table(path, "target")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("")
        with pytest.raises(DataFormatError):
            load_table(path, "target")

    def test_round_trip(self, tmp_path, rng):
        ds = Dataset(rng.normal(size=(20, 3)) * 1e3, rng.normal(size=20), ("a", "b", "c"))
        path = save_table(ds, tmp_path / "out" / "d.csv")
        back = load_table(path, "target")
        np.testing.assert_allclose(back.X, ds.X, rtol=1e-12, atol=0)
        np.testing.assert_allclose(back.y, ds.y, rtol=1e-12, atol=0)


class TestScaler:
    """Min-max scaling to [-1, 1]."""

    def test_affine_map(self):
        np.testing.assert_allclose(
            scale_columns(np.array([10.0, 20.0, 30.0]), np.float64(10), np.float64(30)), [-1, 0, 1])

    def test_constant_column(self):
        X = np.array([[7.0], [7.0], [7.0]])
        np.testing.assert_array_equal(scale_columns(X, X.min(axis=0), X.max(axis=0)), 0.0)

    def test_round_trip_and_range(self, rng):
        ds = Dataset(rng.normal(size=(30, 4)) * 5, rng.normal(size=30) * 10 + 3, ("a", "b", "c", "d"))
        scaler = fit_scaler(ds)
        scaled, clipped = apply_scaler(scaler, ds)
        assert clipped == 0
        assert scaled.X.min() >= -1.0 and scaled.X.max() <= 1.0
        np.testing.assert_allclose(scaled.X.min(axis=0), -1.0)
        np.testing.assert_allclose(scaled.X.max(axis=0), 1.0)
        np.testing.assert_allclose(scaler.inverse_features(scaled.X), ds.X, atol=1e-12)
        np.testing.assert_allclose(invert_scaler(scaler, scaled.y), ds.y, atol=1e-12)

    def test_unseen_rows_are_clipped(self):
        train = Dataset(np.array([[0.0], [1.0]]), np.array([0.0, 1.0]), ("a",))
        test = Dataset(np.array([[2.0], [0.5]]), np.array([5.0, 0.5]), ("a",))
        scaled, clipped = apply_scaler(fit_scaler(train), test)
        assert clipped == 1
        np.testing.assert_allclose(scaled.X[:, 0], [1.0, 0.0])
        assert scaled.y[0] == pytest.approx(9.0)  # targets are never clipped

    def test_unscaled_features_not_clipped(self):
        train = Dataset(np.array([[0.0], [1.0]]), np.array([0.0, 1.0]), ("a",))
        test = Dataset(np.array([[3.0]]), np.array([1.0]), ("a",))
        scaled, clipped = apply_scaler(fit_scaler(train), test, scale_features=False)
        assert clipped == 0
        assert scaled.X[0, 0] == 3.0

    def test_unscale_constant_returns_value(self):
        assert unscale_columns(np.array([0.3]), np.float64(4), np.float64(4))[0] == 4.0


class TestPca:
    """Covariance eigendecomposition."""

    def test_rank_one(self, rng):
        c = rng.normal(size=40)
        ds = Dataset(np.column_stack([c, 2 * c]), np.zeros(40), ("a", "b"))
        model = fit_pca(ds, 1)
        assert model.explained_variance_ratio()[0] == pytest.approx(1.0, abs=1e-10)

    def test_single_feature(self, rng):
        X = rng.normal(size=(15, 1))
        ds = Dataset(X, np.zeros(15), ("a",))
        model = fit_pca(ds, 1)
        np.testing.assert_allclose(model.components, [[1.0]])
        np.testing.assert_allclose(apply_pca(model, ds).X, X - X.mean(), atol=1e-12)

    def test_rank_three_reconstruction(self, rng):
        X = rng.normal(size=(50, 3)) @ rng.normal(size=(3, 8))
        model = fit_pca(Dataset(X, np.zeros(50), tuple("abcdefgh")), 3)
        np.testing.assert_allclose(model.reconstruct(model.project(X)), X, atol=1e-8)

    def test_invariants(self, rng):
        X = rng.normal(size=(60, 6)) * np.arange(1, 7)
        ds = Dataset(X, np.zeros(60), tuple("abcdef"))
        model = fit_pca(ds, 4)
        np.testing.assert_allclose(model.components @ model.components.T, np.eye(4), atol=1e-10)
        assert np.all(np.diff(model.explained_variance) <= 0)
        np.testing.assert_allclose(model.project(X).mean(axis=0), 0.0, atol=1e-10)
        pivots = np.argmax(np.abs(model.components), axis=1)
        assert np.all(model.components[np.arange(4), pivots] > 0)

    def test_feature_names(self, rng):
        ds = Dataset(rng.normal(size=(10, 3)), np.zeros(10), ("a", "b", "c"))
        assert apply_pca(fit_pca(ds, 2), ds).feature_names == ("pc1", "pc2")

    def test_too_many_components(self, rng):
        ds = Dataset(rng.normal(size=(10, 3)), np.zeros(10), ("a", "b", "c"))
        with pytest.raises(ConfigError):
            fit_pca(ds, 4)


class TestSplit:
    """Seeded partitions."""

    def test_sizes(self):
        train, test = split_indices(100, SplitSpec(0.8, seed=1))
        assert len(train) == 80 and len(test) == 20
        assert not set(train) & set(test)

    def test_test_set_independent_of_ratio(self):
        _, test_a = split_indices(100, SplitSpec(0.1, seed=5))
        _, test_b = split_indices(100, SplitSpec(0.5, seed=5))
        np.testing.assert_array_equal(test_a, test_b)

    def test_training_rows_nested(self):
        small, _ = split_indices(100, SplitSpec(0.3, seed=5))
        large, _ = split_indices(100, SplitSpec(0.7, seed=5))
        assert set(small) <= set(large)

    def test_index_audit(self, rng):
        for _ in range(20):
            n = int(rng.integers(40, 500))
            ratio = float(rng.uniform(0.05, 0.8))
            train, test = split_indices(n, SplitSpec(ratio, seed=int(rng.integers(1 << 32))))
            both = np.concatenate([train, test])
            assert len(both) <= n
            assert len(np.unique(both)) == len(both)
            assert both.min() >= 0 and both.max() < n

    def test_same_seed_same_partition(self, small_linear):
        a = split(small_linear, SplitSpec(0.5, seed=3))
        b = split(small_linear, SplitSpec(0.5, seed=3))
        np.testing.assert_array_equal(a[0].row_ids, b[0].row_ids)
        np.testing.assert_array_equal(a[1].row_ids, b[1].row_ids)

    def test_too_few_rows(self):
        with pytest.raises(DataFormatError):
            split_indices(4, SplitSpec(0.8))

    @pytest.mark.parametrize("ratio", [0.0, 0.85, -0.1])
    def test_ratio_range(self, ratio):
        with pytest.raises(ConfigError):
            SplitSpec(ratio)


class TestSynthetic:
    """Synthetic generators."""

    def test_cosine_single_feature(self):
        ds = synth_dataset("cosine", 50, 1, seed=0)
        np.testing.assert_allclose(ds.y, np.cos(ds.X[:, 0] + 0.3))
        assert cosine_weights(1)[0] == 1.0

    def test_linear_weights(self):
        np.testing.assert_allclose(linear_weights(4), [0.25, -0.5, 0.75, -1.0])

    def test_features_in_unit_box(self):
        ds = synth_dataset("linear", 100, 5, seed=2)
        assert np.abs(ds.X).max() <= 1.0

    def test_linear_fit_by_ridge(self):
        ds = synth_dataset("linear", 200, 5, seed=0)
        model = RidgeRegressor(1e-8).fit(ds.X, ds.y)
        assert r2(ds.y, model.predict(ds.X)) >= 0.999

    def test_wide_gaussian_is_noise(self):
        ds = synth_dataset("wide-gaussian", 500, 5, seed=0)
        train, test = split(ds, SplitSpec(0.8, seed=0))
        model = RidgeRegressor(1.0).fit(train.X, train.y)
        assert abs(r2(test.y, model.predict(test.X))) < 0.2
        assert ds.y.mean() == pytest.approx(90.7, abs=5)

    def test_seeded(self):
        a = synth_dataset("cosine", 20, 3, seed=9)
        b = synth_dataset("cosine", 20, 3, seed=9)
        np.testing.assert_array_equal(a.X, b.X)

    @pytest.mark.parametrize("args", [("sine", 50, 1), ("cosine", 5, 1), ("linear", 50, 0)])
    def test_invalid(self, args):
        with pytest.raises(ConfigError):
            synth_dataset(*args, seed=0)
