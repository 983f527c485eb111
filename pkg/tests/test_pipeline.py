"""
Tests for src/pipeline.py and src/evaluation/protocols.py — data preparation,
single training runs, grid sweeps, learning curves and depth scans.
"""

import itertools
import pickle

import numpy as np
import pytest

from config.constants import ANSATZE, ENCODERS, REDUCED_ANSATZE
from src.circuits import CircuitSpec
from src.data.splitting import SplitSpec
from src.data.synthetic import synth_dataset
from src.errors import (
    ConfigError,
    EncodingDomainError,
    NonFiniteLossError,
    PartitionError,
    PQCError,
    StageError,
)
from src.evaluation.protocols import (
    Job,
    check_ratios,
    depth_scan,
    derive_cell_seed,
    grid_sweep,
    learning_curve,
    run_jobs,
)
from src.pipeline import (
    PreparedData,
    PreprocessingOptions,
    TrainOptions,
    prepare_data,
    stage,
    train_and_score,
)
from src.training.spsa import SpsaConfig


def quick_options(iterations=2, seed=0):
    return TrainOptions(spsa=SpsaConfig(iterations=iterations, seed=seed))


@pytest.fixture
def two_feature_data():
    return prepare_data(synth_dataset("linear", 30, 2, seed=1), SplitSpec(0.8, seed=0))


class TestStage:
    """Stage tagging of compute failures."""

    def test_wraps_value_errors(self):
        with pytest.raises(StageError) as exc:
            with stage("score"):
                raise EncodingDomainError("bad x")
        assert exc.value.stage == "score"
        assert "[score]" in str(exc.value)

    def test_config_errors_pass_through(self):
        with pytest.raises(ConfigError):
            with stage("train"):
                raise ConfigError("bad name")

    def test_errors_pickle(self):
        err = pickle.loads(pickle.dumps(StageError("train", NonFiniteLossError(4, float("inf")))))
        assert err.stage == "train"
        assert err.cause.iteration == 4


class TestPrepareData:
    """Split, PCA and scaling fit on training rows only."""

    def test_scaled_ranges(self, two_feature_data):
        assert np.abs(two_feature_data.train.X).max() <= 1.0
        np.testing.assert_allclose(two_feature_data.train.y.min(), -1.0)
        np.testing.assert_allclose(two_feature_data.train.y.max(), 1.0)

    def test_original_units_kept(self, two_feature_data):
        np.testing.assert_allclose(
            two_feature_data.to_target_units(two_feature_data.train.y),
            two_feature_data.train_y, atol=1e-12)

    def test_pca_then_scale(self):
        dataset = synth_dataset("linear", 40, 6, seed=2)
        prepared = prepare_data(dataset, SplitSpec(0.8, seed=0), PreprocessingOptions(pca_components=3))
        assert prepared.n_features == 3
        assert prepared.train.feature_names == ("pc1", "pc2", "pc3")
        assert prepared.describe()["pca"]["n_components"] == 3

    def test_no_scaling(self):
        dataset = synth_dataset("cosine", 20, 1, seed=0)
        prepared = prepare_data(dataset, SplitSpec(0.8), PreprocessingOptions(False, False))
        assert prepared.scaler is None
        np.testing.assert_array_equal(prepared.train.y, prepared.train_y)

    def test_too_few_rows_is_stage_error(self):
        dataset = synth_dataset("cosine", 10, 1, seed=0)
        with pytest.raises(StageError, match=r"\[split\]"):
            prepare_data(dataset, SplitSpec(0.05))


class TestTrainAndScore:
    """One training run."""

    def test_outcome(self, two_feature_data):
        outcome = train_and_score(two_feature_data, CircuitSpec(2, "A2", "HWE-CNOT"), quick_options())
        assert outcome.total_params == 4
        assert len(outcome.record.loss_history) == 2
        assert outcome.train_pred.shape == two_feature_data.train_y.shape
        assert outcome.ridge is not None
        assert set(outcome.summary()) >= {"metrics", "ridge", "theta_digest", "final_loss"}

    def test_no_ridge(self, two_feature_data):
        options = TrainOptions(spsa=SpsaConfig(iterations=1), ridge_lambda=None)
        assert train_and_score(two_feature_data, CircuitSpec(2, "A1", "HWE-CZ"), options).ridge is None

    def test_feature_mismatch(self, two_feature_data):
        with pytest.raises(ConfigError):
            train_and_score(two_feature_data, CircuitSpec(3, "A1", "HWE-CZ"), quick_options())

    def test_deterministic_metrics(self, two_feature_data):
        spec = CircuitSpec(2, "IQP", "Full-CRZ")
        a = train_and_score(two_feature_data, spec, quick_options(5, seed=9))
        b = train_and_score(two_feature_data, spec, quick_options(5, seed=9))
        assert a.metrics == b.metrics
        assert a.theta_digest == b.theta_digest


class TestDerivedSeeds:
    """Cell seeds depend only on the run seed and labels."""

    def test_stable(self):
        assert derive_cell_seed(7, "A1", "ESU2") == derive_cell_seed(7, "A1", "ESU2")

    def test_distinct(self):
        seeds = {derive_cell_seed(7, e, a) for e in ENCODERS for a in ANSATZE}
        assert len(seeds) == 168
        assert derive_cell_seed(7, "A1", "ESU2") != derive_cell_seed(8, "A1", "ESU2")

    def test_unsigned_64_bit(self):
        assert 0 <= derive_cell_seed(0, "x") < 1 << 64


class TestGridSweep:
    """Encoder x ansatz sweeps."""

    def test_full_grid_shape(self, two_feature_data):
        result = grid_sweep(list(ENCODERS), list(ANSATZE), two_feature_data,
                            CircuitSpec(2, "A1", "HWE-CNOT"), quick_options(1))
        assert len(result) == 168
        assert len(result.rows()) == 168
        assert not result.failed()

    def test_reduced_grid_shape(self, two_feature_data):
        result = grid_sweep(list(ENCODERS), REDUCED_ANSATZE, two_feature_data,
                            CircuitSpec(2, "A1", "HWE-CNOT"), quick_options(1))
        assert len(result) == 98

    def test_single_cell_equals_train_run(self, two_feature_data):
        base = CircuitSpec(2, "A1", "HWE-CNOT")
        options = quick_options(4, seed=5)
        cell = grid_sweep(["M"], ["Efficient-CRX"], two_feature_data, base, options).cells[
            ("M", "Efficient-CRX")]
        direct = train_and_score(
            two_feature_data, CircuitSpec(2, "M", "Efficient-CRX"),
            options.with_seed(derive_cell_seed(5, "M", "Efficient-CRX")))
        assert cell.metrics == direct.metrics
        assert cell.theta_digest == direct.theta_digest

    def test_rerun_identical(self, two_feature_data):
        args = (["A1", "IQP"], ["HWE-CZ", "Full-CRX"], two_feature_data,
                CircuitSpec(2, "A1", "HWE-CNOT"), quick_options(3, seed=1))
        assert grid_sweep(*args).cells == grid_sweep(*args).cells

    def test_subset_reproduces_cells(self, two_feature_data):
        base, options = CircuitSpec(2, "A1", "HWE-CNOT"), quick_options(3, seed=1)
        full = grid_sweep(["A1", "A2"], ["HWE-CZ", "ESU2"], two_feature_data, base, options)
        part = grid_sweep(["A2"], ["ESU2"], two_feature_data, base, options)
        assert part.cells[("A2", "ESU2")] == full.cells[("A2", "ESU2")]

    def test_process_pool_matches_serial(self, two_feature_data):
        args = (["A1", "M"], ["HWE-CNOT", "Hadamard"], two_feature_data,
                CircuitSpec(2, "A1", "HWE-CNOT"), quick_options(2, seed=4))
        assert grid_sweep(*args, workers=2).cells == grid_sweep(*args, workers=1).cells

    def test_empty_lists(self, two_feature_data):
        with pytest.raises(ConfigError):
            grid_sweep([], ["ESU2"], two_feature_data, CircuitSpec(2, "A1", "ESU2"), quick_options())

    def test_unknown_name(self, two_feature_data):
        with pytest.raises(ConfigError):
            grid_sweep(["A3"], ["ESU2"], two_feature_data, CircuitSpec(2, "A1", "ESU2"), quick_options())

    @pytest.mark.parametrize("encoders, ansatze", [
        (["A1", "IQP", "A1"], ["ESU2"]),
        (["A1"], ["ESU2", "HWE-CZ", "ESU2"]),
    ])
    def test_duplicate_names_rejected(self, two_feature_data, encoders, ansatze):
        with pytest.raises(ConfigError, match="Duplicate"):
            grid_sweep(encoders, ansatze, two_feature_data,
                       CircuitSpec(2, "A1", "ESU2"), quick_options(1))


class TestRunJobs:
    """Failed jobs become failed cells."""

    def test_failure_recorded_and_sweep_continues(self, two_feature_data):
        good = Job(two_feature_data, CircuitSpec(2, "A1", "HWE-CZ"), quick_options(1))
        bad = Job(two_feature_data, CircuitSpec(4, "A1", "HWE-CZ"), quick_options(1))
        cells = run_jobs([good, bad, good])
        assert [c.ok for c in cells] == [True, False, True]
        assert "ConfigError" in cells[1].error
        assert cells[1].row()["error"]


class TestLearningCurve:
    """Nested training subsets with a fixed test partition."""

    def test_default_ratios(self):
        dataset = synth_dataset("linear", 50, 2, seed=3)
        result = learning_curve(dataset, [0.1, 0.3, 0.5, 0.7, 0.8], CircuitSpec(2, "A1", "HWE-CNOT"),
                                quick_options(1), split_seed=0)
        assert result.ratios == [0.1, 0.3, 0.5, 0.7, 0.8]
        assert [p.n_train for p in result.points] == [5, 15, 25, 35, 40]
        assert {p.n_test for p in result.points} == {10}
        assert result.test_partition_fixed()
        assert all(p.cell.ridge is not None for p in result.points)

    def test_single_ratio_is_one_run(self):
        dataset = synth_dataset("linear", 50, 2, seed=3)
        spec, options = CircuitSpec(2, "A2", "HWE-CZ"), quick_options(3)
        result = learning_curve(dataset, [0.8], spec, options, split_seed=2)
        direct = train_and_score(prepare_data(dataset, SplitSpec(0.8, 2)), spec, options)
        assert result.points[0].cell.metrics == direct.metrics

    @pytest.mark.parametrize("ratios", [[], [0.5, 0.3], [0.9], [0.0, 0.5]])
    def test_invalid_ratios(self, ratios):
        with pytest.raises(ConfigError):
            check_ratios(ratios)

    def test_training_rows_are_nested(self):
        dataset = synth_dataset("linear", 50, 2, seed=3)
        result = learning_curve(dataset, [0.1, 0.3, 0.5, 0.7, 0.8], CircuitSpec(2, "A1", "HWE-CNOT"),
                                quick_options(1), split_seed=4)
        for smaller, larger in zip(result.points, result.points[1:]):
            assert set(smaller.train_row_ids) < set(larger.train_row_ids)
        for point in result.points:
            assert len(point.train_row_ids) == point.n_train
        assert len({p.to_dict()["train_rows_digest"] for p in result.points}) == 5

    def test_moving_test_partition_is_a_compute_error(self, monkeypatch):
        digests = itertools.count()
        monkeypatch.setattr(PreparedData, "test_digest", lambda self: f"rows-{next(digests)}")
        dataset = synth_dataset("linear", 50, 2, seed=3)
        with pytest.raises(PartitionError) as exc:
            learning_curve(dataset, [0.3, 0.8], CircuitSpec(2, "A1", "HWE-CZ"),
                           quick_options(1), split_seed=0)
        assert isinstance(exc.value, PQCError)

    def test_ratio_with_no_training_rows(self):
        dataset = synth_dataset("linear", 20, 2, seed=3)
        with pytest.raises(StageError):
            learning_curve(dataset, [0.01], CircuitSpec(2, "A1", "HWE-CZ"), quick_options(1), 0)


class TestDepthScan:
    """Re-upload depth x ansatz layers."""

    def test_shape_and_params(self, two_feature_data):
        result = depth_scan(two_feature_data, CircuitSpec(2, "A2", "HWE-CNOT"),
                            [1, 3], [1, 2], quick_options(1))
        assert set(result.cells) == {(1, 1), (1, 2), (3, 1), (3, 2)}
        assert result.cells[(3, 2)].total_params == 3 * 2 * 4
        assert len(result.rows()) == 4

    @pytest.mark.parametrize("ruds, layers", [([1, 1, 3], [1]), ([1], [2, 2])])
    def test_duplicate_values_rejected(self, two_feature_data, ruds, layers):
        with pytest.raises(ConfigError, match="Duplicate"):
            depth_scan(two_feature_data, CircuitSpec(2, "A2", "HWE-CNOT"), ruds, layers, quick_options(1))

    @pytest.mark.slow
    def test_cosine_scan_parameter_counts_are_monotone(self):
        prepared = prepare_data(synth_dataset("cosine", 60, 2, seed=0), SplitSpec(0.8, seed=0))
        values = [1, 3, 5]
        result = depth_scan(prepared, CircuitSpec(2, "A1", "HWE-CNOT"), values, values,
                            quick_options(100, seed=2))
        per_layer = 4
        assert not [c for c in result.cells.values() if not c.ok]
        for (k, v), cell in result.cells.items():
            assert cell.total_params == k * v * per_layer
        for k in values:
            counts = [result.cells[(k, v)].total_params for v in values]
            assert counts == sorted(counts)
        for v in values:
            counts = [result.cells[(k, v)].total_params for k in values]
            assert counts == sorted(counts)
        by_size = sorted(result.cells, key=lambda kv: kv[0] * kv[1])
        counts = [result.cells[kv].total_params for kv in by_size]
        assert counts == sorted(counts)
