"""Dataset ingestion, normalization, and augmentation behavior."""

import json

import numpy as np
import pytest

from mmclust.data import (
    AugmentedViews,
    DataError,
    MultiViewDataset,
    augment,
    load_dataset,
    normalize_views,
)


def write_dataset(tmp_path, views, labels=None, names=None, sep=","):
    view_files = []
    for i, view in enumerate(views):
        name = f"view{i}.csv"
        lines = [sep.join(repr(float(x)) for x in row) for row in view]
        (tmp_path / name).write_text("\n".join(lines) + "\n")
        view_files.append(name)
    manifest = {"views": view_files}
    if labels is not None:
        (tmp_path / "labels.csv").write_text("\n".join(str(v) for v in labels) + "\n")
        manifest["labels"] = "labels.csv"
    if names is not None:
        manifest["names"] = list(names)
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(manifest))
    return path


class TestLoadDataset:
    def test_round_trip_two_views(self, tmp_path):
        v0 = [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]
        v1 = [[0.5, -1.0, 2.5], [7.0, 8.0, 9.0]]
        path = write_dataset(tmp_path, [v0, v1])
        ds = load_dataset(path)
        assert ds.n_views == 2
        assert ds.n_instances == 3
        assert ds.dims == (2, 2)
        assert ds.labels is None
        np.testing.assert_array_equal(ds.views[0], np.array(v0))
        np.testing.assert_array_equal(ds.views[1], np.array(v1))

    def test_whitespace_separated_matrix(self, tmp_path):
        path = write_dataset(tmp_path, [[[1.0, 2.0], [3.0, 4.0]]], sep=" ")
        ds = load_dataset(path)
        np.testing.assert_array_equal(ds.views[0], [[1.0, 2.0], [3.0, 4.0]])

    def test_labels_round_trip(self, tmp_path):
        path = write_dataset(tmp_path, [[[1.0, 2.0, 3.0]]], labels=[0, 1, 0])
        ds = load_dataset(path)
        np.testing.assert_array_equal(ds.labels, [0, 1, 0])

    def test_names_round_trip(self, tmp_path):
        path = write_dataset(tmp_path, [[[1.0]], [[2.0]]], names=["text", "image"])
        assert load_dataset(path).names == ("text", "image")

    def test_column_count_mismatch(self, tmp_path):
        path = write_dataset(tmp_path, [[[1.0, 2.0, 3.0]], [[1.0, 2.0, 3.0, 4.0]]])
        with pytest.raises(DataError, match="column count mismatch"):
            load_dataset(path)

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(DataError, match="manifest not found"):
            load_dataset(tmp_path / "nope.json")

    def test_missing_view_file(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"views": ["absent.csv"]}))
        with pytest.raises(DataError, match="absent.csv"):
            load_dataset(path)

    def test_ragged_row_names_file_and_line(self, tmp_path):
        (tmp_path / "bad.csv").write_text("1,2,3\n4,5\n")
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"views": ["bad.csv"]}))
        with pytest.raises(DataError, match=r"bad\.csv:2: ragged row"):
            load_dataset(path)

    def test_non_numeric_token_names_location(self, tmp_path):
        (tmp_path / "bad.csv").write_text("1,2\n3,oops\n")
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"views": ["bad.csv"]}))
        with pytest.raises(DataError, match=r"bad\.csv:2: non-numeric token 'oops'"):
            load_dataset(path)

    def test_nan_rejected(self, tmp_path):
        (tmp_path / "bad.csv").write_text("1,nan\n")
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"views": ["bad.csv"]}))
        with pytest.raises(DataError, match="non-finite"):
            load_dataset(path)

    def test_label_count_mismatch(self, tmp_path):
        path = write_dataset(tmp_path, [[[1.0, 2.0, 3.0]]], labels=[0, 1])
        with pytest.raises(DataError, match="expected 3 labels"):
            load_dataset(path)

    def test_invalid_manifest_json(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text("{not json")
        with pytest.raises(DataError, match="invalid manifest JSON"):
            load_dataset(path)

    def test_empty_matrix_file_rejected(self, tmp_path):
        (tmp_path / "v.csv").write_text("\n\n")
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"views": ["v.csv"]}))
        with pytest.raises(DataError, match="empty matrix file"):
            load_dataset(path)


class TestDatasetValidation:
    def test_negative_labels_rejected(self):
        with pytest.raises(DataError, match="non-negative"):
            MultiViewDataset((np.ones((2, 3)),), labels=np.array([0, -1, 1]))

    def test_non_contiguous_labels_rejected(self):
        with pytest.raises(DataError, match="contiguous"):
            MultiViewDataset((np.ones((2, 3)),), labels=np.array([0, 2, 0]))

    def test_empty_view_rejected(self):
        with pytest.raises(DataError):
            MultiViewDataset((np.empty((0, 3)),))

    def test_views_are_read_only(self):
        ds = MultiViewDataset((np.ones((2, 3)),))
        with pytest.raises(ValueError):
            ds.views[0][0, 0] = 5.0


class TestNormalizeViews:
    def test_three_four_five_scaling(self):
        ds = MultiViewDataset((np.array([[3.0, 4.0]]),))
        out = normalize_views(ds)
        np.testing.assert_allclose(out.views[0], [[0.6, 0.8]], atol=1e-15)

    def test_idempotent(self):
        rng = np.random.default_rng(42)
        ds = MultiViewDataset((rng.standard_normal((4, 6)),))
        once = normalize_views(ds)
        twice = normalize_views(once)
        np.testing.assert_allclose(twice.views[0], once.views[0], atol=1e-12)

    def test_each_view_scaled_independently_unit_energy(self):
        # direct summation oracle: total squared energy of each view is one
        rng = np.random.default_rng(7)
        ds = MultiViewDataset(
            (100.0 * rng.standard_normal((3, 5)), 1e-3 * rng.standard_normal((6, 5)))
        )
        out = normalize_views(ds)
        for view in out.views:
            total = sum(float(x) ** 2 for row in view for x in row)
            assert abs(total - 1.0) < 1e-12

    def test_proportions_preserved(self):
        rng = np.random.default_rng(3)
        v = rng.standard_normal((4, 7))
        out = normalize_views(MultiViewDataset((v,)))
        ratio = out.views[0] / v
        np.testing.assert_allclose(ratio, ratio.flat[0], rtol=1e-12)

    def test_degenerate_view_rejected(self):
        with pytest.raises(DataError, match="degenerate view"):
            normalize_views(MultiViewDataset((np.zeros((2, 3)),)))

    def test_labels_and_names_carry_over(self):
        ds = MultiViewDataset(
            (np.ones((2, 2)),), labels=np.array([0, 1]), names=("a",)
        )
        out = normalize_views(ds)
        np.testing.assert_array_equal(out.labels, [0, 1])
        assert out.names == ("a",)


class TestAugment:
    def test_single_column_definition(self):
        ds = MultiViewDataset((np.array([[2.0], [5.0]]),))
        z = augment(ds)
        np.testing.assert_array_equal(z.z_views[0], [[2.0], [5.0], [1.0]])

    def test_rows_copied_and_ones_appended(self):
        # elementwise comparison oracle on a random view
        rng = np.random.default_rng(11)
        v = rng.standard_normal((3, 4))
        z = augment(MultiViewDataset((v,))).z_views[0]
        assert z.shape == (4, 4)
        np.testing.assert_array_equal(z[:3], v)
        np.testing.assert_array_equal(z[3], np.ones(4))

    def test_drop_last_row_recovers_view(self):
        rng = np.random.default_rng(5)
        ds = MultiViewDataset((rng.standard_normal((2, 6)), rng.standard_normal((5, 6))))
        normalized = normalize_views(ds)
        z = augment(normalized)
        for zv, v in zip(z.z_views, normalized.views):
            np.testing.assert_array_equal(zv[:-1], v)

    def test_last_row_must_be_ones(self):
        with pytest.raises(DataError, match="last row"):
            AugmentedViews((np.array([[1.0, 2.0], [0.5, 1.0]]),))

    def test_pipeline_deterministic(self):
        rng = np.random.default_rng(9)
        raw = rng.standard_normal((3, 5))
        a = augment(normalize_views(MultiViewDataset((raw.copy(),))))
        b = augment(normalize_views(MultiViewDataset((raw.copy(),))))
        assert np.array_equal(a.z_views[0], b.z_views[0])
