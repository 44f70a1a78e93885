import math

import numpy as np
import pytest

from conftest import as_dataset, random_dataset
from coresample import (
    CsvSchema,
    ResampleConfig,
    ValidationError,
    load_csv,
    make_donut,
    make_synthetic,
    make_two_gaussians,
    oversample_pool,
    standardize,
    write_csv,
)


class TestLoadCsv:
    def test_basic_parse(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("f1,f2,y\n1.0,2.0,a\n3.5,4.0,b\n5.0,6.25,a\n")
        ds = load_csv(path, CsvSchema(label_column="y"))
        assert ds.n_rows == 3 and ds.n_features == 2
        assert ds.labels.tolist() == ["a", "b", "a"]
        np.testing.assert_array_equal(ds.features[1], [3.5, 4.0])
        assert ds.row_ids.tolist() == [0, 1, 2]

    def test_label_by_index_keeps_feature_order(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("y,f1,f2\nx,1.0,2.0\nz,3.0,4.0\n")
        ds = load_csv(path, CsvSchema(label_column=0))
        np.testing.assert_array_equal(ds.features, [[1.0, 2.0], [3.0, 4.0]])
        assert ds.labels.tolist() == ["x", "z"]

    def test_no_header_with_index(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("1.0,2.0,a\n3.0,4.0,b\n")
        ds = load_csv(path, CsvSchema(label_column=2, has_header=False))
        assert ds.labels.tolist() == ["a", "b"]

    def test_bad_cell_reports_location(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("f1,f2,label\n1.0,2.0,a\n1.0,oops,b\n")
        with pytest.raises(ValidationError, match="line 3, column 1"):
            load_csv(path)

    def test_nan_cell_is_rejected(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("f1,label\nnan,a\n1.0,b\n")
        with pytest.raises(ValidationError, match="finite"):
            load_csv(path)

    def test_drop_row_policy_warns_and_counts(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("f1,label\n1.0,a\nbad,a\n2.0,b\nworse,b\n")
        with pytest.warns(UserWarning, match="dropped 2 rows"):
            ds = load_csv(path, CsvSchema(na_policy="drop-row"))
        assert ds.n_rows == 2
        assert ds.row_ids.tolist() == [0, 1]

    def test_missing_label_column(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("f1,f2\n1.0,2.0\n")
        with pytest.raises(ValidationError, match="label"):
            load_csv(path, CsvSchema(label_column="y"))

    def test_duplicate_label_column_rejected(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("y,f1,y\na,1.0,b\n")
        with pytest.raises(ValidationError, match="matched 2"):
            load_csv(path, CsvSchema(label_column="y"))

    def test_provenance_column_treated_as_metadata(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("f0,label,provenance\n1.0,a,original\n2.0,a,synthetic\n")
        ds = load_csv(path)
        assert ds.n_features == 1
        np.testing.assert_array_equal(ds.features[:, 0], [1.0, 2.0])

    def test_empty_file(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("")
        with pytest.raises(ValidationError, match="empty"):
            load_csv(path)

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(OSError):
            load_csv(tmp_path / "nope.csv")


class TestWriteCsv:
    def test_provenance_column(self, tmp_path):
        ds = as_dataset([[0.0], [1.0], [2.0]], ["a", "a", "a"])
        res = oversample_pool(
            ds, [0, 1, 2], ResampleConfig(strategy="duplicate", normalize="off"),
            "a", target=4,
        )
        path = tmp_path / "out.csv"
        write_csv(res, path, include_provenance=True)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "f0,label,provenance"
        tags = [line.split(",")[-1] for line in lines[1:]]
        assert tags.count("synthetic") == 1 and tags.count("original") == 3

    def test_round_trip_exact(self, tmp_path, rng):
        feats, labels = random_dataset(rng)
        ds = as_dataset(feats / 3.0 + 1e-7, labels)  # awkward decimals
        path = tmp_path / "rt.csv"
        write_csv(ds, path)
        back = load_csv(path)
        np.testing.assert_array_equal(back.features, ds.features)
        assert back.labels.tolist() == ds.labels.tolist()

    def test_round_trip_fuzz(self, tmp_path, rng):
        for trial in range(10):
            feats, labels = random_dataset(rng, n_max=40)
            ds = as_dataset(feats * 10.0**int(rng.integers(-8, 9)), labels)
            path = tmp_path / f"rt{trial}.csv"
            write_csv(ds, path)
            back = load_csv(path)
            np.testing.assert_array_equal(back.features, ds.features)
            assert back.labels.tolist() == ds.labels.tolist()


class TestStandardize:
    def test_known_column(self):
        ds = as_dataset([[0.0], [2.0], [4.0]], ["a", "a", "a"])
        out, stats = standardize(ds)
        expected = 2.0 / math.sqrt(8.0 / 3.0)
        np.testing.assert_allclose(out.features[:, 0], [-expected, 0.0, expected])
        assert stats.mean[0] == 2.0
        assert stats.sigma[0] == pytest.approx(math.sqrt(8.0 / 3.0))

    def test_off_mode_is_identity(self):
        ds = as_dataset([[1.0, 5.0], [2.0, 6.0]], ["a", "b"])
        out, stats = standardize(ds, "off")
        assert out is ds
        assert stats.apply(ds) is ds

    def test_idempotent_within_tolerance(self, rng):
        feats, labels = random_dataset(rng)
        once, _ = standardize(as_dataset(feats, labels))
        twice, _ = standardize(once)
        np.testing.assert_allclose(twice.features, once.features, atol=1e-12)

    def test_constant_feature_passes_through(self):
        ds = as_dataset([[1.0, 7.0], [2.0, 7.0], [3.0, 7.0]], ["a", "a", "b"])
        with pytest.warns(UserWarning, match="constant"):
            out, stats = standardize(ds)
        np.testing.assert_array_equal(out.features[:, 1], [7.0, 7.0, 7.0])
        assert stats.constant.tolist() == [False, True]

    def test_train_stats_reused_on_test_split(self):
        train = as_dataset([[0.0], [2.0], [4.0]], ["a"] * 3)
        test = as_dataset([[2.0], [6.0]], ["a", "a"])
        _, stats = standardize(train)
        out = stats.apply(test)
        sigma = math.sqrt(8.0 / 3.0)
        np.testing.assert_allclose(out.features[:, 0], [0.0, 4.0 / sigma])

    def test_dimension_mismatch(self):
        _, stats = standardize(as_dataset([[0.0], [1.0]], ["a", "a"]))
        with pytest.raises(ValidationError):
            stats.apply(as_dataset([[0.0, 1.0]], ["a"]))


class TestMakeSynthetic:
    def test_two_gaussians_counts_and_labels(self):
        ds = make_synthetic("two-gaussians", seed=1, n_maj=900, n_min=100,
                            separation=4.0, sigma=0.5, d=2)
        assert ds.class_counts() == {"majority": 900, "minority": 100}
        assert ds.n_features == 2

    def test_two_gaussians_separable_when_far(self):
        ds = make_two_gaussians(300, 100, separation=4.0, sigma=0.5, d=2, seed=2)
        maj = ds.features[ds.class_positions("majority")][:, 0]
        minor = ds.features[ds.class_positions("minority")][:, 0]
        assert maj.max() < minor.min()

    def test_donut_radii_in_bounds(self):
        ds = make_donut(500, inner_r=1.0, outer_r=2.0, seed=3)
        radii = np.linalg.norm(ds.features, axis=1)
        assert radii.min() >= 1.0 and radii.max() <= 2.0
        assert len(ds.classes) == 1

    def test_same_seed_identical(self):
        a = make_synthetic("two-gaussians", seed=9, n_maj=50, n_min=20)
        b = make_synthetic("two-gaussians", seed=9, n_maj=50, n_min=20)
        np.testing.assert_array_equal(a.features, b.features)

    def test_bad_parameters(self):
        with pytest.raises(ValidationError):
            make_two_gaussians(0, 10)
        with pytest.raises(ValidationError):
            make_donut(10, inner_r=2.0, outer_r=1.0)
        with pytest.raises(ValidationError):
            make_synthetic("spiral")
