import os

import numpy as np
import pytest

from scatdetect import sigio
from scatdetect.config import PipelineConfig, load_config, save_config
from scatdetect.errors import InputError


class TestSignalCSV:
    def test_round_trip_lossless(self, tmp_path):
        rng = np.random.default_rng(0)
        data = rng.standard_normal((50, 3))
        path = tmp_path / "sig.csv"
        sigio.write_signal_csv(path, ["a", "b", "c"], data)
        names, back = sigio.read_signal_csv(path)
        assert names == ["a", "b", "c"]
        assert np.array_equal(back, data)

    def test_canonical_text_round_trips_bytes(self, tmp_path):
        data = np.array([[0.1], [1.0 / 3.0], [-2.5e-17]])
        path = tmp_path / "sig.csv"
        sigio.write_signal_csv(path, ["x"], data)
        first = path.read_bytes()
        _, back = sigio.read_signal_csv(path)
        sigio.write_signal_csv(path, ["x"], back)
        assert path.read_bytes() == first

    def test_ragged_row_rejected_with_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1.0,2.0\n3.0\n")
        with pytest.raises(InputError, match="line 3"):
            sigio.read_signal_csv(path)

    def test_unparsable_cell_named(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1.0,x7\n")
        with pytest.raises(InputError, match="line 2, column 2"):
            sigio.read_signal_csv(path)

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a\n1.0\nnan\n")
        with pytest.raises(InputError, match="line 3, column 1: non-finite"):
            sigio.read_signal_csv(path)
        path.write_text("a\ninf\n")
        with pytest.raises(InputError, match="non-finite"):
            sigio.read_signal_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError, match="cannot read"):
            sigio.read_signal_csv(tmp_path / "absent.csv")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(InputError, match="empty"):
            sigio.read_signal_csv(path)

    def test_no_samples(self, tmp_path):
        path = tmp_path / "headeronly.csv"
        path.write_text("a,b\n")
        with pytest.raises(InputError, match="no samples"):
            sigio.read_signal_csv(path)


class TestMatrixAndBinary:
    def test_matrix_round_trip(self, tmp_path):
        rng = np.random.default_rng(1)
        m = rng.standard_normal((7, 4))
        path = tmp_path / "m.csv"
        sigio.write_matrix_csv(path, m)
        assert np.array_equal(sigio.read_matrix_csv(path), m)

    def test_vector_becomes_column(self, tmp_path):
        path = tmp_path / "v.csv"
        sigio.write_matrix_csv(path, np.array([1.0, 2.0]))
        assert sigio.read_matrix_csv(path).shape == (2, 1)

    def test_binary_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        tensor = rng.standard_normal((5, 3, 2))
        path = tmp_path / "t.f64"
        sigio.write_binary(path, tensor)
        assert np.array_equal(sigio.read_binary(path), tensor)
        meta = sigio.read_json(f"{path}.json")
        assert meta["shape"] == [5, 3, 2]

    def test_no_temp_files_left(self, tmp_path):
        sigio.write_matrix_csv(tmp_path / "m.csv", np.ones((2, 2)))
        sigio.write_json(tmp_path / "j.json", {"x": 1})
        assert sorted(p.name for p in tmp_path.iterdir()) == ["j.json", "m.csv"]

    def test_manifest_hashes(self, tmp_path):
        sigio.write_matrix_csv(tmp_path / "m.csv", np.ones((2, 2)))
        sigio.write_manifest(str(tmp_path), {"p": 2.0}, ["m.csv"], {"note": "x"})
        manifest = sigio.read_json(tmp_path / "manifest.json")
        assert manifest["config"] == {"p": 2.0}
        assert manifest["note"] == "x"
        assert manifest["files"]["m.csv"] == sigio.sha256_file(tmp_path / "m.csv")


class TestConfig:
    def test_defaults_valid(self):
        config = PipelineConfig().validate()
        assert config.j1 == 2 and config.q1 == 10
        assert config.window_len == 60000 and config.hop == 2000
        assert config.p == 2.0 and config.reducer == "pca"
        assert config.sample_rate_hz == 1000.0

    def test_round_trip_lossless(self, tmp_path):
        config = PipelineConfig(j1=3, q1=7, p=1.75, reducer="maxpool",
                                window_len=500, hop=125, seed=99,
                                sample_rate_hz=512.5)
        path = tmp_path / "run.cfg"
        save_config(config, path)
        assert load_config(path) == config
        save_config(load_config(path), tmp_path / "again.cfg")
        assert (tmp_path / "again.cfg").read_text() == path.read_text()

    def test_comments_and_blanks_ignored(self):
        config = PipelineConfig.from_text("# comment\n\nj1=3\np=1.5\n")
        assert config.j1 == 3 and config.p == 1.5

    def test_unknown_key_rejected(self):
        with pytest.raises(InputError, match="unknown key"):
            PipelineConfig.from_text("jmax=3\n")

    def test_bad_value_rejected(self):
        with pytest.raises(InputError, match="line 1"):
            PipelineConfig.from_text("j1=three\n")

    def test_missing_equals_rejected(self):
        with pytest.raises(InputError, match="expected key=value"):
            PipelineConfig.from_text("j1 3\n")

    def test_validation_rules(self):
        with pytest.raises(InputError):
            PipelineConfig(j1=0).validate()
        with pytest.raises(InputError):
            PipelineConfig(p=0.0).validate()
        with pytest.raises(InputError):
            PipelineConfig(reducer="avg").validate()
        with pytest.raises(InputError):
            PipelineConfig(hop=0).validate()
        with pytest.raises(InputError):
            PipelineConfig(hop=70000).validate()
        with pytest.raises(InputError):
            PipelineConfig(sample_rate_hz=0.0).validate()
