"""Snapshot round-trip and header validation."""

import json

import numpy as np
import pytest

from gpsplit.fieldio import read_snapshot, write_snapshot
from gpsplit.grid import Field, make_grid


class TestRoundTrip:
    @pytest.mark.parametrize("dim,bc", [(1, "periodic"), (1, "dirichlet"), (2, "periodic")])
    def test_bit_identical(self, tmp_path, dim, bc):
        rng = np.random.default_rng(3)
        g = make_grid(dim, 7.5, 32, bc)
        f = Field(g, rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape))
        write_snapshot(f, tmp_path / "snap")
        back = read_snapshot(tmp_path / "snap")
        assert back.grid == g
        assert back.values.dtype == np.complex128
        assert np.array_equal(back.values, f.values)  # bit-identical

    def test_read_accepts_json_path(self, tmp_path):
        g = make_grid(1, 5, 16)
        f = Field(g, np.ones(16, dtype=np.complex128))
        json_path, bin_path = write_snapshot(f, tmp_path / "s")
        assert json_path.suffix == ".json" and bin_path.suffix == ".bin"
        back = read_snapshot(json_path)
        assert np.array_equal(back.values, f.values)

    def test_header_contents(self, tmp_path):
        g = make_grid(2, 5.0, 16)
        write_snapshot(Field(g, np.zeros((16, 16), dtype=np.complex128)), tmp_path / "s")
        header = json.loads((tmp_path / "s.json").read_text())
        assert header == {"dim": 2, "N": 16, "L": 5.0, "bc": "periodic",
                          "dtype": "c128", "order": "row-major"}

    def test_binary_is_little_endian_interleaved(self, tmp_path):
        g = make_grid(1, 5, 16)
        values = (np.arange(16) + 1j * np.arange(16, 32)).astype(np.complex128)
        write_snapshot(Field(g, values), tmp_path / "s")
        raw = np.fromfile(tmp_path / "s.bin", dtype="<f8")
        assert raw.size == 32
        assert np.array_equal(raw[0::2], values.real)
        assert np.array_equal(raw[1::2], values.imag)


class TestValidation:
    def _write_valid(self, tmp_path):
        g = make_grid(1, 5, 16)
        write_snapshot(Field(g, np.ones(16, dtype=np.complex128)), tmp_path / "s")

    def test_missing_key_rejected(self, tmp_path):
        self._write_valid(tmp_path)
        header = json.loads((tmp_path / "s.json").read_text())
        del header["bc"]
        (tmp_path / "s.json").write_text(json.dumps(header))
        with pytest.raises(ValueError, match="missing"):
            read_snapshot(tmp_path / "s")

    def test_wrong_dtype_rejected(self, tmp_path):
        self._write_valid(tmp_path)
        header = json.loads((tmp_path / "s.json").read_text())
        header["dtype"] = "c64"
        (tmp_path / "s.json").write_text(json.dumps(header))
        with pytest.raises(ValueError, match="layout"):
            read_snapshot(tmp_path / "s")

    def test_size_mismatch_rejected(self, tmp_path):
        self._write_valid(tmp_path)
        data = (tmp_path / "s.bin").read_bytes()
        (tmp_path / "s.bin").write_bytes(data[:-16])
        with pytest.raises(ValueError, match="expected"):
            read_snapshot(tmp_path / "s")
