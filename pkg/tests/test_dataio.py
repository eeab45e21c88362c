import numpy as np
import pytest

from nnwfn.dataio import dataset_fingerprint, load_dataset, save_dataset
from nnwfn.errors import DatasetFormatError


def test_csv_basic(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("0.0,1.0\n2.0,3.0\n")
    ds = load_dataset(str(p))
    assert ds.n == 2 and ds.dim == 2
    assert np.array_equal(ds.points, [[0.0, 1.0], [2.0, 3.0]])
    assert list(ds.ids) == [0, 1]


def test_csv_ragged_row_reports_line(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("0.0,1.0\n2.0\n")
    with pytest.raises(DatasetFormatError, match=":2:"):
        load_dataset(str(p))


def test_csv_non_numeric_reports_line(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("0.0,1.0\nfoo,3.0\n")
    with pytest.raises(DatasetFormatError, match=":2:"):
        load_dataset(str(p))


def test_non_finite_rejected(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("0.0,inf\n")
    with pytest.raises(DatasetFormatError, match="non-finite"):
        load_dataset(str(p))


def test_empty_file_is_valid(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("")
    ds = load_dataset(str(p))
    assert ds.n == 0


def test_packed_round_trip_bit_exact(tmp_path, rng):
    pts = rng.standard_normal((13, 7)).astype(np.float32).astype(np.float64)
    p = tmp_path / "d.bin"
    save_dataset(pts, str(p), format="packed")
    ds = load_dataset(str(p))
    assert ds.points.shape == (13, 7)
    assert np.array_equal(ds.points, pts)  # float32 values survive exactly


def test_packed_layout_is_little_endian(tmp_path):
    import struct

    p = tmp_path / "d.bin"
    save_dataset(np.array([[1.5, -2.0]]), str(p), format="packed")
    raw = p.read_bytes()
    assert raw[:4] == struct.pack("<i", 2)
    assert raw[4:] == struct.pack("<f", 1.5) + struct.pack("<f", -2.0)


def test_packed_inconsistent_dims(tmp_path):
    import struct

    p = tmp_path / "d.bin"
    p.write_bytes(
        struct.pack("<i", 2) + struct.pack("<ff", 1, 2) + struct.pack("<i", 3)
        + struct.pack("<fff", 1, 2, 3)
    )
    with pytest.raises(DatasetFormatError, match="inconsistent"):
        load_dataset(str(p))


def test_packed_truncated(tmp_path):
    import struct

    p = tmp_path / "d.bin"
    p.write_bytes(struct.pack("<i", 4) + struct.pack("<f", 1.0))
    with pytest.raises(DatasetFormatError, match="truncated"):
        load_dataset(str(p))


def test_unknown_format_rejected(tmp_path):
    p = tmp_path / "d.weird"
    p.write_text("1,2\n")
    with pytest.raises(DatasetFormatError):
        load_dataset(str(p))
    with pytest.raises(DatasetFormatError):
        load_dataset(str(p), format="xml")


def test_csv_round_trip(tmp_path, rng):
    pts = rng.standard_normal((5, 3))
    p = tmp_path / "d.csv"
    save_dataset(pts, str(p), format="csv")
    assert np.array_equal(load_dataset(str(p)).points, pts)


def test_fingerprint_changes_with_content(rng):
    a = rng.standard_normal((4, 4))
    assert dataset_fingerprint(a) == dataset_fingerprint(a.copy())
    b = a.copy()
    b[0, 0] += 1e-9
    assert dataset_fingerprint(a) != dataset_fingerprint(b)
