import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gibbsnet import LabeledPoint, TrainingSet, holdout_split, load_dataset, save_dataset
from gibbsnet.data import load_points, save_points
from gibbsnet.errors import DataError, DimensionError, ParameterError


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_xor(tmp_path):
    p = write(tmp_path, "x1,x2,label\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n")
    ts = load_dataset(p)
    assert ts.input_dim == 2 and len(ts) == 4
    assert ts.y.tolist() == [0, 1, 1, 0]
    assert ts.X.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]


def test_bad_label_names_row(tmp_path):
    p = write(tmp_path, "x1,label\n0.1,0\n0.2,1\n0.3,2\n")
    with pytest.raises(DataError, match="row 3") as exc:
        load_dataset(p)
    assert exc.value.row == 3


def test_mixed_width_is_dimension_error(tmp_path):
    p = write(tmp_path, "x1,x2,label\n0,0,0\n1,1\n")
    with pytest.raises(DimensionError, match="row 2"):
        load_dataset(p)


def test_conflicting_duplicate_rejected(tmp_path):
    p = write(tmp_path, "x1,label\n0.5,1\n0.2,0\n0.5,0\n")
    with pytest.raises(DataError, match="row 3"):
        load_dataset(p)


def test_consistent_duplicate_allowed(tmp_path):
    ts = load_dataset(write(tmp_path, "x1,label\n0.5,1\n0.5,1\n"))
    assert len(ts) == 2


@pytest.mark.parametrize("text", [
    "x1,x2\n0,1\n",            # no label column
    "x1,label\n",              # no rows
    "x1,label\nabc,1\n",       # non-numeric
    "x1,label\nnan,1\n",       # non-finite
    "x1,label\n1,1.0\n",       # label must be the literal 0 or 1
])
def test_malformed_files(tmp_path, text):
    with pytest.raises((DataError, DimensionError)):
        load_dataset(write(tmp_path, text))


def test_labeled_point_validation():
    assert LabeledPoint((1, 2), 1).x == (1.0, 2.0)
    with pytest.raises(DataError):
        LabeledPoint((1.0,), 2)
    with pytest.raises(DataError):
        LabeledPoint((float("inf"),), 0)


def test_from_points_mixed_dims():
    with pytest.raises(DimensionError):
        TrainingSet.from_points([LabeledPoint((0.0,), 0), LabeledPoint((0.0, 1.0), 1)])


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=40)
@given(st.lists(st.tuples(finite, finite, st.integers(0, 1)), min_size=1, max_size=20,
                unique_by=lambda r: (r[0], r[1])))
def test_save_load_roundtrip_bit_exact(tmp_path_factory, rows):
    ts = TrainingSet([r[:2] for r in rows], [r[2] for r in rows])
    p = tmp_path_factory.mktemp("rt") / "ts.csv"
    save_dataset(ts, p)
    back = load_dataset(p)
    assert back == ts
    assert back.X.tobytes() == ts.X.tobytes()


def test_points_roundtrip(tmp_path):
    X = np.random.default_rng(0).normal(size=(7, 3))
    save_points(X, tmp_path / "p.csv")
    assert np.array_equal(load_points(tmp_path / "p.csv", 3), X)
    with pytest.raises(DimensionError):
        load_points(tmp_path / "p.csv", 2)


def _ten():
    return TrainingSet(np.arange(10.0)[:, None], [0, 1] * 5)


def test_holdout_sizes_and_determinism():
    ts = _ten()
    a, b = holdout_split(ts, 0.2, 7)
    assert (len(a), len(b)) == (2, 8)
    a2, b2 = holdout_split(ts, 0.2, 7)
    assert a == a2 and b == b2


def test_holdout_rejects_empty_part():
    with pytest.raises(ParameterError):
        holdout_split(_ten(), 0.01, 7)
    with pytest.raises(ParameterError):
        holdout_split(_ten(), 1.0, 7)


@given(st.floats(0.1, 0.9), st.integers(0, 10**6))
def test_holdout_partitions_exactly(fraction, seed):
    ts = _ten()
    a, b = holdout_split(ts, fraction, seed)
    merged = sorted(map(tuple, np.c_[np.r_[a.X, b.X], np.r_[a.y, b.y]].tolist()))
    assert merged == sorted(map(tuple, np.c_[ts.X, ts.y].tolist()))


def test_fingerprint_tracks_content():
    ts = _ten()
    assert ts.fingerprint() == _ten().fingerprint()
    other = TrainingSet(np.arange(10.0)[:, None], [1, 0] * 5)
    assert ts.fingerprint() != other.fingerprint()
