import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairband.data import (MISSING, CsvSchema, DataError, Dataset, Sample, Standardizer, SyntheticConfig,
                           generate_synthetic, load_csv, split, write_csv)


def test_synthetic_large_sample_rates():
    data = generate_synthetic(SyntheticConfig(seed=11), 1_000_000)
    assert abs(data.a.mean() - 0.5) <= 0.002
    above = data.X[:, 0] > 0.5
    assert abs(data.y[above].mean() - 0.9) <= 0.002


def test_synthetic_rates_match_independent_draw():
    # independent re-implementation of the mechanism with a different generator
    rng = np.random.Generator(np.random.PCG64DXSM(5))
    n = 400_000
    a = rng.random(n) < 0.5
    x = a + 0.2 * rng.standard_normal(n)
    z = rng.random(n) < 0.9
    y = np.where(z, x > 0.5, x <= 0.5)
    ours = generate_synthetic(SyntheticConfig(seed=3), n)
    assert abs(ours.y.mean() - y.mean()) < 0.005
    assert abs(ours.X[ours.a == 1, 0].mean() - x[a].mean()) < 0.005


def test_noiseless_labels():
    data = generate_synthetic(SyntheticConfig(label_flip_keep=1.0, seed=2), 1000)
    np.testing.assert_array_equal(data.y, (data.X[:, 0] > 0.5).astype(int))


def test_degenerate_noise():
    data = generate_synthetic(SyntheticConfig(noise_sd=1e-9, seed=2), 1000)
    np.testing.assert_allclose(data.X[data.a == 1, 0], 1.0, atol=1e-6)
    assert data.feature_dim == 1


def test_group_means_within_tolerance():
    n = 100_000
    data = generate_synthetic(SyntheticConfig(seed=9), n)
    tol = 4 * 0.2 / np.sqrt(n / 2)
    for g in (0, 1):
        assert abs(data.X[data.a == g, 0].mean() - g) <= tol


def test_synthetic_deterministic():
    d1 = generate_synthetic(SyntheticConfig(seed=4), 500)
    d2 = generate_synthetic(SyntheticConfig(seed=4), 500)
    np.testing.assert_array_equal(d1.X, d2.X)
    np.testing.assert_array_equal(d1.y, d2.y)


@pytest.mark.parametrize("kwargs", [
    {"group_prob": 1.5}, {"label_flip_keep": -0.1}, {"noise_sd": 0.0}, {"group_means": (0.0,)},
])
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        SyntheticConfig(**kwargs)


def test_generate_rejects_nonpositive_n():
    with pytest.raises(ValueError):
        generate_synthetic(SyntheticConfig(), 0)


def _write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_csv_basic(tmp_path):
    p = _write(tmp_path, "f1,f2,sens,label\n1,2,0,1\n3,4,1,0\n5,6,1,1\n7,8,0,0\n")
    data = load_csv(p, CsvSchema(["f1", "f2"], "label", "sens"))
    assert len(data) == 4 and data.feature_dim == 2
    np.testing.assert_array_equal(data.a, [0, 1, 1, 0])


def test_load_csv_missing_attribute(tmp_path):
    p = _write(tmp_path, "f1,sens,label\n1,0,1\n2,1,0\n3,,1\n")
    data = load_csv(p, CsvSchema(["f1"], "label", "sens"))
    assert data[2].a is None
    assert data.a[2] == MISSING


def test_load_csv_bad_label_names_row(tmp_path):
    p = _write(tmp_path, "f1,sens,label\n1,0,1\n2,1,2\n")
    with pytest.raises(DataError, match="row 2"):
        load_csv(p, CsvSchema(["f1"], "label", "sens"))


def test_load_csv_unparseable_numeric(tmp_path):
    p = _write(tmp_path, "f1,sens,label\n1,0,1\nabc,1,0\n")
    with pytest.raises(DataError, match="row 2"):
        load_csv(p, CsvSchema(["f1"], "label", "sens"))


def test_load_csv_missing_column(tmp_path):
    p = _write(tmp_path, "f1,label\n1,1\n")
    with pytest.raises(DataError, match="sens"):
        load_csv(p, CsvSchema(["f1"], "label", "sens"))


def test_categorical_sorted_one_hot(tmp_path):
    p = _write(tmp_path, "color,v,sens,label\nred,1,0,1\nblue,2,1,0\ngreen,3,0,1\n")
    data = load_csv(p, CsvSchema(["color", "v"], "label", "sens", ["color"]))
    assert data.feature_names == ["color=blue", "color=green", "color=red", "v"]
    np.testing.assert_array_equal(data.X[0], [0, 0, 1, 1])


def test_csv_round_trip(tmp_path):
    data = generate_synthetic(SyntheticConfig(seed=1), 50)
    write_csv(data, tmp_path / "s.csv")
    back = load_csv(tmp_path / "s.csv", CsvSchema(["x"], "y", "a"))
    np.testing.assert_array_equal(back.X, data.X)
    np.testing.assert_array_equal(back.a, data.a)


def test_split_sizes():
    data = generate_synthetic(SyntheticConfig(), 100)
    tr, cal, te = split(data, (0.8, 0.1, 0.1), seed=0)
    assert (len(tr), len(cal), len(te)) == (80, 10, 10)


def test_split_deterministic_and_seed_dependent():
    data = Dataset(np.arange(1000.0), np.zeros(1000), np.zeros(1000))
    a1 = split(data, (0.6, 0.2, 0.2), 3)
    a2 = split(data, (0.6, 0.2, 0.2), 3)
    b = split(data, (0.6, 0.2, 0.2), 4)
    for u, v in zip(a1, a2):
        np.testing.assert_array_equal(u.X, v.X)
    assert not np.array_equal(a1[1].X, b[1].X)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(10, 300), f_cal=st.floats(0.05, 0.4), f_test=st.floats(0.05, 0.4), seed=st.integers(0, 2**32))
def test_split_partition(n, f_cal, f_test, seed):
    data = Dataset(np.arange(float(n)), np.zeros(n), np.zeros(n))
    fr = (1.0 - f_cal - f_test, f_cal, f_test)
    try:
        parts = split(data, fr, seed)
    except ValueError:
        return  # a split rounded to zero rows
    ids = np.concatenate([p.X[:, 0] for p in parts])
    assert sorted(ids.tolist()) == list(range(n))
    assert len(parts[1]) == round(f_cal * n) and len(parts[2]) == round(f_test * n)


@pytest.mark.parametrize("fractions", [(1.0, 0.0, 0.0), (0.5, 0.3, 0.3), (0.8, 0.2)])
def test_split_rejects_bad_fractions(fractions):
    with pytest.raises(ValueError):
        split(generate_synthetic(SyntheticConfig(), 20), fractions, 0)


def test_dataset_invariants():
    with pytest.raises(DataError):
        Dataset(np.array([[np.nan]]), [0], [1])
    with pytest.raises(DataError):
        Dataset(np.zeros((2, 1)), [0, 2], [1, 0])
    with pytest.raises(DataError):
        Dataset(np.zeros((2, 1)), [0, 1], [1, 3])
    d = Dataset.from_samples([Sample(np.array([1.0]), None, 1), Sample(np.array([2.0]), 1, 0)])
    assert d.a.tolist() == [MISSING, 1]
    with pytest.raises(DataError):
        d.require_attribute()


def test_standardizer_fits_train_only():
    X = np.array([[1.0, 5.0], [3.0, 5.0]])
    st_ = Standardizer().fit(X)
    np.testing.assert_allclose(st_.transform(X), [[-1.0, 0.0], [1.0, 0.0]])
    np.testing.assert_allclose(st_.transform([[2.0, 7.0]]), [[0.0, 2.0]])
