import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxhunt.core import as_dataset
from maxhunt.dcov import dependence_curve
from maxhunt.maxima import MaximaConfig, local_maxima, mh_select, select_from_curve


def brute_maxima(v, h):
    n = len(v)
    out = [i for i in range(n)
           if all(v[i] > v[j] for j in range(max(0, i - h), min(n - 1, i + h) + 1) if j != i)]
    return sorted(out, key=lambda i: (-v[i], i))


curves = st.lists(st.integers(-5, 5).map(float), min_size=3, max_size=40)


@pytest.mark.parametrize("values,h,expected", [
    ((1, 2, 3, 2, 1), 1, [2]),
    ((1, 2, 1, 3, 1), 2, [3]),
    ((1, 2, 1, 3, 1), 1, [3, 1]),
    ((2, 2, 2, 2), 1, []),
    ((5, 1, 1, 4), 1, [0, 3]),
])
def test_examples(values, h, expected):
    assert local_maxima(values, h) == expected


def test_h_out_of_range():
    with pytest.raises(ValueError):
        local_maxima([1.0, 2.0, 3.0], 3)
    with pytest.raises(ValueError):
        local_maxima([1.0, 2.0, 3.0], 0)


def test_equal_maxima_prefer_smaller_index():
    assert local_maxima([3, 0, 0, 3], 1) == [0, 3]


@settings(max_examples=200, deadline=None)
@given(curves, st.integers(1, 6))
def test_matches_definition(v, h):
    if h >= len(v):
        h = len(v) - 1
    assert local_maxima(v, h) == brute_maxima(v, h)


@settings(max_examples=100, deadline=None)
@given(curves, st.integers(1, 5))
def test_monotone_transform_invariance(v, h):
    h = min(h, len(v) - 1)
    v = np.array(v)
    assert local_maxima(np.exp(v / 3) * 2 + 7, h) == local_maxima(v, h)


@settings(max_examples=100, deadline=None)
@given(curves, st.integers(1, 5), st.integers(1, 5))
def test_window_monotonicity(v, h, extra):
    h = min(h, len(v) - 1)
    h2 = min(h + extra, len(v) - 1)
    assert set(local_maxima(v, h2)) <= set(local_maxima(v, h))


class TestMhSelect:
    def test_constant_curve_selects_nothing(self):
        x = np.array([[1.0] * 6, [1.0] * 6, [3.0] * 6, [3.0] * 6])
        res = mh_select(as_dataset(x, [0, 0, 1, 1]), config=MaximaConfig(h=1, max_vars=5))
        assert res.indices == () and res.method_id == "MHV"

    def test_truncates_and_never_pads(self):
        rng = np.random.default_rng(4)
        ds = as_dataset(rng.normal(size=(40, 30)), rng.permutation([0, 1] * 20))
        curve = dependence_curve(ds)
        all_max = local_maxima(curve, 2)
        few = mh_select(ds, config=MaximaConfig(h=2, max_vars=2))
        many = mh_select(ds, config=MaximaConfig(h=2, max_vars=len(all_max) + 5))
        assert list(few.indices) == all_max[:2]
        assert list(many.indices) == all_max
        assert list(many.scores) == sorted(many.scores, reverse=True)

    def test_r2_method_id(self):
        rng = np.random.default_rng(5)
        ds = as_dataset(rng.normal(size=(20, 8)), [0, 1] * 10)
        res = mh_select(ds, "R2", config=MaximaConfig(h=1, max_vars=3))
        assert res.method_id == "MHR" and res.hyperparams["estimator"] == "DC"

    def test_select_from_curve_scores_are_curve_values(self):
        rng = np.random.default_rng(6)
        ds = as_dataset(rng.normal(size=(20, 8)), [0, 1] * 10)
        curve = dependence_curve(ds, "V2", "V")
        res = select_from_curve(curve, MaximaConfig(h=1, max_vars=8), "MHV")
        assert list(res.scores) == [curve.values[i] for i in res.indices]
