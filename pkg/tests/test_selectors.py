import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxhunt.core import Grid, as_dataset
from maxhunt.selectors import (T_SCORE_SENTINEL, GridMismatchError, Method, ProjectionKind,
                               SelectorSpec, abs_correlation, discretize3, f_statistic,
                               fit_selector, index_projection, mrmr_path, mrmr_select,
                               mutual_information, pls_fit, project, select, t_scores,
                               t_select)


def standardized(rng, n, mean):
    z = rng.normal(size=n)
    return (z - z.mean()) / z.std(ddof=1) + mean


class TestTScores:
    def test_hand_value(self):
        rng = np.random.default_rng(0)
        x = np.concatenate([standardized(rng, 100, 0.0), standardized(rng, 100, 1.0)])
        ds = as_dataset(np.column_stack([x, x]), [0] * 100 + [1] * 100)
        np.testing.assert_allclose(t_scores(ds).values, 1 / math.sqrt(0.02), rtol=1e-12)

    def test_equal_means_zero(self):
        ds = as_dataset([[1.0, 0.0], [3.0, 0.0], [1.0, 0.0], [3.0, 0.0]], [0, 0, 1, 1])
        np.testing.assert_array_equal(t_scores(ds).values, [0.0, 0.0])

    def test_zero_se_sentinel(self):
        ds = as_dataset([[1.0, 2.0], [1.0, 2.0], [2.0, 2.0], [2.0, 2.0]], [0, 0, 1, 1])
        np.testing.assert_array_equal(t_scores(ds).values, [T_SCORE_SENTINEL, 0.0])

    def test_shift_and_scale_invariance(self):
        rng = np.random.default_rng(1)
        ds = as_dataset(rng.normal(size=(30, 5)), [0, 1] * 15)
        moved = as_dataset(3.5 * ds.trajectories - 2.0, ds.labels)
        np.testing.assert_allclose(t_scores(moved).values, t_scores(ds).values, rtol=1e-10)

    def test_t_select_ties_and_boundary(self):
        # columns: score 0, large, large (equal), small
        x = np.array([[0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 1.0, 0.2],
                      [0.0, 4.0, 4.0, 0.1], [0.0, 5.0, 5.0, 0.4]])
        ds = as_dataset(x, [0, 0, 1, 1])
        assert t_select(ds, 2).indices == (1, 2)
        assert sorted(t_select(ds, 4).indices) == [0, 1, 2, 3]
        with pytest.raises(ValueError):
            t_select(ds, 5)


def brute_mi(a, b):
    n = len(a)
    total = 0.0
    for u, v in itertools.product(set(a), set(b)):
        pab = sum(1 for s, t in zip(a, b) if s == u and t == v) / n
        if pab:
            total += pab * math.log(pab / ((list(a).count(u) / n) * (list(b).count(v) / n)))
    return total


class TestMrmr:
    def test_mutual_information_oracle(self):
        rng = np.random.default_rng(2)
        a, b = rng.integers(0, 3, 40), rng.integers(0, 3, 40)
        assert mutual_information(a, b) == pytest.approx(brute_mi(list(a), list(b)), abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(0, 2), min_size=2, max_size=30), st.data())
    def test_self_information_dominates(self, a, data):
        b = data.draw(st.lists(st.integers(0, 2), min_size=len(a), max_size=len(a)))
        assert mutual_information(a, a) >= mutual_information(a, b) - 1e-12

    def test_discretize_thresholds(self):
        x = np.array([[-2.0], [0.0], [0.0], [2.0]])  # mean 0, std sqrt(2)
        np.testing.assert_array_equal(discretize3(x).ravel(), [0, 1, 1, 2])

    def test_f_statistic_is_monotone_in_t(self):
        rng = np.random.default_rng(3)
        ds = as_dataset(rng.normal(size=(40, 8)) + np.outer([0, 1] * 20, np.arange(8) / 4),
                        [0, 1] * 20)
        f = f_statistic(ds)
        t = t_scores(ds).values
        # balanced classes: F equals the pooled t^2, which here ranks like Welch t
        assert list(np.argsort(f)) == list(np.argsort(t))

    def test_abs_correlation(self):
        x = np.array([[1.0, 2.0, 5.0], [2.0, 4.0, 5.0], [3.0, 6.1, 5.0]])
        r = abs_correlation(x, 0)
        assert r[0] == pytest.approx(1.0) and r[1] > 0.99 and r[2] == 0.0

    @pytest.mark.parametrize("family", [("FCD", "FCQ"), ("MID", "MIQ")])
    def test_first_pick_is_max_relevance(self, family):
        rng = np.random.default_rng(4)
        y = np.array([0, 1] * 25)
        ds = as_dataset(rng.normal(size=(50, 12)) + np.outer(y, np.linspace(0, 1.5, 12)), y)
        picks = {v: mrmr_select(ds, 1, v).indices for v in family}
        assert picks[family[0]] == picks[family[1]]
        if family[0] == "FCD":
            assert picks["FCD"][0] == int(np.argmax(f_statistic(ds)))

    def test_redundancy_blocks_duplicate(self):
        # F relevances on the scale of the correlation penalty, so the
        # difference criterion can trade them off
        rng = np.random.default_rng(3)
        y = np.array([0, 1] * 40)
        strong = y * 0.35 + rng.normal(size=80)
        weak = y * 0.3 + rng.normal(size=80)
        ds = as_dataset(np.column_stack([strong, strong, weak]), y)
        f = f_statistic(ds)
        assert f[0] > f[2] > f[0] - 1
        idx = mrmr_select(ds, 2, "FCD").indices
        assert idx[0] in (0, 1) and idx[1] == 2
        # the greedy criterion evaluated by hand for the second pick
        crit = [f[j] - abs_correlation(ds.trajectories, idx[0])[j] for j in (0, 1, 2)]
        crit[idx[0]] = -np.inf
        assert int(np.argmax(crit)) == 2

    @pytest.mark.parametrize("variant", ["FCD", "FCQ", "MID", "MIQ"])
    def test_no_duplicates_and_exact_length(self, variant):
        rng = np.random.default_rng(6)
        ds = as_dataset(rng.normal(size=(30, 7)), [0, 1] * 15)
        idx = mrmr_select(ds, 7, variant).indices
        assert sorted(idx) == list(range(7))

    def test_prefix_property(self):
        rng = np.random.default_rng(7)
        ds = as_dataset(rng.normal(size=(30, 10)), [0, 1] * 15)
        long, _ = mrmr_path(ds, 8, "MIQ")
        assert mrmr_path(ds, 3, "MIQ")[0] == long[:3]


class TestPls:
    def data(self, seed=8, n=60, p=15):
        rng = np.random.default_rng(seed)
        y = rng.permutation([0, 1] * (n // 2))
        x = rng.normal(size=(n, p))
        return as_dataset(x, y), x, y

    def test_label_column_dominates_first_weight(self):
        ds, x, y = self.data()
        x = x.copy()
        x[:, 4] = y
        proj = pls_fit(as_dataset(x, y), 1)
        assert int(np.argmax(np.abs(proj.info["x_weights"][:, 0]))) == 4

    def test_scores_orthogonal_and_reproduced(self):
        ds, _, _ = self.data()
        proj = pls_fit(ds, 5)
        scores = project(proj, ds)
        gram = scores.T @ scores
        off = gram - np.diag(np.diag(gram))
        assert np.abs(off).max() <= 1e-8 * np.abs(np.diag(gram)).max()
        np.testing.assert_allclose(scores, proj.info["train_scores"], atol=1e-10)

    def test_first_weight_is_covariance_optimum(self):
        ds, x, y = self.data(seed=9, n=20, p=4)
        w = pls_fit(ds, 1).info["x_weights"][:, 0]
        xc = x - x.mean(0)
        yc = y - y.mean()
        analytic = xc.T @ yc / np.linalg.norm(xc.T @ yc)
        np.testing.assert_allclose(np.abs(w), np.abs(analytic), atol=1e-12)
        rng = np.random.default_rng(0)
        u = rng.normal(size=(5000, 4))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        assert np.abs((xc @ u.T).T @ yc).max() <= abs((xc @ w) @ yc) + 1e-12

    def test_zero_dataset_gives_constant_rows(self):
        ds, _, _ = self.data()
        proj = pls_fit(ds, 3)
        zero = as_dataset(np.zeros((4, ds.n_points)), [0, 1, 0, 1], ds.grid)
        out = project(proj, zero)
        np.testing.assert_allclose(out, np.tile(-proj.means @ proj.weights, (4, 1)), atol=1e-12)

    def test_component_bounds(self):
        ds, _, _ = self.data(n=10, p=30)
        with pytest.raises(ValueError):
            pls_fit(ds, 0)
        with pytest.raises(ValueError):
            pls_fit(ds, 10)

    def test_degenerate_residual_stops_early(self):
        y = np.array([0, 1, 0, 1, 0, 1])
        x = np.column_stack([y, 2 * y, np.zeros(6)]).astype(float)
        proj = pls_fit(as_dataset(x, y), 3)
        assert proj.info["n_components"] == 1 and proj.info["requested"] == 3


class TestProjection:
    def test_index_gather(self):
        rng = np.random.default_rng(0)
        ds = as_dataset(rng.normal(size=(5, 10)), [0, 1, 0, 1, 0])
        out = project(index_projection(ds.grid, [2, 7]), ds)
        np.testing.assert_array_equal(out, ds.trajectories[:, [2, 7]])

    def test_grid_mismatch(self):
        ds = as_dataset(np.zeros((2, 3)), [0, 1])
        proj = index_projection(Grid([0.1, 0.2, 0.3]), [0])
        with pytest.raises(GridMismatchError):
            project(proj, ds)


class TestUnifiedInterface:
    @pytest.mark.parametrize("method", [m.value for m in Method])
    def test_fit_selector_deterministic(self, method):
        rng = np.random.default_rng(10)
        ds = as_dataset(rng.normal(size=(30, 12)), [0, 1] * 15)
        spec = SelectorSpec(method, 3, {"h": 1} if method in ("MHV", "MHR") else {})
        a, b = fit_selector(spec, ds), fit_selector(spec, ds)
        np.testing.assert_array_equal(project(a, ds), project(b, ds))
        expected_kind = ProjectionKind.LINEAR if method == "PLS" else ProjectionKind.INDEX
        assert a.kind is expected_kind

    def test_spec_roundtrip_and_validation(self):
        spec = SelectorSpec("MHV", 4, {"h": 2})
        assert SelectorSpec.from_dict(spec.to_dict()) == spec
        with pytest.raises(ValueError):
            SelectorSpec("BASE", 1, {"h": 1})
        with pytest.raises(ValueError):
            SelectorSpec("T", 0)

    def test_select_pls_rejected(self):
        ds = as_dataset(np.random.default_rng(0).normal(size=(6, 4)), [0, 1] * 3)
        with pytest.raises(ValueError):
            select(SelectorSpec("PLS", 1), ds)
