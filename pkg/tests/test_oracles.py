import math

import numpy as np
import pytest
from scipy import integrate
from scipy.stats import norm

from maxhunt.classifiers import knn_fit, knn_predict
from maxhunt.dcov import dependence_curve
from maxhunt.simulation import (NoBayesRuleError, RngStream, analytic_v2_curve, bayes_error,
                                bayes_rule_prop1, bayes_rule_prop2, bayes_rule_prop3,
                                default_grid, eta_prop1, eta_prop2, eta_prop3,
                                folded_normal_mean, get_model, peak_points, prop1_threshold,
                                prop2_threshold, prop3_threshold, sample_model)


class TestProp1:
    def test_eta_at_zero(self):
        assert eta_prop1(0.0) == pytest.approx(1 / (math.sqrt(2) + 1))
        assert bayes_rule_prop1(0.0) == 0

    def test_even(self):
        x = np.linspace(-4, 4, 41)
        np.testing.assert_array_equal(eta_prop1(x), eta_prop1(-x))

    def test_threshold_formula(self):
        tau = prop1_threshold(0.5)
        assert tau == pytest.approx(2 * math.sqrt(math.log(math.sqrt(2))), rel=1e-15)
        assert bayes_rule_prop1(tau + 1e-9) == 1 and bayes_rule_prop1(tau - 1e-9) == 0

    def test_threshold_vanishes_for_large_prior(self):
        assert prop1_threshold(0.9) == 0.0


class TestProp2:
    def test_thresholds(self):
        assert prop2_threshold(1.0, 0.5) == 0.5
        assert prop2_threshold(2.0, 0.75) == pytest.approx(1 - 0.5 * math.log(3))
        assert bayes_rule_prop2(0.51, 1.0) == 1 and bayes_rule_prop2(0.49, 1.0) == 0

    def test_negative_c(self):
        assert bayes_rule_prop2(-0.6, -1.0) == 1 and bayes_rule_prop2(-0.4, -1.0) == 0

    def test_zero_c_rejected(self):
        with pytest.raises(ValueError):
            bayes_rule_prop2(0.0, 0.0)

    def test_eta_matches_printed_form(self):
        x = np.linspace(-3, 3, 13)
        for c, p in ((1.0, 0.5), (-2.0, 0.3)):
            printed = 1 / ((1 - p) / p * np.exp(c * c / 2 - c * x) + 1)
            np.testing.assert_allclose(eta_prop2(x, c, p), printed, rtol=1e-12)


class TestProp3:
    @pytest.mark.parametrize("m,expected", [(1, 0.5), (3, 0.25)])
    def test_thresholds(self, m, expected):
        assert prop3_threshold(m, 0.5) == pytest.approx(expected)

    @pytest.mark.parametrize("m,k,p", [(1, 1, 0.5), (2, 2, 0.3), (3, 3, 0.8)])
    def test_rule_equals_eta_indicator(self, m, k, p):
        rng = np.random.default_rng(m * 10 + k)
        x = rng.normal(size=(1000, 3))
        rule = bayes_rule_prop3(x[:, 0], x[:, 1], x[:, 2], m, k, p)
        eta = eta_prop3(x[:, 0], x[:, 1], x[:, 2], m, k, p)
        np.testing.assert_array_equal(rule, (eta > 0.5).astype(np.int8))
        assert np.all((eta > 0) & (eta < 1))

    def test_invalid_indices(self):
        with pytest.raises(ValueError):
            bayes_rule_prop3(0.0, 0.0, 0.0, 2, 3)

    def test_peak_points(self):
        assert peak_points(3, 2) == (0.25, 0.375, 0.5)


class TestFoldedNormal:
    def test_monte_carlo_discriminates_exponents(self):
        rng = np.random.default_rng(20240601)
        draws = np.abs(rng.normal(1.0, 1.0, 1_000_000))
        est, se = draws.mean(), draws.std(ddof=1) / 1000
        assert abs(est - folded_normal_mean(1.0, 1.0)) <= 3 * se
        assert abs(est - folded_normal_mean(1.0, 1.0, "printed")) > 10 * se

    @pytest.mark.parametrize("m,s", [(0.0, 1.0), (-2.0, 0.5), (0.3, 2.0)])
    def test_quadrature(self, m, s):
        val, _ = integrate.quad(lambda x: abs(x) * norm.pdf(x, m, s), -np.inf, np.inf)
        assert folded_normal_mean(m, s) == pytest.approx(val, rel=1e-9)

    def test_zero_sigma(self):
        assert folded_normal_mean(-1.5, 0.0) == 1.5


class TestAnalyticCurve:
    def test_stochastic_value_at_one(self):
        expected = 0.25 * (math.sqrt(6 / math.pi)
                           - (math.sqrt(4 / math.pi) + math.sqrt(8 / math.pi)) / 2)
        assert analytic_v2_curve("stochastic", 1.0) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(0.0049756, abs=1e-7)

    @pytest.mark.parametrize("model", ["stochastic", "linear"])
    def test_zero_at_origin_and_increasing(self, model):
        t = np.linspace(0, 1, 2001)
        v = analytic_v2_curve(model, t)
        assert v[0] == 0.0
        assert np.all(np.diff(v) > 0)
        assert np.all(v >= 0)

    def test_linear_matches_definition_by_quadrature(self):
        t, c = 0.6, 1.3
        e01, _ = integrate.quad(lambda z: abs(c * t + math.sqrt(2 * t) * z) * norm.pdf(z),
                                -np.inf, np.inf)
        expected = 0.25 * (e01 - math.sqrt(4 * t / math.pi))
        assert analytic_v2_curve("linear", t, 0.5, c) == pytest.approx(expected, rel=1e-9)

    def test_rejects_unknown_model(self):
        with pytest.raises(ValueError):
            analytic_v2_curve("peak", 0.5)

    def test_sample_curve_close_to_analytic(self):
        ds = sample_model(get_model("prop2"), 2000, RngStream(3).generator())
        curve = dependence_curve(ds, "V2", "V")
        expected = analytic_v2_curve("linear", default_grid().points)
        assert np.abs(curve.values - expected).max() < 0.01


def prop1_quadrature_error():
    tau = 2 * math.sqrt(math.log(math.sqrt(2)))
    p_big = integrate.quad(norm.pdf, tau, np.inf)[0] * 2
    p_small = integrate.quad(norm.pdf, -tau / math.sqrt(2), tau / math.sqrt(2))[0]
    return 0.5 * p_big + 0.5 * p_small


class TestBayesError:
    def test_prop1_quadrature(self):
        est = bayes_error(get_model("prop1"), 100_000, RngStream(11).generator())
        assert abs(est.error - prop1_quadrature_error()) <= 3 * est.std_error

    def test_separated_and_uninformative_limits(self):
        sep = bayes_error(get_model("prop2", c=20.0), 20_000, RngStream(12).generator())
        assert sep.error < 1e-3
        null = bayes_error(get_model("null"), 20_000, RngStream(13).generator())
        assert abs(null.error - 0.5) <= 3 * null.std_error

    def test_no_rule_for_mixture(self):
        with pytest.raises(NoBayesRuleError):
            bayes_error(get_model("mix_ou"), 100, RngStream(0).generator())

    def test_trained_classifier_does_not_beat_bayes(self):
        model = get_model("prop2")
        be = bayes_error(model, 100_000, RngStream(14).generator())
        train = sample_model(model, 200, RngStream(15).generator())
        test = sample_model(model, 20_000, RngStream(16).generator())
        acc = np.mean(knn_predict(knn_fit(train.trajectories[:, [-1]], train.labels, 7),
                                  test.trajectories[:, [-1]]) == test.labels)
        se = math.hypot(be.std_error, math.sqrt(acc * (1 - acc) / test.n))
        assert acc <= 1 - be.error + 3 * se
