import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ortho_group

from maxhunt import _backend
from maxhunt.classifiers import (IllConditionedError, accuracy, knn_fit, knn_predict,
                                 knn_predict_many, lda_fit, lda_predict)


@pytest.fixture(params=_backend.available_backends())
def backend(request):
    with _backend.use_backend(request.param):
        yield request.param


def brute_knn(train, labels, query, k):
    out = []
    for q in query:
        d = [float(np.sum((t - q) ** 2)) for t in train]
        order = sorted(range(len(train)), key=lambda i: (d[i], i))[:k]
        out.append(int(sum(labels[i] for i in order) * 2 > k))
    return out


class TestKnn:
    def test_validation(self):
        x = np.zeros((3, 1))
        with pytest.raises(ValueError):
            knn_fit(x, [0, 1, 0], 2)
        with pytest.raises(ValueError):
            knn_fit(x, [0, 1, 0], 5)
        model = knn_fit(x, [0, 1, 0], 1)
        with pytest.raises(ValueError):
            knn_predict(model, np.zeros((1, 2)))

    def test_nearest_point(self, backend):
        model = knn_fit([[0.0], [10.0]], [0, 1], 1)
        assert list(knn_predict(model, [[2.0]])) == [0]

    def test_query_equal_to_training_row(self, backend):
        x = np.array([[0.0, 1.0], [3.0, 3.0], [5.0, -1.0]])
        model = knn_fit(x, [1, 0, 1], 1)
        assert list(knn_predict(model, x)) == [1, 0, 1]

    def test_all_neighbours_give_majority(self, backend):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(7, 2))
        model = knn_fit(x, [1, 1, 0, 1, 0, 1, 0], 7)
        assert set(knn_predict(model, rng.normal(size=(20, 2)))) == {1}

    def test_line_against_brute_force(self, backend):
        x = np.array([[0.0], [1.0], [2.0], [3.0], [4.0]])
        y = np.array([0, 1, 1, 0, 0])
        q = np.array([[1.4], [2.6], [3.5], [0.2]])
        model = knn_fit(x, y, 3)
        assert list(knn_predict(model, q)) == brute_knn(x, y, q, 3)

    def test_distance_ties_to_smaller_index(self, backend):
        model = knn_fit([[-1.0], [1.0]], [1, 0], 1)
        assert list(knn_predict(model, [[0.0]])) == [1]

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 4), st.sampled_from([1, 3, 5]))
    def test_matches_brute_force(self, seed, c, k):
        rng = np.random.default_rng(seed)
        x = rng.integers(-3, 4, size=(12, c)).astype(float)
        y = rng.integers(0, 2, 12)
        q = rng.integers(-3, 4, size=(6, c)).astype(float)
        model = knn_fit(x, y, k)
        assert list(knn_predict(model, q)) == brute_knn(x, y, q, k)
        many = knn_predict_many(model, q, [1, 3, 5])
        for kk, pred in many.items():
            assert list(pred) == brute_knn(x, y, q, kk)

    def test_training_accuracy_k1(self, backend):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(50, 3))
        y = rng.integers(0, 2, 50)
        assert accuracy(knn_predict(knn_fit(x, y, 1), x), y) == 1.0

    def test_orthogonal_invariance(self):
        rng = np.random.default_rng(2)
        x, q = rng.normal(size=(40, 4)), rng.normal(size=(25, 4))
        y = rng.integers(0, 2, 40)
        rot = ortho_group.rvs(4, random_state=3)
        shift = rng.normal(size=4)
        a = knn_predict(knn_fit(x, y, 5), q)
        b = knn_predict(knn_fit(x @ rot + shift, y, 5), q @ rot + shift)
        np.testing.assert_array_equal(a, b)


class TestLda:
    def test_symmetric_midpoint(self):
        model = lda_fit([[-2.0], [-1.0], [1.0], [2.0]], [0, 0, 1, 1])
        assert list(lda_predict(model, [[0.0], [1e-9], [-1e-9], [1.5]])) == [0, 1, 0, 1]
        assert model.discriminant([[0.0]])[0] == pytest.approx(0.0, abs=1e-15)

    def test_identical_class_laws_predict_majority(self):
        model = lda_fit([[-1.0], [1.0], [-1.0], [1.0], [-1.0], [1.0]], [0, 0, 1, 1, 1, 1])
        assert set(lda_predict(model, np.linspace(-5, 5, 11)[:, None])) == {1}

    def test_direction_two_by_two(self):
        x = np.array([[0.0, 0.0], [1.0, 0.5], [0.5, 1.5], [4.0, 4.0], [5.0, 4.5], [4.2, 5.5]])
        y = np.array([0, 0, 0, 1, 1, 1])
        model = lda_fit(x, y, regularization=0.0)
        m0, m1 = x[:3].mean(0), x[3:].mean(0)
        s = (np.cov(x[:3].T) * 2 + np.cov(x[3:].T) * 2) / 4
        (a, b), (c, d) = s
        inv = np.array([[d, -b], [-c, a]]) / (a * d - b * c)
        np.testing.assert_allclose(model.direction, inv @ (m1 - m0), rtol=1e-10)

    def test_regularization_scaled_by_trace(self):
        x = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        with pytest.raises(IllConditionedError):
            lda_fit(x, [0, 0, 1, 1], regularization=0.0)
        model = lda_fit(x, [0, 0, 1, 1], regularization=1e-3)
        assert list(lda_predict(model, [[0.2, 0.2], [2.8, 2.8]])) == [0, 1]

    def test_needs_two_per_class(self):
        with pytest.raises(ValueError):
            lda_fit([[0.0], [1.0], [2.0]], [0, 0, 1])

    def test_batch_equals_single(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(30, 3))
        y = np.array([0, 1] * 15)
        model = lda_fit(x + np.outer(y, [1, 0, 0]), y)
        q = rng.normal(size=(100, 3))
        single = [int(lda_predict(model, q[i:i + 1])[0]) for i in range(100)]
        assert list(lda_predict(model, q)) == single

    def test_affine_invariance(self):
        rng = np.random.default_rng(5)
        y = np.array([0, 1] * 50)
        x = rng.normal(size=(100, 3)) + np.outer(y, [1.0, -0.5, 0.3])
        q = rng.normal(size=(200, 3))
        a_mat = rng.normal(size=(3, 3)) + 3 * np.eye(3)
        shift = rng.normal(size=3)
        a = lda_predict(lda_fit(x, y, 0.0), q)
        b = lda_predict(lda_fit(x @ a_mat.T + shift, y, 0.0), q @ a_mat.T + shift)
        np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("pred,truth,expected", [((0, 1, 1), (0, 1, 1), 1.0),
                                                 ((0, 1, 1), (1, 0, 0), 0.0),
                                                 ((0, 1, 1, 0), (0, 1, 0, 0), 0.75)])
def test_accuracy(pred, truth, expected):
    assert accuracy(pred, truth) == expected


def test_accuracy_length_mismatch():
    with pytest.raises(ValueError):
        accuracy([0, 1], [0])
