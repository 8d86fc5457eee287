import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cellmorph.svm import GramCache, KernelSpec, gram_psd_check, kernel_eval, kernel_matrix


def test_linear_value():
    assert kernel_eval(KernelSpec("linear"), [1, 2], [3, 4]) == 11


def test_polynomial_value():
    assert kernel_eval(KernelSpec("polynomial", degree=2), [1, 2], [3, 4]) == 144


@pytest.mark.parametrize("sigma2", [0.1, 1.0, 50.0])
def test_rbf_self_similarity(sigma2):
    x = [0.3, -2.0, 7.5]
    assert kernel_eval(KernelSpec("rbf", sigma2=sigma2), x, x) == 1.0


def test_rbf_squared_and_plain_norm():
    x, y = [0.0, 0.0], [3.0, 4.0]
    assert kernel_eval(KernelSpec("rbf", sigma2=2.0), x, y) == pytest.approx(np.exp(-25 / 4))
    assert kernel_eval(KernelSpec("rbf", sigma2=2.0, squared_norm=False), x, y) == pytest.approx(np.exp(-5 / 4))


def test_mlp_value():
    assert kernel_eval(KernelSpec("mlp", mlp_bias=-1.0), [1, 2], [3, 4]) == pytest.approx(np.tanh(10))


def test_length_mismatch():
    with pytest.raises(ValueError):
        kernel_eval(KernelSpec("linear"), [1, 2], [1, 2, 3])


@pytest.mark.parametrize("kwargs", [
    dict(kind="sigmoid"),
    dict(kind="polynomial", degree=0),
    dict(kind="polynomial", degree=2.5),
    dict(kind="rbf", sigma2=0.0),
])
def test_invalid_specs(kwargs):
    with pytest.raises(ValueError):
        KernelSpec(**kwargs)


@pytest.mark.parametrize("spec", [KernelSpec("linear"), KernelSpec("polynomial", degree=3),
                                  KernelSpec("rbf", sigma2=1.0)])
def test_gram_psd_on_random_points(spec):
    pts = np.random.default_rng(7).normal(size=(20, 4))
    gram = kernel_matrix(spec, pts, pts)
    assert gram_psd_check(spec, pts) >= -1e-8 * np.max(np.abs(gram))


def test_linear_gram_with_duplicates_is_psd():
    pts = np.random.default_rng(1).normal(size=(6, 3))
    pts = np.vstack([pts, pts[:3]])
    assert gram_psd_check(KernelSpec("linear"), pts) >= -1e-10


def test_mlp_can_be_indefinite():
    pts = np.random.default_rng(0).normal(size=(20, 3))
    assert gram_psd_check(KernelSpec("mlp", mlp_bias=-1.0), pts) < 0


@given(arrays(float, (6, 3), elements=st.floats(-10, 10)),
       st.sampled_from(["linear", "polynomial", "rbf", "mlp"]))
def test_kernel_matrix_bitwise_symmetric(X, kind):
    K = kernel_matrix(KernelSpec(kind), X, X)
    assert np.array_equal(K, K.T)


def test_cache_hit_equals_fresh_value():
    X = np.random.default_rng(2).normal(size=(10, 5))
    spec = KernelSpec("rbf", sigma2=3.0)
    cache = GramCache(spec, X)
    first = cache.row(4).copy()
    again = cache.row(4)
    assert cache.hits == 1 and cache.misses == 1
    assert np.array_equal(first, again)
    for j in range(10):
        assert cache[4, j] == kernel_eval(spec, X[4], X[j])
    assert np.array_equal(cache.full(), kernel_matrix(spec, X, X))


def test_cache_rejects_non_finite():
    X = np.array([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ValueError, match="non-finite"):
        GramCache(KernelSpec("linear"), X)
