import numpy as np
import pytest

from routegen.errors import (
    InvalidEpsilon,
    NonFiniteGradient,
    ShapeMismatch,
)
from routegen.nn import (
    AdamState,
    LinearLayer,
    adam_step,
    finite_diff_check,
    linear_backward,
    relu,
    sigmoid,
)


def test_linear_forward_identity():
    layer = LinearLayer(weight=np.eye(2), bias=np.zeros(2))
    assert np.array_equal(layer.forward(np.array([3.0, -1.0])), [3.0, -1.0])


def test_linear_forward_sum_with_bias():
    layer = LinearLayer(weight=np.array([[1.0, 1.0]]), bias=np.array([0.5]))
    assert layer.forward(np.array([2.0, 3.0]))[0] == 5.5


def test_linear_forward_shape_mismatch():
    layer = LinearLayer(weight=np.eye(2), bias=np.zeros(2))
    with pytest.raises(ShapeMismatch):
        layer.forward(np.array([1.0, 2.0, 3.0]))


def test_linear_layer_inconsistent_shapes():
    with pytest.raises(ShapeMismatch):
        LinearLayer(weight=np.eye(2), bias=np.zeros(3))


def test_linearity_property():
    rng = np.random.default_rng(0)
    layer = LinearLayer.create(rng, 5, 7)
    x = rng.standard_normal(7)
    y = rng.standard_normal(7)
    zero = np.zeros(7)
    # f(x+y) - f(x) - f(y) + f(0) == 0 for an affine map
    residual = (layer.forward(x + y) - layer.forward(x)
                - layer.forward(y) + layer.forward(zero))
    assert np.max(np.abs(residual)) < 1e-12


def test_batched_forward_bit_identical_to_per_sample():
    rng = np.random.default_rng(1)
    layer = LinearLayer.create(rng, 16, 9)
    X = rng.standard_normal((33, 9))
    Y = layer.forward(X)
    for i in range(X.shape[0]):
        assert np.array_equal(Y[i], layer.forward(X[i]))


def test_batched_backward_bit_identical_to_per_sample_loop():
    rng = np.random.default_rng(2)
    layer = LinearLayer.create(rng, 6, 4)
    X = rng.standard_normal((25, 4))
    delta = rng.standard_normal((25, 6))

    dx_batch = linear_backward(layer, X, delta)
    gw_batch = layer.grad_weight.copy()
    gb_batch = layer.grad_bias.copy()

    layer.zero_grads()
    gw_loop = np.zeros_like(layer.grad_weight)
    gb_loop = np.zeros_like(layer.grad_bias)
    for i in range(X.shape[0]):
        gw_loop += np.einsum("o,i->oi", delta[i], X[i], optimize=False)
        gb_loop += delta[i]
        dx_i = np.einsum("o,oi->i", delta[i], layer.weight, optimize=False)
        assert np.array_equal(dx_i, dx_batch[i])
    assert np.array_equal(gw_batch, gw_loop)
    assert np.array_equal(gb_batch, gb_loop)


def test_glorot_init_bounds_and_zero_bias():
    rng = np.random.default_rng(3)
    layer = LinearLayer.create(rng, 30, 20)
    limit = np.sqrt(6.0 / 50)
    assert np.all(np.abs(layer.weight) <= limit)
    assert np.all(layer.bias == 0.0)


def test_sigmoid_basics():
    assert sigmoid(np.array([0.0]))[0] == 0.5
    assert relu(np.array([-2.0]))[0] == 0.0
    assert relu(np.array([3.5]))[0] == 3.5


def test_sigmoid_stability():
    v = sigmoid(np.array([-745.0]))[0]
    assert 0.0 < v <= 1e-300
    big = sigmoid(np.array([745.0]))[0]
    assert big == 1.0 or (1.0 - big) < 1e-300
    # symmetric pair stays consistent
    pair = sigmoid(np.array([-30.0, 30.0]))
    assert np.isclose(pair[0] + pair[1], 1.0, atol=1e-12)


def test_adam_zero_gradient_is_identity():
    params = np.array([1.0, -2.0, 0.5])
    state = AdamState.for_params(params, learning_rate=0.1)
    updated = adam_step(state, params, np.zeros(3))
    assert np.array_equal(updated, params)
    assert state.step_count == 1


def test_adam_first_step_matches_closed_form():
    # t=1: m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps)
    params = np.array([1.0])
    state = AdamState.for_params(params, learning_rate=0.1)
    updated = adam_step(state, params, np.array([1.0]))
    expected = 1.0 - 0.1 * (1.0 / (np.sqrt(1.0) + 1e-8))
    assert updated[0] == expected
    assert abs((updated[0] - 1.0) - (-0.1)) < 1e-8


def test_adam_descends_constant_gradient():
    params = np.array([0.0])
    state = AdamState.for_params(params, learning_rate=0.01)
    for _ in range(50):
        params = adam_step(state, params, np.array([1.0]))
    assert params[0] < -0.1  # moved opposite the gradient sign


def test_adam_shape_mismatch():
    params = np.zeros(3)
    state = AdamState.for_params(params)
    with pytest.raises(ShapeMismatch):
        adam_step(state, params, np.zeros(4))


def test_adam_non_finite_gradient():
    params = np.zeros(2)
    state = AdamState.for_params(params)
    with pytest.raises(NonFiniteGradient):
        adam_step(state, params, np.array([np.nan, 0.0]))
    assert state.step_count == 0


def quadratic_loss(params, changed_index=None):
    return 0.5 * float(params @ params), params.copy()


def test_finite_diff_quadratic():
    params = np.random.default_rng(4).standard_normal(20)
    err = finite_diff_check(quadratic_loss, params, epsilon=1e-5)
    assert err < 1e-8


def test_finite_diff_detects_wrong_gradient():
    def broken(params, changed_index=None):
        return 0.5 * float(params @ params), 2.0 * params

    params = np.array([1.0, 2.0, 3.0])
    err = finite_diff_check(broken, params, epsilon=1e-5)
    assert err > 0.5


def test_finite_diff_restores_params():
    params = np.array([1.0, -1.0, 0.25])
    before = params.copy()
    finite_diff_check(quadratic_loss, params, epsilon=1e-5)
    assert np.array_equal(params, before)


@pytest.mark.parametrize("eps", [0.0, 1e-7, 1e-3, -1e-5])
def test_finite_diff_invalid_epsilon(eps):
    with pytest.raises(InvalidEpsilon):
        finite_diff_check(quadratic_loss, np.zeros(2), epsilon=eps)
