"""Minimal dense-network core: linear layers, activations, Adam, and a
finite-difference gradient checker.

Everything runs in float64. Matrix products go through
``np.einsum(..., optimize=False)`` rather than BLAS: einsum reduces each
output element with a fixed sequential summation, so a batched product is
bit-identical to the same rows computed one sample at a time. BLAS gemm
does not guarantee that (its blocking depends on the batch dimension), and
the training loop promises batched == per-sample exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidEpsilon, NonFiniteGradient, ShapeMismatch


def matmul(x: np.ndarray, weight: np.ndarray) -> np.ndarray:
    """``x @ weight.T`` with batch-size-independent summation order.

    ``x`` is ``(in,)`` or ``(batch, in)``; ``weight`` is ``(out, in)``.
    """
    if x.ndim == 1:
        return np.einsum("i,oi->o", x, weight, optimize=False)
    return np.einsum("bi,oi->bo", x, weight, optimize=False)


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Logistic function, stable for large ``|x|``.

    Splits on sign so the exponential argument is always non-positive;
    extreme negative inputs underflow toward 0 gradually instead of
    overflowing.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


@dataclass
class LinearLayer:
    """Dense layer ``y = W x + b`` with gradient buffers.

    ``weight`` is ``(out, in)`` row-major; gradients live alongside the
    parameters and are filled by :func:`linear_backward`.
    """

    weight: np.ndarray
    bias: np.ndarray
    grad_weight: np.ndarray = field(default=None)  # type: ignore[assignment]
    grad_bias: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[0],):
            raise ShapeMismatch(
                f"weight {self.weight.shape} and bias {self.bias.shape} are inconsistent"
            )
        if self.grad_weight is None:
            self.grad_weight = np.zeros_like(self.weight)
        if self.grad_bias is None:
            self.grad_bias = np.zeros_like(self.bias)

    @classmethod
    def create(cls, rng: np.random.Generator, out_dim: int, in_dim: int) -> "LinearLayer":
        """Glorot-uniform weights, zero biases."""
        limit = np.sqrt(6.0 / (in_dim + out_dim))
        weight = rng.uniform(-limit, limit, size=(out_dim, in_dim))
        return cls(weight=weight, bias=np.zeros(out_dim))

    @property
    def in_dim(self) -> int:
        return self.weight.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weight.shape[0]

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.in_dim:
            raise ShapeMismatch(
                f"input has {x.shape[-1]} features, layer expects {self.in_dim}"
            )
        return matmul(x, self.weight) + self.bias

    def zero_grads(self) -> None:
        self.grad_weight[...] = 0.0
        self.grad_bias[...] = 0.0


def linear_backward(layer: LinearLayer, x: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Accumulate parameter gradients and return the input gradient.

    ``x`` and ``delta`` are batched ``(B, in)`` / ``(B, out)``. Gradient
    sums over the batch run in sample order (einsum), matching a
    per-sample accumulation loop bit for bit.
    """
    if x.ndim == 1:
        x = x[None, :]
        delta = delta[None, :]
    layer.grad_weight += np.einsum("bo,bi->oi", delta, x, optimize=False)
    layer.grad_bias += np.einsum("bo->o", delta, optimize=False)
    return np.einsum("bo,oi->bi", delta, layer.weight, optimize=False)


@dataclass
class AdamState:
    """Adam optimizer state over a flat parameter vector."""

    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step_count: int = 0
    m: np.ndarray = field(default=None)  # type: ignore[assignment]
    v: np.ndarray = field(default=None)  # type: ignore[assignment]

    @classmethod
    def for_params(cls, params: np.ndarray, learning_rate: float = 1e-3,
                   beta1: float = 0.9, beta2: float = 0.999,
                   epsilon: float = 1e-8) -> "AdamState":
        return cls(
            learning_rate=learning_rate,
            beta1=beta1,
            beta2=beta2,
            epsilon=epsilon,
            step_count=0,
            m=np.zeros_like(params),
            v=np.zeros_like(params),
        )


def adam_step(state: AdamState, params: np.ndarray, grads: np.ndarray) -> np.ndarray:
    """One bias-corrected Adam update. Returns the new parameter vector.

    Zero gradients leave the parameters unchanged. Non-finite gradients
    raise :class:`NonFiniteGradient` before any state is touched.
    """
    if params.shape != grads.shape:
        raise ShapeMismatch(f"params {params.shape} vs grads {grads.shape}")
    if state.m is None or state.m.shape != params.shape:
        raise ShapeMismatch("Adam moment buffers do not match the parameter vector")
    if not np.all(np.isfinite(grads)):
        raise NonFiniteGradient("gradient contains NaN or inf")
    state.step_count += 1
    t = state.step_count
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * grads * grads
    m_hat = state.m / (1.0 - state.beta1 ** t)
    v_hat = state.v / (1.0 - state.beta2 ** t)
    return params - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)


def finite_diff_check(loss_fn, params: np.ndarray, epsilon: float = 1e-5) -> float:
    """Compare analytic gradients against central finite differences.

    ``loss_fn(params, changed_index=None) -> (loss, grad)`` must be
    deterministic (any sampling noise frozen). The analytic gradient is
    taken from the unperturbed call; the numeric gradient of parameter
    ``i`` is ``(loss(p + eps*e_i) - loss(p - eps*e_i)) / (2*eps)``,
    evaluated by perturbing ``params`` in place (and restoring it).
    ``changed_index`` tells the callable which coordinate moved so it may
    reuse cached activations; ignoring it is always correct.

    Returns ``max_i |analytic_i - numeric_i| / max(1, |numeric_i|)``.
    """
    if not (1e-6 <= epsilon <= 1e-4):
        raise InvalidEpsilon(f"epsilon must lie in [1e-6, 1e-4], got {epsilon}")
    params = np.asarray(params, dtype=np.float64)
    _, analytic = loss_fn(params, changed_index=None)
    analytic = np.asarray(analytic, dtype=np.float64).ravel().copy()
    if analytic.shape != params.shape:
        raise ShapeMismatch(f"gradient shape {analytic.shape} vs params {params.shape}")
    worst = 0.0
    for i in range(params.size):
        orig = params[i]
        params[i] = orig + epsilon
        plus, _ = loss_fn(params, changed_index=i)
        params[i] = orig - epsilon
        minus, _ = loss_fn(params, changed_index=i)
        params[i] = orig
        numeric = (plus - minus) / (2.0 * epsilon)
        err = abs(analytic[i] - numeric) / max(1.0, abs(numeric))
        if err > worst:
            worst = err
    return float(worst)
