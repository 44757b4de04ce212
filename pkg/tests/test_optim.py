"""Adam update semantics and the legacy clipping rule."""
import numpy as np

from tsgan.autodiff import Tensor, backward, ops
from tsgan.nn import AdamState, adam_step, weight_clip


def _grad_map(params, arrays):
    return {p: Tensor(a) for p, a in zip(params, arrays)}


def test_first_step_magnitude_is_learning_rate():
    p = Tensor(np.array([1.0], dtype=np.float32), requires_grad=True)
    state = AdamState(lr=1e-3, beta1=0.9, beta2=0.999)
    adam_step(state, {"p": p}, _grad_map([p], [np.array([7.3], dtype=np.float32)]))
    # bias-corrected first step: m_hat/sqrt(v_hat) = sign(g) up to eps
    assert abs((1.0 - p.data[0]) - 1e-3) < 1e-6
    assert state.step == 1


def test_zero_gradient_leaves_parameters_step_increments():
    p = Tensor(np.array([2.0, -1.0], dtype=np.float32), requires_grad=True)
    state = AdamState(lr=0.01)
    adam_step(state, {"p": p}, _grad_map([p], [np.zeros(2, dtype=np.float32)]))
    np.testing.assert_array_equal(p.data, [2.0, -1.0])
    assert state.step == 1


def test_missing_gradient_leaves_parameter():
    p = Tensor(np.array([5.0], dtype=np.float32), requires_grad=True)
    q = Tensor(np.array([1.0], dtype=np.float32), requires_grad=True)
    state = AdamState(lr=0.1)
    adam_step(state, {"p": p, "q": q}, _grad_map([q], [np.array([1.0], dtype=np.float32)]))
    np.testing.assert_array_equal(p.data, [5.0])
    assert q.data[0] != 1.0


def test_five_steps_match_hand_unrolled_recursion():
    # loss = 0.5 * w^2 on a scalar, grad = w; recursion computed in float64.
    lr, b1, b2, eps = 0.05, 0.9, 0.999, 1e-8
    w = Tensor(np.array([1.0], dtype=np.float32), requires_grad=True)
    state = AdamState(lr=lr, beta1=b1, beta2=b2, eps=eps)

    ref_w, m, v = 1.0, 0.0, 0.0
    for t in range(1, 6):
        g = ref_w
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        m_hat = m / (1 - b1**t)
        v_hat = v / (1 - b2**t)
        ref_w = ref_w - lr * m_hat / (np.sqrt(v_hat) + eps)

        loss = ops.mul(0.5, ops.sum(ops.square(w)))
        grads = backward(loss, [w])
        adam_step(state, {"w": w}, grads)

    assert abs(w.data[0] - ref_w) < 1e-6
    assert state.step == 5


def test_weight_clip_bounds():
    p = Tensor(np.array([0.5, -0.2, 0.004], dtype=np.float32), requires_grad=True)
    weight_clip({"p": p}, 0.01)
    np.testing.assert_allclose(p.data, [0.01, -0.01, 0.004], rtol=1e-6)


def test_weight_clip_in_range_unchanged():
    p = Tensor(np.array([0.004, -0.009], dtype=np.float32), requires_grad=True)
    before = p.data.copy()
    weight_clip({"p": p}, 0.01)
    np.testing.assert_array_equal(p.data, before)


def test_weight_clip_zero_tensor_unchanged():
    p = Tensor(np.zeros(4, dtype=np.float32), requires_grad=True)
    weight_clip({"p": p}, 0.01)
    np.testing.assert_array_equal(p.data, np.zeros(4))
