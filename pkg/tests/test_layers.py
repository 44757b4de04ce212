"""Network forward semantics, initialization statistics, layer gradients."""
import numpy as np
import pytest

from tsgan.autodiff import Tensor, backward, finite_difference_oracle, ops
from tsgan.autodiff.tensor import ShapeError
from tsgan.nn import build_network, init_parameters, network_forward
from tsgan.nn import layers as L


def test_dense_identity():
    net = build_network((2,), [L.dense(2)])
    net.params["L00.weight"].data = np.eye(2, dtype=np.float32)
    out = network_forward(net, Tensor([[1.0, 2.0]]))
    np.testing.assert_array_equal(out.data, [[1.0, 2.0]])


def test_leaky_relu_layer():
    net = build_network((2,), [L.leaky_relu(0.2)])
    out = network_forward(net, Tensor([[-1.0, 2.0]]))
    np.testing.assert_allclose(out.data, [[-0.2, 2.0]], rtol=1e-6)


def test_two_layer_conv_matches_straight_line_oracle():
    r = np.random.default_rng(0)
    net = build_network((2, 10), [L.conv1d(3, 3, stride=1, padding=1), L.leaky_relu(0.2), L.conv1d(2, 3, stride=2)])
    init_parameters(net, seed=5)
    x = r.normal(size=(2, 2, 10)).astype(np.float32)
    out = network_forward(net, Tensor(x)).data

    def direct_conv(xin, w, b, stride, pad):
        xin = np.pad(xin, ((0, 0), (0, 0), (pad, pad)))
        f, _, k = w.shape
        n = (xin.shape[2] - k) // stride + 1
        res = np.zeros((xin.shape[0], f, n))
        for bi in range(xin.shape[0]):
            for fi in range(f):
                for j in range(n):
                    res[bi, fi, j] = (xin[bi, :, j * stride : j * stride + k] * w[fi]).sum() + b[fi]
        return res

    h = direct_conv(x, net.params["L00.weight"].data, net.params["L00.bias"].data, 1, 1)
    h = np.where(h >= 0, h, 0.2 * h)
    ref = direct_conv(h, net.params["L02.weight"].data, net.params["L02.bias"].data, 2, 0)
    np.testing.assert_allclose(out, ref, rtol=1e-4, atol=1e-5)


def test_init_deterministic_per_seed():
    a = init_parameters(build_network((4,), [L.dense(8), L.dense(3)]), seed=7)
    b = init_parameters(build_network((4,), [L.dense(8), L.dense(3)]), seed=7)
    c = init_parameters(build_network((4,), [L.dense(8), L.dense(3)]), seed=8)
    for name in a.params:
        assert a.params[name].data.tobytes() == b.params[name].data.tobytes()
    assert any(
        a.params[n].data.tobytes() != c.params[n].data.tobytes()
        for n in a.params
        if n.endswith("weight")
    )


def test_init_weight_statistics():
    net = init_parameters(build_network((100,), [L.dense(100)]), seed=3)
    w = net.params["L00.weight"].data
    assert w.size == 10**4
    # mean of 1e4 draws from N(0, 0.02^2): SE = 0.02/100
    assert abs(w.mean()) < 3 * (0.02 / 100)
    assert net.params["L00.bias"].data.sum() == 0.0


def test_global_avg_pool_equals_direct_mean():
    net = build_network((3, 4, 5), [L.global_avg_pool()])
    x = np.random.default_rng(1).normal(size=(2, 3, 4, 5)).astype(np.float32)
    out = network_forward(net, Tensor(x)).data
    np.testing.assert_allclose(out, x.mean(axis=(2, 3)), rtol=1e-5, atol=1e-6)


def test_noise_inject_zero_stddev_is_identity():
    net = build_network((6,), [L.noise_inject(0.0)])
    x = np.random.default_rng(2).normal(size=(3, 6)).astype(np.float32)
    out = network_forward(net, Tensor(x), training=True, rng=np.random.default_rng(0))
    assert out.data.tobytes() == x.tobytes()


def test_noise_inject_training_changes_inference_does_not():
    net = build_network((6,), [L.noise_inject(0.1)])
    x = np.random.default_rng(2).normal(size=(3, 6)).astype(np.float32)
    out_inf = network_forward(net, Tensor(x), training=False)
    assert out_inf.data.tobytes() == x.tobytes()
    out_tr = network_forward(net, Tensor(x), training=True, rng=np.random.default_rng(9))
    assert out_tr.data.tobytes() != x.tobytes()
    out_tr2 = network_forward(net, Tensor(x), training=True, rng=np.random.default_rng(9))
    assert out_tr.data.tobytes() == out_tr2.data.tobytes()


def test_noise_inject_training_requires_rng():
    net = build_network((6,), [L.noise_inject(0.1)])
    with pytest.raises(ValueError, match="rng"):
        network_forward(net, Tensor(np.zeros((1, 6), dtype=np.float32)), training=True)


def test_inference_forward_is_pure():
    net = init_parameters(
        build_network((1, 16), [L.conv1d(4, 3, 2, 1), L.batch_norm(), L.leaky_relu(), L.global_avg_pool(), L.dense(2)]),
        seed=11,
    )
    x = Tensor(np.random.default_rng(3).normal(size=(4, 1, 16)).astype(np.float32))
    a = network_forward(net, x, training=False).data.tobytes()
    b = network_forward(net, x, training=False).data.tobytes()
    assert a == b


def test_forward_shape_error_reports_layer():
    net = build_network((2, 8), [L.conv1d(3, 3)])
    with pytest.raises(ShapeError, match="network input"):
        network_forward(net, Tensor(np.zeros((1, 3, 8), dtype=np.float32)))


def test_resize2d_linear_interpolation():
    net = build_network((1, 2, 2), [L.resize2d(3, 3)])
    x = np.array([[[[0.0, 1.0], [2.0, 3.0]]]], dtype=np.float32)
    out = network_forward(net, Tensor(x)).data[0, 0]
    np.testing.assert_allclose(out, [[0, 0.5, 1], [1, 1.5, 2], [2, 2.5, 3]], rtol=1e-6)


NETS = {
    "dense": ((5,), [L.dense(3), L.tanh(), L.dense(1)]),
    "conv1d": ((2, 9), [L.conv1d(3, 3, 2, 1), L.leaky_relu(), L.global_avg_pool(), L.dense(1)]),
    "conv2d": ((1, 6, 6), [L.conv2d(2, 3, 2, 1), L.leaky_relu(), L.global_avg_pool(), L.dense(1)]),
    "tconv1d": ((2, 4), [L.conv_transpose1d(3, 4, 2, 1), L.tanh(), L.global_avg_pool(), L.dense(1)]),
    "tconv2d": ((2, 3, 3), [L.conv_transpose2d(2, 4, 2, 1), L.sigmoid(), L.global_avg_pool(), L.dense(1)]),
    "batch-norm": ((3, 7), [L.batch_norm(), L.leaky_relu(), L.global_avg_pool(), L.dense(1)]),
    "reshape": ((4, 4), [L.reshape((16,)), L.dense(2), L.tanh(), L.dense(1)]),
    "resize2d": ((1, 4, 4), [L.resize2d(5, 3), L.reshape((15,)), L.dense(1)]),
    "resize1d": ((2, 6), [L.resize1d(9), L.reshape((18,)), L.dense(1)]),
}


@pytest.mark.parametrize("name", sorted(NETS))
def test_layer_gradients_match_finite_differences(name):
    input_shape, specs = NETS[name]
    net = init_parameters(build_network(input_shape, specs), seed=21)
    # init at 0.02 stddev is too flat for meaningful FD signals; scale up
    for p in net.params.values():
        if p.data.std() > 0:
            p.data = (p.data * 20.0).astype(np.float32)
    x = Tensor(np.random.default_rng(4).normal(size=(3,) + input_shape).astype(np.float32))
    training = name == "batch-norm"

    for pname in net.params:
        target = net.params[pname]

        def loss_at(t, _target=target, _x=x, _training=training):
            saved = _target.data
            _target.data = t.data
            try:
                out = network_forward(net, _x, training=_training)
                return ops.mean(ops.square(out))
            finally:
                _target.data = saved

        loss = ops.mean(ops.square(network_forward(net, x, training=training)))
        grads = backward(loss, net.params.values())
        analytic = grads[target].data if target in grads else np.zeros(target.shape)
        fd = finite_difference_oracle(loss_at, target, h=1e-3)
        np.testing.assert_allclose(analytic, fd, rtol=1e-3, atol=2e-4)
