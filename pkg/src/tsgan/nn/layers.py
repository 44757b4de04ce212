"""Layer specs, network containers, forward evaluation and initialization.

A Network is an ordered list of LayerSpecs plus named parameter tensors.
Forward evaluation is pure in inference mode; training mode enables noise
injection and batch-norm batch statistics.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..autodiff import Tensor, ops
from ..autodiff.tensor import ShapeError, raw_tensor

_BN_EPS = 1e-5
_BN_MOMENTUM = 0.9

ACTIVATIONS = ("leaky-relu", "tanh", "sigmoid")

KINDS = (
    "dense",
    "conv1d",
    "conv2d",
    "transposed-conv1d",
    "transposed-conv2d",
    "batch-norm",
    "global-avg-pool",
    "reshape",
    "noise-inject",
    "resize1d",
    "resize2d",
    "scale",
) + ACTIVATIONS


@dataclass(frozen=True)
class LayerSpec:
    """One layer: a kind plus the attributes that kind understands."""

    kind: str
    channels: Optional[int] = None
    kernel: Optional[tuple[int, ...]] = None
    stride: tuple[int, ...] = (1,)
    padding: tuple[int, ...] = (0,)
    negative_slope: float = 0.2
    noise_stddev: float = 0.05
    factor: float = 1.0
    shape: Optional[tuple[int, ...]] = None
    size: Optional[tuple[int, ...]] = None  # resize target extents

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown layer kind '{self.kind}'")
        if self.channels is not None and self.channels < 1:
            raise ValueError(f"{self.kind}: channels must be positive")
        if self.kernel is not None and any(k < 1 for k in self.kernel):
            raise ValueError(f"{self.kind}: kernel extents must be positive")


def dense(units: int) -> LayerSpec:
    return LayerSpec("dense", channels=units)


def conv1d(filters: int, kernel: int, stride: int = 1, padding: int = 0) -> LayerSpec:
    return LayerSpec("conv1d", channels=filters, kernel=(kernel,), stride=(stride,), padding=(padding,))


def conv2d(filters: int, kernel, stride=1, padding=0) -> LayerSpec:
    return LayerSpec("conv2d", channels=filters, kernel=_pair(kernel), stride=_pair(stride), padding=_pair(padding))


def conv_transpose1d(filters: int, kernel: int, stride: int = 1, padding: int = 0) -> LayerSpec:
    return LayerSpec(
        "transposed-conv1d", channels=filters, kernel=(kernel,), stride=(stride,), padding=(padding,)
    )


def conv_transpose2d(filters: int, kernel, stride=1, padding=0) -> LayerSpec:
    return LayerSpec(
        "transposed-conv2d", channels=filters, kernel=_pair(kernel), stride=_pair(stride), padding=_pair(padding)
    )


def leaky_relu(negative_slope: float = 0.2) -> LayerSpec:
    return LayerSpec("leaky-relu", negative_slope=negative_slope)


def tanh() -> LayerSpec:
    return LayerSpec("tanh")


def sigmoid() -> LayerSpec:
    return LayerSpec("sigmoid")


def batch_norm() -> LayerSpec:
    return LayerSpec("batch-norm")


def global_avg_pool() -> LayerSpec:
    return LayerSpec("global-avg-pool")


def reshape(shape: tuple[int, ...]) -> LayerSpec:
    return LayerSpec("reshape", shape=tuple(shape))


def noise_inject(stddev: float = 0.05) -> LayerSpec:
    return LayerSpec("noise-inject", noise_stddev=stddev)


def resize1d(length: int) -> LayerSpec:
    return LayerSpec("resize1d", size=(length,))


def resize2d(height: int, width: int) -> LayerSpec:
    return LayerSpec("resize2d", size=(height, width))


def scale(factor: float) -> LayerSpec:
    return LayerSpec("scale", factor=float(factor))


def _pair(v) -> tuple[int, int]:
    if isinstance(v, (tuple, list)):
        return int(v[0]), int(v[1])
    return int(v), int(v)


@dataclass
class Network:
    """Ordered layers with named parameters and batch-norm running state.

    ``input_shape``/``output_shape`` exclude the batch axis.
    """

    layers: list[LayerSpec]
    input_shape: tuple[int, ...]
    output_shape: tuple[int, ...]
    params: dict[str, Tensor] = field(default_factory=dict)
    state: dict[str, np.ndarray] = field(default_factory=dict)

    def parameter_count(self) -> int:
        return int(np.sum([p.size for p in self.params.values()])) if self.params else 0

    def tensors_for_checkpoint(self) -> dict[str, np.ndarray]:
        out = {name: p.data for name, p in self.params.items()}
        out.update({name: arr for name, arr in self.state.items()})
        return out

    def load_tensors(self, tensors: dict[str, np.ndarray]) -> None:
        for name, p in self.params.items():
            arr = tensors.get(name)
            if arr is None:
                raise KeyError(f"checkpoint missing parameter '{name}'")
            if arr.shape != p.shape:
                raise ShapeError(f"parameter '{name}': checkpoint {arr.shape} != model {p.shape}")
            p.data = arr.astype(np.float32)
        for name in self.state:
            arr = tensors.get(name)
            if arr is None:
                raise KeyError(f"checkpoint missing state '{name}'")
            self.state[name] = arr.astype(np.float32)


def build_network(input_shape: tuple[int, ...], layers: list[LayerSpec]) -> Network:
    """Allocate a network, inferring every intermediate shape.

    Parameters are zero until init_parameters seeds them.
    """
    shape = tuple(int(s) for s in input_shape)
    net = Network(layers=list(layers), input_shape=shape, output_shape=shape)
    for idx, spec in enumerate(layers):
        shape = _register_layer(net, idx, spec, shape)
    net.output_shape = shape
    return net


def _name(idx: int, field_name: str) -> str:
    return f"L{idx:02d}.{field_name}"


def _register_layer(net: Network, idx: int, spec: LayerSpec, shape: tuple[int, ...]) -> tuple[int, ...]:
    kind = spec.kind
    if kind == "dense":
        if len(shape) != 1:
            raise ShapeError(f"layer {idx} (dense): needs flat input, got {shape}; add a reshape")
        units = spec.channels
        net.params[_name(idx, "weight")] = _param((shape[0], units))
        net.params[_name(idx, "bias")] = _param((units,))
        return (units,)
    if kind == "conv1d":
        if len(shape) != 2:
            raise ShapeError(f"layer {idx} (conv1d): needs (C, L) input, got {shape}")
        c, length = shape
        (k,), (s,), (p,) = spec.kernel, spec.stride, spec.padding
        out_len = (length + 2 * p - k) // s + 1
        if length + 2 * p < k:
            raise ShapeError(f"layer {idx} (conv1d): kernel {k} exceeds padded length {length + 2 * p}")
        net.params[_name(idx, "weight")] = _param((spec.channels, c, k))
        net.params[_name(idx, "bias")] = _param((spec.channels,))
        return (spec.channels, out_len)
    if kind == "conv2d":
        if len(shape) != 3:
            raise ShapeError(f"layer {idx} (conv2d): needs (C, H, W) input, got {shape}")
        c, h, w = shape
        (kh, kw), (sh, sw), (ph, pw) = spec.kernel, spec.stride, spec.padding
        if h + 2 * ph < kh or w + 2 * pw < kw:
            raise ShapeError(f"layer {idx} (conv2d): kernel {spec.kernel} exceeds padded input {shape}")
        out_h = (h + 2 * ph - kh) // sh + 1
        out_w = (w + 2 * pw - kw) // sw + 1
        net.params[_name(idx, "weight")] = _param((spec.channels, c, kh, kw))
        net.params[_name(idx, "bias")] = _param((spec.channels,))
        return (spec.channels, out_h, out_w)
    if kind == "transposed-conv1d":
        if len(shape) != 2:
            raise ShapeError(f"layer {idx} (transposed-conv1d): needs (C, L) input, got {shape}")
        c, length = shape
        (k,), (s,), (p,) = spec.kernel, spec.stride, spec.padding
        out_len = (length - 1) * s + k - 2 * p
        if out_len < 1:
            raise ShapeError(f"layer {idx} (transposed-conv1d): non-positive output length {out_len}")
        net.params[_name(idx, "weight")] = _param((c, spec.channels, k))
        net.params[_name(idx, "bias")] = _param((spec.channels,))
        return (spec.channels, out_len)
    if kind == "transposed-conv2d":
        if len(shape) != 3:
            raise ShapeError(f"layer {idx} (transposed-conv2d): needs (C, H, W) input, got {shape}")
        c, h, w = shape
        (kh, kw), (sh, sw), (ph, pw) = spec.kernel, spec.stride, spec.padding
        out_h = (h - 1) * sh + kh - 2 * ph
        out_w = (w - 1) * sw + kw - 2 * pw
        if out_h < 1 or out_w < 1:
            raise ShapeError(
                f"layer {idx} (transposed-conv2d): non-positive output extents ({out_h},{out_w})"
            )
        net.params[_name(idx, "weight")] = _param((c, spec.channels, kh, kw))
        net.params[_name(idx, "bias")] = _param((spec.channels,))
        return (spec.channels, out_h, out_w)
    if kind == "batch-norm":
        if len(shape) < 1:
            raise ShapeError(f"layer {idx} (batch-norm): needs a channel axis, got {shape}")
        c = shape[0]
        net.params[_name(idx, "gamma")] = _param((c,))
        net.params[_name(idx, "beta")] = _param((c,))
        net.state[_name(idx, "running_mean")] = np.zeros(c, dtype=np.float32)
        net.state[_name(idx, "running_var")] = np.ones(c, dtype=np.float32)
        return shape
    if kind == "global-avg-pool":
        if len(shape) < 2:
            raise ShapeError(f"layer {idx} (global-avg-pool): needs spatial axes, got {shape}")
        return (shape[0],)
    if kind == "reshape":
        target = spec.shape
        if int(np.prod(shape)) != int(np.prod(target)):
            raise ShapeError(f"layer {idx} (reshape): cannot view {shape} as {target}")
        return tuple(target)
    if kind == "noise-inject":
        return shape
    if kind == "resize1d":
        if len(shape) != 2:
            raise ShapeError(f"layer {idx} (resize1d): needs (C, L) input, got {shape}")
        return (shape[0], spec.size[0])
    if kind == "resize2d":
        if len(shape) != 3:
            raise ShapeError(f"layer {idx} (resize2d): needs (C, H, W) input, got {shape}")
        return (shape[0],) + tuple(spec.size)
    if kind == "scale":
        return shape
    if kind in ACTIVATIONS:
        return shape
    raise ValueError(f"unknown layer kind '{kind}'")


def _param(shape: tuple[int, ...]) -> Tensor:
    return Tensor(np.zeros(shape, dtype=np.float32), requires_grad=True)


def init_parameters(net: Network, seed: int) -> Network:
    """Seed parameters: weights ~ N(0, 0.02^2), biases zero, batch-norm at
    identity.  Deterministic per seed."""
    rng = np.random.default_rng(seed)
    for name in net.params:
        p = net.params[name]
        leaf = name.rsplit(".", 1)[1]
        if leaf == "weight":
            p.data = rng.normal(0.0, 0.02, size=p.shape).astype(np.float32)
        elif leaf == "gamma":
            p.data = np.ones(p.shape, dtype=np.float32)
        else:  # bias, beta
            p.data = np.zeros(p.shape, dtype=np.float32)
    for name in net.state:
        net.state[name] = (
            np.ones_like(net.state[name])
            if name.endswith("running_var")
            else np.zeros_like(net.state[name])
        )
    return net


def network_forward(
    net: Network,
    x: Tensor,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tensor:
    """Run a batch through the network.

    Inference mode (training=False) is a pure function of the input: no noise
    is injected and batch-norm uses running statistics.
    """
    if tuple(x.shape[1:]) != net.input_shape:
        raise ShapeError(
            f"network input {tuple(x.shape[1:])} does not match signature {net.input_shape}"
        )
    h = x
    for idx, spec in enumerate(net.layers):
        try:
            h = _apply_layer(net, idx, spec, h, training, rng)
        except ShapeError as err:
            raise ShapeError(f"layer {idx} ({spec.kind}): {err}") from None
    return h


def _apply_layer(
    net: Network,
    idx: int,
    spec: LayerSpec,
    h: Tensor,
    training: bool,
    rng: Optional[np.random.Generator],
) -> Tensor:
    kind = spec.kind
    if kind == "dense":
        return ops.add(
            ops.matmul(h, net.params[_name(idx, "weight")]), net.params[_name(idx, "bias")]
        )
    if kind == "conv1d":
        return ops.conv1d(
            h, net.params[_name(idx, "weight")], net.params[_name(idx, "bias")],
            stride=spec.stride[0], padding=spec.padding[0],
        )
    if kind == "conv2d":
        return ops.conv2d(
            h, net.params[_name(idx, "weight")], net.params[_name(idx, "bias")],
            stride=spec.stride, padding=spec.padding,
        )
    if kind == "transposed-conv1d":
        return ops.conv_transpose1d(
            h, net.params[_name(idx, "weight")], net.params[_name(idx, "bias")],
            stride=spec.stride[0], padding=spec.padding[0],
        )
    if kind == "transposed-conv2d":
        return ops.conv_transpose2d(
            h, net.params[_name(idx, "weight")], net.params[_name(idx, "bias")],
            stride=spec.stride, padding=spec.padding,
        )
    if kind == "leaky-relu":
        return ops.leaky_relu(h, spec.negative_slope)
    if kind == "tanh":
        return ops.tanh(h)
    if kind == "sigmoid":
        return ops.sigmoid(h)
    if kind == "batch-norm":
        return _batch_norm(net, idx, h, training)
    if kind == "global-avg-pool":
        return ops.mean(h, axis=tuple(range(2, h.ndim)))
    if kind == "reshape":
        return ops.reshape(h, (h.shape[0],) + tuple(spec.shape))
    if kind == "noise-inject":
        if not training or spec.noise_stddev == 0.0:
            return h
        if rng is None:
            raise ValueError(f"layer {idx} (noise-inject): training forward needs an rng")
        noise = rng.normal(0.0, spec.noise_stddev, size=h.shape).astype(np.float32)
        return ops.add(h, raw_tensor(noise))
    if kind == "resize1d":
        rows = raw_tensor(_interp_matrix(spec.size[0], h.shape[2]))
        return ops.matmul(h, ops.transpose(rows))
    if kind == "resize2d":
        rows = raw_tensor(_interp_matrix(spec.size[0], h.shape[2]))
        cols = raw_tensor(_interp_matrix(spec.size[1], h.shape[3]))
        return ops.matmul(ops.matmul(rows, h), ops.transpose(cols))
    if kind == "scale":
        return ops.mul(h, spec.factor)
    raise ValueError(f"unknown layer kind '{kind}'")


def _batch_norm(net: Network, idx: int, h: Tensor, training: bool) -> Tensor:
    gamma = net.params[_name(idx, "gamma")]
    beta = net.params[_name(idx, "beta")]
    axes = (0,) + tuple(range(2, h.ndim))
    bshape = (1, h.shape[1]) + (1,) * (h.ndim - 2)
    if training:
        mu = ops.mean(h, axis=axes, keepdims=True)
        var = ops.mean(ops.square(ops.sub(h, mu)), axis=axes, keepdims=True)
        mkey, vkey = _name(idx, "running_mean"), _name(idx, "running_var")
        net.state[mkey] = (
            _BN_MOMENTUM * net.state[mkey] + (1 - _BN_MOMENTUM) * mu.data.reshape(-1)
        ).astype(np.float32)
        net.state[vkey] = (
            _BN_MOMENTUM * net.state[vkey] + (1 - _BN_MOMENTUM) * var.data.reshape(-1)
        ).astype(np.float32)
    else:
        mu = raw_tensor(net.state[_name(idx, "running_mean")].reshape(bshape))
        var = raw_tensor(net.state[_name(idx, "running_var")].reshape(bshape))
    norm = ops.div(ops.sub(h, mu), ops.sqrt(ops.add(var, _BN_EPS)))
    return ops.add(ops.mul(norm, ops.reshape(gamma, bshape)), ops.reshape(beta, bshape))


def _interp_matrix(n_out: int, n_in: int) -> np.ndarray:
    """Linear-interpolation resampling matrix (n_out x n_in), endpoints kept."""
    m = np.zeros((n_out, n_in), dtype=np.float32)
    if n_in == 1:
        m[:, 0] = 1.0
        return m
    if n_out == 1:
        positions = np.array([(n_in - 1) / 2.0])
    else:
        positions = np.linspace(0.0, n_in - 1, n_out)
    for i, pos in enumerate(positions):
        lo = int(np.floor(pos))
        hi = min(lo + 1, n_in - 1)
        w = pos - lo
        m[i, lo] += 1.0 - w
        m[i, hi] += w
    return m
