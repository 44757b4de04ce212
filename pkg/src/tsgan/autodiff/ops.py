"""Primitive tensor operations and their gradient rules.

Every VJP below is expressed through these same primitives, which is what
makes gradients differentiable in turn.  Convolutions are compositions of
``unfold``/``fold`` (linear im2col and its adjoint) with ``matmul``, so they
inherit second-order support instead of needing bespoke rules.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .tensor import ShapeError, Tensor, make_tensor, raw_tensor

_f32 = np.float32


def _t(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(np.asarray(x, dtype=_f32))


def zeros_like(x: Tensor) -> Tensor:
    return Tensor(np.zeros(x.shape, dtype=_f32))  # gradients of unreached leaves stay float32


def ones_like(x: Tensor) -> Tensor:
    return Tensor(np.ones(x.shape, dtype=_f32))


# ---------------------------------------------------------------------------
# broadcasting helpers

def _check_broadcast(op: str, a: Tensor, b: Tensor) -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError(f"{op}: shapes {a.shape} and {b.shape} do not broadcast")


def sum_to(x, shape: Sequence[int]) -> Tensor:
    """Reduce ``x`` by summation down to ``shape`` (inverse of broadcasting)."""
    x = _t(x)
    shape = tuple(shape)
    if x.shape == shape:
        return x
    try:
        np.broadcast_shapes(shape, x.shape)
    except ValueError:
        raise ShapeError(f"sum-to: cannot reduce {x.shape} to {shape}")
    lead = x.ndim - len(shape)
    if lead < 0:
        raise ShapeError(f"sum-to: cannot reduce {x.shape} to {shape}")
    axes = tuple(range(lead)) + tuple(
        lead + i for i, n in enumerate(shape) if n == 1 and x.shape[lead + i] != 1
    )
    data = x.data.sum(axis=axes, keepdims=True).reshape(shape)

    def build():
        return lambda g: (broadcast_to(g, x.shape),)

    return make_tensor("sum-to", data, (x,), build)


def broadcast_to(x, shape: Sequence[int]) -> Tensor:
    x = _t(x)
    shape = tuple(shape)
    if x.shape == shape:
        return x
    try:
        data = np.ascontiguousarray(np.broadcast_to(x.data, shape))
    except ValueError:
        raise ShapeError(f"broadcast: cannot broadcast {x.shape} to {shape}")

    def build():
        return lambda g: (sum_to(g, x.shape),)

    return make_tensor("broadcast", data, (x,), build)


# ---------------------------------------------------------------------------
# elementwise arithmetic

def add(a, b) -> Tensor:
    a, b = _t(a), _t(b)
    _check_broadcast("add", a, b)
    data = a.data + b.data

    def build():
        return lambda g: (sum_to(g, a.shape), sum_to(g, b.shape))

    return make_tensor("add", data, (a, b), build)


def sub(a, b) -> Tensor:
    a, b = _t(a), _t(b)
    _check_broadcast("sub", a, b)
    data = a.data - b.data

    def build():
        return lambda g: (sum_to(g, a.shape), sum_to(neg(g), b.shape))

    return make_tensor("sub", data, (a, b), build)


def mul(a, b) -> Tensor:
    a, b = _t(a), _t(b)
    _check_broadcast("mul", a, b)
    data = a.data * b.data

    def build():
        return lambda g: (sum_to(mul(g, b), a.shape), sum_to(mul(g, a), b.shape))

    return make_tensor("mul", data, (a, b), build)


def div(a, b) -> Tensor:
    a, b = _t(a), _t(b)
    _check_broadcast("div", a, b)
    data = a.data / b.data

    def build():
        def vjp(g):
            ga = sum_to(div(g, b), a.shape)
            gb = sum_to(neg(div(mul(g, a), square(b))), b.shape)
            return ga, gb

        return vjp

    return make_tensor("div", data, (a, b), build)


def neg(a) -> Tensor:
    a = _t(a)

    def build():
        return lambda g: (neg(g),)

    return make_tensor("neg", -a.data, (a,), build)


def exp(a) -> Tensor:
    a = _t(a)
    out = make_tensor("exp", np.exp(a.data), (a,), lambda: None)
    if out.node is not None:
        out.node.vjp = lambda g: (mul(g, out),)
    return out


def log(a) -> Tensor:
    a = _t(a)

    def build():
        return lambda g: (div(g, a),)

    return make_tensor("log", np.log(a.data), (a,), build)


def tanh(a) -> Tensor:
    a = _t(a)
    out = make_tensor("tanh", np.tanh(a.data), (a,), lambda: None)
    if out.node is not None:
        out.node.vjp = lambda g: (mul(g, sub(1.0, square(out))),)
    return out


def sigmoid(a) -> Tensor:
    a = _t(a)
    data = 1.0 / (1.0 + np.exp(-a.data))
    out = make_tensor("sigmoid", data, (a,), lambda: None)
    if out.node is not None:
        out.node.vjp = lambda g: (mul(g, mul(out, sub(1.0, out))),)
    return out


def sqrt(a) -> Tensor:
    a = _t(a)
    out = make_tensor("sqrt", np.sqrt(a.data), (a,), lambda: None)
    if out.node is not None:
        out.node.vjp = lambda g: (div(g, mul(2.0, out)),)
    return out


def square(a) -> Tensor:
    a = _t(a)

    def build():
        return lambda g: (mul(g, mul(2.0, a)),)

    return make_tensor("square", a.data * a.data, (a,), build)


def leaky_relu(a, negative_slope: float = 0.2) -> Tensor:
    a = _t(a)
    slope = float(negative_slope)
    data = np.where(a.data >= 0, a.data, slope * a.data)

    def build():
        # Slope mask is piecewise-constant in the input, so it enters the
        # graph as a constant; the a.e. second derivative through it is zero.
        dt = a.data.dtype.type
        mask = raw_tensor(np.where(a.data >= 0, dt(1.0), dt(slope)))
        return lambda g: (mul(g, mask),)

    return make_tensor("leaky-relu", data, (a,), build)


# ---------------------------------------------------------------------------
# shape manipulation

def reshape(a, shape: Sequence[int]) -> Tensor:
    a = _t(a)
    shape = tuple(int(s) for s in shape)
    try:
        data = a.data.reshape(shape)
    except ValueError:
        raise ShapeError(f"reshape: cannot view {a.shape} as {shape}")

    def build():
        return lambda g: (reshape(g, a.shape),)

    return make_tensor("reshape", data, (a,), build)


def transpose(a, axes: Optional[Sequence[int]] = None) -> Tensor:
    """Permute axes; default swaps the last two (matrix transpose)."""
    a = _t(a)
    if axes is None:
        if a.ndim < 2:
            raise ShapeError(f"transpose: need >=2 dims, got {a.shape}")
        axes = tuple(range(a.ndim - 2)) + (a.ndim - 1, a.ndim - 2)
    axes = tuple(int(ax) for ax in axes)
    if sorted(axes) != list(range(a.ndim)):
        raise ShapeError(f"transpose: {axes} is not a permutation of {a.ndim} axes")
    inverse = tuple(int(i) for i in np.argsort(axes))

    def build():
        return lambda g: (transpose(g, inverse),)

    # view, not copy: BLAS consumers handle strided operands natively
    return make_tensor("transpose", a.data.transpose(axes), (a,), build)


def slice_(a, ranges: Sequence[tuple[int, int]]) -> Tensor:
    """Rectangular slice; ``ranges`` is one (start, stop) pair per axis."""
    a = _t(a)
    ranges = tuple((int(s), int(e)) for s, e in ranges)
    if len(ranges) != a.ndim:
        raise ShapeError(f"slice: {len(ranges)} ranges for {a.ndim}-d tensor")
    for (s, e), n in zip(ranges, a.shape):
        if not (0 <= s <= e <= n):
            raise ShapeError(f"slice: range ({s},{e}) out of bounds for extent {n}")
    key = tuple(slice(s, e) for s, e in ranges)
    data = np.ascontiguousarray(a.data[key])

    def build():
        return lambda g: (embed(g, a.shape, ranges),)

    return make_tensor("slice", data, (a,), build)


def embed(a, into_shape: Sequence[int], ranges: Sequence[tuple[int, int]]) -> Tensor:
    """Adjoint of slice: place ``a`` in a zero tensor of ``into_shape``."""
    a = _t(a)
    into_shape = tuple(int(s) for s in into_shape)
    ranges = tuple((int(s), int(e)) for s, e in ranges)
    expected = tuple(e - s for s, e in ranges)
    if expected != a.shape:
        raise ShapeError(f"embed: tensor {a.shape} does not fit ranges {ranges}")
    data = np.zeros(into_shape, dtype=a.data.dtype)
    data[tuple(slice(s, e) for s, e in ranges)] = a.data

    def build():
        return lambda g: (slice_(g, ranges),)

    return make_tensor("embed", data, (a,), build)


def concat(tensors: Sequence, axis: int = 0) -> Tensor:
    parts = [_t(x) for x in tensors]
    if not parts:
        raise ShapeError("concat: empty input list")
    axis = axis % parts[0].ndim
    base = list(parts[0].shape)
    for p in parts[1:]:
        other = list(p.shape)
        if len(other) != len(base) or any(
            i != axis and other[i] != base[i] for i in range(len(base))
        ):
            raise ShapeError(
                f"concat: shape {tuple(other)} incompatible with {tuple(base)} on axis {axis}"
            )
    data = np.concatenate([p.data for p in parts], axis=axis)

    def build():
        def vjp(g):
            grads = []
            offset = 0
            for p in parts:
                n = p.shape[axis]
                ranges = [
                    (offset, offset + n) if i == axis else (0, dim)
                    for i, dim in enumerate(g.shape)
                ]
                grads.append(slice_(g, ranges))
                offset += n
            return tuple(grads)

        return vjp

    return make_tensor("concat", data, parts, build)


# ---------------------------------------------------------------------------
# reductions

def _norm_axes(axis, ndim: int) -> tuple[int, ...]:
    if axis is None:
        return tuple(range(ndim))
    if isinstance(axis, int):
        axis = (axis,)
    return tuple(sorted(a % ndim for a in axis))


def sum(a, axis=None, keepdims: bool = False) -> Tensor:  # noqa: A001 - matches the primitive name
    a = _t(a)
    axes = _norm_axes(axis, a.ndim)
    data = a.data.sum(axis=axes, keepdims=keepdims)
    kept_shape = tuple(
        1 if i in axes else n for i, n in enumerate(a.shape)
    )

    def build():
        def vjp(g):
            gk = g if keepdims else reshape(g, kept_shape)
            return (broadcast_to(gk, a.shape),)

        return vjp

    return make_tensor("sum", data, (a,), build)


def mean(a, axis=None, keepdims: bool = False) -> Tensor:
    a = _t(a)
    axes = _norm_axes(axis, a.ndim)
    count = 1
    for ax in axes:
        count *= a.shape[ax]
    return mul(sum(a, axis=axes, keepdims=keepdims), 1.0 / count)


def l2_norm(a, axis=None, keepdims: bool = False, eps: float = 0.0) -> Tensor:
    """Euclidean norm over the given axes.

    ``eps`` stabilizes the square root's gradient at zero vectors (the
    gradient-penalty path passes a tiny value)."""
    total = sum(square(a), axis=axis, keepdims=keepdims)
    if eps:
        total = add(total, float(eps))
    return sqrt(total)


# ---------------------------------------------------------------------------
# matmul

def matmul(a, b) -> Tensor:
    a, b = _t(a), _t(b)
    if a.ndim < 2 or b.ndim < 2:
        raise ShapeError(f"matmul: need >=2-d operands, got {a.shape} @ {b.shape}")
    if a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul: inner extents differ, {a.shape} @ {b.shape}")
    try:
        np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    except ValueError:
        raise ShapeError(f"matmul: batch extents differ, {a.shape} @ {b.shape}")
    data = np.matmul(a.data, b.data)

    def build():
        def vjp(g):
            ga = sum_to(matmul(g, transpose(b)), a.shape)
            gb = sum_to(matmul(transpose(a), g), b.shape)
            return ga, gb

        return vjp

    return make_tensor("matmul", data, (a, b), build)


# ---------------------------------------------------------------------------
# im2col / col2im

def _unfold1d_geometry(op: str, length: int, kernel: int, stride: int, padding: int) -> int:
    padded = length + 2 * padding
    if kernel < 1 or stride < 1 or padding < 0:
        raise ShapeError(f"{op}: bad geometry kernel={kernel} stride={stride} padding={padding}")
    if padded < kernel:
        raise ShapeError(f"{op}: window {kernel} exceeds padded length {padded}")
    return (padded - kernel) // stride + 1


def unfold1d(x, kernel: int, stride: int = 1, padding: int = 0) -> Tensor:
    """Extract sliding windows: (B, C, L) -> (B, C*kernel, n_positions)."""
    x = _t(x)
    if x.ndim != 3:
        raise ShapeError(f"unfold1d: expected (B, C, L), got {x.shape}")
    batch, channels, length = x.shape
    n_pos = _unfold1d_geometry("unfold1d", length, kernel, stride, padding)
    xp = np.pad(x.data, ((0, 0), (0, 0), (padding, padding))) if padding else x.data
    s0, s1, s2 = xp.strides
    windows = np.lib.stride_tricks.as_strided(
        xp,
        shape=(batch, channels, n_pos, kernel),
        strides=(s0, s1, stride * s2, s2),
    )
    data = np.ascontiguousarray(windows.transpose(0, 1, 3, 2)).reshape(
        batch, channels * kernel, n_pos
    )

    def build():
        return lambda g: (fold1d(g, length, kernel, stride, padding),)

    return make_tensor("unfold1d", data, (x,), build)


def fold1d(cols, out_len: int, kernel: int, stride: int = 1, padding: int = 0) -> Tensor:
    """Adjoint of unfold1d: overlap-add columns back to (B, C, out_len)."""
    cols = _t(cols)
    if cols.ndim != 3 or cols.shape[1] % kernel != 0:
        raise ShapeError(f"fold1d: expected (B, C*{kernel}, n), got {cols.shape}")
    batch, ck, n_pos = cols.shape
    channels = ck // kernel
    expect = _unfold1d_geometry("fold1d", out_len, kernel, stride, padding)
    if expect != n_pos:
        raise ShapeError(
            f"fold1d: {n_pos} positions inconsistent with out_len={out_len} "
            f"kernel={kernel} stride={stride} padding={padding}"
        )
    padded = out_len + 2 * padding
    buf = np.zeros((batch, channels, padded), dtype=cols.data.dtype)
    c4 = cols.data.reshape(batch, channels, kernel, n_pos)
    for k in range(kernel):
        buf[:, :, k : k + stride * n_pos : stride] += c4[:, :, k, :]
    data = buf[:, :, padding : padded - padding] if padding else buf
    data = np.ascontiguousarray(data)

    def build():
        return lambda g: (unfold1d(g, kernel, stride, padding),)

    return make_tensor("fold1d", data, (cols,), build)


def unfold2d(
    x, kernel: tuple[int, int], stride: tuple[int, int] = (1, 1), padding: tuple[int, int] = (0, 0)
) -> Tensor:
    """Extract sliding patches: (B, C, H, W) -> (B, C*kh*kw, Ho*Wo)."""
    x = _t(x)
    if x.ndim != 4:
        raise ShapeError(f"unfold2d: expected (B, C, H, W), got {x.shape}")
    kh, kw = kernel
    sh, sw = stride
    ph, pw = padding
    batch, channels, height, width = x.shape
    out_h = _unfold1d_geometry("unfold2d", height, kh, sh, ph)
    out_w = _unfold1d_geometry("unfold2d", width, kw, sw, pw)
    xp = (
        np.pad(x.data, ((0, 0), (0, 0), (ph, ph), (pw, pw)))
        if (ph or pw)
        else x.data
    )
    s0, s1, s2, s3 = xp.strides
    windows = np.lib.stride_tricks.as_strided(
        xp,
        shape=(batch, channels, out_h, out_w, kh, kw),
        strides=(s0, s1, sh * s2, sw * s3, s2, s3),
    )
    data = np.ascontiguousarray(windows.transpose(0, 1, 4, 5, 2, 3)).reshape(
        batch, channels * kh * kw, out_h * out_w
    )

    def build():
        return lambda g: (fold2d(g, (height, width), kernel, stride, padding),)

    return make_tensor("unfold2d", data, (x,), build)


def fold2d(
    cols,
    out_hw: tuple[int, int],
    kernel: tuple[int, int],
    stride: tuple[int, int] = (1, 1),
    padding: tuple[int, int] = (0, 0),
) -> Tensor:
    """Adjoint of unfold2d: overlap-add patches back to (B, C, H, W)."""
    cols = _t(cols)
    kh, kw = kernel
    sh, sw = stride
    ph, pw = padding
    out_h, out_w = out_hw
    if cols.ndim != 3 or cols.shape[1] % (kh * kw) != 0:
        raise ShapeError(f"fold2d: expected (B, C*{kh}*{kw}, n), got {cols.shape}")
    batch, ckk, n_pos = cols.shape
    channels = ckk // (kh * kw)
    pos_h = _unfold1d_geometry("fold2d", out_h, kh, sh, ph)
    pos_w = _unfold1d_geometry("fold2d", out_w, kw, sw, pw)
    if pos_h * pos_w != n_pos:
        raise ShapeError(
            f"fold2d: {n_pos} positions inconsistent with out={out_hw} "
            f"kernel={kernel} stride={stride} padding={padding}"
        )
    padded_h, padded_w = out_h + 2 * ph, out_w + 2 * pw
    buf = np.zeros((batch, channels, padded_h, padded_w), dtype=cols.data.dtype)
    c6 = cols.data.reshape(batch, channels, kh, kw, pos_h, pos_w)
    for i in range(kh):
        for j in range(kw):
            buf[:, :, i : i + sh * pos_h : sh, j : j + sw * pos_w : sw] += c6[:, :, i, j]
    data = buf[:, :, ph : padded_h - ph if ph else padded_h, pw : padded_w - pw if pw else padded_w]
    data = np.ascontiguousarray(data)

    def build():
        return lambda g: (unfold2d(g, kernel, stride, padding),)

    return make_tensor("fold2d", data, (cols,), build)


# ---------------------------------------------------------------------------
# convolutions (compositions of unfold/fold + matmul, so second-order safe)

def conv1d(x, weight, bias=None, stride: int = 1, padding: int = 0) -> Tensor:
    """Cross-correlation over the last axis: (B, C, L) * (F, C, K) -> (B, F, L')."""
    x, weight = _t(x), _t(weight)
    if x.ndim != 3 or weight.ndim != 3:
        raise ShapeError(f"conv1d: expected (B,C,L) and (F,C,K), got {x.shape}, {weight.shape}")
    if x.shape[1] != weight.shape[1]:
        raise ShapeError(
            f"conv1d: input channels {x.shape[1]} != kernel channels {weight.shape[1]}"
        )
    filters, channels, kernel = weight.shape
    cols = unfold1d(x, kernel, stride, padding)
    out = matmul(reshape(weight, (filters, channels * kernel)), cols)
    if bias is not None:
        out = add(out, reshape(_t(bias), (filters, 1)))
    return out


def conv2d(x, weight, bias=None, stride=(1, 1), padding=(0, 0)) -> Tensor:
    """Cross-correlation over the last two axes: (B,C,H,W) * (F,C,kh,kw)."""
    x, weight = _t(x), _t(weight)
    if x.ndim != 4 or weight.ndim != 4:
        raise ShapeError(f"conv2d: expected (B,C,H,W) and (F,C,kh,kw), got {x.shape}, {weight.shape}")
    if x.shape[1] != weight.shape[1]:
        raise ShapeError(
            f"conv2d: input channels {x.shape[1]} != kernel channels {weight.shape[1]}"
        )
    filters, channels, kh, kw = weight.shape
    stride = _pair(stride)
    padding = _pair(padding)
    out_h = _unfold1d_geometry("conv2d", x.shape[2], kh, stride[0], padding[0])
    out_w = _unfold1d_geometry("conv2d", x.shape[3], kw, stride[1], padding[1])
    cols = unfold2d(x, (kh, kw), stride, padding)
    out = matmul(reshape(weight, (filters, channels * kh * kw)), cols)
    out = reshape(out, (x.shape[0], filters, out_h, out_w))
    if bias is not None:
        out = add(out, reshape(_t(bias), (filters, 1, 1)))
    return out


def conv_transpose1d(x, weight, bias=None, stride: int = 1, padding: int = 0) -> Tensor:
    """Transposed 1-d convolution: (B, C, L) * (C, F, K) -> (B, F, L')."""
    x, weight = _t(x), _t(weight)
    if x.ndim != 3 or weight.ndim != 3:
        raise ShapeError(
            f"transposed-conv1d: expected (B,C,L) and (C,F,K), got {x.shape}, {weight.shape}"
        )
    if x.shape[1] != weight.shape[0]:
        raise ShapeError(
            f"transposed-conv1d: input channels {x.shape[1]} != kernel channels {weight.shape[0]}"
        )
    channels, filters, kernel = weight.shape
    length = x.shape[2]
    out_len = (length - 1) * stride + kernel - 2 * padding
    if out_len < 1:
        raise ShapeError(f"transposed-conv1d: non-positive output length {out_len}")
    cols = matmul(transpose(reshape(weight, (channels, filters * kernel))), x)
    out = fold1d(cols, out_len, kernel, stride, padding)
    if bias is not None:
        out = add(out, reshape(_t(bias), (filters, 1)))
    return out


def conv_transpose2d(x, weight, bias=None, stride=(1, 1), padding=(0, 0)) -> Tensor:
    """Transposed 2-d convolution: (B, C, H, W) * (C, F, kh, kw) -> (B, F, H', W')."""
    x, weight = _t(x), _t(weight)
    if x.ndim != 4 or weight.ndim != 4:
        raise ShapeError(
            f"transposed-conv2d: expected (B,C,H,W) and (C,F,kh,kw), got {x.shape}, {weight.shape}"
        )
    if x.shape[1] != weight.shape[0]:
        raise ShapeError(
            f"transposed-conv2d: input channels {x.shape[1]} != kernel channels {weight.shape[0]}"
        )
    channels, filters, kh, kw = weight.shape
    stride = _pair(stride)
    padding = _pair(padding)
    batch, _, height, width = x.shape
    out_h = (height - 1) * stride[0] + kh - 2 * padding[0]
    out_w = (width - 1) * stride[1] + kw - 2 * padding[1]
    if out_h < 1 or out_w < 1:
        raise ShapeError(f"transposed-conv2d: non-positive output extents ({out_h},{out_w})")
    x_flat = reshape(x, (batch, channels, height * width))
    cols = matmul(transpose(reshape(weight, (channels, filters * kh * kw))), x_flat)
    out = fold2d(cols, (out_h, out_w), (kh, kw), stride, padding)
    if bias is not None:
        out = add(out, reshape(_t(bias), (filters, 1, 1)))
    return out


def _pair(v) -> tuple[int, int]:
    if isinstance(v, (tuple, list)):
        a, b = v
        return int(a), int(b)
    return int(v), int(v)


# ---------------------------------------------------------------------------
# dispatch table

PRIMITIVES = {
    "add": add,
    "sub": sub,
    "mul": mul,
    "div": div,
    "neg": neg,
    "matmul": matmul,
    "conv1d": conv1d,
    "conv2d": conv2d,
    "transposed-conv1d": conv_transpose1d,
    "transposed-conv2d": conv_transpose2d,
    "leaky-relu": leaky_relu,
    "tanh": tanh,
    "sigmoid": sigmoid,
    "exp": exp,
    "log": log,
    "sum": sum,
    "mean": mean,
    "reshape": reshape,
    "slice": slice_,
    "concat": concat,
    "broadcast": broadcast_to,
    "sum-to": sum_to,
    "square": square,
    "sqrt": sqrt,
    "l2-norm-over-axis": l2_norm,
    "transpose": transpose,
    "embed": embed,
    "unfold1d": unfold1d,
    "fold1d": fold1d,
    "unfold2d": unfold2d,
    "fold2d": fold2d,
}


def primitive_forward(op: str, inputs: Sequence, attrs: Optional[dict] = None) -> Tensor:
    """Apply a primitive by name.  ``inputs`` are positional tensors, ``attrs``
    keyword attributes (stride, axis, shape, ...)."""
    fn = PRIMITIVES.get(op)
    if fn is None:
        raise ValueError(f"unknown primitive '{op}'")
    if op == "concat":
        return fn(inputs, **(attrs or {}))
    return fn(*inputs, **(attrs or {}))


# ---------------------------------------------------------------------------
# operator sugar on Tensor

def _install_operators() -> None:
    Tensor.__add__ = lambda self, other: add(self, other)
    Tensor.__radd__ = lambda self, other: add(other, self)
    Tensor.__sub__ = lambda self, other: sub(self, other)
    Tensor.__rsub__ = lambda self, other: sub(other, self)
    Tensor.__mul__ = lambda self, other: mul(self, other)
    Tensor.__rmul__ = lambda self, other: mul(other, self)
    Tensor.__truediv__ = lambda self, other: div(self, other)
    Tensor.__rtruediv__ = lambda self, other: div(other, self)
    Tensor.__neg__ = lambda self: neg(self)
    Tensor.__matmul__ = lambda self, other: matmul(self, other)
    Tensor.sum = lambda self, axis=None, keepdims=False: sum(self, axis, keepdims)
    Tensor.mean = lambda self, axis=None, keepdims=False: mean(self, axis, keepdims)
    Tensor.reshape = lambda self, shape: reshape(self, shape)


_install_operators()
