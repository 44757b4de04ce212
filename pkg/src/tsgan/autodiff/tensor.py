"""Dense float32 tensors with reverse-mode automatic differentiation.

Gradient rules are themselves written in terms of tensor primitives, so a
gradient produced with ``create_graph=True`` carries its own graph and can be
differentiated again (reverse-over-reverse).  This is what the critic
gradient penalty needs: it optimizes the norm of an input gradient.

Graphs are acyclic and confined to the thread that built them.  Tensors
themselves are plain values and may be shared freely.
"""
from __future__ import annotations

import threading
from typing import Callable, Iterable, Optional, Sequence

import numpy as np


class ShapeError(ValueError):
    """Operand shapes do not conform to a primitive's shape rule."""


class UnsupportedPrimitiveError(RuntimeError):
    """A primitive without a second-order rule was reached while building a
    differentiable gradient graph."""


class NonScalarLossError(ValueError):
    """backward() was asked to differentiate a non-scalar tensor."""


_local = threading.local()


def grad_enabled() -> bool:
    return getattr(_local, "grad_enabled", True)


class no_grad:
    """Context manager that suppresses graph construction."""

    def __enter__(self):
        self._prev = grad_enabled()
        _local.grad_enabled = False
        return self

    def __exit__(self, *exc):
        _local.grad_enabled = self._prev
        return False


class Node:
    """Differentiation record: the op that produced a tensor, its inputs and
    a vector-Jacobian-product closure returning per-input gradient tensors."""

    __slots__ = ("op", "inputs", "vjp", "second_order")

    def __init__(
        self,
        op: str,
        inputs: Sequence["Tensor"],
        vjp: Callable[["Tensor"], tuple[Optional["Tensor"], ...]],
        second_order: bool = True,
    ):
        self.op = op
        self.inputs = tuple(inputs)
        self.vjp = vjp
        self.second_order = second_order


class Tensor:
    """n-dimensional float32 array, optionally tracked in a differentiation
    graph."""

    __slots__ = ("data", "requires_grad", "node")

    def __init__(self, data, requires_grad: bool = False):
        arr = np.asarray(data, dtype=np.float32)
        self.data = arr
        self.requires_grad = bool(requires_grad)
        self.node: Optional[Node] = None

    # -- introspection -----------------------------------------------------
    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        if self.data.size != 1:
            raise ValueError(f"item() on tensor of shape {self.shape}")
        return float(self.data.reshape(()))

    def numpy(self) -> np.ndarray:
        return self.data

    def detach(self) -> "Tensor":
        return Tensor(self.data, requires_grad=False)

    def copy(self) -> "Tensor":
        return Tensor(self.data.copy(), requires_grad=self.requires_grad)

    def __repr__(self) -> str:
        flag = ", requires_grad=True" if self.requires_grad else ""
        return f"Tensor(shape={self.shape}{flag})"

    def __len__(self) -> int:
        if self.ndim == 0:
            raise TypeError("len() of 0-d tensor")
        return self.shape[0]

    # Arithmetic operators are attached by tsgan.autodiff.ops at import time
    # to keep the primitive table in one module.


def raw_tensor(data) -> Tensor:
    """Leaf tensor that keeps the array's own dtype (oracle/test use)."""
    out = Tensor.__new__(Tensor)
    out.data = np.asarray(data)
    out.requires_grad = False
    out.node = None
    return out


def make_tensor(
    op: str,
    data: np.ndarray,
    inputs: Sequence[Tensor],
    vjp_builder: Callable[[], Callable],
    second_order: bool = True,
) -> Tensor:
    """Wrap a primitive's forward result, attaching a graph node when any
    input is tracked and grad mode is on.

    ``vjp_builder`` is only invoked when a node is actually needed, so the
    no-grad fast path allocates nothing beyond the output array.  The result
    keeps the dtype the forward computation produced: float32 leaves give
    float32 graphs, while the finite-difference oracle may push float64
    through the same primitives for reference-quality evaluations.
    """
    out = Tensor.__new__(Tensor)
    out.data = np.asarray(data)
    out.requires_grad = False
    out.node = None
    if grad_enabled() and any(t.requires_grad for t in inputs):
        out.requires_grad = True
        out.node = Node(op, inputs, vjp_builder(), second_order=second_order)
    return out


def _toposort(root: Tensor) -> list[Tensor]:
    """Post-order over the graph below ``root`` (root last), iterative."""
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        t, expanded = stack.pop()
        if expanded:
            order.append(t)
            continue
        if id(t) in seen:
            continue
        seen.add(id(t))
        stack.append((t, True))
        if t.node is not None:
            for parent in t.node.inputs:
                if id(parent) not in seen and parent.requires_grad:
                    stack.append((parent, False))
    return order


def backward(
    loss: Tensor,
    wrt: Iterable[Tensor],
    create_graph: bool = False,
) -> dict[Tensor, Tensor]:
    """Reverse-mode gradients of a scalar loss with respect to ``wrt``.

    Returns a map keyed by parameter identity; parameters the loss does not
    reach are absent (gradient zero).  With ``create_graph=True`` the returned
    gradients carry their own graphs and can be differentiated again.
    """
    if loss.size != 1:
        raise NonScalarLossError(
            f"loss must be scalar, got shape {loss.shape}"
        )
    wrt = list(wrt)
    grads = _accumulate_grads(loss, create_graph)
    return {p: grads[id(p)] for p in wrt if id(p) in grads}


def grad_with_graph(loss: Tensor, wrt: Tensor) -> Tensor:
    """Gradient of a scalar loss w.r.t. one tensor, as a differentiable
    tensor.

    The result carries a graph, so expressions built from it (e.g. a penalty
    on its norm) support a second backward pass.  A primitive on the path
    that lacks a second-order rule raises UnsupportedPrimitiveError rather
    than silently contributing zero.
    """
    if loss.size != 1:
        raise NonScalarLossError(
            f"loss must be scalar, got shape {loss.shape}"
        )
    grads = _accumulate_grads(loss, create_graph=True)
    got = grads.get(id(wrt))
    if got is None:
        from . import ops  # late import; ops depends on this module

        got = ops.zeros_like(wrt)
    return got


def _accumulate_grads(loss: Tensor, create_graph: bool) -> dict[int, Tensor]:
    from . import ops  # late import; ops depends on this module

    order = _toposort(loss)
    grads: dict[int, Tensor] = {
        id(loss): raw_tensor(np.ones(loss.shape, dtype=loss.data.dtype))
    }
    ctx = _NullCtx() if create_graph else no_grad()
    with ctx:
        for t in reversed(order):
            g = grads.get(id(t))
            if g is None or t.node is None:
                continue
            if create_graph and not t.node.second_order:
                raise UnsupportedPrimitiveError(
                    f"primitive '{t.node.op}' has no second-order rule"
                )
            input_grads = t.node.vjp(g)
            for parent, pg in zip(t.node.inputs, input_grads):
                if pg is None or not parent.requires_grad:
                    continue
                held = grads.get(id(parent))
                grads[id(parent)] = pg if held is None else ops.add(held, pg)
    return grads


class _NullCtx:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False
