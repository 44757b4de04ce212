"""Reverse-mode automatic differentiation over dense float32 tensors."""
from .oracle import finite_difference_oracle
from .tensor import (
    NonScalarLossError,
    ShapeError,
    Tensor,
    UnsupportedPrimitiveError,
    backward,
    grad_with_graph,
    no_grad,
)
from . import ops
from .ops import primitive_forward

__all__ = [
    "Tensor",
    "ShapeError",
    "NonScalarLossError",
    "UnsupportedPrimitiveError",
    "backward",
    "grad_with_graph",
    "no_grad",
    "ops",
    "primitive_forward",
    "finite_difference_oracle",
]
