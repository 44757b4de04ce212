"""Network construction, initialization, optimization and checkpointing."""
from . import layers
from .checkpoint import CheckpointError, load_tensors, save_tensors
from .layers import LayerSpec, Network, build_network, init_parameters, network_forward
from .optim import AdamState, adam_step, weight_clip

__all__ = [
    "layers",
    "LayerSpec",
    "Network",
    "build_network",
    "init_parameters",
    "network_forward",
    "AdamState",
    "adam_step",
    "weight_clip",
    "save_tensors",
    "load_tensors",
    "CheckpointError",
]
