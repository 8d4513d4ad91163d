"""From-scratch recurrent models: layers, training, checkpoints."""

from .checkpoint import FORMAT_VERSION, Checkpoint, load_checkpoint, save_checkpoint
from .layers import (
    AdditiveAttention,
    BiGru,
    Dense,
    GruCell,
    attend,
    glorot_uniform,
    gru_step,
    sigmoid,
    softmax,
)
from .model import LayeredModel, LinearClassifier, sigmoid_bce, softmax_cross_entropy
from .training import TrainConfig, grad_check, train

__all__ = [
    "FORMAT_VERSION",
    "Checkpoint",
    "load_checkpoint",
    "save_checkpoint",
    "AdditiveAttention",
    "BiGru",
    "Dense",
    "GruCell",
    "attend",
    "glorot_uniform",
    "gru_step",
    "sigmoid",
    "softmax",
    "LayeredModel",
    "LinearClassifier",
    "sigmoid_bce",
    "softmax_cross_entropy",
    "TrainConfig",
    "grad_check",
    "train",
]
