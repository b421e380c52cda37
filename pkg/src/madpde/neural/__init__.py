from .adam import AdamState, adam_step
from .losses import (
    loss_mad,
    loss_mad_and_grad,
    loss_pinn,
    loss_pinn_and_grad,
    model_forward,
    model_forward_with_laplacian,
)
from .mlp import ACTIVATIONS, Mlp
from .operators import DeepOnet, DualDeepOnet, make_operator
from .serialize import ModelFormatError, load_model, save_model
from .training import TrainResult, train

__all__ = [
    "ACTIVATIONS",
    "AdamState",
    "DeepOnet",
    "DualDeepOnet",
    "Mlp",
    "ModelFormatError",
    "TrainResult",
    "adam_step",
    "load_model",
    "loss_mad",
    "loss_mad_and_grad",
    "loss_pinn",
    "loss_pinn_and_grad",
    "make_operator",
    "model_forward",
    "model_forward_with_laplacian",
    "save_model",
    "train",
]
