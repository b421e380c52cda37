"""Training loop: full-batch Adam by default, mini-batching behind a flag.
The model is updated in place; the per-epoch loss history is returned."""

import time
from dataclasses import dataclass

import numpy as np

from ..equations import SourceMode
from .adam import AdamState, adam_step
from .losses import loss_mad_and_grad, loss_pinn_and_grad
from .operators import DualDeepOnet


@dataclass
class TrainResult:
    history: list
    elapsed: float

    @property
    def final_loss(self):
        return self.history[-1] if self.history else None


def _batch_arrays(dataset, loss, model):
    domain = dataset.domain()
    g = dataset.g_matrix
    f_lat = dataset.f_matrix
    needs_f = isinstance(model, DualDeepOnet)
    if needs_f and f_lat is None:
        raise ValueError("dual operator training needs datasets with source fields")
    if loss == "mad":
        u = dataset.u_matrix
        if u is None:
            raise ValueError("MAD loss needs datasets with stored solutions")
        return {
            "g": g,
            "f": f_lat if needs_f else None,
            "u": u,
            "x": domain.eval_points,
        }
    if loss == "pinn":
        sourced = dataset.meta.equation.source_mode is SourceMode.GENERAL
        if sourced and f_lat is None:
            raise ValueError("PINN loss on a sourced equation needs source fields")
        f_res = None
        if f_lat is not None:
            f_res = f_lat[:, domain.eval_index]
        return {
            "g": g,
            "f": f_lat if needs_f else None,
            "f_res": f_res,
            "x_res": domain.eval_points,
            "x_bnd": domain.boundary_points,
            "k": dataset.meta.equation.k,
        }
    raise ValueError(f"unknown loss {loss!r}")


def train(
    model,
    dataset,
    loss="mad",
    epochs=10_000,
    lr=1e-4,
    seed=0,
    batch_size=None,
    w1=0.9,
    w2=0.1,
):
    arrays = _batch_arrays(dataset, loss, model)
    params = model.params
    state = AdamState.for_params(params, lr=lr)
    rng = np.random.default_rng(seed)
    n = len(dataset)
    history = []
    t0 = time.perf_counter()
    for _ in range(epochs):
        if batch_size is None or batch_size >= n:
            idx_batches = [slice(None)]
        else:
            order = rng.permutation(n)
            idx_batches = [order[i : i + batch_size] for i in range(0, n, batch_size)]
        epoch_loss = 0.0
        total = 0
        for idx in idx_batches:
            if loss == "mad":
                value, grads = loss_mad_and_grad(
                    model,
                    arrays["g"][idx],
                    arrays["u"][idx],
                    arrays["x"],
                    f=None if arrays["f"] is None else arrays["f"][idx],
                )
            else:
                value, grads = loss_pinn_and_grad(
                    model,
                    arrays["g"][idx],
                    arrays["x_res"],
                    arrays["x_bnd"],
                    arrays["k"],
                    w1=w1,
                    w2=w2,
                    f=None if arrays["f"] is None else arrays["f"][idx],
                    f_res=None if arrays["f_res"] is None else arrays["f_res"][idx],
                )
            adam_step(state, params, grads)
            size = n if isinstance(idx, slice) else len(idx)
            epoch_loss += value * size
            total += size
        history.append(epoch_loss / total)
    return TrainResult(history=history, elapsed=time.perf_counter() - t0)
