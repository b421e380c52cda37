"""Evaluation metrics, test-set builders, and the generation-cost benchmark.

Test Set 1 re-runs an analytic generator on a seed stream disjoint from
training.  Test Set 2 goes the conventional route: GRF boundary data (and a
smoothed source when the equation has one), a fine-grid five-point solve,
and restriction of the solution to the evaluation lattice.
"""

import time
from dataclasses import dataclass

import numpy as np

from .data import Dataset, DatasetMeta, FieldSample, sample_rng, sample_seed_label
from .equations import SourceMode
from .fd import FdProblem, solve_fd, unknown_mask
from .geometry import (
    DomainKind,
    GridSpec,
    boundary_param_to_point,
    build_domain,
    project_to_boundary,
)
from .neural.losses import model_forward
from .neural.operators import DualDeepOnet
from .samplers.analytic import draw_mad1, generate_dataset
from .samplers.grf import GrfConfig, SmoothingConfig, grf_boundary_values, sample_smoothed_source


def relative_l2(pred, truth):
    """||pred - truth||_2 / ||truth||_2."""
    pred = np.asarray(pred, dtype=np.float64).ravel()
    truth = np.asarray(truth, dtype=np.float64).ravel()
    if pred.shape != truth.shape:
        raise ValueError("length mismatch between prediction and truth")
    denom = np.linalg.norm(truth)
    if denom == 0.0:
        raise ValueError("truth field has zero norm")
    return float(np.linalg.norm(pred - truth) / denom)


@dataclass(frozen=True)
class EvalReport:
    per_sample: tuple
    mean: float
    training_time: float | None
    final_training_loss: float | None
    model_provenance: dict | None
    dataset_provenance: dict

    def to_dict(self):
        return {
            "mean_relative_l2": self.mean,
            "per_sample_relative_l2": list(self.per_sample),
            "training_time": self.training_time,
            "final_training_loss": self.final_training_loss,
            "model": self.model_provenance,
            "dataset": self.dataset_provenance,
        }


def dataset_provenance(meta: DatasetMeta):
    return {
        "generator": meta.generator,
        "stream": meta.stream,
        "equation": meta.equation.name,
        "k": meta.equation.k,
        "domain": meta.domain_kind.value,
        "resolution": meta.resolution,
        "n_samples": meta.n_samples,
        "master_seed": meta.master_seed,
    }


def evaluate(model, dataset, model_provenance=None):
    """Per-sample relative L2 of the operator against stored solutions."""
    u = dataset.u_matrix
    if u is None:
        raise ValueError("dataset carries no solution values")
    domain = dataset.domain()
    f = dataset.f_matrix if isinstance(model, DualDeepOnet) else None
    pred = model_forward(model, dataset.g_matrix, domain.eval_points, f=f)
    errs = tuple(relative_l2(pred[i], u[i]) for i in range(len(dataset)))
    prov = model_provenance or {}
    return EvalReport(
        per_sample=errs,
        mean=float(np.mean(errs)),
        training_time=prov.get("training_time"),
        final_training_loss=prov.get("final_training_loss"),
        model_provenance=model_provenance,
        dataset_provenance=dataset_provenance(dataset.meta),
    )


def build_test_set_1(generator, eq, domain, n, seed, **kwargs):
    """Analytic test data from the given MAD generator on the test1 seed
    stream (disjoint from training streams for every master seed)."""
    if n < 1:
        raise ValueError("test set must contain at least one sample")
    return generate_dataset(generator, eq, domain, n, seed, stream="test1", **kwargs)


def _fine_resolution(kind, h_oracle, coarse_resolution):
    span = 2.0 if kind is DomainKind.UNIT_DISK else 1.0
    n_fine = round(span / h_oracle) + 1
    if abs((n_fine - 1) * h_oracle - span) > 1e-9:
        raise ValueError(f"h_oracle={h_oracle} does not tile the domain span {span}")
    stride, rem = divmod(n_fine - 1, coarse_resolution - 1)
    if rem != 0:
        raise ValueError(
            f"oracle grid ({n_fine}) does not refine the evaluation grid "
            f"({coarse_resolution})"
        )
    return n_fine, stride


def _dirichlet_nodes(domain, n_fine):
    """(index pairs, arc parameters) of every Dirichlet carrier node of the
    fine lattice, parameterized by projection onto the boundary."""
    fine = build_domain(domain.kind, GridSpec(n_fine, domain.boundary_count))
    mask = unknown_mask(domain.kind, n_fine)
    carriers = np.argwhere(~mask)
    pts = fine.lattice_points.reshape(n_fine, n_fine, 2)[carriers[:, 0], carriers[:, 1]]
    _, params = project_to_boundary(domain, pts)
    return carriers, params


def _restrict(u_fine, stride, domain):
    return u_fine[::stride, ::stride].ravel()[domain.eval_index]


def _interp_source_to_fine(domain, f_lattice, n_fine):
    from scipy.interpolate import RectBivariateSpline

    n = domain.resolution
    xs, ys = domain.lattice_axes()
    spline = RectBivariateSpline(xs, ys, f_lattice.reshape(n, n), kx=3, ky=3)
    fx = np.linspace(xs[0], xs[-1], n_fine)
    return spline(fx, fx)


def build_test_set_2(
    eq,
    domain,
    n,
    seed,
    h_oracle=0.005,
    grf=GrfConfig(),
    smoothing=SmoothingConfig(),
    tol=1e-10,
):
    """GRF inputs solved by the five-point oracle at h_oracle, downsampled to
    the evaluation lattice.

    The GRF is drawn jointly at the fine-lattice Dirichlet parameters and
    the Mb model parameters, so the stored g is an exact restriction of the
    boundary data the solver saw.
    """
    if n < 1:
        raise ValueError("test set must contain at least one sample")
    if domain.dim != 2:
        raise ValueError("test set 2 generation covers 2D domains")
    t0 = time.perf_counter()
    n_fine, stride = _fine_resolution(domain.kind, h_oracle, domain.resolution)
    carriers, params = _dirichlet_nodes(domain, n_fine)
    joint, inverse = np.unique(
        np.concatenate([params, domain.boundary_params]), return_inverse=True
    )
    idx_carriers = inverse[: len(params)]
    idx_model = inverse[len(params) :]
    sourced = eq.source_mode is SourceMode.GENERAL

    samples = []
    for i in range(n):
        draw = grf_boundary_values(domain, grf, seed, joint, stream="test2", index=i)
        bv = np.zeros((n_fine, n_fine))
        bv[carriers[:, 0], carriers[:, 1]] = draw[idx_carriers]
        f_lattice = None
        source = None
        if sourced:
            f_lattice = sample_smoothed_source(domain, smoothing, seed, stream="test2", index=i)
            source = _interp_source_to_fine(domain, f_lattice, n_fine)
        sol = solve_fd(
            FdProblem(domain.kind, n_fine, eq.k, boundary_values=bv, source=source), tol=tol
        )
        samples.append(
            FieldSample(
                g=draw[idx_model],
                f=f_lattice,
                u=_restrict(sol.u, stride, domain),
                seed=sample_seed_label(seed, "test2", i),
            )
        )
    meta = DatasetMeta(
        generator="fd",
        stream="test2",
        equation=eq,
        domain_kind=domain.kind,
        resolution=domain.resolution,
        boundary_count=domain.boundary_count,
        n_eval=domain.n_eval,
        n_lattice=domain.n_lattice,
        n_samples=n,
        master_seed=seed,
        wall_time=time.perf_counter() - t0,
    )
    return Dataset(meta=meta, samples=tuple(samples))


def bench_generation(eq, domain, n, seed, h_oracle=0.005, n_centers=None, tol=1e-10):
    """Wall-clock comparison: analytic generation of n records versus
    five-point solves of the n matched boundary-value problems at h_oracle."""
    if n == 0:
        return {
            "n": 0,
            "h_oracle": h_oracle,
            "t_mad": 0.0,
            "t_fd": 0.0,
            "ratio": None,
            "note": "ratio undefined for n = 0",
        }
    t0 = time.perf_counter()
    generate_dataset("mad1", eq, domain, n, seed, n_centers=n_centers)
    t_mad = time.perf_counter() - t0

    n_fine, stride = _fine_resolution(domain.kind, h_oracle, domain.resolution)
    count = n_centers or (400 if domain.dim == 3 else 100)
    t0 = time.perf_counter()
    for i in range(n):
        expansion = draw_mad1(sample_rng(seed, "train", i), eq, domain, count)
        carriers, params = _dirichlet_nodes(domain, n_fine)
        bv = np.zeros((n_fine, n_fine))
        bv[carriers[:, 0], carriers[:, 1]] = expansion.evaluate(
            boundary_param_to_point(domain, params)
        )
        sol = solve_fd(FdProblem(domain.kind, n_fine, eq.k, boundary_values=bv), tol=tol)
        _restrict(sol.u, stride, domain)
    t_fd = time.perf_counter() - t0
    return {
        "n": n,
        "h_oracle": h_oracle,
        "t_mad": t_mad,
        "t_fd": t_fd,
        "ratio": t_fd / t_mad,
        "per_solve": t_fd / n,
    }
