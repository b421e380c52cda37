"""Input sampling for the PINN-style baseline: Gaussian-random-field
boundary data on the unrolled boundary and Gaussian-smoothed random source
fields on the lattice."""

import time
from dataclasses import dataclass

import numpy as np

from ..data import Dataset, DatasetMeta, FieldSample, sample_rng, sample_seed_label
from ..equations import SourceMode
from ..geometry import DomainKind


@dataclass(frozen=True)
class GrfConfig:
    length_scale: float = 0.1
    jitter: float = 1e-10

    def __post_init__(self):
        if not self.length_scale > 0:
            raise ValueError("length_scale must be positive")
        if self.jitter < 0:
            raise ValueError("jitter must be nonnegative")


@dataclass(frozen=True)
class SmoothingConfig:
    sigma: float = 5.0  # in grid-index units
    truncation: float = 4.0  # kernel support radius, in sigmas

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")


class GrfFactorizationError(RuntimeError):
    pass


def rbf_covariance(params, length_scale):
    d = params[:, None] - params[None, :]
    return np.exp(-(d * d) / (2.0 * length_scale**2))


def _cholesky_with_jitter(cov, jitter):
    for scale in (1.0, 1e2, 1e4):
        try:
            bump = jitter * scale
            return np.linalg.cholesky(cov + bump * np.eye(len(cov)))
        except np.linalg.LinAlgError:
            continue
    raise GrfFactorizationError(
        f"covariance factorization failed after jitter escalation to {jitter * 1e4:.1e}"
    )


def grf_boundary_values(domain, cfg, seed, params, *, stream="train", index=0):
    """Zero-mean GRF on the unrolled boundary, evaluated at the given
    arc-length parameters (sorted, within [0, L)).

    The draw happens jointly at (params, L); subtracting the linear
    interpolant between the values at t = 0 and t = L makes the wrapped
    endpoint values match exactly.
    """
    if domain.kind is DomainKind.UNIT_CUBE:
        raise ValueError("boundary GRF sampling is defined for 2D domains only")
    length = domain.arclength
    params = np.asarray(params, dtype=np.float64)
    if params.ndim != 1 or len(params) < 2:
        raise ValueError("need at least two boundary parameters")
    if np.any(params < 0) or np.any(params >= length):
        raise ValueError(f"parameters must lie in [0, {length})")
    ts = np.concatenate([params, [length]])
    cov = rbf_covariance(ts, cfg.length_scale)
    chol = _cholesky_with_jitter(cov, cfg.jitter)
    rng = sample_rng(seed, stream, index)
    z = chol @ rng.standard_normal(len(ts))
    line = z[0] + (z[-1] - z[0]) * (ts / length)
    return (z - line)[:-1]


def sample_grf_boundary(domain, cfg, seed, *, stream="train", index=0):
    """GRF boundary values at the domain's Mb boundary samples."""
    return grf_boundary_values(
        domain, cfg, seed, domain.boundary_params, stream=stream, index=index
    )


def _smoothing_matrix(n, cfg):
    radius = int(np.ceil(cfg.truncation * cfg.sigma))
    offsets = np.arange(-radius, radius + 1)
    w = np.exp(-(offsets**2) / (2.0 * cfg.sigma**2))
    mat = np.zeros((n, n))
    for j, weight in zip(offsets, w):
        mat += weight * np.eye(n, k=j)
    # renormalize each output row so constants pass through unchanged at the
    # edges (no wraparound, no zero-padding decay)
    mat /= mat.sum(axis=1, keepdims=True)
    return mat


def sample_smoothed_source(domain, cfg, seed, *, stream="train", index=0):
    """I.i.d. N(0,1) lattice noise smoothed by a truncated, renormalized
    Gaussian kernel applied separably along both axes; returned flattened in
    lattice order."""
    if domain.dim != 2:
        raise ValueError("source smoothing is defined on 2D grids only")
    n = domain.resolution
    rng = sample_rng(seed, stream, index, role=1)
    raw = rng.standard_normal((n, n))
    mat = _smoothing_matrix(n, cfg)
    return (mat @ raw @ mat.T).ravel()


def generate_pinn_dataset(
    eq,
    domain,
    n_samples,
    seed,
    *,
    grf=GrfConfig(),
    smoothing=SmoothingConfig(),
    stream="train",
):
    """(g, f) input records for PINN-loss training; no solution values.
    Source fields are drawn only for sourced equations."""
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    t0 = time.perf_counter()
    samples = []
    for i in range(n_samples):
        g = sample_grf_boundary(domain, grf, seed, stream=stream, index=i)
        f = None
        if eq.source_mode is SourceMode.GENERAL:
            f = sample_smoothed_source(domain, smoothing, seed, stream=stream, index=i)
        samples.append(
            FieldSample(g=g, f=f, u=None, seed=sample_seed_label(seed, stream, i))
        )
    meta = DatasetMeta(
        generator="pinn-grf",
        stream=stream,
        equation=eq,
        domain_kind=domain.kind,
        resolution=domain.resolution,
        boundary_count=domain.boundary_count,
        n_eval=domain.n_eval,
        n_lattice=domain.n_lattice,
        n_samples=n_samples,
        master_seed=seed,
        wall_time=time.perf_counter() - t0,
    )
    return Dataset(meta=meta, samples=tuple(samples))
