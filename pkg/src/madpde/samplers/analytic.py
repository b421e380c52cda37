"""Exact analytic solution samplers.

Three families of closed-form solutions of  lap(u) + k u = f:

* mad0 — random sine-activation networks [dim, 50, 50, 1]; u is the network,
  f is computed from exact layer-wise second derivatives, so (u, f, g) is
  consistent to machine precision for any k.
* mad1 — linear combinations of fundamental solutions centered outside the
  domain (log kernel in 2D, Newtonian kernel in 3D, J0/Y0 pairs for k > 0);
  source-free by construction.
* mad2 — sums of (A cos(a x) + B sin(a x))(C cosh(a y) + D sinh(a y)) terms,
  harmonic term by term (2D Laplace only).

All draws are deterministic functions of (master seed, stream, index).
"""

import time
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..data import Dataset, DatasetMeta, FieldSample, sample_rng, sample_seed_label
from ..equations import SourceMode
from ..geometry import exterior_centers

MAD0_HIDDEN = (50, 50)
DEFAULT_CENTERS_2D = 100
DEFAULT_CENTERS_3D = 400
DEFAULT_TERMS = 20
CENTER_OFFSET = 0.5
MAD2_FREQ_CAP = 6.0


@dataclass(frozen=True)
class SineNetSolution:
    """Fully connected network with sine activation on every layer,
    including the output; value / gradient / Laplacian are all exact."""

    weights: tuple
    biases: tuple

    @classmethod
    def draw(cls, rng, dim, hidden=MAD0_HIDDEN):
        sizes = (dim, *hidden, 1)
        weights, biases = [], []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            weights.append(rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=(fan_in, fan_out)))
            biases.append(rng.normal(0.0, 1.0, size=fan_out))
        return cls(weights=tuple(weights), biases=tuple(biases))

    @property
    def dim(self):
        return self.weights[0].shape[0]

    def evaluate(self, points):
        a = np.asarray(points, dtype=np.float64)
        for w, b in zip(self.weights, self.biases):
            a = np.sin(a @ w + b)
        return a[:, 0]

    def evaluate_with_laplacian(self, points):
        """Closed-form (u, lap u) by propagating per-axis first and second
        derivatives through each sine layer."""
        x = np.asarray(points, dtype=np.float64)
        dim = x.shape[1]
        a = x
        da = np.broadcast_to(np.eye(dim)[:, None, :], (dim, x.shape[0], dim)).copy()
        dda = np.zeros_like(da)
        for w, b in zip(self.weights, self.biases):
            z = a @ w + b
            dz = da @ w
            ddz = dda @ w
            s, c = np.sin(z), np.cos(z)
            a = s
            da = c * dz
            dda = -s * dz**2 + c * ddz
        return a[:, 0], dda.sum(axis=0)[:, 0]


@dataclass(frozen=True)
class FundamentalExpansion:
    """u(x) = sum_i c_i Phi(x, y_i) with all centers outside the closed
    domain; satisfies the source-free equation at every interior point."""

    k: float
    dim: int
    centers: np.ndarray
    coeffs: np.ndarray

    def evaluate(self, points):
        if self.k > 0:
            return kernels.expansion_helmholtz(
                points, self.centers, self.coeffs[:, 0], self.coeffs[:, 1], self.k
            )
        if self.dim == 3:
            return kernels.expansion_newton3d(points, self.centers, self.coeffs)
        return kernels.expansion_log2d(points, self.centers, self.coeffs)


@dataclass(frozen=True)
class TrigHyperbolicExpansion:
    """u(x, y) = sum_i (A_i cos(a_i x) + B_i sin(a_i x))
                       (C_i cosh(a_i y) + D_i sinh(a_i y))."""

    coeffs: np.ndarray  # (terms, 5) columns A, B, C, D, a

    def evaluate(self, points):
        pts = np.asarray(points, dtype=np.float64)
        x, y = pts[:, 0:1], pts[:, 1:2]
        big_a, big_b, big_c, big_d, a = (self.coeffs[:, i] for i in range(5))
        ax, ay = x * a, y * a
        return np.sum(
            (big_a * np.cos(ax) + big_b * np.sin(ax))
            * (big_c * np.cosh(ay) + big_d * np.sinh(ay)),
            axis=1,
        )


def draw_mad0(rng, dim):
    return SineNetSolution.draw(rng, dim)


def draw_mad1(rng, eq, domain, n_centers):
    centers = exterior_centers(domain, n_centers, CENTER_OFFSET)
    if eq.k > 0:
        coeffs = rng.standard_normal((n_centers, 2))
    else:
        coeffs = rng.standard_normal(n_centers)
    return FundamentalExpansion(k=eq.k, dim=domain.dim, centers=centers, coeffs=coeffs)


def draw_mad2(rng, n_terms):
    coeffs = rng.standard_normal((n_terms, 5))
    # cosh(a) overflows its useful range quickly; redraw frequencies past the cap
    while True:
        too_big = np.abs(coeffs[:, 4]) > MAD2_FREQ_CAP
        if not too_big.any():
            break
        coeffs[too_big, 4] = rng.standard_normal(int(too_big.sum()))
    return TrigHyperbolicExpansion(coeffs=coeffs)


def _require(cond, message):
    if not cond:
        raise ValueError(message)


def sample_mad0(eq, domain, seed, *, stream="train", index=0):
    _require(
        eq.source_mode is SourceMode.GENERAL,
        "mad0 generates sourced problems; use source_mode='general'",
    )
    rng = sample_rng(seed, stream, index)
    net = draw_mad0(rng, domain.dim)
    u = net.evaluate(domain.eval_points)
    g = net.evaluate(domain.boundary_points)
    val, lap = net.evaluate_with_laplacian(domain.lattice_points)
    f = lap + eq.k * val
    return FieldSample(g=g, f=f, u=u, seed=sample_seed_label(seed, stream, index))


def sample_mad1(eq, domain, seed, *, n_centers=None, stream="train", index=0):
    _require(
        eq.source_mode is SourceMode.ZERO,
        "mad1 generates source-free problems; use source_mode='zero'",
    )
    if eq.k > 0:
        _require(domain.dim == 2, "Helmholtz fundamental solutions are 2D only")
    if n_centers is None:
        n_centers = DEFAULT_CENTERS_3D if domain.dim == 3 else DEFAULT_CENTERS_2D
    _require(n_centers >= 1, "n_centers must be at least 1")
    rng = sample_rng(seed, stream, index)
    expansion = draw_mad1(rng, eq, domain, n_centers)
    u = expansion.evaluate(domain.eval_points)
    g = expansion.evaluate(domain.boundary_points)
    return FieldSample(g=g, f=None, u=u, seed=sample_seed_label(seed, stream, index))


def sample_mad2(domain, seed, *, n_terms=DEFAULT_TERMS, stream="train", index=0):
    _require(domain.dim == 2, "mad2 harmonics are 2D only")
    _require(n_terms >= 1, "n_terms must be at least 1")
    rng = sample_rng(seed, stream, index)
    expansion = draw_mad2(rng, n_terms)
    u = expansion.evaluate(domain.eval_points)
    g = expansion.evaluate(domain.boundary_points)
    return FieldSample(g=g, f=None, u=u, seed=sample_seed_label(seed, stream, index))


def check_compatible(generator, eq, domain):
    if generator == "mad0":
        _require(eq.source_mode is SourceMode.GENERAL, "mad0 requires source_mode='general'")
    elif generator == "mad1":
        _require(eq.source_mode is SourceMode.ZERO, "mad1 requires source_mode='zero'")
        if eq.k > 0:
            _require(domain.dim == 2, "Helmholtz mad1 is 2D only")
    elif generator == "mad2":
        _require(eq.source_mode is SourceMode.ZERO, "mad2 requires source_mode='zero'")
        _require(eq.k == 0, "mad2 solves the Laplace equation only (k = 0)")
        _require(domain.dim == 2, "mad2 harmonics are 2D only")
    else:
        raise ValueError(f"unknown analytic generator {generator!r}")


def generate_dataset(
    generator,
    eq,
    domain,
    n_samples,
    seed,
    *,
    n_centers=None,
    n_terms=DEFAULT_TERMS,
    stream="train",
):
    """n_samples independent records; per-sample streams are split from the
    master seed by (stream, index), so generation order does not matter."""
    _require(n_samples >= 1, "n_samples must be at least 1")
    check_compatible(generator, eq, domain)
    t0 = time.perf_counter()
    samples = []
    for i in range(n_samples):
        if generator == "mad0":
            s = sample_mad0(eq, domain, seed, stream=stream, index=i)
        elif generator == "mad1":
            s = sample_mad1(eq, domain, seed, n_centers=n_centers, stream=stream, index=i)
        else:
            s = sample_mad2(domain, seed, n_terms=n_terms, stream=stream, index=i)
        samples.append(s)
    wall = time.perf_counter() - t0
    meta = DatasetMeta(
        generator=generator,
        stream=stream,
        equation=eq,
        domain_kind=domain.kind,
        resolution=domain.resolution,
        boundary_count=domain.boundary_count,
        n_eval=domain.n_eval,
        n_lattice=domain.n_lattice,
        n_samples=n_samples,
        master_seed=seed,
        wall_time=wall,
    )
    return Dataset(meta=meta, samples=tuple(samples))
