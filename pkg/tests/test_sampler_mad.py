import numpy as np
import pytest

from madpde.data import sample_rng, serialize_dataset
from madpde.equations import EquationSpec
from madpde.fd import fd_residual
from madpde.geometry import GridSpec, build_domain
from madpde.samplers import generate_dataset, sample_mad0, sample_mad1, sample_mad2
from madpde.samplers.analytic import (
    FundamentalExpansion,
    SineNetSolution,
    TrigHyperbolicExpansion,
    draw_mad0,
    draw_mad1,
    draw_mad2,
)


def _grid_field(fn, domain):
    n = domain.resolution
    return fn(domain.lattice_points).reshape(n, n)


def _refinement_ratio(fn, k, res_coarse=51, res_fine=101):
    norms = []
    for res in (res_coarse, res_fine):
        d = build_domain("square", GridSpec(res))
        u = _grid_field(fn, d)
        r = fd_residual(u, k, d.spacing)
        norms.append(np.linalg.norm(r) / np.linalg.norm(u))
    return norms[0] / norms[1]


# -- mad0 ---------------------------------------------------------------


def test_mad0_zero_network_hook(square21):
    net = SineNetSolution(
        weights=tuple(np.zeros((a, b)) for a, b in ((2, 50), (50, 50), (50, 1))),
        biases=(np.zeros(50), np.zeros(50), np.zeros(1)),
    )
    assert np.all(net.evaluate(square21.eval_points) == 0.0)
    val, lap = net.evaluate_with_laplacian(square21.lattice_points)
    assert np.all(val == 0.0) and np.all(lap == 0.0)


def _fd_laplacian_field(u):
    return u[2:, 1:-1] + u[:-2, 1:-1] + u[1:-1, 2:] + u[1:-1, :-2] - 4.0 * u[1:-1, 1:-1]


def test_mad0_source_matches_fd_laplacian(rng):
    # seed-42 network, k = 1: analytic f against the five-point Laplacian at
    # h = 0.02, Richardson-corrected with the h = 0.01 evaluation
    eq = EquationSpec.helmholtz(1.0, "general")
    d51 = build_domain("square", GridSpec(51))
    s = sample_mad0(eq, d51, 42)
    f = s.f.reshape(51, 51)
    net = draw_mad0(sample_rng(42, "train", 0), 2)

    d101 = build_domain("square", GridSpec(101))
    u51 = _grid_field(net.evaluate, d51)
    u101 = _grid_field(net.evaluate, d101)
    lap51 = _fd_laplacian_field(u51) / d51.spacing**2
    lap101 = _fd_laplacian_field(u101) / d101.spacing**2
    rich = (4.0 * lap101[1::2, 1::2] - lap51) / 3.0  # shared coarse nodes
    estimate = rich + 1.0 * u51[1:-1, 1:-1]
    target = f[1:-1, 1:-1]
    scale = np.maximum(np.abs(target), np.sqrt(np.mean(target**2)))
    rel = np.abs(estimate - target) / scale
    idx = rng.integers(0, rel.size, size=50)
    assert np.all(rel.ravel()[idx] < 1e-4)

    # and the plain residual contracts at second order
    norms = []
    for d, u in ((d51, u51), (d101, u101)):
        val, lap = net.evaluate_with_laplacian(d.lattice_points)
        fa = (lap + 1.0 * val).reshape(d.resolution, d.resolution)
        r = fd_residual(u, 1.0, d.spacing, f=fa)
        norms.append(np.linalg.norm(r) / np.linalg.norm(fa[1:-1, 1:-1]))
    assert norms[0] < 1e-3
    assert 3.2 < norms[0] / norms[1] < 4.8


def test_mad0_requires_general_source(square21):
    with pytest.raises(ValueError):
        sample_mad0(EquationSpec.laplace(), square21, 1)


def test_mad0_deterministic(square21):
    eq = EquationSpec.poisson()
    a = sample_mad0(eq, square21, 7, index=3)
    b = sample_mad0(eq, square21, 7, index=3)
    assert np.array_equal(a.u, b.u)
    assert np.array_equal(a.f, b.f)
    assert np.array_equal(a.g, b.g)
    assert a.seed == b.seed


# -- mad1 ---------------------------------------------------------------


def test_mad1_single_log_center():
    e = FundamentalExpansion(
        k=0.0, dim=2, centers=np.array([[1.5, 0.5]]), coeffs=np.array([1.0])
    )
    assert e.evaluate(np.array([[0.5, 0.5]]))[0] == 0.0  # unit distance
    r = 0.25
    val = e.evaluate(np.array([[1.5 - r, 0.5]]))[0]
    assert val == pytest.approx(np.log(r) / (2 * np.pi), abs=1e-14)


def test_mad1_newton_center():
    e = FundamentalExpansion(
        k=0.0, dim=3, centers=np.array([[0.5, 0.5, 2.0]]), coeffs=np.array([1.0])
    )
    assert e.evaluate(np.array([[0.5, 0.5, 1.0]]))[0] == pytest.approx(
        -1 / (4 * np.pi), abs=1e-14
    )


@pytest.mark.parametrize("k", [0.0, 1.0, 10.0, 100.0])
def test_mad1_residual_contracts_under_refinement(k):
    eq = EquationSpec(k, "zero")
    d = build_domain("square", GridSpec(51))
    exp = draw_mad1(sample_rng(7, "train", 0), eq, d, 100)
    assert 3.2 < _refinement_ratio(exp.evaluate, k) < 4.8


def test_mad1_boundary_consistency(square21):
    eq = EquationSpec.helmholtz(10.0)
    s = sample_mad1(eq, square21, 5, index=2)
    exp = draw_mad1(sample_rng(5, "train", 2), eq, square21, 100)
    assert np.array_equal(s.g, exp.evaluate(square21.boundary_points))
    assert np.array_equal(s.u, exp.evaluate(square21.eval_points))


def test_mad1_rejects_sourced_equation(square21):
    with pytest.raises(ValueError):
        sample_mad1(EquationSpec.poisson(), square21, 1)


def test_mad1_helmholtz_3d_rejected():
    cube = build_domain("cube3d", GridSpec(6))
    with pytest.raises(ValueError):
        sample_mad1(EquationSpec.helmholtz(4.0), cube, 1)


def test_mad1_3d_laplace_sample():
    cube = build_domain("cube3d", GridSpec(6))
    s = sample_mad1(EquationSpec.laplace(), cube, 11, n_centers=20)
    assert s.u.shape == (6**3,)
    assert s.g.shape == (cube.boundary_count,)
    assert np.all(np.isfinite(s.u))


# -- mad2 ---------------------------------------------------------------


def test_mad2_constant_term():
    t = TrigHyperbolicExpansion(coeffs=np.array([[1.0, 0, 1.0, 0, 0.0]]))
    pts = np.array([[0.3, 0.7], [0.9, 0.1]])
    assert np.allclose(t.evaluate(pts), 1.0)


def test_mad2_sin_sinh_term():
    t = TrigHyperbolicExpansion(coeffs=np.array([[0, 1.0, 0, 1.0, 1.0]]))
    assert t.evaluate(np.array([[np.pi / 6, 0.0]]))[0] == 0.0
    x, y = 0.4, 0.8
    assert t.evaluate(np.array([[x, y]]))[0] == pytest.approx(
        np.sin(x) * np.sinh(y), abs=1e-14
    )


def test_mad2_residual_contracts_under_refinement():
    exp = draw_mad2(sample_rng(3, "train", 0), 10)
    assert 3.2 < _refinement_ratio(exp.evaluate, 0.0) < 4.8


def test_mad2_frequency_cap():
    for i in range(200):
        exp = draw_mad2(sample_rng(17, "train", i), 8)
        assert np.all(np.abs(exp.coeffs[:, 4]) <= 6.0)


def test_mad2_3d_rejected():
    cube = build_domain("cube3d", GridSpec(6))
    with pytest.raises(ValueError):
        sample_mad2(cube, 1)


# -- generate_dataset ---------------------------------------------------


def test_generate_dataset_2000_laplace_residuals(square51):
    eq = EquationSpec.laplace()
    ds = generate_dataset("mad1", eq, square51, 2000, 77)
    assert len(ds) == 2000
    h = square51.spacing
    # every record satisfies the source-free equation to the stencil's
    # accuracy; a subsample is additionally put through the refinement test
    for s in ds.samples:
        u = s.u.reshape(51, 51)
        rel = np.linalg.norm(fd_residual(u, 0.0, h)) / np.linalg.norm(u)
        assert rel < 5e-2
    for i in range(0, 2000, 80):
        exp = draw_mad1(sample_rng(77, "train", i), eq, square51, 100)
        assert 3.2 < _refinement_ratio(exp.evaluate, 0.0) < 4.8


def test_generate_dataset_incompatible_combinations():
    d = build_domain("square", GridSpec(11))
    with pytest.raises(ValueError):
        generate_dataset("mad2", EquationSpec.helmholtz(1.0), d, 1, 0)
    with pytest.raises(ValueError):
        generate_dataset("mad0", EquationSpec.laplace(), d, 1, 0)
    with pytest.raises(ValueError):
        generate_dataset("mad1", EquationSpec.poisson(), d, 1, 0)


def test_generation_wall_time_order_of_magnitude(square51):
    ds = generate_dataset("mad1", EquationSpec.helmholtz(100.0), square51, 200, 5)
    assert ds.meta.wall_time < 30.0


def test_dataset_determinism_bytes(square21):
    eq = EquationSpec.laplace()
    a = generate_dataset("mad1", eq, square21, 4, 123)
    b = generate_dataset("mad1", eq, square21, 4, 123)
    assert serialize_dataset(a, wall_time=0.0) == serialize_dataset(b, wall_time=0.0)


def test_train_test_seed_streams_disjoint(square21):
    eq = EquationSpec.laplace()
    tr = generate_dataset("mad1", eq, square21, 64, 9, stream="train")
    te = generate_dataset("mad1", eq, square21, 64, 9, stream="test1")
    assert not ({s.seed for s in tr.samples} & {s.seed for s in te.samples})


def test_coefficient_moments_standard_normal(square21):
    pool = []
    for i in range(10_000):
        exp = draw_mad1(sample_rng(31, "train", i), EquationSpec.laplace(), square21, 2)
        pool.append(exp.coeffs)
    pool = np.concatenate(pool)
    n = pool.size
    assert abs(pool.mean()) < 5.0 / np.sqrt(n)
    assert abs(pool.var() - 1.0) < 5.0 * np.sqrt(2.0 / n)
