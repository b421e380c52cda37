"""Command-line front door: gen / train / eval / bench / solve-fd / inspect.

Heavy imports are deferred until after argument parsing so --threads can cap
the BLAS pools before numpy loads.
"""

import argparse
import json
import os
import sys
import time


def _add_common(p):
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", type=str, default=None, help="output path")
    p.add_argument("--threads", type=int, default=None, help="cap BLAS thread pools")
    p.add_argument(
        "--format", choices=("json", "table"), default="table", help="report format"
    )


def _add_domain(p, default_grid=51):
    p.add_argument(
        "--domain", choices=("square", "disk", "lshape", "cube3d"), default="square"
    )
    p.add_argument("--grid", type=int, default=default_grid, help="lattice resolution per axis")
    p.add_argument(
        "--boundary-points", type=int, default=None, help="boundary sample count Mb"
    )


def _add_equation(p):
    p.add_argument("--equation", choices=("laplace", "poisson", "helmholtz"), default="laplace")
    p.add_argument("--k", type=float, default=None, help="zeroth-order coefficient (helmholtz)")


def build_parser():
    ap = argparse.ArgumentParser(prog="mad", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a dataset")
    g.add_argument("--method", choices=("mad0", "mad1", "mad2", "pinn-grf"), required=True)
    _add_equation(g)
    _add_domain(g)
    g.add_argument("--samples", type=int, required=True)
    g.add_argument("--n-centers", type=int, default=None)
    g.add_argument("--n-terms", type=int, default=20)
    g.add_argument("--length-scale", type=float, default=0.1)
    g.add_argument("--sigma", type=float, default=5.0)
    g.add_argument("--stream", choices=("train", "test1", "test2"), default="train")
    _add_common(g)

    t = sub.add_parser("train", help="train an operator on a dataset")
    t.add_argument("--arch", choices=("baseline", "wide", "deep", "dual"), default="baseline")
    t.add_argument("--loss", choices=("mad", "pinn"), default="mad")
    t.add_argument("--data", type=str, required=True)
    t.add_argument("--epochs", type=int, default=10_000)
    t.add_argument("--lr", type=float, default=1e-4)
    t.add_argument("--latent", type=int, default=100)
    t.add_argument("--width-scale", type=float, default=0.5)
    t.add_argument("--batch-size", type=int, default=None)
    t.add_argument("--w1", type=float, default=0.9)
    t.add_argument("--w2", type=float, default=0.1)
    _add_common(t)

    e = sub.add_parser("eval", help="evaluate a model on a test dataset")
    e.add_argument("--model", type=str, required=True)
    e.add_argument("--data", type=str, required=True)
    _add_common(e)

    b = sub.add_parser("bench", help="generation-cost benchmark (analytic vs FD)")
    _add_equation(b)
    _add_domain(b)
    b.add_argument("--samples", type=int, default=200)
    b.add_argument("--h-oracle", type=float, default=0.005)
    b.add_argument("--n-centers", type=int, default=None)
    _add_common(b)

    s = sub.add_parser("solve-fd", help="five-point reference solve from boundary data")
    _add_equation(s)
    s.add_argument("--h", type=float, required=True, help="grid spacing")
    s.add_argument("--in", dest="infile", type=str, required=True, help="boundary JSON")
    s.add_argument("--tol", type=float, default=1e-10)
    _add_common(s)

    i = sub.add_parser("inspect", help="print dataset / model metadata")
    i.add_argument("--in", dest="infile", type=str, required=True)
    _add_common(i)
    return ap


def _report(payload, fmt, stream=None):
    stream = stream if stream is not None else sys.stdout
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, indent=2), file=stream)
    else:
        for key in payload:
            print(f"{key:>24s} : {payload[key]}", file=stream)


def _equation(args, method=None):
    from .equations import EquationSpec, SourceMode

    if args.equation == "helmholtz":
        if args.k is None or not args.k > 0:
            raise SystemExit("helmholtz needs --k > 0")
        mode = SourceMode.GENERAL if method == "mad0" else SourceMode.ZERO
        return EquationSpec(args.k, mode)
    if args.k not in (None, 0.0):
        raise SystemExit(f"--k applies to helmholtz only (got k={args.k})")
    if args.equation == "poisson":
        return EquationSpec.poisson()
    return EquationSpec.laplace()


def _domain(args):
    from .geometry import GridSpec, build_domain

    return build_domain(args.domain, GridSpec(args.grid, args.boundary_points))


def cmd_gen(args):
    from .data import save_dataset
    from .samplers import GrfConfig, SmoothingConfig, generate_dataset, generate_pinn_dataset

    eq = _equation(args, method=args.method)
    domain = _domain(args)
    if args.method == "pinn-grf":
        ds = generate_pinn_dataset(
            eq,
            domain,
            args.samples,
            args.seed,
            grf=GrfConfig(length_scale=args.length_scale),
            smoothing=SmoothingConfig(sigma=args.sigma),
            stream=args.stream,
        )
    else:
        ds = generate_dataset(
            args.method,
            eq,
            domain,
            args.samples,
            args.seed,
            n_centers=args.n_centers,
            n_terms=args.n_terms,
            stream=args.stream,
        )
    out = args.out or f"{args.method}-{eq.name}-{args.domain}.madset"
    nbytes = save_dataset(ds, out)
    _report(
        {
            "written": out,
            "bytes": nbytes,
            "samples": len(ds),
            "generation_seconds": round(ds.meta.wall_time, 4),
        },
        args.format,
    )


def cmd_train(args):
    from .data import load_dataset
    from .neural import make_operator, save_model, train
    from .neural.operators import coord_normalization

    ds = load_dataset(args.data)
    domain = ds.domain()
    cs, csh = coord_normalization(domain.kind)
    model = make_operator(
        args.arch,
        domain.boundary_count,
        lattice_len=domain.n_lattice,
        coord_dim=domain.dim,
        latent=args.latent,
        width_scale=args.width_scale,
        seed=args.seed,
        coord_scale=cs,
        coord_shift=csh,
    )
    result = train(
        model,
        ds,
        loss=args.loss,
        epochs=args.epochs,
        lr=args.lr,
        seed=args.seed,
        batch_size=args.batch_size,
        w1=args.w1,
        w2=args.w2,
    )
    out = args.out or f"{args.arch}-{args.loss}.madnn"
    provenance = {
        "arch": args.arch,
        "loss": args.loss,
        "epochs": args.epochs,
        "lr": args.lr,
        "seed": args.seed,
        "latent": args.latent,
        "width_scale": args.width_scale,
        "coord_scale": cs,
        "coord_shift": csh,
        "training_time": result.elapsed,
        "final_training_loss": result.final_loss,
        "data": os.path.basename(args.data),
    }
    save_model(model, out, provenance=provenance)
    _report(
        {
            "written": out,
            "epochs": args.epochs,
            "final_training_loss": f"{result.final_loss:.6e}",
            "training_seconds": round(result.elapsed, 2),
        },
        args.format,
    )


def _restore_coord_map(model, provenance):
    from .neural.operators import DualDeepOnet

    if not provenance:
        return
    cs = provenance.get("coord_scale", 1.0)
    csh = provenance.get("coord_shift", 0.0)
    nets = (model.net_g, model.net_f) if isinstance(model, DualDeepOnet) else (model,)
    for net in nets:
        net.coord_scale = cs
        net.coord_shift = csh


def cmd_eval(args):
    from .data import load_dataset
    from .harness import evaluate
    from .neural import load_model

    model, provenance = load_model(args.model)
    _restore_coord_map(model, provenance)
    ds = load_dataset(args.data)
    report = evaluate(model, ds, model_provenance=provenance)
    payload = report.to_dict()
    if args.format == "table":
        payload = {
            "mean_relative_l2": f"{report.mean:.6e}",
            "samples": len(report.per_sample),
            "dataset": payload["dataset"]["generator"] + "/" + payload["dataset"]["stream"],
            "training_time": report.training_time,
            "final_training_loss": report.final_training_loss,
        }
    _report(payload, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report.to_dict(), fh, sort_keys=True, indent=2)


def cmd_bench(args):
    from .harness import bench_generation

    eq = _equation(args)
    domain = _domain(args)
    result = bench_generation(
        eq, domain, args.samples, args.seed, h_oracle=args.h_oracle, n_centers=args.n_centers
    )
    _report(result, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(result, fh, sort_keys=True, indent=2)


def cmd_solve_fd(args):
    import numpy as np

    from .data import Dataset, DatasetMeta, FieldSample, save_dataset
    from .fd import FdProblem, solve_fd, unknown_mask
    from .geometry import DomainKind, GridSpec, build_domain, project_to_boundary

    with open(args.infile) as fh:
        payload = json.load(fh)
    kind = DomainKind(payload.get("domain", "square"))
    g_samples = np.asarray(payload["g"], dtype=np.float64)
    if g_samples.ndim != 1 or len(g_samples) < 4:
        raise SystemExit("boundary JSON must provide 'g': a flat list of >= 4 values")
    span = 2.0 if kind is DomainKind.UNIT_DISK else 1.0
    n = round(span / args.h) + 1
    eq = _equation(args)
    domain = build_domain(kind, GridSpec(n, len(g_samples)))
    mask = unknown_mask(kind, n)
    carriers = np.argwhere(~mask)
    pts = domain.lattice_points.reshape(n, n, 2)[carriers[:, 0], carriers[:, 1]]
    _, params = project_to_boundary(domain, pts)
    # periodic linear interpolation of the boundary samples in arc length
    length = domain.arclength
    ts = np.asarray(payload.get("boundary_params", domain.boundary_params))
    gvals = np.interp(params, np.concatenate([ts, [length]]),
                      np.concatenate([g_samples, [g_samples[0]]]))
    bv = np.zeros((n, n))
    bv[carriers[:, 0], carriers[:, 1]] = gvals
    t0 = time.perf_counter()
    sol = solve_fd(FdProblem(kind, n, eq.k, boundary_values=bv), tol=args.tol)
    elapsed = time.perf_counter() - t0
    out = args.out or "solution.madset"
    meta = DatasetMeta(
        generator="fd",
        stream="test2",
        equation=eq,
        domain_kind=kind,
        resolution=n,
        boundary_count=len(g_samples),
        n_eval=domain.n_eval,
        n_lattice=domain.n_lattice,
        n_samples=1,
        master_seed=args.seed,
        wall_time=elapsed,
    )
    record = FieldSample(
        g=g_samples, f=None, u=sol.u.ravel()[domain.eval_index], seed=args.seed
    )
    save_dataset(Dataset(meta=meta, samples=(record,)), out)
    _report(
        {
            "written": out,
            "grid": f"{n}x{n}",
            "iterations": sol.iterations,
            "linear_residual": f"{sol.residual:.3e}",
            "solve_seconds": round(elapsed, 3),
        },
        args.format,
    )


def cmd_inspect(args):
    from .data import load_dataset
    from .neural import load_model
    from .neural.serialize import MAGIC as MODEL_MAGIC

    with open(args.infile, "rb") as fh:
        magic = fh.read(4)
    if magic == MODEL_MAGIC:
        model, provenance = load_model(args.infile)
        payload = {
            "type": "model",
            "parameters": int(sum(p.size for p in model.params)),
            "provenance": provenance,
        }
    else:
        ds = load_dataset(args.infile)
        meta = ds.meta
        payload = {
            "type": "dataset",
            "generator": meta.generator,
            "stream": meta.stream,
            "equation": meta.equation.name,
            "k": meta.equation.k,
            "domain": meta.domain_kind.value,
            "resolution": meta.resolution,
            "boundary_count": meta.boundary_count,
            "eval_points": meta.n_eval,
            "lattice_points": meta.n_lattice,
            "samples": meta.n_samples,
            "master_seed": meta.master_seed,
            "generation_seconds": round(meta.wall_time, 4),
            "has_f": ds.samples[0].f is not None if ds.samples else False,
            "has_u": ds.samples[0].u is not None if ds.samples else False,
        }
    _report(payload, args.format)


_COMMANDS = {
    "gen": cmd_gen,
    "train": cmd_train,
    "eval": cmd_eval,
    "bench": cmd_bench,
    "solve-fd": cmd_solve_fd,
    "inspect": cmd_inspect,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    _COMMANDS[args.command](args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
