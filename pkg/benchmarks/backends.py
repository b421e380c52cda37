"""Compare the compiled kernel core against the pure-numpy fallback.

Runs each hot kernel on a representative workload in a subprocess per
backend (the backend is fixed at import time), prints a timing table, and
checks agreement.  Usage:

    python benchmarks/backends.py
"""

import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
import numpy as np
import madpde.kernels as K

rng = np.random.default_rng(0)
out = {"backend": K.BACKEND}

r = rng.uniform(1e-3, 45.0, 2_000_000)
t0 = time.perf_counter(); j = K.bessel_j0(r); out["j0_2M"] = time.perf_counter() - t0
t0 = time.perf_counter(); y = K.bessel_y0(r); out["y0_2M"] = time.perf_counter() - t0
out["j0_checksum"] = float(j.sum())
out["y0_checksum"] = float(y.sum())

pts = rng.uniform(0, 1, (2601, 2))
cen = 1.5 + rng.uniform(0, 1, (100, 2))
cj, cy = rng.standard_normal(100), rng.standard_normal(100)
t0 = time.perf_counter()
for _ in range(40):
    u = K.expansion_helmholtz(pts, cen, cj, cy, 100.0)
out["helmholtz_40x"] = time.perf_counter() - t0
out["helmholtz_checksum"] = float(u.sum())

t0 = time.perf_counter()
for _ in range(40):
    v = K.expansion_log2d(pts, cen, cj)
out["log2d_40x"] = time.perf_counter() - t0
out["log2d_checksum"] = float(v.sum())
print(json.dumps(out))
"""


def run(purepy):
    env = dict(os.environ)
    if purepy:
        env["MADPDE_PUREPY"] = "1"
    else:
        env.pop("MADPDE_PUREPY", None)
    res = subprocess.run(
        [sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(res.stdout)


def main():
    compiled = run(purepy=False)
    pure = run(purepy=True)
    if compiled["backend"] != "compiled":
        print("compiled extension unavailable; timings below are fallback-only")
    print(f"{'kernel':>16s} {'compiled':>10s} {'numpy':>10s} {'speedup':>8s}")
    for key in ("j0_2M", "y0_2M", "helmholtz_40x", "log2d_40x"):
        tc, tp = compiled[key], pure[key]
        print(f"{key:>16s} {tc:>9.3f}s {tp:>9.3f}s {tp / tc:>7.2f}x")
    for key in ("j0", "y0", "helmholtz", "log2d"):
        a, b = compiled[f"{key}_checksum"], pure[f"{key}_checksum"]
        rel = abs(a - b) / max(abs(a), 1.0)
        status = "ok" if rel < 1e-9 else f"MISMATCH ({rel:.2e})"
        print(f"{key:>16s} agreement: {status}")


if __name__ == "__main__":
    main()
