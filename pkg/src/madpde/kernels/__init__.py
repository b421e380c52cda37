"""Real-valued special functions and free-space PDE kernels.

Two interchangeable backends: a compiled extension (``_core``, built from
Cython) and the pure-numpy ``reference`` module.  The compiled backend is
selected at import when available; set ``MADPDE_PUREPY=1`` to force the
fallback.  Both produce identical results to ~1e-15.
"""

import enum
import os
from dataclasses import dataclass

import numpy as np

from . import reference
from .reference import EULER_GAMMA, SERIES_ASYMPTOTIC_SWITCH

if os.environ.get("MADPDE_PUREPY"):
    _core = None
else:
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:
        _core = None

BACKEND = "compiled" if _core is not None else "python"


class KernelKind(enum.Enum):
    LOG2D = "log2d"
    NEWTON3D = "newton3d"
    HELMHOLTZ_J0 = "helmholtz_j0"
    HELMHOLTZ_Y0 = "helmholtz_y0"


@dataclass(frozen=True)
class Kernel:
    """Kernel identifier; Helmholtz kinds carry the coefficient k > 0 of
    the zeroth-order term, Laplace kinds carry none."""

    kind: KernelKind
    k: float = 0.0

    def __post_init__(self):
        helm = self.kind in (KernelKind.HELMHOLTZ_J0, KernelKind.HELMHOLTZ_Y0)
        if helm and not self.k > 0:
            raise ValueError("Helmholtz kernels require k > 0")
        if not helm and self.k != 0.0:
            raise ValueError(f"{self.kind.value} kernel carries no wave parameter")

    @property
    def dim(self):
        return 3 if self.kind is KernelKind.NEWTON3D else 2


def bessel_j0(r):
    """J0(r) for r >= 0 (scalar or array), absolute error <= 1e-12 on [0, 50]."""
    scalar = np.ndim(r) == 0
    arr = np.atleast_1d(np.ascontiguousarray(r, dtype=np.float64))
    if np.any(arr < 0):
        raise ValueError("bessel_j0 requires r >= 0")
    if _core is None:
        out = reference.bessel_j0(arr)
    else:
        out = np.empty_like(arr)
        _core.j0_array(arr.reshape(-1), out.reshape(-1))
    return float(out.reshape(-1)[0]) if scalar else out


def bessel_y0(r):
    """Y0(r) for r > 0 (scalar or array), absolute error <= 1e-10 on (0, 50]."""
    scalar = np.ndim(r) == 0
    arr = np.atleast_1d(np.ascontiguousarray(r, dtype=np.float64))
    if np.any(arr <= 0):
        raise ValueError("bessel_y0 requires r > 0")
    if _core is None:
        out = reference.bessel_y0(arr)
    else:
        out = np.empty_like(arr)
        _core.y0_array(arr.reshape(-1), out.reshape(-1))
    return float(out.reshape(-1)[0]) if scalar else out


def kernel_value(kernel, x, c):
    """Evaluate one kernel at a single (point, center) pair."""
    x = np.asarray(x, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    r = float(np.linalg.norm(x - c))
    if r == 0.0:
        raise ValueError("kernel is singular at x == c")
    if kernel.kind is KernelKind.LOG2D:
        return np.log(r) / (2.0 * np.pi)
    if kernel.kind is KernelKind.NEWTON3D:
        return -1.0 / (4.0 * np.pi * r)
    a = np.sqrt(kernel.k) * r
    if kernel.kind is KernelKind.HELMHOLTZ_J0:
        return bessel_j0(a)
    return bessel_y0(a)


def _check_geometry(points, centers, dim):
    points = np.ascontiguousarray(points, dtype=np.float64)
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    if points.shape[1] != dim or centers.shape[1] != dim:
        raise ValueError(f"expected {dim}-dimensional points and centers")
    return points, centers


def expansion_log2d(points, centers, coeffs):
    points, centers = _check_geometry(points, centers, 2)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    if _core is None:
        return reference.expansion_log2d(points, centers, coeffs)
    out = np.empty(points.shape[0])
    _core.expansion_log2d(points, centers, coeffs, out)
    return out


def expansion_newton3d(points, centers, coeffs):
    points, centers = _check_geometry(points, centers, 3)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    if _core is None:
        return reference.expansion_newton3d(points, centers, coeffs)
    out = np.empty(points.shape[0])
    _core.expansion_newton3d(points, centers, coeffs, out)
    return out


def expansion_helmholtz(points, centers, coeffs_j, coeffs_y, k):
    points, centers = _check_geometry(points, centers, 2)
    coeffs_j = np.ascontiguousarray(coeffs_j, dtype=np.float64)
    coeffs_y = np.ascontiguousarray(coeffs_y, dtype=np.float64)
    if not k > 0:
        raise ValueError("Helmholtz expansion requires k > 0")
    if _core is None:
        return reference.expansion_helmholtz(points, centers, coeffs_j, coeffs_y, np.sqrt(k))
    out = np.empty(points.shape[0])
    _core.expansion_helmholtz(points, centers, coeffs_j, coeffs_y, np.sqrt(k), out)
    return out
