"""Pure-numpy Bessel J0/Y0 and free-space PDE kernels.

Two branches per function: the defining power series for r <= 5 (with the
digamma recurrence for Y0) and a Hankel-form asymptotic expansion for r > 5
whose P/Q factors use the classic Cephes rational fits.  Absolute error is
below 1e-13 on [0, 50] for J0 and below 1e-12 for Y0, comfortably inside the
1e-12 / 1e-10 contracts.
"""

import numpy as np

EULER_GAMMA = 0.5772156649015329

SERIES_ASYMPTOTIC_SWITCH = 5.0
_SERIES_TERMS = 26

_PIO4 = 0.7853981633974483
_SQ2OPI = 0.7978845608028654  # sqrt(2/pi)

# Cephes Math Library Release 2.1 (Stephen L. Moshier, public domain):
# rational fits for the modulus/phase factors of the Hankel asymptotic
# expansion, valid for argument > 5, in z = 25/r^2.
_PP = np.array([
    7.96936729297347051624e-4,
    8.28352392107440799803e-2,
    1.23953371646414299388e0,
    5.44725003058768775090e0,
    8.74716500199817011941e0,
    5.30324038235394892183e0,
    9.99999999999999997821e-1,
])
_PQ = np.array([
    9.24408810558863637013e-4,
    8.56288474354474431428e-2,
    1.25352743901058953537e0,
    5.47097740330417105182e0,
    8.76190883237069594232e0,
    5.30605288235394617618e0,
    1.00000000000000000218e0,
])
_QP = np.array([
    -1.13663838898469149931e-2,
    -1.28252718670509318512e0,
    -1.95539544257735972385e1,
    -9.32060152123768231369e1,
    -1.77681167980488050595e2,
    -1.47077505154951170175e2,
    -5.14105326766599330220e1,
    -6.05014350600728481186e0,
])
_QQ = np.array([  # leading coefficient 1.0 implied
    6.43178256118178023184e1,
    8.56430025976980587198e2,
    3.88240183605401609683e3,
    7.24046774195652478189e3,
    5.93072701187316984827e3,
    2.06209331660327847417e3,
    2.42005740240291393179e2,
])


def _polevl(x, coef):
    ans = np.full_like(x, coef[0])
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def _p1evl(x, coef):
    ans = x + coef[0]
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def _digamma_table(n):
    """psi(1) .. psi(n) from psi(1) = -gamma, psi(m+1) = psi(m) + 1/m."""
    psi = np.empty(n)
    psi[0] = -EULER_GAMMA
    for m in range(1, n):
        psi[m] = psi[m - 1] + 1.0 / m
    return psi


_PSI = _digamma_table(_SERIES_TERMS + 1)


def _j0_series(r):
    q = -0.25 * r * r
    term = np.ones_like(r)
    acc = np.ones_like(r)
    for m in range(1, _SERIES_TERMS + 1):
        term = term * q / (m * m)
        acc += term
    return acc


def _y0_series(r):
    # Y0 = (2/pi) [ln(r/2) J0(r) - sum_{m>=0} (-1)^m (r/2)^{2m} psi(m+1) / (m!)^2]
    q = -0.25 * r * r
    term = np.ones_like(r)
    acc = _PSI[0] * np.ones_like(r)
    for m in range(1, _SERIES_TERMS + 1):
        term = term * q / (m * m)
        acc += term * _PSI[m]
    return (2.0 / np.pi) * (np.log(0.5 * r) * _j0_series(r) - acc)


def _hankel_pq(r):
    z = 25.0 / (r * r)
    w = 5.0 / r
    p = _polevl(z, _PP) / _polevl(z, _PQ)
    q = _polevl(z, _QP) / _p1evl(z, _QQ)
    return p, w * q


def _j0_asymptotic(r):
    p, q = _hankel_pq(r)
    chi = r - _PIO4
    return _SQ2OPI * (p * np.cos(chi) - q * np.sin(chi)) / np.sqrt(r)


def _y0_asymptotic(r):
    p, q = _hankel_pq(r)
    chi = r - _PIO4
    return _SQ2OPI * (p * np.sin(chi) + q * np.cos(chi)) / np.sqrt(r)


def bessel_j0(r):
    r = np.asarray(r, dtype=np.float64)
    if np.any(r < 0):
        raise ValueError("bessel_j0 requires r >= 0")
    small = r <= SERIES_ASYMPTOTIC_SWITCH
    out = np.empty_like(r)
    if small.any():
        out[small] = _j0_series(r[small])
    if (~small).any():
        out[~small] = _j0_asymptotic(r[~small])
    return out


def bessel_y0(r):
    r = np.asarray(r, dtype=np.float64)
    if np.any(r <= 0):
        raise ValueError("bessel_y0 requires r > 0")
    small = r <= SERIES_ASYMPTOTIC_SWITCH
    out = np.empty_like(r)
    if small.any():
        out[small] = _y0_series(r[small])
    if (~small).any():
        out[~small] = _y0_asymptotic(r[~small])
    return out


def bessel_j0y0(r):
    """Fused (J0, Y0) at a common positive argument array; shares the series
    accumulation and the asymptotic P/Q factors between the two."""
    r = np.asarray(r, dtype=np.float64)
    small = r <= SERIES_ASYMPTOTIC_SWITCH
    j = np.empty_like(r)
    y = np.empty_like(r)
    if small.any():
        rs = r[small]
        q = -0.25 * rs * rs
        term = np.ones_like(rs)
        accj = np.ones_like(rs)
        accy = _PSI[0] * np.ones_like(rs)
        for m in range(1, _SERIES_TERMS + 1):
            term = term * q / (m * m)
            accj += term
            accy += term * _PSI[m]
        j[small] = accj
        y[small] = (2.0 / np.pi) * (np.log(0.5 * rs) * accj - accy)
    if (~small).any():
        rl = r[~small]
        p, q = _hankel_pq(rl)
        chi = rl - _PIO4
        sq = _SQ2OPI / np.sqrt(rl)
        sin_chi, cos_chi = np.sin(chi), np.cos(chi)
        j[~small] = sq * (p * cos_chi - q * sin_chi)
        y[~small] = sq * (p * sin_chi + q * cos_chi)
    return j, y


def _pairwise_dist(points, centers):
    diff = points[:, None, :] - centers[None, :, :]
    return np.sqrt(np.einsum("pcd,pcd->pc", diff, diff))


def expansion_log2d(points, centers, coeffs):
    """sum_i c_i (1/2pi) ln|x - y_i| at each point."""
    r = _pairwise_dist(points, centers)
    return np.log(r) @ coeffs / (2.0 * np.pi)


def expansion_newton3d(points, centers, coeffs):
    """sum_i c_i (-1/(4pi |x - y_i|)) at each point."""
    r = _pairwise_dist(points, centers)
    return (1.0 / r) @ coeffs / (-4.0 * np.pi)


def expansion_helmholtz(points, centers, coeffs_j, coeffs_y, sqrt_k):
    """sum_i [cj_i J0(sqrt(k) r_i) + cy_i Y0(sqrt(k) r_i)] at each point."""
    a = sqrt_k * _pairwise_dist(points, centers)
    j, y = bessel_j0y0(a)
    return j @ coeffs_j + y @ coeffs_y
