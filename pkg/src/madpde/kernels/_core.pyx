# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar kernels for Bessel J0/Y0 and fundamental-solution
expansions.  Mirrors reference.py exactly: power series for r <= 5,
Cephes-fit Hankel asymptotics for r > 5."""

from libc.math cimport log, sqrt, sin, cos, M_PI

cdef double EULER_GAMMA = 0.5772156649015329
cdef double PIO4 = 0.7853981633974483
cdef double SQ2OPI = 0.7978845608028654
cdef double SWITCH = 5.0
cdef int SERIES_TERMS = 26

cdef double[7] PP = [
    7.96936729297347051624e-4, 8.28352392107440799803e-2,
    1.23953371646414299388e0, 5.44725003058768775090e0,
    8.74716500199817011941e0, 5.30324038235394892183e0,
    9.99999999999999997821e-1]
cdef double[7] PQ = [
    9.24408810558863637013e-4, 8.56288474354474431428e-2,
    1.25352743901058953537e0, 5.47097740330417105182e0,
    8.76190883237069594232e0, 5.30605288235394617618e0,
    1.00000000000000000218e0]
cdef double[8] QP = [
    -1.13663838898469149931e-2, -1.28252718670509318512e0,
    -1.95539544257735972385e1, -9.32060152123768231369e1,
    -1.77681167980488050595e2, -1.47077505154951170175e2,
    -5.14105326766599330220e1, -6.05014350600728481186e0]
cdef double[7] QQ = [
    6.43178256118178023184e1, 8.56430025976980587198e2,
    3.88240183605401609683e3, 7.24046774195652478189e3,
    5.93072701187316984827e3, 2.06209331660327847417e3,
    2.42005740240291393179e2]

cdef double[27] PSI_TABLE

cdef void _init_psi() noexcept:
    cdef int m
    PSI_TABLE[0] = -EULER_GAMMA
    for m in range(1, 27):
        PSI_TABLE[m] = PSI_TABLE[m - 1] + 1.0 / m

_init_psi()


cdef inline double _polevl7(double x, double* coef) noexcept nogil:
    cdef double ans = coef[0]
    cdef int i
    for i in range(1, 7):
        ans = ans * x + coef[i]
    return ans


cdef inline double _polevl8(double x, double* coef) noexcept nogil:
    cdef double ans = coef[0]
    cdef int i
    for i in range(1, 8):
        ans = ans * x + coef[i]
    return ans


cdef inline double _p1evl7(double x, double* coef) noexcept nogil:
    cdef double ans = x + coef[0]
    cdef int i
    for i in range(1, 7):
        ans = ans * x + coef[i]
    return ans


cdef double _j0(double r) noexcept nogil:
    cdef double q, term, acc, z, w, p, qq, chi
    cdef int m
    if r <= SWITCH:
        q = -0.25 * r * r
        term = 1.0
        acc = 1.0
        for m in range(1, SERIES_TERMS + 1):
            term = term * q / (<double>m * m)
            acc += term
        return acc
    z = 25.0 / (r * r)
    w = 5.0 / r
    p = _polevl7(z, PP) / _polevl7(z, PQ)
    qq = w * (_polevl8(z, QP) / _p1evl7(z, QQ))
    chi = r - PIO4
    return SQ2OPI * (p * cos(chi) - qq * sin(chi)) / sqrt(r)


cdef double _y0(double r) noexcept nogil:
    cdef double q, term, acc, z, w, p, qq, chi
    cdef int m
    if r <= SWITCH:
        q = -0.25 * r * r
        term = 1.0
        acc = PSI_TABLE[0]
        for m in range(1, SERIES_TERMS + 1):
            term = term * q / (<double>m * m)
            acc += term * PSI_TABLE[m]
        return (2.0 / M_PI) * (log(0.5 * r) * _j0(r) - acc)
    z = 25.0 / (r * r)
    w = 5.0 / r
    p = _polevl7(z, PP) / _polevl7(z, PQ)
    qq = w * (_polevl8(z, QP) / _p1evl7(z, QQ))
    chi = r - PIO4
    return SQ2OPI * (p * sin(chi) + qq * cos(chi)) / sqrt(r)


cdef void _j0y0(double r, double* jv, double* yv) noexcept nogil:
    # fused evaluation: the series terms and the asymptotic P/Q factors are
    # shared between J0 and Y0 at a common argument
    cdef double q, term, accj, accy, z, w, p, qq, chi, sq
    cdef int m
    if r <= SWITCH:
        q = -0.25 * r * r
        term = 1.0
        accj = 1.0
        accy = PSI_TABLE[0]
        for m in range(1, SERIES_TERMS + 1):
            term = term * q / (<double>m * m)
            accj += term
            accy += term * PSI_TABLE[m]
        jv[0] = accj
        yv[0] = (2.0 / M_PI) * (log(0.5 * r) * accj - accy)
        return
    z = 25.0 / (r * r)
    w = 5.0 / r
    p = _polevl7(z, PP) / _polevl7(z, PQ)
    qq = w * (_polevl8(z, QP) / _p1evl7(z, QQ))
    chi = r - PIO4
    sq = SQ2OPI / sqrt(r)
    jv[0] = sq * (p * cos(chi) - qq * sin(chi))
    yv[0] = sq * (p * sin(chi) + qq * cos(chi))


def j0_scalar(double r):
    return _j0(r)


def y0_scalar(double r):
    return _y0(r)


def j0_array(const double[::1] r, double[::1] out):
    cdef Py_ssize_t i
    for i in range(r.shape[0]):
        out[i] = _j0(r[i])


def y0_array(const double[::1] r, double[::1] out):
    cdef Py_ssize_t i
    for i in range(r.shape[0]):
        out[i] = _y0(r[i])


def expansion_log2d(const double[:, ::1] points, const double[:, ::1] centers,
                    const double[::1] coeffs, double[::1] out):
    cdef Py_ssize_t p, c
    cdef double dx, dy, acc
    cdef double inv2pi = 1.0 / (2.0 * M_PI)
    for p in range(points.shape[0]):
        acc = 0.0
        for c in range(centers.shape[0]):
            dx = points[p, 0] - centers[c, 0]
            dy = points[p, 1] - centers[c, 1]
            acc += coeffs[c] * log(sqrt(dx * dx + dy * dy))
        out[p] = acc * inv2pi


def expansion_newton3d(const double[:, ::1] points, const double[:, ::1] centers,
                       const double[::1] coeffs, double[::1] out):
    cdef Py_ssize_t p, c
    cdef double dx, dy, dz, acc
    cdef double m4pi = -1.0 / (4.0 * M_PI)
    for p in range(points.shape[0]):
        acc = 0.0
        for c in range(centers.shape[0]):
            dx = points[p, 0] - centers[c, 0]
            dy = points[p, 1] - centers[c, 1]
            dz = points[p, 2] - centers[c, 2]
            acc += coeffs[c] / sqrt(dx * dx + dy * dy + dz * dz)
        out[p] = acc * m4pi


def expansion_helmholtz(const double[:, ::1] points, const double[:, ::1] centers,
                        const double[::1] coeffs_j, const double[::1] coeffs_y,
                        double sqrt_k, double[::1] out):
    cdef Py_ssize_t p, c
    cdef double dx, dy, a, acc, jv, yv
    for p in range(points.shape[0]):
        acc = 0.0
        for c in range(centers.shape[0]):
            dx = points[p, 0] - centers[c, 0]
            dy = points[p, 1] - centers[c, 1]
            a = sqrt_k * sqrt(dx * dx + dy * dy)
            _j0y0(a, &jv, &yv)
            acc += coeffs_j[c] * jv + coeffs_y[c] * yv
        out[p] = acc
