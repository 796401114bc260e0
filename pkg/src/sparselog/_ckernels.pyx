# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""
from libc.complex cimport csqrt, cabs, conj
from libc.math cimport hypot

import numpy as np

from sparselog._pykernels import ConvergenceError

cdef double EPS = 2.220446049250313e-16


cdef inline double complex _wilkinson(double complex a, double complex b,
                                      double complex c, double complex d) nogil:
    cdef double complex half = 0.5 * (a - d)
    cdef double complex root = csqrt(half * half + b * c)
    cdef double complex mu1 = 0.5 * (a + d) + root
    cdef double complex mu2 = 0.5 * (a + d) - root
    if cabs(mu1 - d) <= cabs(mu2 - d):
        return mu1
    return mu2


def hessenberg_qr(double complex[:, ::1] h, double complex[:, ::1] z, Py_ssize_t max_sweeps):
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t hi = n - 1, lo, k, j, its = 0, sweeps = 0
    cdef double s_norm, r
    cdef double complex shift, a, b, c, s, x0, x1
    cdef double complex[::1] cs = np.empty(max(n, 1), dtype=np.complex128)
    cdef double complex[::1] ss = np.empty(max(n, 1), dtype=np.complex128)
    cdef bint failed = False

    with nogil:
        while hi > 0:
            lo = hi
            while lo > 0:
                s_norm = cabs(h[lo - 1, lo - 1]) + cabs(h[lo, lo])
                if s_norm == 0.0:
                    s_norm = 1.0
                if cabs(h[lo, lo - 1]) <= EPS * s_norm:
                    h[lo, lo - 1] = 0.0
                    break
                lo -= 1
            if lo == hi:
                hi -= 1
                its = 0
                continue
            if sweeps >= max_sweeps:
                failed = True
                break
            its += 1
            sweeps += 1
            if its % 10 == 0:
                shift = h[hi, hi] + cabs(h[hi, hi - 1]) * (0.6 + 0.8j)
            else:
                shift = _wilkinson(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])

            for k in range(lo, hi + 1):
                h[k, k] = h[k, k] - shift
            for k in range(lo, hi):
                a = h[k, k]
                b = h[k + 1, k]
                r = hypot(cabs(a), cabs(b))
                if r == 0.0:
                    c = 1.0
                    s = 0.0
                else:
                    c = a / r
                    s = b / r
                for j in range(k, n):
                    x0 = h[k, j]
                    x1 = h[k + 1, j]
                    h[k, j] = conj(c) * x0 + conj(s) * x1
                    h[k + 1, j] = -s * x0 + c * x1
                h[k + 1, k] = 0.0
                cs[k] = c
                ss[k] = s
            for k in range(lo, hi):
                c = cs[k]
                s = ss[k]
                for j in range(k + 2):
                    x0 = h[j, k]
                    x1 = h[j, k + 1]
                    h[j, k] = c * x0 + s * x1
                    h[j, k + 1] = -conj(s) * x0 + conj(c) * x1
                for j in range(n):
                    x0 = z[j, k]
                    x1 = z[j, k + 1]
                    z[j, k] = c * x0 + s * x1
                    z[j, k + 1] = -conj(s) * x0 + conj(c) * x1
            for k in range(lo, hi + 1):
                h[k, k] = h[k, k] + shift

    if failed:
        raise ConvergenceError(f"QR iteration did not converge in {max_sweeps} sweeps")
    return sweeps


def apply_pair_rotations(double complex[:, ::1] m, Py_ssize_t[::1] tails, Py_ssize_t[::1] heads,
                         double cos_d, double complex isin_d):
    # the off-diagonal entry is purely imaginary, so the update is spelled out in
    # real arithmetic; generic complex products go through a slow NaN-safe helper
    cdef Py_ssize_t p, j, t, hd
    cdef Py_ssize_t ncol = m.shape[1]
    cdef double s = isin_d.imag
    cdef double *row0
    cdef double *row1
    cdef double a_re, a_im, b_re, b_im
    if isin_d.real != 0.0:
        raise ValueError("isin_d must be purely imaginary")
    if ncol == 0:
        return
    with nogil:
        for p in range(tails.shape[0]):
            t = tails[p]
            hd = heads[p]
            row0 = <double *> &m[t, 0]
            row1 = <double *> &m[hd, 0]
            for j in range(ncol):
                a_re = row0[2 * j]
                a_im = row0[2 * j + 1]
                b_re = row1[2 * j]
                b_im = row1[2 * j + 1]
                row0[2 * j] = cos_d * a_re - s * b_im
                row0[2 * j + 1] = cos_d * a_im + s * b_re
                row1[2 * j] = cos_d * b_re - s * a_im
                row1[2 * j + 1] = cos_d * b_im + s * a_re
