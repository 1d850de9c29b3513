# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled eigenvalue kernel: Householder Hessenberg reduction and
single-shift complex QR with deflation. Same algorithm as ``_kernels_py``."""

import numpy as np

from libc.math cimport sqrt, fabs, hypot


cdef inline double creal(double complex z) noexcept nogil:
    return z.real


cdef inline double cimag(double complex z) noexcept nogil:
    return z.imag


cdef inline double complex conj(double complex z) noexcept nogil:
    return z.conjugate()


cdef inline double cabs(double complex z) noexcept nogil:
    return hypot(z.real, z.imag)


cdef inline double complex csqrt(double complex z) noexcept nogil:
    cdef double r = hypot(z.real, z.imag)
    cdef double re = sqrt(0.5 * (r + z.real))
    cdef double im = sqrt(0.5 * (r - z.real))
    if z.imag < 0:
        im = -im
    return re + 1j * im


cdef double EPS = np.finfo(float).eps


cdef inline double abs1(double complex z) noexcept nogil:
    return fabs(creal(z)) + fabs(cimag(z))


def hessenberg(A):
    H = np.array(A, dtype=complex, order="C")
    cdef double complex[:, ::1] h = H
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t i, j, p
    cdef double tail, alpha, vnorm
    cdef double complex phase, dot
    v_arr = np.empty(n, dtype=complex)
    cdef double complex[::1] v = v_arr
    w_arr = np.empty(n, dtype=complex)
    cdef double complex[::1] w = w_arr
    with nogil:
        for j in range(n - 2):
            tail = 0.0
            for i in range(j + 2, n):
                tail += creal(h[i, j]) ** 2 + cimag(h[i, j]) ** 2
            if tail == 0.0:
                continue
            alpha = sqrt(tail + creal(h[j + 1, j]) ** 2 + cimag(h[j + 1, j]) ** 2)
            if h[j + 1, j] != 0:
                phase = h[j + 1, j] / cabs(h[j + 1, j])
            else:
                phase = 1.0
            for i in range(j + 1, n):
                v[i] = h[i, j]
            v[j + 1] = v[j + 1] + phase * alpha
            vnorm = 0.0
            for i in range(j + 1, n):
                vnorm += creal(v[i]) ** 2 + cimag(v[i]) ** 2
            vnorm = sqrt(vnorm)
            for i in range(j + 1, n):
                v[i] = v[i] / vnorm
            # rows j+1.. : H <- (I - 2 v v^*) H, accumulated row by row
            for p in range(j, n):
                w[p] = 0.0
            for i in range(j + 1, n):
                for p in range(j, n):
                    w[p] = w[p] + conj(v[i]) * h[i, p]
            for i in range(j + 1, n):
                for p in range(j, n):
                    h[i, p] = h[i, p] - 2.0 * v[i] * w[p]
            # columns j+1.. : H <- H (I - 2 v v^*)
            for p in range(n):
                dot = 0.0
                for i in range(j + 1, n):
                    dot = dot + h[p, i] * v[i]
                dot = 2.0 * dot
                for i in range(j + 1, n):
                    h[p, i] = h[p, i] - dot * conj(v[i])
            for i in range(j + 2, n):
                h[i, j] = 0.0
    return H


cdef inline void eig2(double complex a, double complex b, double complex c, double complex d,
                      double complex* e1, double complex* e2) noexcept nogil:
    cdef double complex half = 0.5 * (a + d)
    cdef double complex disc = csqrt(0.25 * (a - d) * (a - d) + b * c)
    cdef double complex det = a * d - b * c
    if cabs(half + disc) >= cabs(half - disc):
        e1[0] = half + disc
    else:
        e1[0] = half - disc
    if e1[0] != 0:
        e2[0] = det / e1[0]
    else:
        e2[0] = half - disc


cdef void qr_step(double complex[:, ::1] h, Py_ssize_t l, Py_ssize_t hi, double complex mu,
                  double* cs, double complex* ss) noexcept nogil:
    cdef Py_ssize_t i, j, stop
    cdef double complex x, y, s, t0, t1
    cdef double ax, r, c
    for i in range(l, hi + 1):
        h[i, i] = h[i, i] - mu
    for j in range(l, hi):
        x = h[j, j]
        y = h[j + 1, j]
        ax = cabs(x)
        r = hypot(ax, cabs(y))
        if r == 0.0:
            c = 1.0
            s = 0.0
        elif ax == 0.0:
            c = 0.0
            s = 1.0
        else:
            c = ax / r
            s = (x / ax) * conj(y) / r
        for i in range(j, hi + 1):
            t0 = h[j, i]
            t1 = h[j + 1, i]
            h[j, i] = c * t0 + s * t1
            h[j + 1, i] = -conj(s) * t0 + c * t1
        h[j + 1, j] = 0.0
        cs[j] = c
        ss[j] = s
    for j in range(l, hi):
        c = cs[j]
        s = ss[j]
        stop = j + 2
        if stop > hi:
            stop = hi
        for i in range(l, stop + 1):
            t0 = h[i, j]
            t1 = h[i, j + 1]
            h[i, j] = t0 * c + t1 * conj(s)
            h[i, j + 1] = -t0 * s + t1 * c
    for i in range(l, hi + 1):
        h[i, i] = h[i, i] + mu


def hqr_eigvals(H, int max_sweeps_per_eig=30):
    cdef double complex[:, ::1] h = H
    cdef Py_ssize_t n = h.shape[0]
    eig_arr = np.zeros(n, dtype=complex)
    cdef double complex[::1] eig = eig_arr
    cs_arr = np.zeros(max(n, 1), dtype=float)
    ss_arr = np.zeros(max(n, 1), dtype=complex)
    cdef double[::1] cs = cs_arr
    cdef double complex[::1] ss = ss_arr
    cdef Py_ssize_t hi = n - 1, l, i, j
    cdef long its = 0, total = 0
    cdef long budget = max_sweeps_per_eig * (n if n > 10 else 10)
    cdef double s
    cdef double complex mu, e1, e2
    cdef bint failed = False
    with nogil:
        while hi >= 0:
            if hi == 0:
                eig[0] = h[0, 0]
                break
            l = hi
            while l > 0:
                s = abs1(h[l - 1, l - 1]) + abs1(h[l, l])
                if s == 0.0:
                    for i in range(hi + 1):
                        for j in range(hi + 1):
                            s += cabs(h[i, j])
                    s = s / (hi + 1)
                if abs1(h[l, l - 1]) <= EPS * s:
                    h[l, l - 1] = 0.0
                    break
                l -= 1
            if l == hi:
                eig[hi] = h[hi, hi]
                hi -= 1
                its = 0
                continue
            if l == hi - 1:
                eig2(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi], &e1, &e2)
                eig[hi - 1] = e1
                eig[hi] = e2
                hi -= 2
                its = 0
                continue
            total += 1
            its += 1
            if total > budget:
                failed = True
                break
            if its % 10 == 0:
                mu = h[hi, hi] + 0.75 * fabs(creal(h[hi, hi - 1])) + 0.75j * cabs(h[hi - 1, hi - 2])
            else:
                eig2(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi], &e1, &e2)
                if cabs(e1 - h[hi, hi]) < cabs(e2 - h[hi, hi]):
                    mu = e1
                else:
                    mu = e2
            qr_step(h, l, hi, mu, &cs[0], &ss[0])
    if failed:
        raise RuntimeError(f"QR iteration did not converge ({hi + 1} eigenvalues left)")
    return eig_arr


def eigvals(A):
    return hqr_eigvals(hessenberg(A))
