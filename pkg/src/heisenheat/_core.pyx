# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled core of the twisted group convolution on H^1.

For each spatial offset (a, b) the center coordinate sees a 1-D correlation
whose kernel slice is shifted by the twist 2h(b x_i - a y_j) of the output
column; the fine table step divides the grid step exactly (h_tau = P * h_f),
so the shift is a single (index, weight) pair shared by the whole slice.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor, ceil


def twisted_convolve(const double[:, :, ::1] u, double[:, :, ::1] out,
                     const double[:, ::1] table,
                     const long[:, ::1] offsets, const long[::1] r_lo, const double[::1] r_frac,
                     long P, double hf, double tau0, double htau,
                     double h, double x0, double y0, double cell_volume):
    cdef Py_ssize_t nx = u.shape[0], ny = u.shape[1], nt = u.shape[2]
    cdef Py_ssize_t M = table.shape[1]
    cdef Py_ssize_t n_off = offsets.shape[0]
    cdef Py_ssize_t o, i, j, ii, jj, ko, ki, klo, khi
    cdef long a, b, m0, d, dlo, dhi, idx, ilo
    cdef long imin, imax, jmin, jmax
    cdef double fr, w, base, phi, acc
    cdef double[::1] krow = np.empty(M)
    cdef double[::1] khat = np.empty(2 * nt - 1)
    cdef Py_ssize_t m

    with nogil:
        for o in range(n_off):
            a = offsets[o, 0]
            b = offsets[o, 1]
            ilo = r_lo[o]
            fr = r_frac[o]
            for m in range(M):
                krow[m] = (1.0 - fr) * table[ilo, m] + fr * table[ilo + 1, m]
            imin = a if a > 0 else 0
            imax = nx + a if a < 0 else nx
            jmin = b if b > 0 else 0
            jmax = ny + b if b < 0 else ny
            for i in range(imin, imax):
                ii = i - a
                for j in range(jmin, jmax):
                    jj = j - b
                    w = 2.0 * h * (b * (x0 + i * h) - a * (y0 + j * h))
                    base = (-w - tau0) / hf
                    m0 = <long>floor(base)
                    phi = base - m0
                    dlo = <long>ceil((0.0 - m0) / <double>P)
                    dhi = <long>floor(<double>(M - 2 - m0) / <double>P)
                    if dlo < -(nt - 1):
                        dlo = -(nt - 1)
                    if dhi > nt - 1:
                        dhi = nt - 1
                    if dlo > dhi:
                        continue
                    for d in range(dlo, dhi + 1):
                        idx = m0 + d * P
                        khat[d + nt - 1] = (1.0 - phi) * krow[idx] + phi * krow[idx + 1]
                    for ko in range(nt):
                        klo = ko - dhi
                        if klo < 0:
                            klo = 0
                        khi = ko - dlo
                        if khi > nt - 1:
                            khi = nt - 1
                        if klo > khi:
                            continue
                        acc = 0.0
                        for ki in range(klo, khi + 1):
                            acc += u[ii, jj, ki] * khat[ko - ki + nt - 1]
                        out[i, j, ko] += acc * cell_volume
    return np.asarray(out)
