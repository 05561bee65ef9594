# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled one-sided Jacobi sweeps; mirrors lucanon._jacobi_py.hestenes."""

from libc.math cimport sqrt, fabs, hypot


def hestenes(double complex[:, ::1] a, double complex[:, ::1] vt, double tol, double abstol, int max_sweeps):
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t k = a.shape[1]
    cdef Py_ssize_t d = vt.shape[1]
    cdef Py_ssize_t p, q, j
    cdef double alpha, beta, gr, gi, g, zeta, t, c, s, er, ei
    cdef double xr, xi, yr, yi, zr, zi
    cdef int sweep, rotated

    for sweep in range(max_sweeps):
        rotated = 0
        for p in range(m - 1):
            for q in range(p + 1, m):
                alpha = 0.0
                beta = 0.0
                gr = 0.0
                gi = 0.0
                for j in range(k):
                    xr = a[p, j].real
                    xi = a[p, j].imag
                    yr = a[q, j].real
                    yi = a[q, j].imag
                    alpha += xr * xr + xi * xi
                    beta += yr * yr + yi * yi
                    gr += xr * yr + xi * yi
                    gi += xr * yi - xi * yr
                g = hypot(gr, gi)
                if g <= abstol or g <= tol * sqrt(alpha) * sqrt(beta):
                    continue
                rotated += 1
                zeta = (beta - alpha) / (2.0 * g)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = c * t
                er = gr / g
                ei = -gi / g
                for j in range(k):
                    xr = a[p, j].real
                    xi = a[p, j].imag
                    # z = e^{-i phi} * a_q
                    zr = er * a[q, j].real - ei * a[q, j].imag
                    zi = er * a[q, j].imag + ei * a[q, j].real
                    a[p, j] = (c * xr - s * zr) + 1j * (c * xi - s * zi)
                    a[q, j] = (s * xr + c * zr) + 1j * (s * xi + c * zi)
                for j in range(d):
                    xr = vt[p, j].real
                    xi = vt[p, j].imag
                    zr = er * vt[q, j].real - ei * vt[q, j].imag
                    zi = er * vt[q, j].imag + ei * vt[q, j].real
                    vt[p, j] = (c * xr - s * zr) + 1j * (c * xi - s * zi)
                    vt[q, j] = (s * xr + c * zr) + 1j * (s * xi + c * zi)
        if rotated == 0:
            return sweep + 1
    return -1
