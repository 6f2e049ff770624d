# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_rk4_np.rk4_harmonic``.

Same contract as the pure-numpy version; the RK4 stages run as BLAS
zgemv calls on the row-major superoperator matrices (passed transposed
to Fortran-order BLAS), with the whole time loop under nogil.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin
from scipy.linalg.cython_blas cimport zgemv

cnp.import_array()

ctypedef double complex zcplx


cdef void _rhs(int n, zcplx* lmat, zcplx* mp, zcplx* mm, zcplx* cvec,
               double theta, zcplx* v, zcplx* out) noexcept nogil:
    cdef int ione = 1
    cdef zcplx one = 1.0
    cdef zcplx zero = 0.0
    cdef zcplx ep = cos(theta) + 1j * sin(theta)
    cdef zcplx em = ep.conjugate()
    cdef int i
    # row-major A seen as column-major is A^T, so 'T' applies plain A
    zgemv('T', &n, &n, &one, lmat, &n, v, &ione, &zero, out, &ione)
    zgemv('T', &n, &n, &ep, mp, &n, v, &ione, &one, out, &ione)
    zgemv('T', &n, &n, &em, mm, &n, v, &ione, &one, out, &ione)
    for i in range(n):
        out[i] = out[i] + cvec[i]


def rk4_harmonic(zcplx[:, ::1] lmat, zcplx[::1] const, zcplx[:, ::1] mplus,
                 zcplx[:, ::1] mminus, double delta, double dt,
                 long n_steps, long n_window, zcplx[::1] y0, int dim):
    """See ``zeemanprobe._kernels._rk4_np.rk4_harmonic``."""
    cdef int n = y0.shape[0]
    y_arr = np.array(y0, dtype=np.complex128, copy=True)
    k1_arr = np.empty(n, np.complex128)
    k2_arr = np.empty(n, np.complex128)
    k3_arr = np.empty(n, np.complex128)
    k4_arr = np.empty(n, np.complex128)
    yt_arr = np.empty(n, np.complex128)
    acc0_arr = np.zeros(n, np.complex128)
    accp_arr = np.zeros(n, np.complex128)
    accm_arr = np.zeros(n, np.complex128)
    cdef zcplx[::1] y = y_arr
    cdef zcplx[::1] k1 = k1_arr
    cdef zcplx[::1] k2 = k2_arr
    cdef zcplx[::1] k3 = k3_arr
    cdef zcplx[::1] k4 = k4_arr
    cdef zcplx[::1] yt = yt_arr
    cdef zcplx[::1] acc0 = acc0_arr
    cdef zcplx[::1] accp = accp_arr
    cdef zcplx[::1] accm = accm_arr
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    cdef double max_dev = 0.0
    cdef double t, theta, dev
    cdef long j, start = n_steps - n_window
    cdef int i
    cdef zcplx tr, ph

    with nogil:
        for j in range(n_steps):
            t = dt * j
            theta = delta * t
            if j >= start:
                ph = cos(theta) - 1j * sin(theta)
                for i in range(n):
                    acc0[i] = acc0[i] + y[i]
                    accp[i] = accp[i] + ph * y[i]
                    accm[i] = accm[i] + ph.conjugate() * y[i]
            tr = 0.0
            for i in range(dim):
                tr = tr + y[i * dim + i]
            dev = abs(tr - 1.0)
            if dev > max_dev:
                max_dev = dev
            _rhs(n, &lmat[0, 0], &mplus[0, 0], &mminus[0, 0], &const[0],
                 theta, &y[0], &k1[0])
            for i in range(n):
                yt[i] = y[i] + half * k1[i]
            theta = delta * (t + half)
            _rhs(n, &lmat[0, 0], &mplus[0, 0], &mminus[0, 0], &const[0],
                 theta, &yt[0], &k2[0])
            for i in range(n):
                yt[i] = y[i] + half * k2[i]
            _rhs(n, &lmat[0, 0], &mplus[0, 0], &mminus[0, 0], &const[0],
                 theta, &yt[0], &k3[0])
            for i in range(n):
                yt[i] = y[i] + dt * k3[i]
            theta = delta * (t + dt)
            _rhs(n, &lmat[0, 0], &mplus[0, 0], &mminus[0, 0], &const[0],
                 theta, &yt[0], &k4[0])
            for i in range(n):
                y[i] = y[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])

    inv = 1.0 / n_window
    return acc0_arr * inv, accp_arr * inv, accm_arr * inv, y_arr, max_dev
