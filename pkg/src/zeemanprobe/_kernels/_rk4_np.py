"""Pure-numpy fixed-step propagator for the harmonically driven master equation.

Integrates ``y' = L y + e^{+i delta t} Mp y + e^{-i delta t} Mm y + c``
with classical RK4 and accumulates the discrete Fourier projections of
``y`` onto {1, e^{+i delta t}, e^{-i delta t}} over the trailing
``n_window`` steps.  When the window spans an integer number of beat
periods the discrete projections separate the harmonics exactly.

This is the fallback for the compiled kernel in ``_rk4_cy``; both share
this call signature and are compared in the benchmark suite.
"""

from __future__ import annotations

import numpy as np


def rk4_harmonic(lmat, const, mplus, mminus, delta, dt, n_steps, n_window, y0, dim):
    """Return ``(avg_dc, avg_plus, avg_minus, y_final, max_trace_dev)``.

    ``avg_plus`` estimates the coefficient of ``e^{+i delta t}`` in
    ``y(t)`` (and ``avg_minus`` its counterpart), ``avg_dc`` the static
    part; ``max_trace_dev`` is the largest ``|tr(rho) - 1|`` seen, a
    conservation diagnostic for closed systems.
    """
    n = y0.size
    y = np.array(y0, dtype=complex, copy=True)
    k1 = np.empty(n, complex)
    k2 = np.empty(n, complex)
    k3 = np.empty(n, complex)
    k4 = np.empty(n, complex)
    yt = np.empty(n, complex)
    tmp = np.empty(n, complex)
    acc0 = np.zeros(n, complex)
    accp = np.zeros(n, complex)
    accm = np.zeros(n, complex)
    diag = np.arange(dim) * (dim + 1)
    start = n_steps - n_window
    half = 0.5 * dt
    sixth = dt / 6.0
    max_dev = 0.0

    def rhs(t, v, out):
        np.matmul(lmat, v, out=out)
        phase = np.exp(1j * delta * t)
        np.matmul(mplus, v, out=tmp)
        np.multiply(tmp, phase, out=tmp)
        out += tmp
        np.matmul(mminus, v, out=tmp)
        np.multiply(tmp, np.conj(phase), out=tmp)
        out += tmp
        out += const

    for j in range(n_steps):
        t = dt * j
        if j >= start:
            ph = np.exp(-1j * delta * t)
            acc0 += y
            accp += ph * y
            accm += np.conj(ph) * y
        dev = abs(y[diag].sum() - 1.0)
        if dev > max_dev:
            max_dev = dev
        rhs(t, y, k1)
        np.multiply(k1, half, out=yt)
        yt += y
        rhs(t + half, yt, k2)
        np.multiply(k2, half, out=yt)
        yt += y
        rhs(t + half, yt, k3)
        np.multiply(k3, dt, out=yt)
        yt += y
        rhs(t + dt, yt, k4)
        k2 += k3
        k2 *= 2.0
        k1 += k4
        k1 += k2
        k1 *= sixth
        y += k1

    inv = 1.0 / n_window
    return acc0 * inv, accp * inv, accm * inv, y, float(max_dev)
