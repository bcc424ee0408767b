# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython theta-series kernels (hot path of every period integral).

Same contract as `veechtori._kernels_py`; see that module for the series
and the truncation rule.  The inner loop avoids trig and pow calls by
updating e^{i (2k+1) pi u} and q^{(k+1/2)^2} multiplicatively.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, cosh, exp, log, pi, sin, sinh

cnp.import_array()

BACKEND_NAME = "cython"

cdef double _REL_CUTOFF = 1e-20
cdef int _KMAX = 4096


cdef int _num_terms(double absq, double max_im_u, int max_order) except -1:
    cdef double logq, run_max, log_term, a
    cdef int k
    if not (0.0 < absq < 1.0):
        raise ValueError(f"nome modulus {absq} outside (0, 1)")
    logq = log(absq)
    run_max = -1e308
    k = 0
    while k < _KMAX:
        a = (2 * k + 1) * pi
        log_term = (k + 0.5) ** 2 * logq + max_order * log(a) + a * max_im_u
        if log_term > run_max:
            run_max = log_term
        if log_term < run_max + log(_REL_CUTOFF) and k >= 2:
            return k + 1
        k += 1
    raise ValueError("theta series did not truncate; Im(tau) too small")


cdef inline double complex _cis_exp(double complex t) noexcept:
    # e^{i pi t}
    cdef double r = exp(-pi * t.imag)
    return r * cos(pi * t.real) + 1j * r * sin(pi * t.real)

cdef inline double complex _csin(double x, double y) noexcept:
    # sin(x + i y); accurate near zeros, unlike the e^{iz}-difference form
    return sin(x) * cosh(y) + 1j * cos(x) * sinh(y)

cdef inline double complex _ccos(double x, double y) noexcept:
    return cos(x) * cosh(y) - 1j * sin(x) * sinh(y)


def theta_jets(u, tau, int max_order):
    """theta and its u-derivatives up to max_order at each point of u."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] uu = \
        np.ascontiguousarray(np.atleast_1d(np.asarray(u, dtype=np.complex128)))
    cdef Py_ssize_t n = uu.shape[0], i
    cdef int K, k, j
    cdef double max_im = 0.0, aim
    for i in range(n):
        aim = uu[i].imag
        if aim < 0:
            aim = -aim
        if aim > max_im:
            max_im = aim
    cdef double complex tc = tau
    cdef double absq = exp(-pi * tc.imag)
    K = _num_terms(absq, max_im, max_order)

    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = \
        np.zeros((max_order + 1, n), dtype=np.complex128)
    # q^{(k+1/2)^2} = e^{i pi tau (k+1/2)^2}: start at e^{i pi tau/4},
    # multiply by q^{2k+2} each step; the seed comes from tau, so the
    # quarter power is continuous in tau
    cdef double complex q2 = _cis_exp(2.0 * tc)
    cdef double complex qpow0 = _cis_exp(0.25 * tc)
    cdef double complex sv, cv, coeff, qpow, qstep, term
    cdef double a, apow, ux, uy
    cdef double complex acc[8]
    for i in range(n):
        ux = uu[i].real
        uy = uu[i].imag
        qpow = qpow0
        qstep = q2
        for j in range(max_order + 1):
            acc[j] = 0
        for k in range(K):
            a = (2 * k + 1) * pi
            coeff = qpow if k % 2 == 0 else -qpow
            sv = _csin(a * ux, a * uy)
            cv = _ccos(a * ux, a * uy)
            apow = 1.0
            for j in range(max_order + 1):
                if j % 4 == 0:
                    term = sv
                elif j % 4 == 1:
                    term = cv
                elif j % 4 == 2:
                    term = -sv
                else:
                    term = -cv
                acc[j] = acc[j] + coeff * apow * term
                apow = apow * a
            qpow = qpow * qstep
            qstep = qstep * q2
        for j in range(max_order + 1):
            out[j, i] = 2.0 * acc[j]
    return out


def theta0_odd_jets(tau):
    """(theta'(0), theta'''(0), theta^(5)(0)) from the differentiated series."""
    cdef double complex tc = tau
    cdef int K = _num_terms(exp(-pi * tc.imag), 0.0, 5), k
    cdef double complex q2 = _cis_exp(2.0 * tc)
    cdef double complex qpow = _cis_exp(0.25 * tc)
    cdef double complex qstep = q2
    cdef double complex coeff, d1 = 0, d3 = 0, d5 = 0
    cdef double a
    for k in range(K):
        a = (2 * k + 1) * pi
        coeff = qpow if k % 2 == 0 else -qpow
        d1 = d1 + coeff * a
        d3 = d3 - coeff * a ** 3
        d5 = d5 + coeff * a ** 5
        qpow = qpow * qstep
        qstep = qstep * q2
    return 2.0 * d1, 2.0 * d3, 2.0 * d5
