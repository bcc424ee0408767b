"""Pure-Python (numpy) theta-series kernels.

Fallback backend for the Cython extension `veechtori._kernels`; both expose
the same two entry points with identical semantics:

    theta_jets(u, q, max_order)  -> (max_order+1, len(u)) complex array
    theta0_odd_jets(q)           -> (theta'(0), theta'''(0), theta^(5)(0))

The series used throughout is

    theta(u) = 2 * sum_{k>=0} (-1)^k q^{(k+1/2)^2} sin((2k+1) pi u)

and the j-th u-derivative replaces sin by its j-th derivative and carries
((2k+1) pi)^j.  Truncation is adaptive: summation stops once the bound on
the next term, ((2k+3) pi)^max_order * |q|^{(k+3/2)^2} * e^{(2k+3) pi Mu}
with Mu = max |Im u|, drops below 1e-20 times the largest term seen.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

_REL_CUTOFF = 1e-20
_KMAX = 4096


def _num_terms(absq: float, max_im_u: float, max_order: int) -> int:
    """Number of series terms needed for the adaptive truncation bound."""
    if not 0.0 < absq < 1.0:
        raise ValueError(f"nome modulus {absq} outside (0, 1)")
    logq = np.log(absq)
    run_max = -np.inf
    k = 0
    while k < _KMAX:
        a = (2 * k + 1) * np.pi
        log_term = (k + 0.5) ** 2 * logq + max_order * np.log(a) + a * max_im_u
        run_max = max(run_max, log_term)
        if log_term < run_max + np.log(_REL_CUTOFF) and k >= 2:
            return k + 1
        k += 1
    raise ValueError("theta series did not truncate; Im(tau) too small")


def theta_jets(u, tau, max_order):
    """theta and its u-derivatives up to max_order at each point of u.

    Takes tau (not the nome): fractional powers of q = e^{i pi tau} must be
    taken as e^{i pi tau (..)} to stay continuous in tau across Re(tau) = 1.
    """
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    absq = float(np.exp(-np.pi * np.imag(tau)))
    K = _num_terms(absq, float(np.max(np.abs(u.imag), initial=0.0)), max_order)
    k = np.arange(K)
    a = (2 * k + 1) * np.pi
    c = np.where(k % 2 == 0, 1.0, -1.0) * np.exp(1j * np.pi * tau
                                                 * (k + 0.5) ** 2)
    # sin/cos computed directly: the e^{iau}-difference form loses all
    # precision next to the zeros of theta
    phase = np.outer(a, u)
    sin_au = np.sin(phase)
    cos_au = np.cos(phase)
    # d^j/du^j sin(a u) = a^j * [sin, cos, -sin, -cos][j % 4](a u)
    cycle = (sin_au, cos_au, -sin_au, -cos_au)
    out = np.empty((max_order + 1, u.size), dtype=complex)
    for j in range(max_order + 1):
        out[j] = 2.0 * ((c * a**j) @ cycle[j % 4])
    return out


def theta0_odd_jets(tau):
    """(theta'(0), theta'''(0), theta^(5)(0)) from the differentiated series."""
    absq = float(np.exp(-np.pi * np.imag(tau)))
    K = _num_terms(absq, 0.0, 5)
    k = np.arange(K)
    a = (2 * k + 1) * np.pi
    c = np.where(k % 2 == 0, 1.0, -1.0) * np.exp(1j * np.pi * tau
                                                 * (k + 0.5) ** 2)
    d1 = 2.0 * np.sum(c * a)
    d3 = -2.0 * np.sum(c * a**3)
    d5 = 2.0 * np.sum(c * a**5)
    return complex(d1), complex(d3), complex(d5)
