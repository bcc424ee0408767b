"""Jacobi theta calculus: theta jets, log-derivatives, and derived functions.

Conventions.  theta(u, tau) is the odd Jacobi theta function

    theta(u) = -i sum_{n in Z} (-1)^n exp(i pi (n+1/2)^2 tau + 2 i pi (n+1/2) u)
             =  2 sum_{n >= 0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi u),

with nome q = exp(i pi tau).  It is odd, vanishes (simply) exactly on the
lattice Z + tau Z, and satisfies

    theta(u+1)   = -theta(u),
    theta(u+tau) = -q^{-1} e^{-2 i pi u} theta(u),
    d theta/d tau = theta'' / (4 i pi)        (heat equation).

tau-derivatives are always computed through the heat equation, never by
differencing.  Unadorned theta', theta''' below denote values at u = 0.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .backend import theta0_odd_jets, theta_jets

TAU_MIN_DEFAULT = 0.05


class DomainError(ValueError):
    """tau outside the supported part of the upper half-plane."""


class SingularityError(ValueError):
    """Evaluation requested too close to a lattice point."""


def puncture_eps(tau: complex) -> float:
    """Distance below which a point counts as sitting on the lattice."""
    return 1e-8 * max(1.0, abs(tau))


def lattice_distance(u: complex, tau: complex) -> float:
    """Distance from u to the lattice Z + tau Z."""
    # reduce u = x + y*tau with x, y real, then scan nearby lattice points
    y = u.imag / tau.imag
    x = u.real - y * tau.real
    best = np.inf
    for m in range(-1, 2):
        for n in range(-1, 2):
            d = abs((x - round(x) - m) + (y - round(y) - n) * tau)
            best = min(best, d)
    return best


@dataclass(frozen=True)
class ModularPoint:
    """A point tau of the upper half-plane with cached nome q = exp(i pi tau)."""

    tau: complex
    tau_min: float = TAU_MIN_DEFAULT
    q: complex = field(init=False)

    def __post_init__(self):
        tau = complex(self.tau)
        if tau.imag < self.tau_min:
            raise DomainError(
                f"Im(tau) = {tau.imag} below tau_min = {self.tau_min}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "q", cmath.exp(1j * cmath.pi * tau))


def reduced_theta_jets(u, m: "ModularPoint", max_order: int):
    """theta jets with the argument lattice-reduced first.

    Near a lattice zero away from the origin the raw series suffers
    catastrophic cancellation; the quasi-periodicity

        theta(u0 + mm + nn tau) =
            (-1)^{mm+nn} q^{-nn^2} e^{-2 i pi nn u0} theta(u0)

    is exact, so jets are evaluated at the reduced argument and pushed
    forward (the prefactor differentiates to -2 i pi nn times itself).
    """
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    tau = m.tau
    nn = np.round(u.imag / tau.imag).astype(int)
    mm = np.round(u.real - nn * tau.real).astype(int)
    u0 = u - mm - nn * tau
    jets0 = theta_jets(u0, m.tau, max_order)
    pref = ((-1.0) ** (mm + nn) * m.q ** (-(nn.astype(float) ** 2))
            * np.exp(-2j * np.pi * nn * u0))
    c = -2j * np.pi * nn
    out = np.empty_like(jets0)
    from math import comb
    for k in range(max_order + 1):
        acc = np.zeros_like(jets0[0])
        for j in range(k + 1):
            acc += comb(k, j) * c ** (k - j) * jets0[j]
        out[k] = pref * acc
    return out


@dataclass(frozen=True)
class ThetaJet:
    """theta value with u-derivatives and the heat-equation tau-derivative."""

    value: complex
    du: tuple  # (theta', theta'', ...) up to the requested order
    dtau: complex  # theta''/(4 i pi); requires order >= 2

    def d(self, k: int) -> complex:
        return self.value if k == 0 else self.du[k - 1]


def theta(u: complex, m: ModularPoint, max_order: int = 2) -> ThetaJet:
    """theta(u, tau) together with u-derivatives up to max_order (<= 4)."""
    if max_order > 4:
        raise ValueError("max_order must be <= 4")
    jets = reduced_theta_jets([u], m, max_order)[:, 0]
    dtau = jets[2] / (4j * np.pi) if max_order >= 2 else None
    return ThetaJet(value=complex(jets[0]),
                    du=tuple(complex(v) for v in jets[1:]),
                    dtau=dtau)


def theta_value(u, m: ModularPoint):
    """Vectorized theta values (no derivatives) at an array of points."""
    return reduced_theta_jets(np.asarray(u, dtype=complex).ravel(), m, 0)[0]


def theta_quasi_period(u: complex, m: ModularPoint) -> complex:
    """theta(u + tau) computed directly from the series.

    Callers compare against -q^{-1} e^{-2 i pi u} theta(u).
    """
    return theta(u + m.tau, m, 0).value


def _checked_jet(u: complex, m: ModularPoint, order: int) -> np.ndarray:
    if lattice_distance(u, m.tau) < puncture_eps(m.tau):
        raise SingularityError(f"u = {u} within puncture_eps of the lattice")
    return reduced_theta_jets([u], m, order)[:, 0]


def rho(u: complex, m: ModularPoint, order: int = 0) -> complex:
    """order-th u-derivative of the log-derivative rho = theta'/theta.

    rho(u+1) = rho(u) and rho(u+tau) = rho(u) - 2 i pi; rho', rho'' are
    elliptic.
    """
    if order not in (0, 1, 2, 3):
        raise ValueError("order must be in {0, 1, 2, 3}")
    t = _checked_jet(u, m, order + 1)
    r0 = t[1] / t[0]
    if order == 0:
        return r0
    r1 = t[2] / t[0] - r0**2
    if order == 1:
        return r1
    r2 = t[3] / t[0] - 3 * (t[2] / t[0]) * r0 + 2 * r0**3
    if order == 2:
        return r2
    # rho''' = theta''''/theta - 4 rho theta'''/theta - 3 (theta''/theta)^2
    #          + 12 rho^2 theta''/theta - 6 rho^4
    return (t[4] / t[0] - 4 * r0 * (t[3] / t[0]) - 3 * (t[2] / t[0]) ** 2
            + 12 * r0**2 * (t[2] / t[0]) - 6 * r0**4)


def eta_logdtau(u: complex, m: ModularPoint) -> complex:
    """eta(u) = d log theta / d tau = theta''(u) / (4 i pi theta(u)).

    Satisfies eta(u+1) = eta(u) and eta(u+tau) = eta(u) - rho(u) + i pi.
    """
    t = _checked_jet(u, m, 2)
    return t[2] / (4j * np.pi * t[0])


def theta0_jets(m: ModularPoint) -> tuple:
    """(theta'(0), theta'''(0), theta^(5)(0)) - the odd Taylor data at 0."""
    return theta0_odd_jets(m.tau)


def mu_prime_zero(m: ModularPoint) -> complex:
    """mu'(0) from the Taylor expansion of theta at the origin.

    With theta = a u + b u^3 + c u^5 + ..., mu(u) = mu'(0) u + O(u^3) and
    mu'(0) = (6 b^2 - 20 a c)/a^2 = (theta'''^2 - theta^(5) theta')/(6 theta'^2).
    """
    d1, d3, d5 = theta0_jets(m)
    return (d3 * d3 - d5 * d1) / (6 * d1 * d1)


def mu_fn(u: complex, m: ModularPoint, order: int = 0) -> complex:
    """mu(u) = -(theta'''/theta - theta'' theta'/theta^2)/2 and its derivative.

    mu is even, mu + rho rho' is elliptic, and mu, mu' extend to u = 0 with
    mu(0) = 0; near the origin the values come from the Taylor data of theta
    (the singularity is removable).
    """
    if order not in (0, 1):
        raise ValueError("order must be 0 or 1")
    if lattice_distance(u, m.tau) < puncture_eps(m.tau):
        if order == 0:
            return 0.0 + 0.0j
        return mu_prime_zero(m)
    t = reduced_theta_jets([u], m, 4 if order else 3)[:, 0]
    if order == 0:
        return -0.5 * (t[3] / t[0] - t[2] * t[1] / t[0] ** 2)
    return -0.5 * (t[4] / t[0] - 2 * t[3] * t[1] / t[0] ** 2
                   - (t[2] / t[0]) ** 2 + 2 * t[2] * t[1] ** 2 / t[0] ** 3)


def theta_mn(u: complex, m: ModularPoint, mm: int, nn: int, N: int) -> complex:
    """Theta with rational characteristics (mm/N, nn/N):

        theta_{m,n}(u) = e^{i pi (m/N)^2 tau + 2 i pi (m/N)(u + n/N)}
                         * theta(u + (m/N) tau + n/N).

    Vanishes exactly on -(m tau + n)/N + Z_tau, and theta_{0,0} = theta.
    The sign of the exponential prefactor is pinned by the requirement that
    e^{2 i pi (m/N) a1 u} theta(u)^{a1} theta(u - t)^{-a1} be proportional,
    as a function of u, to (theta/theta_{m,n})^{a1} at -u.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    pref = cmath.exp(1j * cmath.pi * (mm / N) ** 2 * m.tau
                     + 2j * cmath.pi * (mm / N) * (u + nn / N))
    return pref * theta(u + (mm / N) * m.tau + nn / N, m, 0).value


def theta_mn_jets(m: ModularPoint, mm: int, nn: int, N: int, max_order: int = 2):
    """(theta_{m,n}(0), and u-derivatives at 0) as an array."""
    t = (mm / N) * m.tau + nn / N
    jets = reduced_theta_jets([t], m, max_order)[:, 0]
    pref = cmath.exp(1j * cmath.pi * (mm / N) ** 2 * m.tau
                     + 2j * cmath.pi * (mm / N) * (nn / N))
    c = 2j * cmath.pi * mm / N
    out = np.empty(max_order + 1, dtype=complex)
    # d^k/du^k [e^{c u} theta(u + t)] at u = 0, binomial expansion
    from math import comb
    for k in range(max_order + 1):
        out[k] = pref * sum(comb(k, j) * c ** (k - j) * jets[j]
                            for j in range(k + 1))
    return out


def theta1_null(m: ModularPoint) -> complex:
    """theta_1(0) = -theta(-1/2) = theta(1/2)."""
    return theta(0.5, m, 0).value


def theta3_null(m: ModularPoint) -> complex:
    """theta_3(0) = -theta(-(1+tau)/2) q^{1/4} (e^{-i pi u} = 1 at u = 0)."""
    return -theta(-(1 + m.tau) / 2, m, 0).value * m.q**0.25


def lambda_modular(m: ModularPoint) -> complex:
    """Hauptmodul for Gamma(2): lambda = theta_1(0)^4 / theta_3(0)^4.

    lambda(i) = 1/2, lambda(tau+2) = lambda(tau), lambda -> 0 as Im tau -> oo.
    """
    return (theta1_null(m) / theta3_null(m)) ** 4
