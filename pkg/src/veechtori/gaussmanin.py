"""The explicit flat connection on twisted cohomology over a leaf.

In the basis ([du], [rho' du]) the derivative in tau of the period pair
(F, W) = (int T du, int T rho' du) over any horizontal twisted cycle is
multiplication by the 2x2 matrix

    M00 = 2 i pi a0^2/a1 + a0 rho(t) + (a1/4 i pi)(rho'(t) + rho(t)^2
          - theta'''/theta'),
    M01 = (a1 - 1)/(2 i pi),
    M10 = 2 i pi (a0^2/a1) rho'(t) - 2 a0 mu(t)
          - (a1/4 i pi)(mu'(t) + 2 rho(t) mu(t) - 3 mu'(0)),
    M11 = -a0 rho(t) - (a1/4 i pi)(rho'(t) + rho(t)^2 - theta'''/theta'),

with t = t_tau the moving puncture; unadorned theta', theta''' are values
at 0.  The trace is the constant 2 i pi a0^2/a1 and M01 is constant, so F
satisfies the scalar equation

    F'' - (2 i pi a0^2/a1) F' + (det M + M11') F = 0.

For the auxiliary leaves z_2 = (m tau + n)/N the same connection in the
T_{m,n}-normalization is the trace-free matrix with entries in the
log-tau-derivatives of theta_{m,n}(0) and theta'(0); its indicial data at
the cusp are s_+- = +- m(N-m) alpha_1/(2N).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .foliation import LiftedHolonomy
from .periods import mano_periods, period_F
from .theta import ModularPoint, SingularityError, lattice_distance, \
    mu_prime_zero, puncture_eps, reduced_theta_jets, theta0_jets

TWO_PI_I = 2j * np.pi
FOUR_PI_I = 4j * np.pi


@dataclass(frozen=True)
class GMMatrix:
    M00: complex
    M01: complex
    M10: complex
    M11: complex
    tau: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.M00, self.M01], [self.M10, self.M11]])

    @property
    def trace(self) -> complex:
        return self.M00 + self.M11

    @property
    def det(self) -> complex:
        return self.M00 * self.M11 - self.M01 * self.M10


@dataclass(frozen=True)
class ScalarODE:
    """v'' + p v' + q(tau) v = 0 with constant p."""

    p_coeff: complex
    q_coeff: complex
    tau: complex


@dataclass(frozen=True)
class IndicialData:
    s_plus: float
    s_minus: float
    nu: float
    nu_exact: Fraction | None = None


def _jets_at(u: complex, mpt: ModularPoint, order: int = 4):
    return reduced_theta_jets([u], mpt, order)[:, 0]


def _rho_mu_data(t: complex, mpt: ModularPoint):
    """(rho, rho', rho'', mu, mu') at t plus theta'''/theta' and mu'(0)."""
    if lattice_distance(t, mpt.tau) < puncture_eps(mpt.tau):
        raise SingularityError(f"puncture t = {t} sits on the lattice")
    j = _jets_at(t, mpt, 4)
    r = j[1] / j[0]
    rp = j[2] / j[0] - r**2
    rpp = j[3] / j[0] - 3 * (j[2] / j[0]) * r + 2 * r**3
    mu = -0.5 * (j[3] / j[0] - j[2] * j[1] / j[0] ** 2)
    mup = -0.5 * (j[4] / j[0] - 2 * j[3] * j[1] / j[0] ** 2
                  - (j[2] / j[0]) ** 2 + 2 * j[2] * j[1] ** 2 / j[0] ** 3)
    d1, d3, d5 = theta0_jets(mpt)
    return r, rp, rpp, mu, mup, d3 / d1, (d5 / d1, (d3 / d1) ** 2)


def gm_matrix(a: LiftedHolonomy, mpt: ModularPoint) -> GMMatrix:
    """Connection matrix at tau for the leaf datum a (moving puncture t)."""
    t = a.t_of_tau(mpt.tau)
    al, a0 = a.alpha1, a.a0
    r, rp, _, mu, mup, ddd, _ = _rho_mu_data(t, mpt)
    mu0p = mu_prime_zero(mpt)
    common = (al / FOUR_PI_I) * (rp + r**2 - ddd)
    return GMMatrix(
        M00=TWO_PI_I * a0**2 / al + a0 * r + common,
        M01=(al - 1) / TWO_PI_I,
        M10=(TWO_PI_I * a0**2 / al) * rp - 2 * a0 * mu
        - (al / FOUR_PI_I) * (mup + 2 * r * mu - 3 * mu0p),
        M11=-a0 * r - common,
        tau=mpt.tau)


def gm_m00_dot(a: LiftedHolonomy, mpt: ModularPoint) -> complex:
    """Analytic d M00/d tau via the heat equation and dt/dtau = a0/alpha1.

    Uses d rho/d tau = -mu/(2 i pi), d rho'/d tau = -mu'/(2 i pi) and
    d(theta'''/theta')/d tau = (theta^(5)/theta' - (theta'''/theta')^2)/(4 i pi).
    """
    t = a.t_of_tau(mpt.tau)
    al, a0 = a.alpha1, a.a0
    r, rp, rpp, mu, mup, ddd, (d5d1, d3sq) = _rho_mu_data(t, mpt)
    dt = a0 / al
    dr = rp * dt - mu / TWO_PI_I
    drp = rpp * dt - mup / TWO_PI_I
    dddd = (d5d1 - d3sq) / FOUR_PI_I
    return a0 * dr + (al / FOUR_PI_I) * (drp + 2 * r * dr - dddd)


def mano_matrix(mm: int, nn: int, N: int, alpha1: float,
                mpt: ModularPoint) -> GMMatrix:
    """Trace-free connection matrix for (V, W) on the auxiliary leaf.

    A = alpha_1 (g - h), B = (alpha_1 - 1)/(2 i pi), D = -A,
    C = 2 i pi alpha_1 (G - g^2 - H + h^2), where g, G are the first and
    second log-tau-derivatives of theta_{m,n}(0) and h, H those of
    theta'(0); all tau-derivatives are evaluated through the heat equation.
    """
    if (mm % N, nn % N) == (0, 0):
        raise ValueError("(m, n) must be nonzero mod N")
    tau = mpt.tau
    t = (mm / N) * tau + nn / N
    if lattice_distance(t, tau) < puncture_eps(tau):
        raise SingularityError("theta_{m,n} null point hits the lattice")
    j = _jets_at(t, mpt, 4)
    cpr = 1j * np.pi * (mm / N) ** 2
    hp = (mm / N) * j[1] + j[2] / FOUR_PI_I
    hpp = (mm / N) ** 2 * j[2] + 2 * (mm / N) * j[3] / FOUR_PI_I \
        + j[4] / FOUR_PI_I**2
    g1 = cpr + hp / j[0]
    g2 = cpr**2 + 2 * cpr * hp / j[0] + hpp / j[0]
    d1, d3, d5 = theta0_jets(mpt)
    h1 = d3 / (FOUR_PI_I * d1)
    h2 = d5 / (FOUR_PI_I**2 * d1)
    A = alpha1 * (g1 - h1)
    C = TWO_PI_I * alpha1 * (g2 - g1**2 - h2 + h1**2)
    return GMMatrix(M00=A, M01=(alpha1 - 1) / TWO_PI_I, M10=C, M11=-A,
                    tau=tau)


def system_to_scalar(a: LiftedHolonomy, mpt: ModularPoint) -> ScalarODE:
    """F'' + p F' + q F = 0 for the first components of the system.

    p = -Tr(M) (M01 is constant, so the general reduction has no extra
    term) and q = det M + M11' = det M - M00' -- the two forms agree
    because the trace is constant; both are computed and compared.
    """
    M = gm_matrix(a, mpt)
    m00dot = gm_m00_dot(a, mpt)
    q_b = M.det + (-m00dot)      # det M + M11'
    q_a = M.det - m00dot         # det M - M00' (general reduction, M01 const)
    if abs(q_b - q_a) > 1e-9 * max(1.0, abs(q_b)):
        raise AssertionError("the two scalar-ODE reductions disagree")
    return ScalarODE(p_coeff=-M.trace, q_coeff=q_b, tau=mpt.tau)


def indicial(mm: int, N: int, alpha1) -> IndicialData:
    """Characteristic exponents at the cusp: s_+- = +- m(N-m) a1/(2N)."""
    if not 0 <= mm < N:
        raise ValueError("require 0 <= m < N")
    exact = None
    if isinstance(alpha1, (int, Fraction)):
        exact = Fraction(mm * (N - mm), N) * Fraction(alpha1)
    s = mm * (N - mm) * float(alpha1) / (2 * N)
    return IndicialData(s_plus=s, s_minus=-s, nu=2 * s, nu_exact=exact)


@dataclass(frozen=True)
class OdeReport:
    first_order_residual: float
    second_order_residual: float
    tol: float
    tau: complex

    @property
    def passed(self) -> bool:
        return (self.first_order_residual < self.tol
                and self.second_order_residual < self.tol)


def _stencil(mpt: ModularPoint, h: float):
    return [ModularPoint(mpt.tau + 1j * k * h, tau_min=mpt.tau_min)
            for k in (-2, -1, 0, 1, 2)]


def _d1(vals, h):
    return (vals[0] - 8 * vals[1] + 8 * vals[3] - vals[4]) / (12 * h)


def _d2(vals, h):
    return (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3]
            - vals[4]) / (12 * h * h)


def check_ode(mm: int, nn: int, N: int, alpha1: float, mpt: ModularPoint,
              tol: float = 1e-5, h: float = 1e-3,
              quad_tol: float = 1e-10) -> OdeReport:
    """Numerical verification that the computed periods solve the system.

    (i) centered five-point derivative of (V, W) against the trace-free
    matrix; (ii) second derivative of F_0, F_inf against the scalar
    equation of the moving-puncture connection.  Both relative residuals
    must stay below tol (stencil step h, vertical direction).
    """
    stencil = _stencil(mpt, h)
    per = [mano_periods(mm, nn, N, alpha1, p, quad_tol)[0] for p in stencil]
    per = np.array(per)  # rows: stencil, cols: (V0, Vinf, W0, Winf)
    M = mano_matrix(mm, nn, N, alpha1, stencil[2])
    res1 = 0.0
    for (iv, iw) in ((0, 2), (1, 3)):
        dv = _d1(per[:, iv], 1j * h)
        dw = _d1(per[:, iw], 1j * h)
        v, w = per[2, iv], per[2, iw]
        lhs = np.array([dv, dw])
        rhs = M.as_array() @ np.array([v, w])
        res1 = max(res1, float(np.linalg.norm(lhs - rhs)
                               / max(1.0, np.linalg.norm(rhs))))
    a = LiftedHolonomy.from_leaf_mn(mm, nn, N, alpha1)
    ode = system_to_scalar(a, stencil[2])
    res2 = 0.0
    for cycle in ("gamma0", "gamma_inf"):
        F = np.array([period_F(a, p, cycle, "one", quad_tol,
                               require_normalized=False)[0]
                      for p in stencil])
        lhs = _d2(F, 1j * h) + ode.p_coeff * _d1(F, 1j * h) \
            + ode.q_coeff * F[2]
        scale = max(1.0, abs(ode.q_coeff * F[2]))
        res2 = max(res2, abs(lhs) / scale)
    return OdeReport(first_order_residual=res1, second_order_residual=res2,
                     tol=tol, tau=mpt.tau)
