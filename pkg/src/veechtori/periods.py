"""Elliptic hypergeometric period integrals over twisted cycles.

The integrands are products of two branched theta factors,

    f(u) = exp(c u + c0) * theta(u - s1)^{e1} * theta(u - s2)^{e2}
           [ * rho'(u)  for the weighted variant ],

integrated over the cycles gamma_0 (a deformation of [0, 1]) and
gamma_inf (a deformation of [0, tau]).  Branches are tracked continuously:
the logs of both theta factors are anchored at the base point
u0 = 1e-3 (1 - 0.2 i) -- principal there at tau = i Im(tau), continued
along the vertical tau-segment to the requested tau (with the puncture
following the leaf) -- and then continued along every integration path,
refining wherever the argument jumps by pi/2 or more between samples.

Weight-one integrals converge as improper integrals and are computed by
tanh-sinh quadrature on the deformed segments, split at the closest
approach to any puncture.  The rho'-weighted integrals diverge as improper
integrals; they are evaluated as pairings with the regularized cycles:
truncated segment plus the four corner arcs of the circle of radius eps_r
around the origin of the torus, with the loading coefficients of the
regularization.  That pairing is exactly independent of eps_r, which the
tests exercise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .foliation import LiftedHolonomy
from .theta import ModularPoint, theta_value

DEFAULT_TOL = 1e-10
_TMAX = 4.0
_MIN_LEVEL = 2
_MAX_LEVEL = 7


class BranchTrackingError(RuntimeError):
    """Continuation could not bound the argument jumps after refinement."""


class ContourCollisionError(RuntimeError):
    """A puncture sits on (or too close to) the integration contour."""


# ---------------------------------------------------------------------------
# tanh-sinh nodes on (0, 1), stable near both endpoints

@lru_cache(maxsize=None)
def _de_nodes(level: int):
    h = 0.5 / 2**level
    t = np.arange(-int(_TMAX / h), int(_TMAX / h) + 1) * h
    y = np.pi * np.sinh(t)
    s = 1.0 / (1.0 + np.exp(-y))
    w = h * np.pi * np.cosh(t) * s * (1.0 - s)
    return s, w


@lru_cache(maxsize=None)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


# ---------------------------------------------------------------------------
# branch-tracked logarithms

def tracked_logs(values: np.ndarray, jump_tol: float = np.pi / 2):
    """Continuous logs along an ordered sample of a nonvanishing function;
    returns (logs, ok) with ok False when a jump reaches jump_tol."""
    mags = np.log(np.abs(values))
    args = np.angle(values)
    d = np.diff(args)
    d = (d + np.pi) % (2 * np.pi) - np.pi
    if d.size and np.max(np.abs(d)) >= jump_tol:
        return None, False
    cum = np.empty_like(args)
    cum[0] = args[0]
    if d.size:
        cum[1:] = args[0] + np.cumsum(d)
    return mags + 1j * cum, True


def _align(logs: np.ndarray, anchor_log: complex) -> np.ndarray:
    k = round((anchor_log.imag - logs[0].imag) / (2 * np.pi))
    logs = logs + 2j * np.pi * k
    if abs(logs[0] - anchor_log) > 1e-6:
        raise BranchTrackingError(f"anchor mismatch: {logs[0]} vs {anchor_log}")
    return logs


def _interleave(a: np.ndarray) -> np.ndarray:
    mid = 0.5 * (a[:-1] + a[1:])
    out = np.empty(a.size + mid.size, dtype=a.dtype)
    out[0::2] = a
    out[1::2] = mid
    return out


def _refine_track_param(mpt: ModularPoint, shift: complex, params, to_point,
                        anchor_log: complex,
                        max_doublings: int = 9) -> np.ndarray:
    """Logs of theta(u - shift) along the curve to_point(params), with the
    first point pinned to anchor_log.  Refinement inserts parameter
    midpoints, so curved paths are refined along the curve."""
    work = np.asarray(params, dtype=float)
    idx = np.arange(work.size)
    for _ in range(max_doublings):
        vals = theta_value(np.asarray(to_point(work), dtype=complex) - shift,
                           mpt)
        if np.any(vals == 0):
            raise ContourCollisionError("path hits a theta zero")
        logs, ok = tracked_logs(vals)
        if ok:
            return _align(logs, anchor_log)[idx]
        work = _interleave(work)
        idx = idx * 2
    raise BranchTrackingError("argument jumps persist after refinement")


def _refine_track(mpt: ModularPoint, shift: complex, pts: np.ndarray,
                  anchor_log: complex, max_doublings: int = 9) -> np.ndarray:
    """Logs along an ordered polyline of points (refined along its edges)."""
    pts = np.asarray(pts, dtype=complex)
    knots = np.arange(pts.size, dtype=float)

    def to_point(s):
        return np.interp(s, knots, pts.real) + 1j * np.interp(s, knots,
                                                              pts.imag)

    return _refine_track_param(mpt, shift, knots, to_point, anchor_log)


def _polyline(points, samples_per_edge: int = 33) -> np.ndarray:
    pts = [np.asarray([points[0]], dtype=complex)]
    for a, b in zip(points[:-1], points[1:]):
        seg = a + (b - a) * np.linspace(0.0, 1.0, samples_per_edge)[1:]
        pts.append(seg.astype(complex))
    return np.concatenate(pts)


# ---------------------------------------------------------------------------
# integrands

def _theta_rho_prime(pts, mpt):
    from .theta import reduced_theta_jets
    jets = reduced_theta_jets(np.asarray(pts, dtype=complex), mpt, 2)
    r = jets[1] / jets[0]
    return jets[2] / jets[0] - r * r


@dataclass
class TwoFactorIntegrand:
    """exp(c_lin u + c_const) theta(u - s1)^{e1} theta(u - s2)^{e2}.

    (rho0, rho1, rho_inf) is the multiplicative monodromy of the function
    itself along the horizontal loop, a small loop around the puncture at
    the origin, and the vertical loop; the regularized-cycle loading
    coefficients are built from these.
    """

    mpt: ModularPoint
    c_lin: complex
    c_const: complex
    e1: float
    s1: complex
    e2: float
    s2: complex
    rho0: complex
    rho1: complex
    rho_inf: complex
    s2_of_tau: object = None  # tau -> second zero, for the tau-continuation

    base_point: complex = 1e-3 * (1 - 0.2j)
    base_log1: complex = field(default=0j, init=False)
    base_log2: complex = field(default=0j, init=False)

    def punctures(self):
        return (self.s1, self.s2)

    def anchor_base(self, tau_steps: int = 49):
        """Principal logs at the base point at i Im(tau), continued to tau
        along the vertical segment (the puncture follows the leaf)."""
        s2f = self.s2_of_tau if self.s2_of_tau is not None else (
            lambda t: self.s2)
        self.base_log1 = self.vertical_log(lambda t: self.base_point,
                                           lambda t: self.s1, tau_steps)
        self.base_log2 = self.vertical_log(lambda t: self.base_point,
                                           s2f, tau_steps)
        return self

    def vertical_log(self, point_of_tau, shift_of_tau, tau_steps: int = 49):
        """Continuous log of theta(p(tau') - s(tau'), tau') along the
        vertical tau-segment from i Im(tau) (principal there) to tau."""
        tau = self.mpt.tau
        taus = 1j * tau.imag + np.linspace(0.0, 1.0, tau_steps) * tau.real
        work = np.asarray(taus, dtype=complex)
        for _ in range(9):
            vals = np.array([
                theta_value([point_of_tau(t) - shift_of_tau(t)],
                            ModularPoint(t, tau_min=min(0.01, t.imag)))[0]
                for t in work])
            logs, ok = tracked_logs(vals)
            if ok:
                logs = logs - logs[0] + cmath.log(vals[0])
                return complex(logs[-1])
            work = _interleave(work)
        raise BranchTrackingError("tau-continuation did not stabilize")

    def entry_anchors(self, entry_curve):
        """Branch logs at entry_curve(tau): principal at i Im(tau) and
        continued vertically, the entry point and the moving puncture both
        following the leaf.  This pins the determination of each contour
        continuously in tau, with no discrete routing choices."""
        s2f = self.s2_of_tau if self.s2_of_tau is not None else (
            lambda t: self.s2)
        a1 = self.vertical_log(entry_curve, lambda t: self.s1)
        a2 = self.vertical_log(entry_curve, s2f)
        return complex(a1), complex(a2)

    def values(self, pts: np.ndarray, logs1: np.ndarray, logs2: np.ndarray,
               weight: str = "one", rho_prime_at=None) -> np.ndarray:
        out = np.exp(self.c_lin * pts + self.c_const
                     + self.e1 * logs1 + self.e2 * logs2)
        if weight == "rho_prime":
            at = pts if rho_prime_at is None else rho_prime_at
            out = out * _theta_rho_prime(at, self.mpt)
        elif weight != "one":
            raise ValueError(f"unknown weight {weight!r}")
        return out


def integrand_T_a(a: LiftedHolonomy, mpt: ModularPoint) -> TwoFactorIntegrand:
    """omega_a: exp(2 i pi a0 u) theta(u)^{a1} theta(u - t_tau)^{-a1}."""
    al = a.alpha1
    return TwoFactorIntegrand(
        mpt=mpt, c_lin=2j * np.pi * a.a0, c_const=0.0,
        e1=al, s1=0.0, e2=-al, s2=a.t_of_tau(mpt.tau),
        rho0=cmath.exp(2j * cmath.pi * a.a0),
        rho1=cmath.exp(2j * cmath.pi * al),
        rho_inf=cmath.exp(2j * cmath.pi * a.a_inf),
        s2_of_tau=a.t_of_tau).anchor_base()


def integrand_T_mn(mm: int, nn: int, N: int, alpha1: float,
                   mpt: ModularPoint) -> TwoFactorIntegrand:
    """T_{m,n} = (theta(u)/theta_{m,n}(u))^{alpha_1} with the exponential
    prefactor of theta_{m,n} made explicit; second zero set at
    -(m tau + n)/N + lattice.  Its own monodromy is
    (mu^{-m}, mu^N, mu^{n}), mu = e^{2 i pi alpha_1/N}."""
    tau = mpt.tau
    mu = cmath.exp(2j * cmath.pi * alpha1 / N)
    return TwoFactorIntegrand(
        mpt=mpt,
        c_lin=-2j * np.pi * (mm / N) * alpha1,
        c_const=-alpha1 * (1j * np.pi * (mm / N) ** 2 * tau
                           + 2j * np.pi * mm * nn / N**2),
        e1=alpha1, s1=0.0, e2=-alpha1, s2=-((mm / N) * tau + nn / N),
        rho0=mu ** (-mm), rho1=mu ** N, rho_inf=mu ** nn,
        s2_of_tau=lambda t: -((mm / N) * t + nn / N)).anchor_base()


def integrand_V_mn(mm: int, nn: int, N: int, alpha1: float,
                   mpt: ModularPoint) -> TwoFactorIntegrand:
    """T_{m,n} pulled back to the cycles of the t-punctured curve.

    The variable flip u -> -u identifies T_{m,n} with the flat-metric
    function of the leaf up to the explicit gauge
    exp(-alpha_1 (i pi (m/N)^2 tau + 2 i pi m n/N^2)); integrating the
    gauged form over the standard cycles realizes the (V, W) system, whose
    connection matrix is the trace-free Mano matrix (the gauge removes the
    constant trace of the moving-puncture connection)."""
    tau = mpt.tau
    a = LiftedHolonomy.from_leaf_mn(mm, nn, N, alpha1)
    t = a.t_of_tau(tau)
    return TwoFactorIntegrand(
        mpt=mpt, c_lin=2j * np.pi * a.a0,
        c_const=-alpha1 * (1j * np.pi * (mm / N) ** 2 * tau
                           + 2j * np.pi * mm * nn / N**2),
        e1=alpha1, s1=0.0, e2=-alpha1, s2=t,
        rho0=cmath.exp(2j * cmath.pi * a.a0),
        rho1=cmath.exp(2j * cmath.pi * alpha1),
        rho_inf=cmath.exp(2j * cmath.pi * a.a_inf),
        s2_of_tau=a.t_of_tau).anchor_base()


# ---------------------------------------------------------------------------
# contours

@dataclass(frozen=True)
class Leg:
    """Piece s in [sa, sb] of the curve A + (B-A) g + bump sin(pi g)."""

    A: complex
    B: complex
    bump: complex
    sa: float
    sb: float

    def u(self, s):
        g = self.sa + (self.sb - self.sa) * np.asarray(s)
        return self.A + (self.B - self.A) * g + self.bump * np.sin(np.pi * g)

    def du(self, s):
        g = self.sa + (self.sb - self.sa) * np.asarray(s)
        return ((self.B - self.A)
                + self.bump * np.pi * np.cos(np.pi * g)) * (self.sb - self.sa)


def _lattice_translates(p: complex, tau: complex, span: int = 2):
    for mmm in range(-span, span + 1):
        for nnn in range(-span, span + 1):
            yield p + mmm + nnn * tau


def _split_params(A, B, punctures, tau, reach=0.45):
    out = []
    L = B - A
    for p in punctures:
        for q in _lattice_translates(p, tau):
            s = ((q - A) / L).real
            if 0.02 < s < 0.98 and abs(A + L * s - q) < reach * abs(L):
                out.append(round(s, 12))
    return sorted(set(out))


def _build_legs(A, B, bump, punctures, tau):
    splits = [0.0] + _split_params(A, B, punctures, tau) + [1.0]
    return [Leg(A, B, bump, sa, sb)
            for sa, sb in zip(splits[:-1], splits[1:]) if sb - sa > 1e-9]


def _clearance(legs, punctures, tau) -> float:
    """Least distance from the leg chain to any puncture translate, not
    counting the punctures the chain terminates at."""
    ends = (complex(legs[0].u(0.0)), complex(legs[-1].u(1.0)))
    s = np.linspace(0.0, 1.0, 161)[1:-1]
    best = np.inf
    for leg in legs:
        pts = leg.u(s)
        for p in punctures:
            for q in _lattice_translates(p, tau):
                if any(abs(q - e) < 1e-9 for e in ends):
                    continue
                best = min(best, float(np.min(np.abs(pts - q))))
    return best


@dataclass(frozen=True)
class Contour:
    legs: tuple
    entry_curve: object  # tau' -> entry point of the chain at tau'


def _cycle_frame(kind: str, integrand: TwoFactorIntegrand):
    """(endpoint-of-tau, deformation-direction-of-tau) for each cycle."""
    if kind == "gamma0":
        return (lambda t: 1.0 + 0j), (lambda t: -1j)
    if kind == "gamma_inf":
        # punctures sitting on [0, tau] are passed on the left: the
        # normalized holonomy range places the moving puncture just right
        # of the segment, and the cycle conventions are the continuity
        # limit of that configuration
        return ((lambda t: t),
                (lambda t: cmath.exp(1j * (cmath.phase(t) + cmath.pi / 2))))
    if kind == "gamma2_segment":
        s2f = integrand.s2_of_tau if integrand.s2_of_tau is not None else (
            lambda t: integrand.s2 if integrand.e2 < 0 else integrand.s1)
        return (s2f,
                (lambda t: cmath.exp(1j * (cmath.phase(s2f(t))
                                           - cmath.pi / 2))))
    raise ValueError(f"unknown cycle {kind!r}")


def make_contour(kind: str, integrand: TwoFactorIntegrand,
                 eps_def: float | None = None,
                 s_entry: float = 0.02) -> Contour:
    """Deformed cycle support from the origin: gamma0 dips below [0, 1],
    gamma_inf passes left of [0, tau], the gamma2 segment runs to the
    moving puncture.  On collision the amplitude is retried at half and
    double size.  The contour carries its entry curve tau' -> u, used to
    anchor the branch by vertical continuation."""
    tau = integrand.mpt.tau
    end_f, dir_f = _cycle_frame(kind, integrand)
    A, B = 0.0 + 0j, complex(end_f(tau))
    base = eps_def if eps_def is not None else 0.05 * min(1.0, tau.imag)
    punct = integrand.punctures()
    for fac in (1.0, 0.5, 2.0, 0.25, 4.0):
        eps = base * fac
        legs = _build_legs(A, B, dir_f(tau) * eps, punct, tau)
        if _clearance(legs, punct, tau) > 0.2 * eps:
            def entry(t, fac=fac):
                e = (base if eps_def is not None
                     else 0.05 * min(1.0, t.imag)) * fac
                return (end_f(t) * s_entry
                        + dir_f(t) * e * math.sin(math.pi * s_entry))
            return Contour(legs=tuple(legs), entry_curve=entry)
    raise ContourCollisionError(f"no puncture-free deformation of {kind}")


# ---------------------------------------------------------------------------
# quadrature along legs

def _bidir(mpt, shift, leg, s, mid, anchor_log):
    right = _refine_track_param(mpt, shift, s[mid:], leg.u, anchor_log)
    left = _refine_track_param(mpt, shift, s[mid::-1], leg.u, anchor_log)
    return np.concatenate([left[::-1], right[1:]])


def _track_on_leg(integrand, leg, s_path, anchors):
    l1 = _refine_track_param(integrand.mpt, integrand.s1, s_path, leg.u,
                             anchors[0])
    l2 = _refine_track_param(integrand.mpt, integrand.s2, s_path, leg.u,
                             anchors[1])
    return complex(l1[-1]), complex(l2[-1])


def _contour_anchors(integrand: TwoFactorIntegrand, contour: Contour,
                     s_entry: float = 0.02, need_ends: bool = False):
    """Mid-leg branch anchors for a chain of legs emanating from the origin.

    The entry of the chain is anchored by vertical tau-continuation of the
    contour's own entry curve; the logs are then continued along the legs
    and across their junctions, so the whole contour carries one
    determination, continuous in tau.  Returns (per-leg mid anchors, logs
    at the chain start, logs at the chain end); terminal logs are tracked
    only when need_ends is set (the ends of the direct cycles are
    punctures).
    """
    legs = contour.legs
    entry = complex(contour.entry_curve(integrand.mpt.tau))
    cur = integrand.entry_anchors(contour.entry_curve)
    # step from the entry point onto the first leg (both lie within the
    # deformation tube next to the origin)
    p_leg = complex(legs[0].u(s_entry))
    if abs(p_leg - entry) > 1e-13:
        hop = _polyline([entry, p_leg], 17)
        cur = (complex(_refine_track(integrand.mpt, integrand.s1, hop,
                                     cur[0])[-1]),
               complex(_refine_track(integrand.mpt, integrand.s2, hop,
                                     cur[1])[-1]))
    start_logs = None
    if need_ends:
        start_logs = _track_on_leg(integrand, legs[0],
                                   np.linspace(s_entry, 0.0, 33), cur)
    mids = []
    for k, leg in enumerate(legs):
        lo = s_entry if k == 0 else 0.0
        mid = _track_on_leg(integrand, leg, np.linspace(lo, 0.5, 33), cur)
        mids.append(mid)
        if need_ends or k + 1 < len(legs):
            cur = _track_on_leg(integrand, leg, np.linspace(0.5, 1.0, 33),
                                mid)
    return mids, start_logs, cur


def _integrate_leg(integrand: TwoFactorIntegrand, leg: Leg, weight: str,
                   tol: float, anchors):
    ends = (complex(leg.u(0.0)), complex(leg.u(1.0)))
    prev = None
    err = np.inf
    for level in range(_MIN_LEVEL, _MAX_LEVEL + 1):
        s, w = _de_nodes(level)
        pts = leg.u(s)
        # nodes that round onto a terminal puncture carry O(d^{1+a1})
        # weight and are dropped (their theta value would be exactly 0)
        off = np.minimum(np.abs(pts - ends[0]), np.abs(pts - ends[1]))
        keep = off > 1e-13
        s, w, pts = s[keep], w[keep], pts[keep]
        mid = int(np.argmin(np.abs(s - 0.5)))
        l1 = _bidir(integrand.mpt, integrand.s1, leg, s, mid, anchors[0])
        l2 = _bidir(integrand.mpt, integrand.s2, leg, s, mid, anchors[1])
        vals = integrand.values(pts, l1, l2, weight)
        vals = np.where(np.isfinite(vals), vals, 0.0)
        total = complex(np.sum(vals * leg.du(s) * w))
        if prev is not None:
            err = abs(total - prev)
            if err <= tol * max(1.0, abs(total)):
                return total, err
        prev = total
    return prev, err


def _integrate_contour(integrand, contour: Contour, weight, tol,
                       chain=None):
    if chain is None:
        chain = _contour_anchors(integrand, contour)
    mids, _, _ = chain
    legs = contour.legs
    total, err = 0.0 + 0j, 0.0
    for leg, anchors in zip(legs, mids):
        v, e = _integrate_leg(integrand, leg, weight,
                              tol / max(1, len(legs)), anchors)
        total += v
        err += e
    return total, err


# ---------------------------------------------------------------------------
# regularized pairings (the only route for the rho'-weighted integrals)

def _loop_integral(integrand: TwoFactorIntegrand, center: complex,
                   start: complex, start_logs, weight: str,
                   n_nodes: int = 64):
    """Counterclockwise circle around `center` based at `start`, with the
    branch continued from the given logs at `start`; returns the loop
    integral and the monodromy factor of the loop."""
    radius = abs(start - center)
    th0 = cmath.phase(start - center)
    x, gw = _gauss(n_nodes)
    th = th0 + 2 * np.pi * (x + 1) / 2
    th_all = np.concatenate([[th0], th, [th0 + 2 * np.pi]])

    def on_circle(t):
        return center + radius * np.exp(1j * t)

    l1 = _refine_track_param(integrand.mpt, integrand.s1, th_all, on_circle,
                             start_logs[0])
    l2 = _refine_track_param(integrand.mpt, integrand.s2, th_all, on_circle,
                             start_logs[1])
    pts = on_circle(th_all)
    f = integrand.values(pts[1:-1], l1[1:-1], l2[1:-1], weight)
    du = 1j * radius * np.exp(1j * th)
    loop = complex(np.sum(f * du * gw) * np.pi)
    # monodromy of the integrand around the loop, from the tracked logs
    mono = cmath.exp(integrand.c_lin * (pts[-1] - pts[0])
                     + integrand.e1 * (l1[-1] - l1[0])
                     + integrand.e2 * (l2[-1] - l2[0]))
    return loop, mono


def _nearest_lattice_point(p: complex, tau: complex) -> complex:
    y = round(p.imag / tau.imag)
    x = round(p.real - y * tau.real)
    return x + y * tau


def regularized_cycle(integrand: TwoFactorIntegrand, cycle: str, weight: str,
                      tol: float = DEFAULT_TOL, eps_r: float | None = None,
                      loop_nodes: int = 64):
    """Pairing of the regularized cycle with the (possibly rho'-weighted)
    closed form.

    The cycle is assembled in boundary-cancelling form: the truncated
    deformed segment, plus the based loop around the start puncture with
    coefficient 1/(rho_loop - 1) and the based loop around the end puncture
    with coefficient -1/(rho_loop - 1), each loop's branch continued from
    the segment's own branch at the junction.  The twisted boundary then
    vanishes, so the value is exactly independent of the truncation radius
    eps_r, and for weight one it equals the improper direct integral.
    """
    tau = integrand.mpt.tau
    kind = "gamma2_segment" if cycle == "gamma2" else cycle
    end_f, dir_f = _cycle_frame(kind, integrand)
    P_s, P_e = 0.0 + 0j, complex(end_f(tau))
    if eps_r is None:
        clear = min(abs(q - P) for P in (P_s, P_e)
                    for p in integrand.punctures()
                    for q in _lattice_translates(p, tau)
                    if abs(q - P) > 1e-12)
        eps_r = min(0.04 * max(1.0, tau.imag), 0.3 * clear, 0.3)
    span = P_e - P_s
    u_hat = span / abs(span)
    A = P_s + eps_r * u_hat
    B = P_e - eps_r * u_hat
    eps_def = 0.05 * min(1.0, tau.imag)
    punct = integrand.punctures()
    for fac in (1.0, 0.5, 2.0):
        legs = _build_legs(A, B, dir_f(tau) * eps_def * fac, punct, tau)
        if _clearance(legs, punct, tau) > 0.2 * eps_def * fac:
            break
    else:
        raise ContourCollisionError("no clear truncated segment")

    def entry(t, fac=fac, s_entry=0.02):
        e = end_f(t)
        uh = e / abs(e)
        a_t = eps_r * uh
        b_t = e - eps_r * uh
        bump = dir_f(t) * 0.05 * min(1.0, t.imag) * fac
        return a_t + (b_t - a_t) * s_entry + bump * math.sin(
            math.pi * s_entry)

    contour = Contour(legs=tuple(legs), entry_curve=entry)
    chain = _contour_anchors(integrand, contour, need_ends=True)
    seg, err = _integrate_contour(integrand, contour, weight, tol, chain)
    _, logsA, logsB = chain
    loopS, monoS = _loop_integral(integrand, P_s, A, logsA, weight,
                                  loop_nodes)
    loopE, monoE = _loop_integral(integrand, P_e, B, logsB, weight,
                                  loop_nodes)
    if abs(monoS - 1) < 1e-9 or abs(monoE - 1) < 1e-9:
        raise ZeroDivisionError("trivial loop monodromy; cycle degenerates")
    total = seg + loopS / (monoS - 1) - loopE / (monoE - 1)
    return total, err


# ---------------------------------------------------------------------------
# public operations

@dataclass(frozen=True)
class PeriodVector:
    F_inf: complex
    F_0: complex
    est_error: float
    tau: complex


def normalized_range(a: LiftedHolonomy) -> bool:
    """(a_0, -a_inf) in alpha_1 [0, 1)^2 up to roundoff."""
    r0, ri = a.r
    return -1e-12 <= r0 < 1 - 1e-12 and -1e-12 <= -ri < 1 - 1e-12


def period_F(a: LiftedHolonomy, mpt: ModularPoint, cycle: str = "gamma0",
             weight: str = "one", tol: float = DEFAULT_TOL,
             require_normalized: bool = True):
    """F over the requested cycle: direct deformed-segment quadrature for
    weight one, regularized pairing for weight rho_prime."""
    if require_normalized and not normalized_range(a):
        raise ValueError("holonomy outside the alpha_1 [0,1)^2 range; "
                         "pass require_normalized=False to force")
    f = integrand_T_a(a, mpt)
    if weight == "one":
        return _integrate_contour(f, make_contour(cycle, f), weight, tol)
    return regularized_cycle(f, cycle, weight, tol)


def period_vector(a: LiftedHolonomy, mpt: ModularPoint,
                  tol: float = DEFAULT_TOL,
                  require_normalized: bool = True) -> PeriodVector:
    fi, ei = period_F(a, mpt, "gamma_inf", "one", tol, require_normalized)
    f0, e0 = period_F(a, mpt, "gamma0", "one", tol, require_normalized)
    return PeriodVector(F_inf=fi, F_0=f0, est_error=ei + e0, tau=mpt.tau)


def leaf_period_vector(mm: int, nn: int, N: int, alpha1: float,
                       mpt: ModularPoint,
                       tol: float = DEFAULT_TOL) -> PeriodVector:
    """Period vector of the leaf datum a = alpha_1 (m/N, -n/N) for any
    integers (m, n), not necessarily in the normalized square.

    Out-of-range labels are carried back into {0..N-1}^2 through the exact
    translation steps (first in n, then in m) and the matrix factors are
    applied; this is the operational definition of the continued periods
    used by the connection-matrix calculus.
    """
    from .homology import MuRing, a_matrix, b_matrix, eta_scalar, \
        mat_inv2, mat_to_numpy
    ring = MuRing(N=N, alpha1=alpha1)
    one = 1.0 + 0j
    M = np.eye(2, dtype=complex)
    scalar = one
    m0, n0 = mm, nn
    tau = mpt.tau
    while n0 < 0:
        M = M @ mat_to_numpy(b_matrix(ring, m0, n0 + N))
        n0 += N
    while n0 >= N:
        M = M @ mat_to_numpy(mat_inv2(b_matrix(ring, m0, n0)))
        n0 -= N
    while m0 < 0:
        M = M @ mat_to_numpy(a_matrix(ring, m0 + N, n0))
        scalar *= eta_scalar(m0 + N, n0, N, float(alpha1), tau)
        m0 += N
    while m0 >= N:
        M = M @ mat_to_numpy(mat_inv2(a_matrix(ring, m0, n0)))
        scalar /= eta_scalar(m0, n0, N, float(alpha1), tau)
        m0 -= N
    if (m0, n0) == (0, 0):
        raise ValueError("label reduces to the excluded lattice point")
    base = LiftedHolonomy.from_leaf_mn(m0, n0, N, float(alpha1))
    pv = period_vector(base, mpt, tol)
    v = scalar * (M @ np.array([pv.F_inf, pv.F_0]))
    return PeriodVector(F_inf=complex(v[0]), F_0=complex(v[1]),
                        est_error=pv.est_error, tau=tau)


def veech_map(a: LiftedHolonomy, mpt: ModularPoint, tol: float = DEFAULT_TOL):
    """(PeriodVector, normalized Veech value in the upper half-plane).

    normalized = -(F_inf/(rho_inf F_0) + d_{1 inf}/(rho_inf d_1));
    requires rho_0 = 1 (a_0 = 0 leaf), else None is returned for it.
    """
    pv = period_vector(a, mpt, tol)
    rho0 = cmath.exp(2j * cmath.pi * a.a0)
    if abs(rho0 - 1) > 1e-10:
        return pv, None
    r1 = cmath.exp(2j * cmath.pi * a.alpha1)
    ri = cmath.exp(2j * cmath.pi * a.a_inf)
    d1, d1i = r1 - 1, r1 * ri - 1
    if pv.F_0 == 0:
        raise ZeroDivisionError("F_0 vanished; normalized map undefined")
    val = -(pv.F_inf / (ri * pv.F_0) + d1i / (ri * d1))
    return pv, val


def mano_periods(mm: int, nn: int, N: int, alpha1: float, mpt: ModularPoint,
                 tol: float = DEFAULT_TOL):
    """(V0, V_inf, W0, W_inf) for the integrand T_{m,n}: V's by direct
    quadrature, W's as regularized rho'-weighted pairings."""
    if (mm % N, nn % N) == (0, 0):
        raise ValueError("(m, n) must be nonzero mod N")
    f = integrand_V_mn(mm, nn, N, alpha1, mpt)
    v0, e0 = _integrate_contour(f, make_contour("gamma0", f), "one", tol)
    vi, ei = _integrate_contour(f, make_contour("gamma_inf", f), "one", tol)
    w0, ew0 = regularized_cycle(f, "gamma0", "rho_prime", tol)
    wi, ewi = regularized_cycle(f, "gamma_inf", "rho_prime", tol)
    return (v0, vi, w0, wi), (e0 + ei + ew0 + ewi)


def gamma2_direct(integrand: TwoFactorIntegrand, tol: float = DEFAULT_TOL):
    """Improper integral over the open segment from 0 to the second
    puncture (the weight-one value of the regularized gamma_2)."""
    legs = make_contour("gamma2_segment", integrand)
    return _integrate_contour(integrand, legs, "one", tol)
