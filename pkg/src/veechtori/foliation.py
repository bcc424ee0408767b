"""Veech's foliation on the Torelli space of marked elliptic curves.

A point is (tau, z_2..z_n) with z_1 = 0 and punctures distinct mod the
lattice Z_tau.  The affine first integral is xi = (a_0, a_inf) with

    a_0   = -Im(sum_i alpha_i z_i) / Im(tau),
    a_inf =  a_0 tau + sum_i alpha_i z_i      (real by construction),

and a leaf is the level set a_0 tau + sum alpha_i z_i = a_inf.  The group
SL_2(Z) x| (Z^2)^{n-1} acts on points and on lifted holonomies; for n = 2
the leaf through a rational a is the modular curve Y_1(N), N minimal with
N a in alpha_1 Z^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd

import numpy as np

LEAF_TOL = 1e-10
COLLISION_EPS = 1e-8
MAX_DENOMINATOR = 10**6


class DegenerateMarkingError(ValueError):
    """Two punctures collide modulo the lattice."""


class NotOnTorelliError(ValueError):
    """A solved marking falls on the lattice."""


class IrrationalHolonomyError(ValueError):
    """No rational structure detected within the denominator bound."""


@dataclass(frozen=True)
class Weights:
    """Cone-angle exponents (alpha_1..alpha_n), each > -1, summing to 0."""

    alpha: tuple

    def __post_init__(self):
        a = tuple(float(x) for x in self.alpha)
        if any(x <= -1 for x in a):
            raise ValueError("every weight must exceed -1")
        if abs(sum(a)) > 1e-12:
            raise ValueError("weights must sum to 0")
        if len(a) == 2 and not 0 < a[0] < 1:
            raise ValueError("two-point case requires alpha_1 in (0, 1)")
        object.__setattr__(self, "alpha", a)

    @property
    def alpha1(self) -> float:
        return self.alpha[0]

    @property
    def n(self) -> int:
        return len(self.alpha)


def _collides(z: complex, tau: complex, eps: float = COLLISION_EPS) -> bool:
    bound = int(2 + abs(z) / min(1.0, tau.imag)) + 1
    for mm in range(-bound, bound + 1):
        for nn in range(-bound, bound + 1):
            if abs(z - (mm + nn * tau)) < eps:
                return True
    return False


@dataclass(frozen=True)
class TorelliPoint:
    """(tau, z_2..z_n) with z_1 = 0 implicit and punctures distinct mod Z_tau."""

    tau: complex
    z: tuple

    def __post_init__(self):
        tau = complex(self.tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        z = tuple(complex(v) for v in self.z)
        pts = (0j,) + z
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if _collides(pts[i] - pts[j], tau):
                    raise DegenerateMarkingError(
                        f"markings {i + 1} and {j + 1} collide mod Z_tau")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class LiftedHolonomy:
    """The pair a = (a_0, a_inf) labelling a leaf, in the n = 2 context.

    Carries alpha_1 so the puncture t_tau = (a_0 tau - a_inf)/alpha_1 and the
    rescaled pair r = a/alpha_1 are available.  May be built from exact
    rationals (r0, r_inf as Fractions) to enable the exact bookkeeping path.
    """

    a0: float
    a_inf: float
    alpha1: float
    r0_exact: Fraction | None = field(default=None)
    r_inf_exact: Fraction | None = field(default=None)

    @classmethod
    def from_rescaled(cls, r0, r_inf, alpha1: float) -> "LiftedHolonomy":
        """a = alpha_1 * (r0, r_inf); keeps r exact when given as rationals."""
        ex0 = Fraction(r0) if isinstance(r0, (int, Fraction)) else None
        exi = Fraction(r_inf) if isinstance(r_inf, (int, Fraction)) else None
        return cls(a0=alpha1 * float(r0), a_inf=alpha1 * float(r_inf),
                   alpha1=alpha1, r0_exact=ex0, r_inf_exact=exi)

    @classmethod
    def from_leaf_mn(cls, mm: int, nn: int, N: int, alpha1: float):
        """The auxiliary leaf datum a = alpha_1 (m/N, -n/N)."""
        return cls.from_rescaled(Fraction(mm, N), Fraction(-nn, N), alpha1)

    @property
    def r(self) -> tuple:
        return (self.a0 / self.alpha1, self.a_inf / self.alpha1)

    def r_exact(self) -> tuple:
        if self.r0_exact is None or self.r_inf_exact is None:
            raise IrrationalHolonomyError("no exact rescaled pair stored")
        return (self.r0_exact, self.r_inf_exact)

    def t_of_tau(self, tau: complex) -> complex:
        return (self.a0 * tau - self.a_inf) / self.alpha1

    def is_excluded(self) -> bool:
        """True when a lies in alpha_1 Z^2 (not in the image of xi for n=2)."""
        r0, ri = self.r
        return (abs(r0 - round(r0)) < 1e-12 and abs(ri - round(ri)) < 1e-12)


class LeafKind(Enum):
    HALF_PLANE = "half_plane"
    CYLINDER = "cylinder"
    MODULAR_Y1 = "modular_Y1"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class LeafClass:
    kind: LeafKind
    delta: int
    N: int | None = None
    # floating input cannot certify irrationality: cylinder/half-plane
    # answers derived from floats are best-effort within the search bounds
    certified: bool = True


@dataclass(frozen=True)
class GroupElement:
    """(M, (k_i, l_i)_{i=2..n}) in SL_2(Z) x| (Z^2)^{n-1}."""

    mat: tuple  # ((a, b), (c, d)) integers, det 1
    trans: tuple = ()  # ((k_2, l_2), ..., (k_n, l_n))

    def __post_init__(self):
        (a, b), (c, d) = self.mat
        if a * d - b * c != 1:
            raise ValueError("matrix must have determinant 1")
        object.__setattr__(self, "mat", ((int(a), int(b)), (int(c), int(d))))
        object.__setattr__(self, "trans",
                           tuple((int(k), int(l)) for k, l in self.trans))

    @classmethod
    def identity(cls, n: int = 2) -> "GroupElement":
        return cls(((1, 0), (0, 1)), tuple((0, 0) for _ in range(n - 1)))

    def compose(self, other: "GroupElement") -> "GroupElement":
        """Semidirect product (self) * (other).

        (M', (k', l')) (M, (k, l)) = (M'M, rho(M) (k', l') + (k, l)) where
        rho(M) swaps the antidiagonal of M and acts entrywise by
        (k, l) -> (d k + b l, c k + a l).
        """
        (a, b), (c, d) = other.mat
        (ap, bp), (cp, dp) = self.mat
        mat = ((ap * a + bp * c, ap * b + bp * d),
               (cp * a + dp * c, cp * b + dp * d))
        if len(self.trans) != len(other.trans):
            raise ValueError("mixed marking counts")
        trans = tuple((d * kp + b * lp + k, c * kp + a * lp + l)
                      for (kp, lp), (k, l) in zip(self.trans, other.trans))
        return GroupElement(mat, trans)

    def inverse(self) -> "GroupElement":
        (a, b), (c, d) = self.mat
        inv_mat = ((d, -b), (-c, a))
        inv_trans = tuple((a * k - b * l, -c * k + d * l)
                          for k, l in self.trans)
        return GroupElement(inv_mat, inv_trans)


def xi(w: Weights, p: TorelliPoint) -> LiftedHolonomy:
    """First integral of Veech's foliation at a Torelli point."""
    zs = (0j,) + p.z
    s = sum(a * z for a, z in zip(w.alpha, zs))
    a0 = -s.imag / p.tau.imag
    a_inf = a0 * p.tau + s
    assert abs(a_inf.imag) < 1e-10
    return LiftedHolonomy(a0=a0, a_inf=a_inf.real, alpha1=w.alpha1)


def leaf_equation_solve(w: Weights, a: LiftedHolonomy, tau: complex,
                        z_rest: tuple = ()) -> complex:
    """Solve a_0 tau + sum alpha_i z_i = a_inf for z_2.

    For n = 2 this is the puncture t_tau = (a_0 tau - a_inf)/alpha_1.
    """
    if w.n == 2 and a.is_excluded():
        raise NotOnTorelliError("a in alpha_1 Z^2 is not in the image of xi")
    alpha2 = w.alpha[1]
    s_rest = sum(al * z for al, z in zip(w.alpha[2:], z_rest))
    z2 = (a.a_inf - a.a0 * tau - s_rest) / alpha2
    if _collides(z2, tau) or any(_collides(z2 - z, tau) for z in z_rest):
        raise NotOnTorelliError("solved marking lies on an excluded locus")
    return z2


def group_act(g: GroupElement, p: TorelliPoint) -> TorelliPoint:
    """(tau, z_i) -> ((a tau + b)/(c tau + d), (z_i + k_i + l_i tau)/(c tau + d))."""
    (a, b), (c, d) = g.mat
    den = c * p.tau + d
    tau2 = (a * p.tau + b) / den
    trans = g.trans if g.trans else tuple((0, 0) for _ in p.z)
    z2 = tuple((z + k + l * p.tau) / den for z, (k, l) in zip(p.z, trans))
    return TorelliPoint(tau2, z2)


def holonomy_act(g: GroupElement, w: Weights, a: LiftedHolonomy) -> LiftedHolonomy:
    """The bullet action on lifted holonomies:

    (M, (k, l)) . (a0, ainf) =
        (a0 a - ainf c + sum alpha_i l_i, -a0 b + ainf d - sum alpha_i k_i).
    """
    (ma, mb), (mc, md) = g.mat
    trans = g.trans if g.trans else tuple((0, 0) for _ in range(w.n - 1))
    sl = sum(al * l for al, (k, l) in zip(w.alpha[1:], trans))
    sk = sum(al * k for al, (k, l) in zip(w.alpha[1:], trans))
    new0 = a.a0 * ma - a.a_inf * mc + sl
    newi = -a.a0 * mb + a.a_inf * md - sk
    out = LiftedHolonomy(a0=new0, a_inf=newi, alpha1=w.alpha1)
    if w.n == 2 and a.r0_exact is not None:
        r0, ri = a.r_exact()
        # for n = 2, alpha_2 = -alpha_1, so the translation part contributes
        # (-l_2, +k_2) to the rescaled pair
        (k2, l2) = trans[0]
        out = LiftedHolonomy.from_rescaled(r0 * ma - ri * mc - l2,
                                           -r0 * mb + ri * md + k2, w.alpha1)
    return out


def _rationalize(x: float, max_den: int = MAX_DENOMINATOR) -> Fraction | None:
    f = Fraction(x).limit_denominator(max_den)
    if abs(float(f) - x) < 1e-9 / max(1, f.denominator):
        return f
    return None


def _rescaled_exact(a: LiftedHolonomy, max_den: int) -> tuple | None:
    if a.r0_exact is not None and a.r_inf_exact is not None:
        return (a.r0_exact, a.r_inf_exact)
    r0, ri = a.r
    f0, fi = _rationalize(r0, max_den), _rationalize(ri, max_den)
    if f0 is None or fi is None:
        return None
    return (f0, fi)


def orbit_normal_form(a: LiftedHolonomy, max_den: int = MAX_DENOMINATOR):
    """(N, canonical holonomy): N minimal with N a in alpha_1 Z^2.

    The canonical representative of the orbit is alpha_1 (0, -1/N); for
    N = 1 it is (0, 0).
    """
    ex = _rescaled_exact(a, max_den)
    if ex is None:
        raise IrrationalHolonomyError(
            "no rational rescaled holonomy within the denominator bound")
    f0, fi = ex
    N = f0.denominator * fi.denominator // gcd(f0.denominator, fi.denominator)
    if N == 1:
        return 1, LiftedHolonomy.from_rescaled(Fraction(0), Fraction(0), a.alpha1)
    return N, LiftedHolonomy.from_rescaled(Fraction(0), Fraction(-1, N), a.alpha1)


def _integer_relation(values, max_coeff: int = 200):
    """Small integer relation sum c_i v_i = 0 by brute force over 2 coeffs.

    values = (r0, r_inf, 1); returns (u0, u_inf, u1) with
    u0 r0 + u_inf r_inf = u1, gcd = 1, or None.
    """
    r0, ri = values
    for u0 in range(-max_coeff, max_coeff + 1):
        for uinf in range(-max_coeff, max_coeff + 1):
            if u0 == 0 and uinf == 0:
                continue
            s = u0 * r0 + uinf * ri
            u1 = round(s)
            if abs(s - u1) < 1e-9 and gcd(gcd(abs(u0), abs(uinf)), abs(u1)) == 1:
                return (u0, uinf, u1)
    return None


def classify_leaf(w: Weights, a: LiftedHolonomy,
                  max_den: int = MAX_DENOMINATOR,
                  relation_bound: int = 200) -> LeafClass:
    """Conformal type of the leaf through a (n = 2).

    delta = dim_Q <r0, r_inf, 1>: 3 -> half-plane, 2 -> infinite cylinder,
    1 -> modular curve Y_1(N).  Detection is bounded-height search; when the
    bound is hit the answer is flagged indeterminate rather than guessed.
    """
    if w.n != 2:
        raise ValueError("classification implemented for n = 2 only")
    if a.is_excluded():
        raise NotOnTorelliError("a in alpha_1 Z^2 labels no leaf when n = 2")
    ex = _rescaled_exact(a, max_den)
    if ex is not None:
        N, _ = orbit_normal_form(a, max_den)
        return LeafClass(kind=LeafKind.MODULAR_Y1, delta=1, N=N)
    rel = _integer_relation(a.r, relation_bound)
    if rel is not None:
        return LeafClass(kind=LeafKind.CYLINDER, delta=2, certified=False)
    # nothing found up to the bounds: generically a half-plane leaf, but
    # floats cannot certify irrationality, hence certified=False
    return LeafClass(kind=LeafKind.HALF_PLANE, delta=3, certified=False)


def is_algebraic(w: Weights, a: LiftedHolonomy,
                 max_den: int = MAX_DENOMINATOR) -> bool:
    """Commensurability of (alpha_1..alpha_n, a_0, a_inf).

    True exactly when all ratios are rational (up to the detection bound);
    this is the algebraicity criterion for the leaf through a.
    """
    base = w.alpha1
    vals = [al / base for al in w.alpha] + [a.a0 / base, a.a_inf / base]
    return all(_rationalize(v, max_den) is not None for v in vals)


def ftheta_components(p: int, q: int, M: int) -> set:
    """Connected components {kM : k | p, gcd(p/k, M) = 1, kM >= 2} of the
    angle-data leaf indexed by M, for alpha_1 = p/q in lowest terms."""
    if p <= 0 or q <= 0 or gcd(p, q) != 1:
        raise ValueError("alpha_1 = p/q must be positive and in lowest terms")
    if M < 1:
        raise ValueError("M must be >= 1")
    out = set()
    for k in range(1, p + 1):
        if p % k == 0 and gcd(p // k, M) == 1 and k * M >= 2:
            out.add(k * M)
    return out
