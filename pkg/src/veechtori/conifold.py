"""Exact cusp, angle, genus and volume arithmetic for the algebraic leaves.

Cusps of the level-N modular curves are classes +-(a, c) in (Z/N)^2 with
gcd(a, c, N) = 1; for the Gamma_1(N) quotient, (a, c) ~ +-(a + j c, c).
All conifold angles are stored as exact rational multiples of 2 pi alpha_1:

    full-level curve:   coeff = c (N - c) / N,
    Gamma_1(N) curve:   coeff = c (N - c) / (N gcd(c, N)),

with c the residue of the cusp denominator; coeff = 0 marks a true cusp.
Widths, genus and the Gauss-Bonnet volumes follow, including the closed
prime-level form Vol = (pi/6)(p^2 - 1)(1 - alpha_1) and the limit volume
(pi/6)(1 - alpha_1) of the whole moduli space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, pi


class OrbifoldUnsupportedError(ValueError):
    """The plain Gauss-Bonnet count is invalid for N = 2, 3."""


@dataclass(frozen=True)
class CuspDatum:
    rep: tuple  # (a', c') with gcd = 1; c' = 0 encodes i-infinity
    klass: tuple  # residues (a, c) mod N of the class representative
    width: int
    angle_coeff: Fraction  # angle = 2 pi * angle_coeff * alpha_1

    @property
    def is_true_cusp(self) -> bool:
        return self.angle_coeff == 0

    def label(self) -> str:
        ap, cp = self.rep
        if cp == 0:
            return "oo"
        f = Fraction(-ap, cp)
        return str(f)


@dataclass(frozen=True)
class OrbifoldPoint:
    order: int
    angle_over_pi: Fraction  # angle = pi * this


@dataclass(frozen=True)
class VolumeReport:
    N: int
    alpha1: Fraction
    genus: int
    n_cusps: int
    angle_coeff_sum: Fraction
    volume_over_pi: Fraction  # volume = pi * this

    @property
    def volume(self) -> float:
        return pi * float(self.volume_over_pi)


def conifold_angle_X(c_prime: int, N: int) -> Fraction:
    """Angle coefficient c (N - c)/N at a full-level cusp with denominator
    residue c."""
    if N < 2:
        raise ValueError("N must be >= 2")
    c = c_prime % N
    return Fraction(c * (N - c), N)


def conifold_angle_X1(c_prime: int, N: int) -> Fraction:
    """Angle coefficient c (N - c)/(N gcd(c, N)) on the Gamma_1(N) curve."""
    if N < 2:
        raise ValueError("N must be >= 2")
    c = c_prime % N
    if c == 0:
        return Fraction(0)
    return Fraction(c * (N - c), N * gcd(c, N))


def cusp_width(c_prime: int, N: int) -> int:
    """Width of the cusp [-a'/c'] of the Gamma_1(N) curve: N/gcd(c', N)."""
    return N // gcd(c_prime % N if c_prime % N else N, N)


def _coprime_lift(a: int, c: int, N: int) -> tuple:
    """(a', c') coprime, congruent to (a, c) mod N.

    The class (1, 0) is the infinity cusp and lifts to (1, 0); the other
    c = 0 classes lift with denominator N (the cusps [-a/N])."""
    a0, c0 = a % N, c % N
    if c0 == 0:
        if a0 in (1 % N, (N - 1) % N):
            return (1, 0)
        return (a0, N)
    for k in range(N + 1):
        ap = a0 + k * N
        if gcd(ap, c0) == 1:
            return (ap, c0)
    raise AssertionError("no coprime lift found")


def cusps_gamma1(N: int):
    """Complete duplicate-free cusp list of the Gamma_1(N) curve.

    Classes of (a, c) in (Z/N)^2, gcd(a, c, N) = 1, modulo
    (a, c) -> +-(a + j c, c); exhaustive orbit enumeration.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    seen = set()
    out = []
    for c in range(N):
        for a in range(N):
            if gcd(gcd(a, c), N) != 1:
                continue
            if (a, c) in seen:
                continue
            orbit = set()
            for j in range(N):
                for s in (1, -1):
                    orbit.add(((s * (a + j * c)) % N, (s * c) % N))
            seen |= orbit
            rep = _canonical_rep(orbit, N)
            ap, cp = _coprime_lift(*rep, N)
            out.append(CuspDatum(
                rep=(ap, cp),
                klass=rep,
                width=N // gcd(cp if cp else N, N),
                angle_coeff=conifold_angle_X1(cp, N)))
    return out


def _canonical_rep(orbit, N):
    # prefer (1, 0) (i-infinity) and small denominators; deterministic
    def key(ac):
        a, c = ac
        return (c != 0, c, a)
    return min(orbit, key=key)


def cusps_full_level(N: int):
    """Cusp classes +-(a, c) of the level-N curve with their angle
    coefficients c (N - c)/N."""
    if N < 2:
        raise ValueError("N must be >= 2")
    seen = set()
    out = []
    for c in range(N):
        for a in range(N):
            if gcd(gcd(a, c), N) != 1 or (a, c) in seen:
                continue
            orbit = {(a, c), ((-a) % N, (-c) % N)}
            seen |= orbit
            out.append(((a, c), conifold_angle_X(c, N)))
    return out


def orbifold_points(N: int):
    """Elliptic points of the Gamma_1(N) curve (only N = 2, 3 have any)."""
    if N == 2:
        return [OrbifoldPoint(order=2, angle_over_pi=Fraction(1))]
    if N == 3:
        return [OrbifoldPoint(order=3, angle_over_pi=Fraction(2, 3))]
    return []


def _divisors(N: int):
    return [d for d in range(1, N + 1) if N % d == 0]


def _euler_phi(n: int) -> int:
    out = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


def genus_X1(N: int) -> int:
    """Genus of the compactified Gamma_1(N) curve (0 for N <= 4)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N <= 4:
        return 0
    term = Fraction(N * N, 24)
    m = N
    p = 2
    seen_primes = set()
    while p * p <= m:
        if m % p == 0:
            seen_primes.add(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        seen_primes.add(m)
    for p in seen_primes:
        term *= Fraction(p * p - 1, p * p)
    s = sum(_euler_phi(d) * _euler_phi(N // d) for d in _divisors(N))
    g = 1 + term - Fraction(s, 4)
    assert g.denominator == 1
    return int(g)


def volume_Y1(N: int, alpha1) -> VolumeReport:
    """Gauss-Bonnet volume 2 pi [2g - 2 + sum_cusps (1 - coeff alpha_1)].

    Only valid for N >= 4 (the N = 2, 3 curves carry orbifold points the
    plain count misses, so those are refused)."""
    if N in (2, 3):
        raise OrbifoldUnsupportedError(
            f"N = {N} has orbifold points; the cusp-only count is invalid")
    if N < 4:
        raise ValueError("N must be >= 4")
    al = Fraction(alpha1).limit_denominator(10**12)
    cusps = cusps_gamma1(N)
    g = genus_X1(N)
    coeff_sum = sum((c.angle_coeff for c in cusps), Fraction(0))
    vol_over_pi = 2 * (2 * g - 2 + len(cusps) - coeff_sum * al)
    return VolumeReport(N=N, alpha1=al, genus=g, n_cusps=len(cusps),
                        angle_coeff_sum=coeff_sum,
                        volume_over_pi=vol_over_pi)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def prime_volume_closed_form(p: int, alpha1) -> Fraction:
    """Vol(Y_1(p))/pi = (p^2 - 1)(1 - alpha_1)/6 for prime p >= 5."""
    if not _is_prime(p) or p < 5:
        raise ValueError("p must be a prime >= 5")
    al = Fraction(alpha1).limit_denominator(10**12)
    return Fraction(p * p - 1, 6) * (1 - al)


def veech_volume(alpha1, primes_up_to: int = 101):
    """(exact, empirical) moduli-space volume: exact = (pi/6)(1 - alpha_1);
    empirical = p^{-2} Vol(Y_1(p)) at the largest prime <= the bound, which
    misses the exact value by the factor 1 - p^{-2}."""
    if primes_up_to < 5:
        raise ValueError("need a prime >= 5")
    p = max(q for q in range(2, primes_up_to + 1) if _is_prime(q))
    al = Fraction(alpha1).limit_denominator(10**12)
    exact = pi / 6 * float(1 - al)
    empirical = volume_Y1(p, al).volume / p**2
    return exact, empirical, p


def nstar_orbifold(N: int):
    """(N*, alpha_1(l) = N/(l N*)): with these weights every nonzero
    conifold angle of the Gamma_1(N) leaf is 2 pi over an integer."""
    if N < 2:
        raise ValueError("N must be >= 2")
    nstar = 1
    for c in range(1, N):
        val = c * (N - c) // gcd(c, N)
        nstar = nstar * val // gcd(nstar, val)

    def alpha_list(ell: int) -> Fraction:
        return Fraction(N, ell * nstar)

    return nstar, alpha_list


def degeneration_angles(N: int, alpha1: float) -> tuple:
    """Cone angles of the limiting flat three-cone sphere at the cusp:

        (2 pi (1 - 1/N) alpha_1, 2 pi (1 - alpha_1), 2 pi alpha_1 / N);

    the flat Gauss-Bonnet sum of (2 pi - angle) is exactly 4 pi."""
    if N < 2 or not 0 < alpha1 < 1:
        raise ValueError("need N >= 2 and alpha_1 in (0, 1)")
    return (2 * pi * (1 - 1 / N) * alpha1,
            2 * pi * (1 - alpha1),
            2 * pi * alpha1 / N)


def cusp_to_auxiliary_leaf(a_prime: int, c_prime: int, N: int) -> tuple:
    """(m, n) of the auxiliary leaf whose infinity cusp realizes the cusp
    [-a'/c']: (m, n) = (c' mod N, a' mod N).  The full-level conifold angle
    there is 2 pi m (1 - m/N) alpha_1."""
    if gcd(a_prime, c_prime) != 1:
        raise ValueError("a' and c' must be coprime")
    return (c_prime % N, a_prime % N)
