"""Exact arithmetic in cyclotomic fields Q(zeta_L), zeta_L = e^{2 i pi / L}.

Elements are polynomials in zeta_L over Q reduced modulo the L-th
cyclotomic polynomial, with Fraction coefficients.  This is enough for the
exact path of the twisted-homology layer: all characters there are of the
form e^{2 i pi k / L}, and the matrix identities to certify are rational
identities in such roots of unity.

Division is field division (extended Euclid modulo Phi_L), so quantities
like 1/(rho - 1) are exact.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv_lead
        if c:
            q[i] = c
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _poly_trim(q), _poly_trim(a)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _poly_trim([x - y for x, y in zip(a, b)])


@lru_cache(maxsize=None)
def cyclotomic_poly(L: int):
    """Coefficients of Phi_L, computed by dividing x^L - 1 by smaller Phi_d."""
    p = [Fraction(-1)] + [Fraction(0)] * (L - 1) + [Fraction(1)]
    for d in range(1, L):
        if L % d == 0:
            p, r = _poly_divmod(p, list(cyclotomic_poly(d)))
            assert not r
    return tuple(p)


@lru_cache(maxsize=None)
def _phi_degree(L: int) -> int:
    return len(cyclotomic_poly(L)) - 1


@lru_cache(maxsize=None)
def _zeta_power_reduced(L: int, k: int):
    phi = list(cyclotomic_poly(L))
    p = [Fraction(0)] * (k % L) + [Fraction(1)]
    _, r = _poly_divmod(p, phi)
    return tuple(r)


class Cyclo:
    """An element of Q(zeta_L) as a reduced coefficient tuple."""

    __slots__ = ("L", "coeffs")

    def __init__(self, L: int, coeffs):
        self.L = L
        c = list(coeffs)
        if len(c) >= _phi_degree(L):
            _, c = _poly_divmod(c, list(cyclotomic_poly(L)))
        self.coeffs = tuple(c)

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, L):
        return cls(L, [])

    @classmethod
    def one(cls, L):
        return cls(L, [Fraction(1)])

    @classmethod
    def rational(cls, L, r):
        return cls(L, [Fraction(r)])

    @classmethod
    def root_of_unity(cls, L: int, k: int):
        """zeta_L^k = e^{2 i pi k / L}."""
        return cls(L, list(_zeta_power_reduced(L, k)))

    @classmethod
    def from_exponent(cls, L: int, e: Fraction):
        """e^{2 i pi e} for rational e with denominator dividing L."""
        e = Fraction(e)
        if L % e.denominator:
            raise ValueError(f"exponent {e} not expressible with order {L}")
        return cls.root_of_unity(L, int(e * L))

    # -- ring/field operations ----------------------------------------
    def _lift(self, other):
        if isinstance(other, Cyclo):
            if other.L != self.L:
                raise ValueError("mixed cyclotomic orders")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclo.rational(self.L, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = list(self.coeffs), list(o.coeffs)
        n = max(len(a), len(b))
        a += [Fraction(0)] * (n - len(a))
        b += [Fraction(0)] * (n - len(b))
        return Cyclo(self.L, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.L, [-x for x in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Cyclo(self.L, _poly_mul(list(self.coeffs), list(o.coeffs)))

    __rmul__ = __mul__

    def inverse(self):
        """Field inverse via extended Euclid with Phi_L."""
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        # extended gcd of self.coeffs and Phi_L over Q[x]:
        # maintain s with s * self == r (mod Phi_L)
        r0, r1 = list(cyclotomic_poly(self.L)), list(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r0 = gcd: a nonzero rational constant since Phi_L is irreducible
        if len(r0) != 1:
            raise ZeroDivisionError("element not invertible (unexpected)")
        c = r0[0]
        return Cyclo(self.L, [x / c for x in s0])

    def __truediv__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Cyclo.one(self.L)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        """Complex conjugation: zeta -> zeta^{-1}."""
        out = Cyclo.zero(self.L)
        for k, c in enumerate(self.coeffs):
            if c:
                out = out + Cyclo(self.L, [x * c for x in
                                           _zeta_power_reduced(self.L, -k)])
        return out

    # -- comparisons / conversion --------------------------------------
    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.L, self.coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.L)
        out = 0j
        for c in reversed(self.coeffs):
            out = out * z + complex(c)
        return out

    def __repr__(self):
        return f"Cyclo(L={self.L}, {list(self.coeffs)})"


def common_order(*fractions, extra: int = 4) -> int:
    """Smallest L with extra | L usable for exponents given as Fractions."""
    L = extra
    for f in fractions:
        L = L * Fraction(f).denominator // gcd(L, Fraction(f).denominator)
    return L
