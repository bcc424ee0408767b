"""Twisted-homology layer: characters, intersection pairings, connection
matrices.

Everything is written for a unitary character rho = (rho_0, rho_1, rho_inf)
of the 2-punctured torus; words like d_{1 inf} denote rho_1 rho_inf - 1.
All 2x2 objects use the ordered basis (gamma_inf, gamma_0); gamma_2 is
always eliminated through

    gamma_2 = -rho_1 (d_inf/d_1) gamma_0 + rho_1 (d_0/d_1) gamma_inf.

Matrices are plain nested tuples over a scalar domain that is either
`complex` (floating path) or `veechtori.cyclo.Cyclo` (exact path); the
formulas are identical in both.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclo import Cyclo, common_order
from .foliation import LiftedHolonomy, Weights

DEGENERACY_EPS = 1e-10


class DegenerateCharacterError(ValueError):
    """A required denominator rho_word - 1 vanishes."""


@dataclass(frozen=True)
class UnitaryCharacter:
    """Monodromy data (rho_0, rho_1, rho_inf) of the flat-metric function.

    rho_1 = e^{2 i pi alpha_1}, rho_0 = e^{2 i pi a_0}, rho_inf =
    e^{2 i pi a_inf}.  Entries are unit complex numbers or exact Cyclo
    roots of unity (in which case `exact` is True and all derived matrices
    stay exact).
    """

    rho0: object
    rho1: object
    rho_inf: object

    @property
    def exact(self) -> bool:
        return isinstance(self.rho1, Cyclo)

    def one(self):
        return Cyclo.one(self.rho1.L) if self.exact else 1.0 + 0j

    def two_i(self):
        if self.exact:
            L = self.rho1.L
            return 2 * Cyclo.root_of_unity(L, L // 4)
        return 2j

    def rho(self, word: str):
        """Product of rho's over a word drawn from {'0', '1', 'i'}."""
        out = self.one()
        for ch in word:
            out = out * {"0": self.rho0, "1": self.rho1, "i": self.rho_inf}[ch]
        return out

    def d(self, word: str):
        """d_word = rho_word - 1, guarded against degeneracy."""
        val = self.rho(word) - self.one()
        if self.exact:
            if val.is_zero():
                raise DegenerateCharacterError(f"d_{word} = 0")
        elif abs(val) < DEGENERACY_EPS:
            raise DegenerateCharacterError(f"|d_{word}| < {DEGENERACY_EPS}")
        return val

    def conjugated(self) -> "UnitaryCharacter":
        return UnitaryCharacter(_conj(self.rho0), _conj(self.rho1),
                                _conj(self.rho_inf))

    def as_complex(self) -> "UnitaryCharacter":
        return UnitaryCharacter(complex(self.rho0), complex(self.rho1),
                                complex(self.rho_inf))


def _conj(x):
    return x.conjugate()


def character_from(w: Weights, a: LiftedHolonomy) -> UnitaryCharacter:
    """Character of the leaf datum a: exact when (alpha_1, r) is rational."""
    alpha1_exact = Fraction(w.alpha1).limit_denominator(10**6)
    exact_ok = (abs(float(alpha1_exact) - w.alpha1) < 1e-13
                and a.r0_exact is not None and a.r_inf_exact is not None)
    if exact_ok:
        e0 = alpha1_exact * a.r0_exact
        ei = alpha1_exact * a.r_inf_exact
        L = common_order(e0, ei, alpha1_exact)
        return UnitaryCharacter(
            rho0=Cyclo.from_exponent(L, e0),
            rho1=Cyclo.from_exponent(L, alpha1_exact),
            rho_inf=Cyclo.from_exponent(L, ei))
    return UnitaryCharacter(
        rho0=cmath.exp(2j * cmath.pi * a.a0),
        rho1=cmath.exp(2j * cmath.pi * w.alpha1),
        rho_inf=cmath.exp(2j * cmath.pi * a.a_inf))


def character_mn(mm: int, nn: int, N: int, alpha1) -> UnitaryCharacter:
    """Character of the auxiliary leaf datum a = alpha_1 (m/N, -n/N).

    In terms of mu = e^{2 i pi alpha_1 / N}: rho = (mu^m, mu^N, mu^-n).
    Exact whenever alpha_1 is a Fraction (or int).
    """
    if isinstance(alpha1, (int, Fraction)):
        al = Fraction(alpha1)
        L = common_order(al / N, al)
        mu = Cyclo.from_exponent(L, al / N)
        return UnitaryCharacter(rho0=mu**mm, rho1=mu**N, rho_inf=mu**(-nn))
    mu = cmath.exp(2j * cmath.pi * alpha1 / N)
    return UnitaryCharacter(rho0=mu**mm, rho1=mu**N, rho_inf=mu**(-nn))


# ---------------------------------------------------------------------------
# tiny generic matrix helpers (nested tuples, any scalar domain)

def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return tuple(tuple(sum_start(A[i][0] * B[0][j],
                                 (A[i][t] * B[t][j] for t in range(1, k)))
                       for j in range(m)) for i in range(n))


def sum_start(first, rest):
    out = first
    for x in rest:
        out = out + x
    return out


def mat_conj_T(A):
    return tuple(tuple(_conj(A[i][j]) for i in range(len(A)))
                 for j in range(len(A[0])))


def mat_sub(A, B):
    return tuple(tuple(A[i][j] - B[i][j] for j in range(len(A[0])))
                 for i in range(len(A)))


def mat_to_numpy(A) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in A])


def mat_det2(A):
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def mat_inv2(A):
    det = mat_det2(A)
    if isinstance(det, Cyclo):
        inv = det.inverse()
    else:
        if abs(det) < 1e-14:
            raise ZeroDivisionError("singular 2x2 matrix")
        inv = 1.0 / det
    return ((A[1][1] * inv, -A[0][1] * inv),
            (-A[1][0] * inv, A[0][0] * inv))


# ---------------------------------------------------------------------------
# intersection pairings

def intersection_pairs(rho: UnitaryCharacter, n: int = 2) -> dict:
    """Twisted intersection numbers gamma_. l_. for markings in nice position.

    For n = 2 the keys cover the full table; for n >= 3 the pairwise values
    involving indices i < j < k are returned with symbolic keys.
    """
    one = rho.one()
    d1 = rho.d("1")
    d0 = rho.rho("0") - one
    di = rho.rho("i") - one
    d1i = rho.rho("1i") - one
    r0, r1, ri = rho.rho("0"), rho.rho("1"), rho.rho("i")
    table = {
        ("inf", "inf"): di * d1i / (d1 * ri),
        ("inf", "0"): (ri - one + (one - r1 * ri) / r0) / d1,
        ("inf", "i"): di / d1,  # gamma_inf . l_i, i >= 2
        ("0", "inf"): (r0 * r1 - r1 + (r1 - r0) / ri) / d1,
        ("0", "0"): (d0 / d1) * (one - r1 / r0),
        ("0", "i"): d0 / d1,
        ("i", "inf"): -(r1 * di) / (ri * d1),
        ("i", "0"): -(r1 * d0) / (r0 * d1),
        ("i", "i"): None,  # filled below: -d_{1i}/(d_1 d_i) needs d_i != 0
        ("j", "i"): -r1 / d1,  # gamma_j . l_i for j < i
        ("k", "i"): -one / d1,  # gamma_k . l_i for k > i
    }
    if n == 2:
        # for n = 2 the puncture weight is alpha_2 = -alpha_1, rho_2 = 1/rho_1
        # and d_{1,2} = 0: gamma_2 . l_2 = 0
        table[("i", "i")] = one - one
    else:
        table[("i", "i")] = -(rho.rho("1i") - one) / (d1 * di)
    return table


def i_matrix(rho: UnitaryCharacter):
    """The 3x3 matrix (gamma_o . l_b) in the ordered basis (inf, 0, 2), n=2."""
    t = intersection_pairs(rho, 2)
    return ((t[("inf", "inf")], t[("inf", "0")], t[("inf", "i")]),
            (t[("0", "inf")], t[("0", "0")], t[("0", "i")]),
            (t[("i", "inf")], t[("i", "0")], t[("i", "i")]))


def ii_matrix(rho: UnitaryCharacter):
    """The 2x2 intersection matrix in the bases (gamma_inf, gamma_0) and
    (l_inf, l_0); its determinant is always 1."""
    M = i_matrix(rho)
    return ((M[0][0], M[0][1]), (M[1][0], M[1][1]))


def hermitian_form(rho: UnitaryCharacter):
    """IH = (2i II)^{-1}: hermitian, det -1/4, signature (1, 1)."""
    II = ii_matrix(rho)
    two_i = rho.two_i()
    det = mat_det2(II)
    # det II = 1 identically; fold it in anyway for the floating path
    if isinstance(det, Cyclo):
        inv_det = det.inverse()
    else:
        inv_det = 1.0 / det
    s = inv_det / two_i
    return ((II[1][1] * s, -II[0][1] * s),
            (-II[1][0] * s, II[0][0] * s))


def normalize_Z(rho: UnitaryCharacter):
    """Z with Z^H IH Z = [[0, -i], [i, 0]], defined when rho_0 = 1.

    Returned as sqrt(2) * Zr with Zr rational in the rho's; the sqrt(2)
    factor is kept separate in the exact path, so the function returns the
    pair (Zr, scale) with scale = sqrt(2) as a float.
    """
    one = rho.one()
    if not _is_one(rho.rho0):
        raise DegenerateCharacterError("normalization requires rho_0 = 1")
    d1 = rho.d("1")
    d1i = rho.rho("1i") - one
    Zr = ((rho.rho("i"), -d1i / d1), (one - one, one))
    return Zr, float(np.sqrt(2.0))


def _is_one(x) -> bool:
    if isinstance(x, Cyclo):
        return x == Cyclo.one(x.L)
    return abs(x - 1.0) < DEGENERACY_EPS


def gamma2_decompose(rho: UnitaryCharacter):
    """Coefficients (c0, c_inf) with gamma_2 = c0 gamma_0 + c_inf gamma_inf.

    c0 = -rho_1 d_inf / d_1 and c_inf = rho_1 d_0 / d_1, so that
    (1 - rho_inf) gamma_0 - (1 - rho_0) gamma_inf = (1 - rho_2) gamma_2
    holds with rho_2 = 1/rho_1.
    """
    one = rho.one()
    d1 = rho.d("1")
    c0 = -(rho.rho("1") * (rho.rho("i") - one)) / d1
    c_inf = (rho.rho("1") * (rho.rho("0") - one)) / d1
    return c0, c_inf


# ---------------------------------------------------------------------------
# connection matrices (3x3 in the basis (gamma_inf, gamma_0, gamma_2))

def _r_htwist(rho):
    return UnitaryCharacter(rho.rho0, _inv(rho.rho1), rho.rho_inf)


def _r_htrans1(rho):
    return UnitaryCharacter(rho.rho0, rho.rho1, rho.rho_inf * _inv(rho.rho1))


def _r_htrans2(rho):
    return UnitaryCharacter(rho.rho0, rho.rho1, rho.rho_inf * rho.rho1)


def _r_vtrans1(rho):
    return UnitaryCharacter(rho.rho0 * rho.rho1, rho.rho1, rho.rho_inf)


def _r_vtrans2(rho):
    return UnitaryCharacter(rho.rho0 * _inv(rho.rho1), rho.rho1, rho.rho_inf)


def _inv(x):
    return x.inverse() if isinstance(x, Cyclo) else 1.0 / x


def htwist(rho: UnitaryCharacter):
    """Half-twist exchanging the two punctures (z_2 passing above z_1)."""
    one = rho.one()
    zero = one - one
    d1 = rho.d("1")
    r1i = _inv(rho.rho1)
    M = ((one, zero, (rho.rho("i") - one) * r1i),
         (zero, one, (rho.rho("0") - one) * r1i),
         (zero, zero, -r1i))
    del d1
    return M, _r_htwist(rho)


def htrans1(rho: UnitaryCharacter):
    """First puncture around the horizontal period: z_1 -> z_1 + 1."""
    one = rho.one()
    zero = one - one
    r0i, r1i = _inv(rho.rho0), _inv(rho.rho1)
    M = ((r1i, -(rho.rho("i") - one) * r0i * r1i, zero),
         (zero, r0i, zero),
         (zero, r0i, r1i))
    return M, _r_htrans1(rho)


def htrans2(rho: UnitaryCharacter):
    """Second puncture around the horizontal period: z_2 -> z_2 + 1.

    Composition HTwist_{rho~'} HTrans1_{rho'} HTwist_rho.
    """
    M1, rp = htwist(rho)
    M2, rtp = htrans1(rp)
    M3, rpp = htwist(rtp)
    return mat_mul(M3, mat_mul(M2, M1)), rpp


def vtrans1(rho: UnitaryCharacter):
    """First puncture around the vertical period: z_1 -> z_1 + tau."""
    one = rho.one()
    zero = one - one
    rii = _inv(rho.rho_inf)
    M = ((rii, zero, zero),
         (-(rho.rho("0") - one) * rho.rho1 * rii, rho.rho1, zero),
         (rho.rho1 * rii, zero, rho.rho1))
    return M, _r_vtrans1(rho)


def vtrans2(rho: UnitaryCharacter):
    """Second puncture around the vertical period: z_2 -> z_2 + tau."""
    one = rho.one()
    zero = one - one
    d1 = rho.d("1")
    r1i, rii = _inv(rho.rho1), _inv(rho.rho_inf)
    M = ((one, zero, zero),
         (-d1 * r1i * rii, r1i, d1 * r1i * r1i * rii),
         (-rii, zero, r1i * rii))
    return M, _r_vtrans2(rho)


def ht2(rho: UnitaryCharacter):
    """2x2 version of htrans2 in the (gamma_inf, gamma_0) bases."""
    M, rpp = htrans2(rho)
    c0, c_inf = gamma2_decompose(rho)
    # substitute gamma_2 = c_inf gamma_inf + c0 gamma_0 in the source basis
    M2 = tuple((M[i][0] + M[i][2] * c_inf, M[i][1] + M[i][2] * c0)
               for i in range(2))
    return M2, rpp


def vt2(rho: UnitaryCharacter):
    """2x2 version of vtrans2: [[1, 0], [(rho_0-rho_1)/(rho_1 rho_inf),
    1/(rho_1 rho_inf)]]."""
    one = rho.one()
    zero = one - one
    inv1i = _inv(rho.rho("1i"))
    M = ((one, zero),
         ((rho.rho0 - rho.rho1) * inv1i, inv1i))
    return M, _r_vtrans2(rho)


_CONNECTION_KINDS = {
    "HTwist": (htwist, i_matrix),
    "HTrans1": (htrans1, i_matrix),
    "HTrans2": (htrans2, i_matrix),
    "VTrans1": (vtrans1, i_matrix),
    "VTrans2": (vtrans2, i_matrix),
    "HT2": (ht2, ii_matrix),
    "VT2": (vt2, ii_matrix),
}


def connection_matrix(kind: str, rho: UnitaryCharacter):
    """(matrix, target character) for one of the seven connection moves."""
    try:
        fn, _ = _CONNECTION_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown connection kind {kind!r}") from None
    return fn(rho)


def connection_residual(kind: str, rho: UnitaryCharacter) -> float:
    """Max abs residual of I_{rho'} = C I_rho C^H (or the 2x2 analogue)."""
    fn, base = _CONNECTION_KINDS[kind]
    C, target = fn(rho)
    lhs = base(target)
    rhs = mat_mul(C, mat_mul(base(rho), mat_conj_T(C)))
    return float(np.max(np.abs(mat_to_numpy(mat_sub(lhs, rhs)))))


# ---------------------------------------------------------------------------
# mu-ring scalars

@dataclass(frozen=True)
class MuRing:
    """Powers of mu = e^{2 i pi alpha_1 / N}, exact when alpha_1 is rational.

    Half-integer powers use the principal branch mu^{1/2} = e^{i pi a1/N}.
    """

    N: int
    alpha1: object  # Fraction -> exact; float -> complex path

    def mu(self, k):
        """mu^k for k integer or half-integer (k given in halves as 2k)."""
        return self.mu_half(2 * k)

    def mu_half(self, twok: int):
        if isinstance(self.alpha1, (int, Fraction)):
            al = Fraction(self.alpha1)
            e = al * twok / (2 * self.N)
            L = common_order(al / (2 * self.N))
            return Cyclo.from_exponent(L, e)
        return cmath.exp(2j * cmath.pi * float(self.alpha1)
                         * twok / (2 * self.N))

    def character(self, mm: int, nn: int) -> UnitaryCharacter:
        return UnitaryCharacter(rho0=self.mu(mm), rho1=self.mu(self.N),
                                rho_inf=self.mu(-nn))

    def one(self):
        return self.mu(0)


def t_matrix(ring: MuRing, mm: int, nn: int):
    one = ring.one()
    zero = one - one
    return ((one, ring.mu(-mm - nn)), (zero, one))


def s_matrix(ring: MuRing, mm: int, nn: int):
    one = ring.one()
    zero = one - one
    return ((one - ring.mu(-nn), ring.mu(-mm)), (-ring.mu(mm), zero))


def b_matrix(ring: MuRing, mm: int, nn: int):
    """B_{m,n} = mu^{-N/2} HT2_{rho^{m,n}} (exact translation step in n)."""
    M, _ = ht2(ring.character(mm, nn))
    s = ring.mu_half(-ring.N)
    return tuple(tuple(s * x for x in row) for row in M)


def a_matrix(ring: MuRing, mm: int, nn: int):
    """A_{m,n} = mu^{-N/2-n} VT2_{rho^{m,n}} (translation step in m, with a
    tau-dependent scalar dropped)."""
    M, _ = vt2(ring.character(mm, nn))
    s = ring.mu_half(-ring.N - 2 * nn)
    return tuple(tuple(s * x for x in row) for row in M)


def eta_scalar(mm: int, nn: int, N: int, alpha1: float, tau: complex):
    """The scalar eta_{m,n}(tau) = e^{i pi tau a1 (1 - 2m/N)} dropped by the
    A-step."""
    return cmath.exp(1j * cmath.pi * tau * alpha1 * (1 - 2 * mm / N))


def sigma_scalar(a0: float, a_inf: float, alpha1: float, tau: complex):
    """The scalar sigma_a(tau) = -exp(-i pi (a0 + a_inf tau)^2/(a1 tau))/tau
    dropped by the S-step."""
    return -cmath.exp(-1j * cmath.pi * (a0 + a_inf * tau) ** 2
                      / (alpha1 * tau)) / tau
