"""Faltings heights of CM elliptic curves in the (2 pi)^(-g) metric
normalization, via Dedekind eta at Heegner points, and the end-to-end
averaged-height check against the L-function side.

The modular side is
    -(1/12h) sum_j log( (2pi)^12 |eta(tau_j)|^24 (Im tau_j)^6 ) + (1/2) log pi,
with one universal constant C_norm = (1/2) log pi pinned at d = -4, where both
sides collapse to log 2 + log pi - 2 lnGamma(1/4) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp

from .numerics import DEFAULT_PREC, workdps
from .lfun import l_at_zero_exact, l_prime_at_zero
from .quadfield import class_group


def dedekind_eta(tau, prec: int = DEFAULT_PREC) -> mpmath.mpc:
    """eta(tau) = q^(1/24) prod (1 - q^n), q = e^(2 pi i tau); error < 10^(-prec).

    Truncated when |q|^n < 10^(-prec-10); intended for reduced points
    (Im tau >= sqrt(3)/2) where a few dozen factors suffice.
    """
    with workdps(prec):
        tau = mp.mpc(tau)
        if not tau.imag > 0:
            raise ValueError("eta requires Im tau > 0")
        q = mp.e ** (2j * mp.pi * tau)
        pref = mp.e ** (mp.pi * 1j * tau / 12)
        absq = abs(q)
        cutoff = mp.mpf(10) ** (-(prec + 10))
        prod = mp.mpc(1)
        qn = q
        n = 1
        while absq ** n >= cutoff:
            prod *= 1 - qn
            qn *= q
            n += 1
        return +(pref * prod)


def cm_faltings_height(d: int, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """Stable height averaged over the class group; invariant under choice of
    reduced representatives."""
    cg = class_group(d)
    with workdps(prec):
        total = mp.mpf(0)
        for f in cg.forms:
            tau = f.heegner_point(prec)
            eta = dedekind_eta(tau, prec)
            total += mp.log((2 * mp.pi) ** 12 * abs(eta) ** 24 * tau.imag ** 6)
        return +(-total / (12 * cg.h) + mp.log(mp.pi) / 2)


@dataclass(frozen=True)
class HeightReport:
    d: int
    h: int
    w: int
    lhs: mpmath.mpf
    rhs: mpmath.mpf
    diff: mpmath.mpf
    prec: int


def colmez_rhs(d: int, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """-(1/2) L'_f(0)/L_f(0) - (1/4) log|d|  (g = 1, F = QQ, d_F = 1)."""
    L0 = l_at_zero_exact(d)
    Lp = l_prime_at_zero(d, prec)
    with workdps(prec):
        ratio = Lp * L0.denominator / L0.numerator
        return +(-ratio / 2 - mp.log(abs(d)) / 4)


def colmez_check(d: int, prec: int = DEFAULT_PREC) -> HeightReport:
    """Modular-formula height vs the L-function side; disjoint code paths."""
    cg = class_group(d)
    lhs = cm_faltings_height(d, prec)
    rhs = colmez_rhs(d, prec)
    with workdps(prec):
        diff = +(lhs - rhs)
    return HeightReport(d=d, h=cg.h, w=cg.w, lhs=lhs, rhs=rhs, diff=diff, prec=prec)


SUITE_DISCRIMINANTS = (-3, -4, -7, -8, -11, -15, -19, -20, -23, -24, -31, -163)
