"""Dirichlet L-values at s = 0 for the quadratic character of an imaginary
quadratic field, and the completed-vs-finite constant bookkeeping.

Two independent routes to L'(0):
  * the Lerch closed form  L'(0) = sum_a chi(a) lnGamma(a/|d|) - log|d| L(0);
  * centered finite differences of L(s) summed by hand-rolled Euler-Maclaurin
    Hurwitz zeta (globally convergent, no loggamma involved).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .numerics import DEFAULT_PREC, GUARD, log_gamma, workdps
from .quadfield import is_fundamental, kronecker


def l_at_zero_exact(d: int) -> Fraction:
    """L(0, chi_d) = -(1/|d|) sum_{a=1}^{|d|-1} a chi(a), exact rational."""
    if not is_fundamental(d):
        raise ValueError(f"{d} is not fundamental")
    D = abs(d)
    s = sum(a * kronecker(d, a) for a in range(1, D))
    return Fraction(-s, D)


def l_at_zero(d: int, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    v = l_at_zero_exact(d)
    with workdps(prec):
        return mp.mpf(v.numerator) / v.denominator


def _bern(n: int) -> Fraction:
    p, q = mp.bernfrac(n)
    return Fraction(int(p), int(q))


def hurwitz_zeta_em(s, a, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """zeta(s, a) by Euler-Maclaurin; s real != 1, 0 < a <= 1."""
    with workdps(prec):
        s = mp.mpf(s)
        a = mp.mpf(a)
        if s == 1:
            raise ValueError("pole at s = 1")
        M = max(30, 2 * (prec + GUARD))
        J = 30
        total = mp.fsum((k + a) ** (-s) for k in range(M))
        Ma = M + a
        total += Ma ** (1 - s) / (s - 1)
        total += mp.mpf(1) / 2 * Ma ** (-s)
        rising = s
        for j in range(1, J + 1):
            b = _bern(2 * j)
            total += mp.mpf(b.numerator) / b.denominator / mp.factorial(2 * j) * rising * Ma ** (-s - 2 * j + 1)
            rising *= (s + 2 * j - 1) * (s + 2 * j)
        return +total


def l_via_hurwitz(d: int, s, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """L(s, chi_d) = |d|^(-s) sum_a chi(a) zeta(s, a/|d|); s = 1 by the explicit limit."""
    if not is_fundamental(d):
        raise ValueError(f"{d} is not fundamental")
    D = abs(d)
    chi = [kronecker(d, a) for a in range(1, D)]
    with workdps(prec):
        s = mp.mpf(s)
        if s == 1:
            # pole terms (M+a/D)^(1-s)/(s-1) cancel by sum chi = 0, leaving -sum chi log(M+a/D)
            M = max(30, 2 * (prec + GUARD))
            J = 30
            total = mp.mpf(0)
            for a in range(1, D):
                if chi[a - 1] == 0:
                    continue
                x = mp.mpf(a) / D
                part = mp.fsum((k + x) ** (-1) for k in range(M))
                Ma = M + x
                part += -mp.log(Ma) + mp.mpf(1) / 2 / Ma
                rising = mp.mpf(1)
                for j in range(1, J + 1):
                    b = _bern(2 * j)
                    part += mp.mpf(b.numerator) / b.denominator / mp.factorial(2 * j) * rising * Ma ** (-2 * j)
                    rising *= (2 * j) * (2 * j + 1)
                total += chi[a - 1] * part
            return total / D
        total = mp.fsum(chi[a - 1] * hurwitz_zeta_em(s, mp.mpf(a) / D, prec)
                        for a in range(1, D) if chi[a - 1] != 0)
        return +(mp.mpf(D) ** (-s) * total)


def l_prime_at_zero(d: int, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """L'(0, chi_d) by the Lerch formula."""
    if not is_fundamental(d):
        raise ValueError(f"{d} is not fundamental")
    D = abs(d)
    with workdps(prec):
        total = mp.mpf(0)
        for a in range(1, D):
            c = kronecker(d, a)
            if c:
                total += c * log_gamma(mp.mpf(a) / D, prec)
        L0 = l_at_zero_exact(d)
        total -= mp.log(D) * mp.mpf(L0.numerator) / L0.denominator
        return +total


def l_prime_at_zero_fd(d: int, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """Finite-difference oracle: (L(h) - L(-h)) / 2h with Hurwitz-zeta summation."""
    work = 2 * prec
    with mp.workdps(work + GUARD):
        h = mp.mpf(10) ** (-(prec // 4))
        lp = l_via_hurwitz(d, h, work)
        lm = l_via_hurwitz(d, -h, work)
        return +((lp - lm) / (2 * h))


def gamma_factor_logderiv(m: int, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """L'_inf(0)/L_inf(0) for the gamma factor (pi^(-(s+1)/2) Gamma((s+1)/2))^m:
    equals -(m/2)(gamma + log 4 pi)."""
    if m < 1:
        raise ValueError("m >= 1 required")
    with workdps(prec):
        return +(-mp.mpf(m) / 2 * (mp.euler + mp.log(4 * mp.pi)))


def gamma_factor_logderiv_fd(m: int, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """Same quantity by 4th-order central differences of log of the gamma factor."""
    with mp.workdps(2 * (prec + GUARD)):
        def lg(s):
            return m * (-(s + 1) / 2 * mp.log(mp.pi) + mp.loggamma((s + 1) / 2))
        h = mp.mpf(10) ** (-(prec // 4))
        val = (-lg(2 * h) + 8 * lg(h) - 8 * lg(-h) + lg(-2 * h)) / (12 * h)
        return +val


@dataclass(frozen=True)
class LSeriesData:
    d: int
    L0: mpmath.mpf
    L0prime: mpmath.mpf
    ratio: mpmath.mpf
    prec: int


def l_series_data(d: int, prec: int = DEFAULT_PREC) -> LSeriesData:
    L0 = l_at_zero(d, prec)
    L0p = l_prime_at_zero(d, prec)
    with workdps(prec):
        return LSeriesData(d=d, L0=L0, L0prime=L0p, ratio=+(L0p / L0), prec=prec)


@dataclass(frozen=True)
class ConstantReport:
    c0: mpmath.mpf
    c1: mpmath.mpf
    m: int
    gamma_logderiv: mpmath.mpf


def constants_report(d: int, prec: int = DEFAULT_PREC) -> ConstantReport:
    """c1 = 2 L'_f(0)/L_f(0) + log|d| (finite), c0 = c1 + 2 L'_inf(0)/L_inf(0) (completed); F = QQ."""
    ls = l_series_data(d, prec)
    g = gamma_factor_logderiv(1, prec)
    with workdps(prec):
        c1 = +(2 * ls.ratio + mp.log(abs(d)))
        c0 = +(c1 + 2 * g)
    return ConstantReport(c0=c0, c1=c1, m=1, gamma_logderiv=g)


def completed_lambda(d: int, s, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """Lambda(s) = (|d|/pi)^((s+1)/2) Gamma((s+1)/2) L(s, chi); functional equation gives
    Lambda(0) = Lambda(1)."""
    with workdps(prec):
        s = mp.mpf(s)
        L = l_via_hurwitz(d, s, prec) if s != 0 else None
        if L is None:
            L0 = l_at_zero_exact(d)
            L = mp.mpf(L0.numerator) / L0.denominator
        return +((mp.mpf(abs(d)) / mp.pi) ** ((s + 1) / 2) * mp.gamma((s + 1) / 2) * L)
