"""Archimedean kernel: Legendre function of the second kind, the hyperbolic
Green multiplicity, and the adjunction-formula limit.

Q_s(t) = int_0^inf (t + sqrt(t^2-1) cosh u)^(-1-s) du for t > 1, with the
closed form Q_0(t) = (1/2) log((t+1)/(t-1)).
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp

from .numerics import DEFAULT_PREC, GUARD, workdps


@dataclass(frozen=True)
class UpperHalfPoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError("upper half plane needs y > 0")


def legendre_q(s, t, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """Q_s(t) by quadrature of the defining integral; error < 10^(-prec+4)."""
    with mp.workdps(2 * (prec + GUARD)):
        s = mp.mpf(s)
        t = mp.mpf(t)
        if not t > 1:
            raise ValueError("t > 1 required (logarithmic singularity at t = 1)")
        c = mp.sqrt(t * t - 1)

        def f(u):
            return (t + c * mp.cosh(u)) ** (-1 - s)

        # integrand decays like (c/2)^(-1-s) e^(-(1+s) u); cut where negligible
        upper = mp.log(2 * mp.mpf(10) ** (prec + 12) / c) / (1 + s) + 5
        val = mp.quad(f, [0, 1, max(2, upper)])
    with workdps(prec):
        return +val


def legendre_q0_closed(t, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """Q_0(t) = (1/2) log((t+1)/(t-1)), t > 1."""
    with workdps(prec):
        t = mp.mpf(t)
        if not t > 1:
            raise ValueError("t > 1 required")
        return +(mp.log((t + 1) / (t - 1)) / 2)


def green_ms(s, z0: UpperHalfPoint, z1: UpperHalfPoint, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """m_s(z0, z1) = Q_s(1 + |z1 - z0|^2 / (2 Im z0 Im z1))."""
    with workdps(prec):
        dx = mp.mpf(z1.x) - mp.mpf(z0.x)
        dy = mp.mpf(z1.y) - mp.mpf(z0.y)
        d2 = dx * dx + dy * dy
        if d2 == 0:
            raise ValueError("z1 = z0 is singular")
        t = 1 + d2 / (2 * mp.mpf(z0.y) * mp.mpf(z1.y))
    if s == 0:
        return legendre_q0_closed(t, prec)
    return legendre_q(s, t, prec)


def adjunction_limit(z0: UpperHalfPoint, z1: UpperHalfPoint,
                     prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """m_0(z0,z1) - log(2 Im z1 / |z1 - z0|), computed both as the composite and
    as the simplified closed form; the two must agree to 10^(-prec+4)."""
    with workdps(prec):
        dx = mp.mpf(z1.x) - mp.mpf(z0.x)
        dy = mp.mpf(z1.y) - mp.mpf(z0.y)
        d2 = dx * dx + dy * dy
        if d2 == 0:
            raise ValueError("z1 = z0 is singular")
        y0 = mp.mpf(z0.y)
        y1 = mp.mpf(z1.y)
        composite = green_ms(0, z0, z1, prec) - mp.log(2 * y1 / mp.sqrt(d2))
        simplified = mp.log(1 + d2 / (4 * y0 * y1)) / 2 - mp.log(y1 / y0) / 2
        if mp.fabs(composite - simplified) > mp.mpf(10) ** (-(prec - 4)):
            raise ArithmeticError("adjunction identity paths disagree beyond tolerance")
        return +simplified
