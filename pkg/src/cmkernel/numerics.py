"""Arbitrary-precision substrate: precision contexts, log-gamma, semi-infinite quadrature.

All functions take an explicit decimal-digit precision and evaluate inside a
local mpmath working-precision context, so results never depend on the ambient
global precision.  Guard digits are added internally; the stated error bounds
are on the returned values.
"""

from __future__ import annotations

import mpmath
from mpmath import mp

DEFAULT_PREC = 64

# extra digits carried internally so that the advertised bounds hold
GUARD = 15


def workdps(prec: int):
    """Local working-precision context at prec + GUARD decimal digits."""
    return mp.workdps(prec + GUARD)


def mpf_at(x, prec: int) -> mpmath.mpf:
    with workdps(prec):
        return mp.mpf(x)


def log_gamma(x, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """ln Gamma(x) for real x > 0, absolute error < 10^(-prec+2)."""
    with workdps(prec):
        xv = mp.mpf(x)
        if not xv > 0:
            raise ValueError(f"log_gamma requires x > 0, got {x}")
        return mp.loggamma(xv)


def euler_gamma(prec: int = DEFAULT_PREC) -> mpmath.mpf:
    with workdps(prec):
        return +mp.euler


def integrate_semiinfinite(f, prec: int = DEFAULT_PREC, singular_at_zero: bool = False,
                           decays: bool = True) -> mpmath.mpf:
    """Integrate f over (0, inf), absolute error < 10^(-prec+4).

    The integrand must decay at least exponentially at infinity (declared via
    `decays`); an integrable singularity at 0 is allowed if declared.  The
    range is split at 1 so tanh-sinh quadrature sees the endpoint singularity
    only at an interval end.
    """
    if not decays:
        raise ValueError("integrand declared non-decaying; refusing semi-infinite quadrature")
    with mp.workdps(2 * (prec + GUARD)):
        # split at 1: [0,1] captures a possible log singularity, [1,inf) the tail
        val = mp.quad(f, [0, 1, mp.inf])
    with workdps(prec):
        return +val


def agree_to(a, b, digits: int) -> bool:
    """|a - b| < 10^(-digits), evaluated at a safe precision."""
    with mp.workdps(digits + 30):
        return mp.fabs(mp.mpf(a) - mp.mpf(b)) < mp.mpf(10) ** (-digits)
