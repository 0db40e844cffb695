"""Exact value algebra QQ + sum of QQ * log(prime), and rational functions in X = N^(-s).

LogLinearValue holds the exact numbers produced by the local kernel formulas:
a rational constant plus a finite rational combination of logs of integers.
Bases are canonicalized to primes (log 12 -> 2 log 2 + log 3), so equality is
decidable structural equality.

RationalFunctionX is a rational function in X over QQ attached to a base
N >= 2, semantically X = N^(-s).  Differentiating g(s) = f(N^(-s)) at s = 0
gives the exact LogLinearValue -log N * f'(1); a factor (1-X)^2 contributes
exactly 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import mpmath
from mpmath import mp

from .numerics import workdps


def _factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 2 (trial division; bases here are small)."""
    if n < 2:
        raise ValueError(f"log base must be >= 2, got {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class LogLinearValue:
    """constant + sum over primes p of terms[p] * log p, all coefficients exact."""

    constant: Fraction
    terms: tuple[tuple[int, Fraction], ...]  # sorted ((prime, coeff), ...), no zeros

    @staticmethod
    def make(constant=0, terms: Mapping[int, object] | Iterable[tuple[int, object]] = ()) -> "LogLinearValue":
        acc: dict[int, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for base, coeff in items:
            c = Fraction(coeff)
            if c == 0:
                continue
            for p, e in _factorize(int(base)).items():
                acc[p] = acc.get(p, Fraction(0)) + e * c
        cleaned = tuple(sorted((p, c) for p, c in acc.items() if c != 0))
        return LogLinearValue(Fraction(constant), cleaned)

    @staticmethod
    def zero() -> "LogLinearValue":
        return LogLinearValue(Fraction(0), ())

    @staticmethod
    def log(base: int, coeff=1) -> "LogLinearValue":
        return LogLinearValue.make(0, [(base, coeff)])

    def __add__(self, other: "LogLinearValue") -> "LogLinearValue":
        acc = dict(self.terms)
        for p, c in other.terms:
            acc[p] = acc.get(p, Fraction(0)) + c
        return LogLinearValue(self.constant + other.constant,
                              tuple(sorted((p, c) for p, c in acc.items() if c != 0)))

    def __sub__(self, other: "LogLinearValue") -> "LogLinearValue":
        return self + (-other)

    def __neg__(self) -> "LogLinearValue":
        return self.scale(-1)

    def scale(self, q) -> "LogLinearValue":
        q = Fraction(q)
        if q == 0:
            return LogLinearValue.zero()
        return LogLinearValue(self.constant * q, tuple((p, c * q) for p, c in self.terms))

    def is_zero(self) -> bool:
        return self.constant == 0 and not self.terms

    def evaluate(self, prec: int = 64) -> mpmath.mpf:
        with workdps(prec):
            val = mp.mpf(self.constant.numerator) / self.constant.denominator
            for p, c in self.terms:
                val += mp.log(p) * mp.mpf(c.numerator) / c.denominator
            return +val

    def __str__(self) -> str:
        parts = []
        if self.constant != 0 or not self.terms:
            parts.append(str(self.constant))
        for p, c in self.terms:
            parts.append(f"{c}*log({p})")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# polynomials over QQ, dense coefficient lists, lowest degree first


def _ptrim(c: list[Fraction]) -> tuple[Fraction, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else Fraction(0)) + (b[i] if i < len(b) else Fraction(0))
                   for i in range(n)])


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _ptrim(out)


def _pscale(a, q):
    q = Fraction(q)
    return _ptrim([ai * q for ai in a])


def _peval(a, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for ai in reversed(a):
        acc = acc * x + ai
    return acc


def _pderiv(a):
    return _ptrim([i * a[i] for i in range(1, len(a))])


def _pdivmod(a, b):
    """Polynomial division a = q*b + r over QQ."""
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and _ptrim(list(a)):
        a = list(_ptrim(a))
        if len(a) < len(b):
            break
        k = len(a) - len(b)
        c = a[-1] / b[-1]
        q[k] = c
        for j in range(len(b)):
            a[k + j] -= c * b[j]
        a = list(_ptrim(a))
    return _ptrim(q), _ptrim(a)


_ONE_MINUS_X = (Fraction(1), Fraction(-1))


@dataclass(frozen=True)
class RationalFunctionX:
    """num(X)/den(X) over QQ with base N >= 2; X stands for N^(-s)."""

    num: tuple[Fraction, ...]
    den: tuple[Fraction, ...]
    base: int

    @staticmethod
    def make(num, den=(1,), base: int = 2) -> "RationalFunctionX":
        n = _ptrim([Fraction(c) for c in num])
        d = _ptrim([Fraction(c) for c in den])
        if not d:
            raise ZeroDivisionError("zero denominator polynomial")
        if base < 2:
            raise ValueError("base must be >= 2")
        return RationalFunctionX(n, d, base)

    @staticmethod
    def const(c, base: int) -> "RationalFunctionX":
        return RationalFunctionX.make([c], base=base)

    @staticmethod
    def monomial(k: int, base: int, coeff=1) -> "RationalFunctionX":
        return RationalFunctionX.make([0] * k + [coeff], base=base)

    def _ck(self, other: "RationalFunctionX"):
        if self.base != other.base:
            raise ValueError(f"mixed bases {self.base} and {other.base}")

    def __add__(self, other: "RationalFunctionX") -> "RationalFunctionX":
        self._ck(other)
        return RationalFunctionX.make(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den), self.base)

    def __sub__(self, other: "RationalFunctionX") -> "RationalFunctionX":
        return self + other.scale(-1)

    def __mul__(self, other: "RationalFunctionX") -> "RationalFunctionX":
        self._ck(other)
        return RationalFunctionX.make(_pmul(self.num, other.num),
                                      _pmul(self.den, other.den), self.base)

    def __truediv__(self, other: "RationalFunctionX") -> "RationalFunctionX":
        self._ck(other)
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunctionX.make(_pmul(self.num, other.den),
                                      _pmul(self.den, other.num), self.base)

    def scale(self, q) -> "RationalFunctionX":
        return RationalFunctionX.make(_pscale(self.num, q), self.den, self.base)

    def is_zero(self) -> bool:
        return not self.num

    def eval_at(self, x) -> Fraction:
        x = Fraction(x)
        dv = _peval(self.den, x)
        if dv == 0:
            raise ZeroDivisionError(f"denominator vanishes at X={x}")
        return _peval(self.num, x) / dv

    def eval_s(self, s, prec: int = 64):
        """Numeric value of f(N^(-s)) at real/complex s."""
        with workdps(prec):
            x = mp.power(self.base, -mp.mpf(s) if not isinstance(s, complex) else -mp.mpc(s))
            nv = sum(mp.mpf(c.numerator) / c.denominator * x ** i for i, c in enumerate(self.num))
            dv = sum(mp.mpf(c.numerator) / c.denominator * x ** i for i, c in enumerate(self.den))
            return nv / dv

    def reduced_at_one(self) -> "RationalFunctionX":
        """Cancel common factors (1-X) of numerator and denominator."""
        num, den = self.num, self.den
        while num and den and _peval(num, Fraction(1)) == 0 and _peval(den, Fraction(1)) == 0:
            num, _ = _pdivmod(num, _ONE_MINUS_X)
            den, _ = _pdivmod(den, _ONE_MINUS_X)
        return RationalFunctionX(num, den, self.base)


def rf_log_derivative(f: RationalFunctionX) -> LogLinearValue:
    """d/ds f(N^(-s)) at s = 0, exactly: -log N * f'(1).

    A pole at X = 1 (after cancelling removable (1-X) factors) is an error;
    a numerator factor (1-X)^2 contributes exactly 0.
    """
    g = f.reduced_at_one()
    den1 = _peval(g.den, Fraction(1))
    if den1 == 0:
        raise ZeroDivisionError(
            f"pole at X=1: denominator factor {g.den} vanishes at 1 and is not removable")
    num1 = _peval(g.num, Fraction(1))
    dnum = _peval(_pderiv(g.num), Fraction(1))
    dden = _peval(_pderiv(g.den), Fraction(1))
    fprime1 = (dnum * den1 - num1 * dden) / (den1 * den1)
    return LogLinearValue.make(0, [(f.base, -fprime1)])
