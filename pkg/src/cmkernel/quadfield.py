"""Imaginary quadratic bookkeeping: discriminants, Kronecker characters, class
groups by reduced-form enumeration, Heegner points, and the CM-type
discriminant combinatorics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import mpmath
from mpmath import mp

from .numerics import workdps

CLASS_GROUP_BOUND = 10 ** 6


def _squarefree(n: int) -> bool:
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def is_fundamental(d: int) -> bool:
    """d < 0 a fundamental discriminant: d = 1 mod 4 squarefree, or 4m, m = 2,3 mod 4 squarefree."""
    if d >= 0:
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _require_fundamental(d: int):
    if not is_fundamental(d):
        raise ValueError(f"{d} is not a fundamental discriminant"
                         + (f" ({d} = {d % 4} mod 4, not fundamental)" if d < 0 else ""))


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for fundamental d < 0 and n >= 1."""
    _require_fundamental(d)
    if n < 1:
        raise ValueError("n must be >= 1")
    return _kronecker_any(d, n)


def _kronecker_any(a: int, n: int) -> int:
    # standard algorithm, n >= 1
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor out 2 from n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            result = -result
    a %= n
    # Jacobi with reciprocity
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class ReducedForm:
    """Primitive reduced positive binary quadratic form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def heegner_point(self, prec: int = 64) -> mpmath.mpc:
        """tau = (-b + sqrt(d))/(2a), principal branch; Im tau >= sqrt(3)/2."""
        with workdps(prec):
            d = self.disc()
            return (-self.b + mp.sqrt(mp.mpc(d))) / (2 * self.a)


@dataclass(frozen=True)
class ClassGroupData:
    d: int
    h: int
    w: int
    forms: tuple[ReducedForm, ...]

    def heegner_points(self, prec: int = 64) -> list[mpmath.mpc]:
        return [f.heegner_point(prec) for f in self.forms]


def class_group(d: int) -> ClassGroupData:
    """Exhaustive reduced-form enumeration: |b| <= a <= sqrt(|d|/3), c determined."""
    _require_fundamental(d)
    if abs(d) > CLASS_GROUP_BOUND:
        raise ValueError(f"|d| = {abs(d)} exceeds the class_group bound {CLASS_GROUP_BOUND}")
    forms = []
    amax = math.isqrt(abs(d) // 3)
    for a in range(1, amax + 1):
        for b in range(-a, a + 1):
            num = b * b - d
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if (abs(b) == a or a == c) and b < 0:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append(ReducedForm(a, b, c))
    forms.sort(key=lambda f: (f.a, f.b, f.c))
    w = 4 if d == -4 else 6 if d == -3 else 2
    return ClassGroupData(d=d, h=len(forms), w=w, forms=tuple(forms))


def transform_form(f: ReducedForm, m) -> tuple[int, int, int]:
    """Coefficients of f((px + qy, rx + sy)) for m = (p, q, r, s)."""
    p, q, r, s = m
    a = f.a * p * p + f.b * p * r + f.c * r * r
    b = 2 * f.a * p * q + f.b * (p * s + q * r) + 2 * f.c * r * s
    c = f.a * q * q + f.b * q * s + f.c * s * s
    return a, b, c


# ---------------------------------------------------------------------------
# CM-type combinatorics


@dataclass(frozen=True)
class CMTypeData:
    """2g roots with x_{i+g} = conj(x_i) (0-based: roots[i+g] pairs roots[i]),
    and phi a choice of one index from each conjugate pair."""

    roots: tuple
    phi: tuple[int, ...]

    def __post_init__(self):
        n = len(self.roots)
        if n % 2 != 0:
            raise ValueError("need 2g roots")
        g = n // 2
        if len(self.phi) != g:
            raise ValueError("phi must have g elements")
        seen = set()
        for i in self.phi:
            pair = i % g
            if pair in seen:
                raise ValueError("phi contains both members of a conjugate pair")
            seen.add(pair)

    @property
    def g(self) -> int:
        return len(self.roots) // 2


def _check_distinct(roots):
    for i, j in combinations(range(len(roots)), 2):
        if roots[i] == roots[j]:
            raise ValueError(f"repeated roots at positions {i}, {j}")


def cm_type_discriminant(t: CMTypeData):
    """prod_{i<j in phi} (x_i - x_j)^2; empty product 1 for g = 1."""
    _check_distinct(t.roots)
    prod = Fraction(1) if all(isinstance(r, (int, Fraction)) for r in t.roots) else 1
    for i, j in combinations(t.phi, 2):
        diff = t.roots[i] - t.roots[j]
        prod = prod * diff * diff
    return prod


def _all_cm_types(g: int):
    """All 2^g choice vectors: bit k set means take index k+g instead of k."""
    for mask in range(1 << g):
        yield tuple((k + g) if (mask >> k) & 1 else k for k in range(g))


def cm_type_product_identity(roots):
    """Check prod_Phi Delta(Phi) Delta(Phi^c) = (prod_{i<j}(x_i-x_j)^2 / prod_{i<=g}(x_i-x_{i+g})^2)^(2^(g-1))
    by exact multiset comparison of the linear factors (x_i - x_j).

    Returns (lhs_multiset, rhs_multiset, equal) where the multisets map an
    unordered index pair to its exponent as a linear factor.
    """
    roots = tuple(roots)
    _check_distinct(roots)
    n = len(roots)
    if n % 2 != 0:
        raise ValueError("need 2g roots")
    g = n // 2
    if g > 6:
        raise ValueError("g <= 6 required (2^g CM types enumerated)")

    lhs: dict[tuple[int, int], int] = {}
    for phi in _all_cm_types(g):
        phic = tuple((i + g) % n for i in phi)
        for part in (phi, phic):
            for i, j in combinations(part, 2):
                key = (min(i, j), max(i, j))
                lhs[key] = lhs.get(key, 0) + 2

    rhs: dict[tuple[int, int], int] = {}
    e = 1 << (g - 1)
    for i, j in combinations(range(n), 2):
        rhs[(i, j)] = rhs.get((i, j), 0) + 2 * e
    for i in range(g):
        key = (i, i + g)
        rhs[key] -= 2 * e
    rhs = {k: v for k, v in rhs.items() if v != 0}
    lhs = {k: v for k, v in lhs.items() if v != 0}
    return lhs, rhs, lhs == rhs
