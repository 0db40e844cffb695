"""Brute-force p-adic oracles for the local kernel formulas.

Everything here counts residue cells in explicit lattice models (residue field
F_p), independently of the closed forms in localkernel:

  * quadratic extensions realized by an integral basis (1, omega) with
    omega^2 = t omega - nm, so Nm(x + y omega) = x^2 + t x y + nm y^2;
  * the split quaternion order O_B = M_2(O) with O_E embedded by the regular
    representation and the conjugation element J = [[1, t], [0, -1]]
    (J M(e) J^-1 = M(conj e), q(J) = det J = -1);
  * volumes as exact cell counts over (Z/p^M)^2, normalized to vol(O_E) = 1.

The Whittaker parameter a is never represented by the quadratic space
(E bold-j, u q); find_nonrepresented_unit picks its unit part by enumerating
norm classes, so no class-field shortcuts enter the oracle route.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .localkernel import LocalFieldData


@dataclass(frozen=True)
class PadicApprox:
    """Integer known modulo p^k; ring ops exact at the common modulus."""

    value: int
    p: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p ** self.k)

    def _join(self, other: "PadicApprox") -> int:
        if self.p != other.p:
            raise ValueError("mixed primes")
        return min(self.k, other.k)

    def __add__(self, other):
        return PadicApprox(self.value + other.value, self.p, self._join(other))

    def __sub__(self, other):
        return PadicApprox(self.value - other.value, self.p, self._join(other))

    def __mul__(self, other):
        return PadicApprox(self.value * other.value, self.p, self._join(other))

    def valuation(self) -> int:
        """v_p; error if indistinguishable from 0 at this modulus."""
        if self.value == 0:
            raise ValueError(f"valuation undecidable modulo {self.p}^{self.k}; increase k")
        v, x = 0, self.value
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v


def _vp_int(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def _vp(x, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ZeroDivisionError("valuation of 0")
    return _vp_int(x.numerator, p, 10 ** 6) - _vp_int(x.denominator, p, 10 ** 6)


def _den_exp(x: Fraction, p: int) -> int:
    return _vp_int(x.denominator, p, 10 ** 6)


def _smallest_nonresidue(p: int) -> int:
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            return a
    raise ValueError("p must be an odd prime")


def ext_params(f: LocalFieldData) -> tuple[int, int]:
    """(t, nm) with omega^2 = t omega - nm realizing E_v over QQ_p (N = p)."""
    if f.N != f.p:
        raise ValueError("oracle regime needs residue field F_p (N = p)")
    p = f.p
    if f.ram == "inert":
        if p == 2:
            return (1, -1)  # omega = (1 + sqrt 5)/2, unramified over QQ_2
        return (0, -_smallest_nonresidue(p))
    if f.ram == "ramified":
        if p == 2:
            if f.v_D != 2:
                raise ValueError("the p = 2 oracle realizes QQ_2(i), v_D = 2")
            return (0, 1)  # omega = i
        if f.v_D != 1:
            raise ValueError("odd p ramified has v_D = 1")
        return (0, -p)  # omega = sqrt p
    raise ValueError("split places need no quadratic extension model")


def _norm(tq: int, nm: int, x, y):
    return x * x + tq * x * y + nm * y * y


def shell_norm_valuation(f: LocalFieldData, coords) -> int:
    tq, nm = ext_params(f)
    return _vp(_norm(tq, nm, Fraction(coords[0]), Fraction(coords[1])), f.p)


# ---------------------------------------------------------------------------
# vol(D_n(a)) by enumeration


def required_k(f: LocalFieldData, n: int, a_val: int) -> int:
    """Cell modulus exponent giving an exact, stable count."""
    w = min(n - f.v_d, a_val)
    e = max(0, -((w - f.v_qj) // 2))
    return max(1, n - f.v_d + 2 * e) + 1


def volume_Dn_oracle(f: LocalFieldData, n: int, a_val: int, k: int | None = None,
                     a_unit: int | None = None, qj_unit: int = -1) -> Fraction:
    """vol(D_n(a)) / vol(O_E bold-j): count cells t mod p^(box+m) with
    v_p(qj_unit p^v_qj Nm(t) - a_unit p^a_val) >= n - v_d.

    The box p^-e O_E covers D_n(a) (anything below the box floor fails the
    congruence outright, by the valuation bound v(Nm t) >= min(n - v_d, a_val)
    - v_qj on D_n(a)).
    """
    kmin = required_k(f, n, a_val)
    if k is None:
        k = kmin
    if k < kmin:
        raise ValueError(f"insufficient enumeration depth k = {k}; required k >= {kmin}")
    if a_unit is None:
        a_unit = find_nonrepresented_unit(f, a_val, qj_unit)
    p = f.p
    tq, nm = ext_params(f)
    w = min(n - f.v_d, a_val)
    e = max(0, -((w - f.v_qj) // 2))
    T = n - f.v_d + 2 * e  # cleared-integer congruence exponent
    M = max(k, T, 1)
    pM = p ** M
    scale = qj_unit * p ** f.v_qj
    if a_val + 2 * e < 0:
        raise ValueError("a below the box floor; enlarge e (unexpected for the supported grid)")
    target = a_unit * p ** (a_val + 2 * e)
    if T <= 0:
        count = pM * pM  # the whole box satisfies the congruence
    else:
        # the congruence is determined mod p^T; count there and rescale
        Me = max(1, T)
        pMe = p ** Me
        modT = p ** T
        js = np.arange(pMe, dtype=np.int64)
        jj = (nm % modT) * ((js * js) % modT) % modT
        tj = (tq % modT) * (js % modT) % modT
        count = 0
        for i in range(pMe):
            q = (i * i + i * tj + jj) % modT
            vals = (scale * q - target) % modT
            count += int(np.count_nonzero(vals == 0))
        count *= p ** (2 * (M - Me))
    m = M - e
    return Fraction(count, p ** (2 * m))


def norm_unit_classes(f: LocalFieldData, depth: int) -> set[int]:
    """Unit parts of Nm(O_E - pi_E O_E) mod p^depth, by enumeration."""
    p = f.p
    tq, nm = ext_params(f)
    mod = p ** depth
    out: set[int] = set()
    for x in range(mod):
        for y in range(mod):
            v = _norm(tq, nm, x, y) % mod
            if v % p != 0:
                out.add(v)
    return out


def find_nonrepresented_unit(f: LocalFieldData, a_val: int, qj_unit: int = -1) -> int:
    """Unit a0 with a0 p^a_val not in u q(bold-j) Nm(E^x) (u = 1), verified by
    enumeration of norm classes."""
    p = f.p
    if f.ram == "inert":
        if (a_val - (1 - f.v_qj)) % 2 != 0:
            raise ValueError("inert: a_val must have parity 1 - v_qj")
        return 1  # valuation parity alone decides the class
    depth = f.v_D + 3 if p == 2 else f.v_D + 1
    mod = p ** depth
    unit_norms = norm_unit_classes(f, depth)
    # unit part of valuation-1 norms: Nm(pi_E): sqrt(p) gives -1; 1+i gives 2/2 = 1
    pi_unit = -1 if p != 2 else 1
    want_parity = (a_val - f.v_qj) % 2
    for a0 in range(1, mod):
        if a0 % p == 0:
            continue
        cls = (a0 * pow(qj_unit % mod, -1, mod) * pow(pi_unit % mod, want_parity, mod)) % mod
        if cls not in unit_norms:
            return a0
    raise ValueError("no non-represented unit found (model error)")


# ---------------------------------------------------------------------------
# alpha_v shell integrals (ramified)


def _mat_entries(tq: int, nm: int, c1, c2, s1, s2):
    """Entries of M(y1) + M(s) J; integraliy = membership of y1 + s bold-j in M_2(O)."""
    e11 = c1 + s1
    e12 = -nm * c2 + tq * s1 + nm * s2
    e21 = c2 + s2
    e22 = c1 + tq * c2 - s1
    return e11, e12, e21, e22


def shell_membership_conditions(f: LocalFieldData, coords) -> bool:
    """True iff the slice {x2 : y1 + x2 in O_B} is nonempty (a full O_E coset).

    Solving the integrality of the four entries: s1 = -c1 (mod O) and
    s2 = -c2 (mod O) work iff 2 c1 + t c2 and t c1 + 2 nm c2 are integral;
    this reproduces y1 in D^-1 O_E exactly (Lemma 7.3 shape).
    """
    p = f.p
    tq, nm = ext_params(f)
    c1, c2 = Fraction(coords[0]), Fraction(coords[1])
    return (_den_exp(2 * c1 + tq * c2, p) == 0
            and _den_exp(tq * c1 + 2 * nm * c2, p) == 0)


def alpha_shell_ratios(f: LocalFieldData, coords) -> list[Fraction]:
    """[J_0 ... J_{v_d-1}], J_n = vol{x2 in D_n : y1 + x2 in O_B} / vol(O_E bold-j),
    for y1 = c1 + c2 omega in D^-1 O_E - O_E (ramified places)."""
    if f.ram != "ramified":
        raise ValueError("shell integrals are ramified-only")
    p = f.p
    tq, nm = ext_params(f)
    c1, c2 = Fraction(coords[0]), Fraction(coords[1])
    if _den_exp(c1, p) == 0 and _den_exp(c2, p) == 0:
        raise ValueError("y1 is integral; pass an O_E point instead")
    if f.v_d == 0:
        return []
    if not shell_membership_conditions(f, (c1, c2)):
        return [Fraction(0)] * f.v_d
    # membership slice = (-c1, -c2) + O_E; enumerate its integer offsets
    den = max(_den_exp(c1, p), _den_exp(c2, p))
    m = max(1, (f.v_d - 1) - f.v_d + 2 * den) + 2
    pm = p ** m
    pd = p ** den
    C1 = int(c1 * pd)
    C2 = int(c2 * pd)
    counts = [0] * f.v_d
    cap = m + 2 * den
    js = np.arange(pm, dtype=np.int64)
    for i in range(pm):
        s1c = i * pd - C1  # = p^den * s1
        s2c = js * pd - C2
        q = s1c * s1c + tq * s1c * s2c + nm * s2c * s2c  # = p^(2 den) Nm(s)
        for n in range(f.v_d):
            thr = n - f.v_d + 2 * den
            if thr <= 0:
                counts[n] += pm
            else:
                counts[n] += int(np.count_nonzero(q % p ** thr == 0))
    return [Fraction(c, p ** (2 * m)) for c in counts]


# ---------------------------------------------------------------------------
# split-place pair volumes (series coefficients for the split/S2 cases)


def split_pair_volume(p: int, n: int, floor_exp: int,
                      exclude_unit: int | None = None) -> Fraction:
    """vol{(z1, z2) in (p^-e O)^2 : v(z1 z2) >= n, [z1 z2 not= exclude_unit (p)]},
    vol(O^2) = 1, e = floor_exp. The optional exclusion removes the cells with
    v(z1 z2) = 0 and unit part = exclude_unit mod p."""
    e = floor_exp
    thr = n + 2 * e
    M = max(1, thr, 2 * e + 1) + 1
    pM = p ** M
    pe2 = p ** (2 * e)
    count = 0
    js = np.arange(pM, dtype=np.int64)
    for i in range(pM):
        w = i * js  # = p^(2e) z1 z2
        if thr > 0:
            ok = (w % p ** thr) == 0
        else:
            ok = np.ones_like(w, dtype=bool)
        if exclude_unit is not None:
            unit_cells = ((w % (pe2 * p)) % pe2 == 0) & ((w // pe2) % p == exclude_unit % p)
            ok &= ~unit_cells
        count += int(np.count_nonzero(ok))
    m = M - e
    return Fraction(count, p ** (2 * m))


# ---------------------------------------------------------------------------
# Hecke cosets, conductors, and the multiplicity coset sums


def embedding_matrix(f: LocalFieldData):
    """M(omega) for the regular representation on the basis (1, omega)."""
    tq, nm = ext_params(f)
    return ((0, -nm), (1, tq))


def hecke_cosets(p: int, k: int):
    """Hermite representatives of {x in M_2(O) : v(det x) = k} / GL_2(O)."""
    out = []
    for a in range(k + 1):
        c = k - a
        for b in range(p ** c):
            out.append(((p ** a, b), (0, p ** c)))
    return out


def _mat_inv_frac(h):
    (a, b), (c, d) = h
    det = Fraction(a * d - b * c)
    return ((d / det, -b / det), (-c / det, a / det))


def _mat_mul(A, B):
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(2)) for j in range(2))
                 for i in range(2))


def coset_conductor(f: LocalFieldData, h) -> int:
    """c of the coset E^x h_c GL_2(O) containing h^-1: least c with
    p^c omega stabilizing the lattice h^-1 O^2, i.e. h M(omega) h^-1 integral
    after scaling by p^c."""
    W = embedding_matrix(f)
    hw = _mat_mul(h, W)
    conj = _mat_mul(hw, _mat_inv_frac(h))
    worst = 0
    for row in conj:
        for x in row:
            x = Fraction(x)
            if x != 0:
                worst = max(worst, _den_exp(x, f.p))
    return worst


def m_pair_coset_sum(f: LocalFieldData, v_lambda: int, k: int) -> Fraction:
    """sum over x in M_2(O)-cosets with v(det x) = k of the corrected-table
    multiplicity m(y, x^-1), for y with v(q(y)) = k and v(lambda(y)) = v_lambda."""
    from .localkernel import m_pair
    total = Fraction(0)
    for h in hecke_cosets(f.p, k):
        total += m_pair(f, v_lambda, coset_conductor(f, h))
    return total


# ---------------------------------------------------------------------------
# Cherednik multiplicity oracle (nonsplit quaternion algebra, inert E)


def cherednik_multiplicity_direct(f: LocalFieldData, gamma) -> int:
    """m(gamma) = max n with gamma congruent to an element of O_E mod p^n
    (gamma in GL_2(O)); computed from the explicit obstruction entries."""
    tq, nm = ext_params(f)
    (g11, g12), (g21, g22) = gamma
    o1 = Fraction(g12) + nm * Fraction(g21)
    o2 = Fraction(g22) - Fraction(g11) - tq * Fraction(g21)
    vals = []
    for o in (o1, o2):
        if o == 0:
            vals.append(10 ** 6)
        else:
            vals.append(_vp(o, f.p))
    return min(vals)


def quaternion_element(f: LocalFieldData, a_coords, b_coords):
    """Matrix of a + b J for a = a1 + a2 omega, b = b1 + b2 omega."""
    tq, nm = ext_params(f)
    a1, a2 = Fraction(a_coords[0]), Fraction(a_coords[1])
    b1, b2 = Fraction(b_coords[0]), Fraction(b_coords[1])
    # M(a) + M(b) J with J = [[1, t], [0, -1]]
    return ((a1 + b1, -nm * a2 + tq * b1 + nm * b2),
            (a2 + b2, a1 + tq * a2 - b1))
