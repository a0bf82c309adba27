"""Dirichlet characters with exact cyclotomic values.

Characters are stored as exponent tables over a generator decomposition of
(Z/M)^x: chi(a) = zeta_ord^t with t looked up per residue.  All sums of
character values (Gauss sums, twisted unit sums, generalized Bernoulli
numbers) are accumulated as integer/rational histograms over exponents and
reduced once, which keeps the exact paths fast.

Characters vanish off the unit group; the modulus-1 character is constantly 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from itertools import product

import mpmath
from mpmath import mp

from .arith import (
    BigComplex,
    CyclotomicNumber,
    bernoulli_number,
    bernoulli_polynomial,
    euler_phi,
    factorize,
    vp,
)

__all__ = [
    "DirichletCharacter",
    "enumerate_characters",
    "conductor",
    "GaussSumResult",
    "gauss_sum",
    "GeneralizedGaussSum",
    "generalized_gauss_sum",
    "unit_sum_twisted",
    "unit_sum_twisted_direct",
    "generalized_bernoulli",
    "TranscendentalValue",
    "L_special_exact",
    "LSeriesValue",
    "L_truncated",
    "NormalizedLValue",
    "normalized_L",
]


# ---------------------------------------------------------------------------
# unit group structure


def _primitive_root(q: int) -> int:
    """Primitive root modulo an odd prime power q."""
    phi = euler_phi(q)
    fac = [f for f, _ in factorize(phi)]
    for g in range(2, q):
        if gcd(g, q) != 1:
            continue
        if all(pow(g, phi // f, q) != 1 for f in fac):
            return g
    raise ArithmeticError(f"no primitive root mod {q}")


class _UnitGroup:
    """Generator decomposition of (Z/M)^x with a discrete-log table."""

    def __init__(self, M: int):
        self.M = M
        gens: list[int] = []
        orders: list[int] = []
        if M > 1:
            for q0, e in factorize(M):
                q = q0**e
                cof = M // q
                if q0 == 2:
                    if e == 2:
                        gens.append(self._crt(q - 1, q, cof))
                        orders.append(2)
                    elif e >= 3:
                        gens.append(self._crt(q - 1, q, cof))
                        orders.append(2)
                        gens.append(self._crt(5, q, cof))
                        orders.append(q // 4)
                else:
                    gens.append(self._crt(_primitive_root(q), q, cof))
                    orders.append(euler_phi(q))
        self.gens = gens
        self.orders = orders
        self.exponent = 1
        for o in orders:
            self.exponent = lcm(self.exponent, o)
        # discrete logs for every unit
        dlog: dict[int, tuple[int, ...]] = {}
        if M == 1:
            dlog[0] = ()
        else:
            for exps in product(*(range(o) for o in orders)):
                a = 1
                for g, e in zip(gens, exps):
                    a = a * pow(g, e, M) % M
                dlog[a] = exps
        self.dlog = dlog
        self.units = sorted(dlog)

    @staticmethod
    def _crt(r: int, q: int, cof: int) -> int:
        """Unit congruent to r mod q and 1 mod cof."""
        if cof == 1:
            return r % q
        inv_q = pow(q, -1, cof)
        inv_c = pow(cof, -1, q)
        return (r * cof * inv_c + q * inv_q) % (q * cof)


@lru_cache(maxsize=None)
def _unit_group(M: int) -> _UnitGroup:
    return _UnitGroup(M)


# ---------------------------------------------------------------------------
# characters


class DirichletCharacter:
    """Dirichlet character modulo M with values in roots of unity.

    ``exps`` records the exponents on the unit-group generators; the value
    table maps every residue to an exponent of zeta_{value_order} (or None
    off the units, where the character vanishes).
    """

    __slots__ = ("modulus", "exps", "value_order", "_table", "_conductor", "_primitive")

    def __init__(self, modulus: int, exps: tuple[int, ...]):
        grp = _unit_group(modulus)
        if len(exps) != len(grp.orders):
            raise ValueError("exponent tuple does not match the unit group")
        self.modulus = modulus
        self.exps = tuple(e % o for e, o in zip(exps, grp.orders))
        ord_ = 1
        for e, o in zip(self.exps, grp.orders):
            if e:
                ord_ = lcm(ord_, o // gcd(e, o))
        self.value_order = ord_
        table: list[int | None] = [None] * max(modulus, 1)
        for a, xs in grp.dlog.items():
            t = 0
            for e, x, o in zip(self.exps, xs, grp.orders):
                if e:
                    g = gcd(e, o)
                    # chi(gen) = zeta_{o/g}^{e/g} = zeta_ord^{(e/g) * ord / (o/g)}
                    t += x * (e // g) * (ord_ // (o // g))
            table[a] = t % ord_
        self._table = table
        self._conductor: int | None = None
        self._primitive: "DirichletCharacter | None" = None

    # -- basic queries -------------------------------------------------------

    def exponent_of(self, a: int) -> int | None:
        """Exponent t with chi(a) = zeta_{value_order}^t, or None if chi(a) = 0."""
        if self.modulus == 1:
            return 0
        return self._table[a % self.modulus]

    def value(self, a: int) -> CyclotomicNumber:
        t = self.exponent_of(a)
        if t is None:
            return CyclotomicNumber.from_rational(0, self.value_order)
        return CyclotomicNumber.zeta(self.value_order, t)

    def __call__(self, a: int) -> CyclotomicNumber:
        return self.value(a)

    @property
    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exps)

    @property
    def is_even(self) -> bool:
        t = self.exponent_of(-1)
        return t == 0

    @property
    def is_odd(self) -> bool:
        return not self.is_even

    def __eq__(self, other):
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.exps == other.exps
        )

    def __hash__(self):
        return hash((self.modulus, self.exps))

    def __repr__(self):
        return f"DirichletCharacter(mod {self.modulus}, exps={self.exps}, order {self.value_order})"

    # -- group operations ------------------------------------------------------

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if self.modulus != other.modulus:
            raise ValueError("character product needs a common modulus")
        grp = _unit_group(self.modulus)
        exps = tuple((a + b) % o for a, b, o in zip(self.exps, other.exps, grp.orders))
        return DirichletCharacter(self.modulus, exps)

    def __pow__(self, n: int) -> "DirichletCharacter":
        grp = _unit_group(self.modulus)
        return DirichletCharacter(self.modulus, tuple(e * n % o for e, o in zip(self.exps, grp.orders)))

    def inverse(self) -> "DirichletCharacter":
        return self**-1

    conjugate = inverse

    # -- conductor and primitivity ---------------------------------------------

    def conductor(self) -> int:
        """Smallest modulus through which the character factors."""
        if self._conductor is None:
            M = self.modulus
            best = M
            for d in range(1, M + 1):
                if M % d:
                    continue
                if all(
                    self._table[a] == 0
                    for a in range(1, M)
                    if gcd(a, M) == 1 and a % d == 1 % d
                ):
                    best = d
                    break
            self._conductor = best if M > 1 else 1
        return self._conductor

    @property
    def is_primitive(self) -> bool:
        return self.conductor() == self.modulus

    def primitive(self) -> "DirichletCharacter":
        """The primitive character inducing this one."""
        if self._primitive is not None:
            return self._primitive
        C = self.conductor()
        if C == self.modulus:
            self._primitive = self
            return self
        grp_c = _unit_group(C)
        exps = []
        for g, o in zip(grp_c.gens, grp_c.orders):
            a = _lift_unit(g, C, self.modulus)
            t = self.exponent_of(a)
            assert t is not None
            num = t * o
            if num % self.value_order:
                raise ArithmeticError("inconsistent primitive component")
            exps.append(num // self.value_order % o)
        chi0 = DirichletCharacter(C, tuple(exps))
        self._primitive = chi0
        return chi0


def _lift_unit(a0: int, C: int, M: int) -> int:
    """A unit mod M congruent to a0 mod C (the reduction map is surjective)."""
    if C == 1:
        return 1
    a = a0 % C
    for _ in range(2 * M // C + 2):
        if gcd(a, M) == 1:
            return a
        a += C
    raise ArithmeticError("failed to lift unit")


@lru_cache(maxsize=None)
def enumerate_characters(M: int) -> tuple[DirichletCharacter, ...]:
    """All phi(M) characters modulo M, trivial character first."""
    grp = _unit_group(M)
    out = [DirichletCharacter(M, exps) for exps in product(*(range(o) for o in grp.orders))]
    out.sort(key=lambda ch: ch.exps)
    assert out[0].is_trivial
    return tuple(out)


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor()


# ---------------------------------------------------------------------------
# Gauss sums


@dataclass(frozen=True)
class GaussSumResult:
    value: CyclotomicNumber
    conductor: int


@lru_cache(maxsize=4096)
def gauss_sum(chi: DirichletCharacter) -> GaussSumResult:
    """G(chi) = sum_a chi0(a) e(a/C) over the primitive character chi0 attached to chi."""
    chi0 = chi.primitive()
    C = chi0.modulus
    if C == 1:
        return GaussSumResult(CyclotomicNumber.from_rational(1), 1)
    ordv = chi0.value_order
    L = lcm(C, ordv)
    weights: dict[int, int] = {}
    for a in range(1, C):
        t = chi0.exponent_of(a)
        if t is None:
            continue
        e = (t * (L // ordv) + a * (L // C)) % L
        weights[e] = weights.get(e, 0) + 1
    return GaussSumResult(CyclotomicNumber.from_exponents(L, weights), C)


@dataclass(frozen=True)
class GeneralizedGaussSum:
    """Frequency-twisted Gauss sum sum_{a mod p^j} chi(a) e(a M / p^j)."""

    value: CyclotomicNumber
    closed_form: CyclotomicNumber
    agrees: bool
    conductor: int


def generalized_gauss_sum(chi: DirichletCharacter, M: int, j: int) -> GeneralizedGaussSum:
    """Direct evaluation plus the closed form.

    For a character of conductor p^{j_chi} with j_chi >= 1 the closed form is
    p^(j-j_chi) G(chi0) chi0bar(M / p^(j-j_chi)) when p^(j-j_chi) | M and 0
    otherwise.  For the principal character the sum is a Ramanujan sum, which
    the same expression does not capture; the correct branch
    (phi(p^j) / -p^(j-1) / 0 according to v_p(M)) is used instead.
    """
    fac = factorize(chi.modulus)
    if len(fac) != 1:
        raise ValueError("generalized_gauss_sum needs a prime-power modulus")
    p, jmod = fac[0]
    if jmod != j:
        raise ValueError(f"character modulus {chi.modulus} does not equal p^j = {p}^{j}")
    C = chi.conductor()
    j_chi = 0 if C == 1 else factorize(C)[0][1]
    if j < j_chi:
        raise ValueError("need j >= j_chi")
    q = p**j
    # direct sum
    ordv = chi.value_order
    L = lcm(q, ordv)
    weights: dict[int, int] = {}
    for a in range(q):
        t = chi.exponent_of(a)
        if t is None:
            continue
        e = (t * (L // ordv) + (a * M % q) * (L // q)) % L
        weights[e] = weights.get(e, 0) + 1
    direct = CyclotomicNumber.from_exponents(L, weights)
    # closed form
    if j_chi == 0:
        if M == 0:
            closed = CyclotomicNumber.from_rational(euler_phi(q))
        else:
            v = 0
            Mv = abs(M)
            while Mv % p == 0:
                Mv //= p
                v += 1
            if v >= j:
                closed = CyclotomicNumber.from_rational(euler_phi(q))
            elif v == j - 1:
                closed = CyclotomicNumber.from_rational(-(p ** (j - 1)))
            else:
                closed = CyclotomicNumber.from_rational(0)
    else:
        e = j - j_chi
        if M % (p**e):
            closed = CyclotomicNumber.from_rational(0)
        else:
            chi0 = chi.primitive()
            x = M // (p**e)
            t = chi0.inverse().exponent_of(x)
            if t is None:
                closed = CyclotomicNumber.from_rational(0)
            else:
                g = gauss_sum(chi)
                closed = g.value.times_root(t * (g.value.order // chi0.value_order)) * (p**e)
    return GeneralizedGaussSum(direct, closed, direct == closed, C)


def unit_sum_twisted_direct(chi: DirichletCharacter, b: int) -> CyclotomicNumber:
    """sum over units w mod M of chi(w) e(w b / M), by direct summation."""
    M = chi.modulus
    if M == 1:
        return CyclotomicNumber.from_rational(1)
    ordv = chi.value_order
    L = lcm(M, ordv)
    weights: dict[int, int] = {}
    for w in range(1, M):
        t = chi.exponent_of(w)
        if t is None:
            continue
        e = (t * (L // ordv) + (w * b % M) * (L // M)) % L
        weights[e] = weights.get(e, 0) + 1
    return CyclotomicNumber.from_exponents(L, weights)


def _prime_power_twisted_sum(chi: DirichletCharacter, b: int) -> CyclotomicNumber:
    """Closed form of sum_{w unit mod q} chi(w) e(w b / q) for prime-power modulus q."""
    q = chi.modulus
    if q == 1:
        return CyclotomicNumber.from_rational(1)
    p, e = factorize(q)[0]
    C = chi.conductor()
    c = 0 if C == 1 else factorize(C)[0][1]
    b %= q
    if c == 0:
        # Ramanujan sum c_q(b)
        v = e if b == 0 else min(e, vp(b, p))
        if v >= e:
            return CyclotomicNumber.from_rational(euler_phi(q))
        if v == e - 1:
            return CyclotomicNumber.from_rational(-(p ** (e - 1)))
        return CyclotomicNumber.from_rational(0)
    pe = p ** (e - c)
    if b % pe:
        return CyclotomicNumber.from_rational(0)
    chi0 = chi.primitive()
    x = b // pe
    t = chi0.inverse().exponent_of(x)
    if t is None:
        return CyclotomicNumber.from_rational(0)
    g = gauss_sum(chi0).value
    return g.times_root(t * (g.order // chi0.value_order)) * pe


def unit_sum_twisted(chi: DirichletCharacter, b: int) -> CyclotomicNumber:
    """sum over units w mod M of chi(w) e(w b / M), via prime-power closed forms.

    Splits the modulus by the Chinese remainder theorem; each prime-power
    factor is evaluated in closed form (Gauss-sum branch or Ramanujan sum).
    """
    M = chi.modulus
    if M == 1:
        return CyclotomicNumber.from_rational(1)
    fac = factorize(M)
    if len(fac) == 1:
        return _prime_power_twisted_sum(chi, b)
    out = CyclotomicNumber.from_rational(1)
    for p, e in fac:
        q = p**e
        cof = M // q
        u = pow(cof, -1, q)
        # restriction of chi to the q-component
        grp_q = _unit_group(q)
        exps = []
        for g, o in zip(grp_q.gens, grp_q.orders):
            a = _UnitGroup._crt(g, q, cof)
            t = chi.exponent_of(a)
            assert t is not None
            num = t * o
            if num % chi.value_order:
                raise ArithmeticError("component order mismatch")
            exps.append(num // chi.value_order % o)
        chi_q = DirichletCharacter(q, tuple(exps))
        out = out * _prime_power_twisted_sum(chi_q, b * u % q)
    return out


# ---------------------------------------------------------------------------
# generalized Bernoulli numbers and exact L-values


def generalized_bernoulli(k: int, psi: DirichletCharacter) -> CyclotomicNumber:
    """B_{k,psi} = C^(k-1) sum_{a=0}^{C-1} psi(a) B_k(a/C) for primitive psi mod C."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not psi.is_primitive:
        raise ValueError("generalized Bernoulli numbers are defined here for primitive psi")
    C = psi.modulus
    if C == 1:
        return CyclotomicNumber.from_rational(bernoulli_number(k))
    ordv = psi.value_order
    weights: dict[int, Fraction] = {}
    for a in range(C):
        t = psi.exponent_of(a)
        if t is None:
            continue
        weights[t] = weights.get(t, Fraction(0)) + bernoulli_polynomial(k, Fraction(a, C))
    scale = Fraction(C) ** (k - 1)
    return CyclotomicNumber.from_exponents(ordv, weights) * scale


@dataclass(frozen=True)
class TranscendentalValue:
    """algebraic * (2 pi i)^power, with the algebraic part exact."""

    two_pi_i_power: int
    algebraic: CyclotomicNumber

    def numeric(self, prec: int = 53) -> BigComplex:
        with mp.workprec(prec + 16):
            two_pi_i = mpmath.mpc(0, 2 * mpmath.pi)
            z = self.algebraic.embed(prec + 16).to_mpc() * two_pi_i**self.two_pi_i_power
        return BigComplex.from_mpc(z, prec)

    def __eq__(self, other):
        return (
            isinstance(other, TranscendentalValue)
            and self.two_pi_i_power == other.two_pi_i_power
            and self.algebraic == other.algebraic
        )


def L_special_exact(k: int, psi: DirichletCharacter) -> TranscendentalValue:
    """L(k, psi) = -(-2 pi i)^k G(psi) B_{k,psibar} / (2 k! C^k) for even k and even primitive psi.

    Returned as (algebraic part, power of 2 pi i); for even k the sign
    (-1)^k = 1 makes (-2 pi i)^k = (2 pi i)^k.
    """
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    if not psi.is_primitive:
        raise ValueError("psi must be primitive")
    if not psi.is_even:
        raise ValueError("psi must be even")
    C = psi.modulus
    g = gauss_sum(psi).value
    b = generalized_bernoulli(k, psi.inverse())
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    alg = -(g * b) * Fraction(1, 2 * fact * C**k)
    return TranscendentalValue(k, alg)


@dataclass(frozen=True)
class LSeriesValue:
    value: BigComplex
    tail_bound: float
    terms: int


def L_truncated(s, psi: DirichletCharacter, terms: int, prec: int = 64) -> LSeriesValue:
    """sum_{n<=terms} psi(n) n^(-s) with the integral tail bound terms^(1-Re s)/(Re s - 1)."""
    sigma = float(s.re) if isinstance(s, BigComplex) else float(s)
    if sigma <= 1:
        raise ValueError("need Re(s) > 1")
    M = psi.modulus
    ordv = psi.value_order
    with mp.workprec(prec + 16):
        s_val = s.to_mpc() if isinstance(s, BigComplex) else mpmath.mpf(s) if not isinstance(s, complex) else mpmath.mpc(s)
        roots = [mpmath.expjpi(mpmath.mpf(2 * t) / ordv) for t in range(ordv)]
        partial = [mpmath.mpf(0)] * ordv
        is_int = isinstance(s_val, mpmath.mpf) and s_val == int(s_val)
        si = int(s_val) if is_int else None
        for n in range(1, terms + 1):
            t = psi.exponent_of(n)
            if t is None:
                continue
            term = mpmath.mpf(n) ** (-si) if is_int else mpmath.mpf(n) ** (-s_val)
            partial[t] += term
        acc = mpmath.mpc(0)
        for t in range(ordv):
            if partial[t]:
                acc += roots[t] * partial[t]
    tail = float(terms ** (1 - sigma) / (sigma - 1))
    return LSeriesValue(BigComplex.from_mpc(acc, prec), tail, terms)


@dataclass(frozen=True)
class NormalizedLValue:
    """L(k, chibar^2) divided by G(chibar^2) (2 pi)^k, with a denominator report."""

    value: CyclotomicNumber
    conductor: int
    vp_lower: Fraction
    vp_bound: Fraction
    bound_ok: bool


def normalized_L(chi: DirichletCharacter, k: int) -> NormalizedLValue:
    """Exact L(k, chibar^2) / (G(chibar^2) (2 pi)^k) for even k.

    Requires chibar^2 to be primitive at the level of chi; imprimitive
    squares (e.g. quadratic chi) are rejected rather than silently replaced
    by the primitive L-value.
    """
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    psi = (chi.inverse() * chi.inverse())
    if psi.conductor() != chi.modulus:
        raise ValueError(
            f"chibar^2 has conductor {psi.conductor()} < modulus {chi.modulus}; "
            "the normalized value is only defined here for primitive chibar^2"
        )
    psi = psi.primitive()
    C = psi.modulus
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    b = generalized_bernoulli(k, psi.inverse())
    sign = -(Fraction(-1) ** (k // 2))
    value = b * (sign * Fraction(1, 2 * fact * C**k))
    # p-denominator report (lower bound via the power basis of Z[zeta])
    if C == 1:
        p = 0
        v_low = Fraction(0) if all(c.denominator == 1 for c in value.coeffs) else min(
            vp(c, q) for c in value.coeffs for q, _ in factorize(max(c.denominator, 2))
        )
        j_chi = 0
    else:
        p, _ = factorize(C)[0]
        j_chi = factorize(chi.conductor())[0][1] if chi.conductor() > 1 else 0
        v_low = min(vp(c, p) for c in value.coeffs)
    bound = Fraction(-(j_chi * (k + 1)))
    return NormalizedLValue(value, C, Fraction(v_low), bound, v_low >= bound)
