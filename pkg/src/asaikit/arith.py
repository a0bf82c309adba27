"""Exact arithmetic kernel: rationals, cyclotomic fields, Bernoulli numbers,
multiplicative tables, and arbitrary-precision complex values.

Everything here is immutable and pure.  Rational numbers are stdlib
``fractions.Fraction`` (always lowest terms, positive denominator);
cyclotomic numbers are coefficient vectors reduced modulo the m-th
cyclotomic polynomial, so equality of values is equality of vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, inf, isqrt
from typing import Iterable, Mapping, Sequence

import mpmath
from mpmath import mp

Rational = Fraction

__all__ = [
    "Rational",
    "vp",
    "kronecker_symbol",
    "factorize",
    "euler_phi",
    "ArithTables",
    "bernoulli_number",
    "bernoulli_polynomial",
    "cyclotomic_polynomial",
    "CyclotomicNumber",
    "cyclotomic_mul",
    "cyclotomic_lift",
    "cyclotomic_norm",
    "embed_complex",
    "BigComplex",
    "bessel_k_moment_check",
    "BesselMomentReport",
]


# ---------------------------------------------------------------------------
# elementary number theory


def vp(x: Fraction | int, p: int) -> Fraction | float:
    """p-adic valuation of a rational, with vp(0) = +inf."""
    if x == 0:
        return inf
    x = Fraction(x)
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return Fraction(v)


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 by trial division."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = []
    for q in (2, 3):
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e:
            out.append((q, e))
    q = 5
    while q * q <= n:
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e:
            out.append((q, e))
        q += 2 if q % 6 == 5 else 4
    if n > 1:
        out.append((n, 1))
    return out


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    out = 1
    for q, e in factorize(n):
        out *= (q - 1) * q ** (e - 1)
    return out


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n), defined for all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi symbol (a|n) for odd n > 0 by quadratic reciprocity.
    result = sign
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


class ArithTables:
    """Sieved Moebius, totient, and prime tables up to a bound."""

    def __init__(self, bound: int):
        if bound < 1:
            raise ValueError("bound must be >= 1")
        self.bound = bound
        spf = list(range(bound + 1))  # smallest prime factor
        for q in range(2, isqrt(bound) + 1):
            if spf[q] == q:
                for m in range(q * q, bound + 1, q):
                    if spf[m] == m:
                        spf[m] = q
        self._spf = spf
        mob = [0] * (bound + 1)
        phi = [0] * (bound + 1)
        mob[1] = phi[1] = 1
        for n in range(2, bound + 1):
            q = spf[n]
            m = n // q
            if m % q == 0:
                mob[n] = 0
                phi[n] = phi[m] * q
            else:
                mob[n] = -mob[m]
                phi[n] = phi[m] * (q - 1)
        self._mobius = mob
        self._phi = phi
        self.primes = [n for n in range(2, bound + 1) if spf[n] == n]

    def mobius(self, n: int) -> int:
        return self._mobius[n]

    def phi(self, n: int) -> int:
        return self._phi[n]

    def smallest_prime_factor(self, n: int) -> int:
        return self._spf[n]

    def factor(self, n: int) -> list[tuple[int, int]]:
        out = []
        while n > 1:
            q = self._spf[n]
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out.append((q, e))
        return out


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials (convention B_1 = -1/2, so B_k(0) = B_k)


@lru_cache(maxsize=None)
def _binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(min(k, n - k)):
        out = out * (n - i) // (i + 1)
    return out


@lru_cache(maxsize=None)
def bernoulli_number(k: int) -> Fraction:
    """B_k with B_0 = 1, B_1 = -1/2, via sum_{i<k} C(k+1,i) B_i = -C(k+1,k) B_k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return Fraction(1)
    acc = Fraction(0)
    for i in range(k):
        acc += _binomial(k + 1, i) * bernoulli_number(i)
    return -acc / (k + 1)


def bernoulli_polynomial(k: int, x: Fraction | int) -> Fraction:
    """B_k(x) = sum_i C(k,i) B_i x^(k-i)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    x = Fraction(x)
    acc = Fraction(0)
    xpow = Fraction(1)
    for i in range(k, -1, -1):
        # xpow = x^(k-i)
        acc += _binomial(k, i) * bernoulli_number(i) * xpow
        xpow *= x
    return acc


# ---------------------------------------------------------------------------
# dense univariate polynomial helpers (little-endian coefficient lists)


def _poly_trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _poly_mul_int(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_divmod_int(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials (monic or divisibility assumed for quotients used here)."""
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    q = [0] * max(len(num) - dd, 1)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c % lead != 0 and lead != 1:
            raise ArithmeticError("non-exact integer polynomial division")
        c //= lead
        q[i - dd] = c
        if c:
            for j, dj in enumerate(den):
                if dj:
                    num[i - dd + j] -= c * dj
    return _poly_trim(q), _poly_trim(num)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, little-endian, via Phi_m = (x^m - 1) / prod_{d|m, d<m} Phi_d."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return (-1, 1)
    num = [0] * (m + 1)
    num[0] = -1
    num[m] = 1
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod_int(num, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(num)


def _resultant(A: list[Fraction], B: list[Fraction]) -> Fraction:
    """Resultant of two polynomials over Q (Euclidean algorithm, exact)."""
    A = _poly_trim([Fraction(c) for c in A])
    B = _poly_trim([Fraction(c) for c in B])
    res = Fraction(1)
    while True:
        da, db = len(A) - 1, len(B) - 1
        if db < 0:
            return Fraction(0) if da >= 0 else res
        if db == 0:
            return res * B[0] ** da
        # remainder of A by B
        R = list(A)
        inv = 1 / B[-1]
        for i in range(da, db - 1, -1):
            c = R[i] * inv
            if c:
                for j in range(db + 1):
                    R[i - db + j] -= c * B[j]
        R = _poly_trim(R)
        dr = len(R) - 1
        if dr < 0:
            return Fraction(0)
        res *= Fraction(-1) ** (da * db) * B[-1] ** (da - dr)
        A, B = B, R


# ---------------------------------------------------------------------------
# cyclotomic numbers


class CyclotomicNumber:
    """Element of Q(zeta_m): coefficient vector of length phi(m) modulo Phi_m."""

    __slots__ = ("order", "coeffs")
    __hash__ = None  # equality lifts across orders; not hashable

    def __init__(self, order: int, coeffs: Sequence[Fraction]):
        phi = euler_phi(order)
        if len(coeffs) != phi:
            raise ValueError(f"need {phi} coefficients for order {order}, got {len(coeffs)}")
        self.order = order
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(x: Fraction | int, order: int = 1) -> "CyclotomicNumber":
        c = [Fraction(0)] * euler_phi(order)
        c[0] = Fraction(x)
        return CyclotomicNumber(order, c)

    @staticmethod
    def zeta(order: int, power: int = 1) -> "CyclotomicNumber":
        return CyclotomicNumber.from_exponents(order, {power % order: 1})

    @staticmethod
    def from_exponents(order: int, weights: Mapping[int, Fraction | int]) -> "CyclotomicNumber":
        """sum_e weights[e] * zeta_order^e, reduced modulo Phi_order.

        Integer weights are reduced in integer arithmetic (the common case
        for character-sum histograms) before the final conversion.
        """
        if all(isinstance(w, int) for w in weights.values()):
            poly = [0] * order
        else:
            poly = [Fraction(0)] * order
        for e, w in weights.items():
            poly[e % order] += w
        return CyclotomicNumber(order, _reduce_mod_cyclotomic(poly, order))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        return euler_phi(self.order)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def lift(self, order: int) -> "CyclotomicNumber":
        """Rewrite in Q(zeta_order) for a multiple of the current order."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError("can only lift to a multiple of the current order")
        step = order // self.order
        return CyclotomicNumber.from_exponents(
            order, {i * step: c for i, c in enumerate(self.coeffs) if c}
        )

    def galois(self, t: int) -> "CyclotomicNumber":
        """Apply the automorphism zeta -> zeta^t (t coprime to the order)."""
        if gcd(t, self.order) != 1:
            raise ValueError("galois exponent must be a unit modulo the order")
        return CyclotomicNumber.from_exponents(
            self.order, {i * t: c for i, c in enumerate(self.coeffs) if c}
        )

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1 % self.order) if self.order > 1 else self

    def times_root(self, e: int) -> "CyclotomicNumber":
        """Multiply by zeta_order^e (cheap monomial product)."""
        return CyclotomicNumber.from_exponents(
            self.order, {i + e: c for i, c in enumerate(self.coeffs) if c}
        )

    def norm(self) -> Fraction:
        """Product of all Galois conjugates, via the resultant with Phi_m."""
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        return _resultant(phi, list(self.coeffs))

    # -- arithmetic --------------------------------------------------------

    def _coerced(self, other) -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(other, self.order)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented, NotImplemented
        if self.order == other.order:
            return self, other
        m = self.order * other.order // gcd(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._coerced(other)
        if a is NotImplemented:
            return NotImplemented
        return CyclotomicNumber(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        a, b = self._coerced(other)
        if a is NotImplemented:
            return NotImplemented
        return CyclotomicNumber(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CyclotomicNumber(self.order, [c * q for c in self.coeffs])
        a, b = self._coerced(other)
        if a is NotImplemented:
            return NotImplemented
        return cyclotomic_mul(a, b)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse via the extended Euclidean algorithm with Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic inverse of zero")
        if self.is_rational():
            return CyclotomicNumber.from_rational(1 / self.coeffs[0], self.order)
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        g, s = _poly_xgcd_mod(list(self.coeffs), phi)
        if len(g) != 1:
            raise ZeroDivisionError("element is a zero divisor (should not happen mod Phi_m)")
        inv = [c / g[0] for c in s]
        return CyclotomicNumber(self.order, _reduce_mod_cyclotomic(inv, self.order))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CyclotomicNumber(self.order, [c / q for c in self.coeffs])
        a, b = self._coerced(other)
        if a is NotImplemented:
            return NotImplemented
        return cyclotomic_mul(a, b.inverse())

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CyclotomicNumber.from_rational(1, self.order)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._coerced(other)
        return a.coeffs == b.coeffs

    def __repr__(self):
        if self.is_rational():
            return f"Cyc({self.coeffs[0]})"
        terms = [f"{c}*z{self.order}^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Cyc(" + " + ".join(terms) + ")"

    def embed(self, prec: int = 53) -> "BigComplex":
        return embed_complex(self, prec)


def _reduce_mod_cyclotomic(poly: list, order: int) -> list:
    """Reduce a little-endian coefficient list modulo Phi_order; return phi(order) coefficients.

    Works for integer or Fraction coefficients (Phi has integer entries).
    """
    phi_poly = cyclotomic_polynomial(order)
    d = len(phi_poly) - 1
    nz = [(j, phi_poly[j]) for j in range(d) if phi_poly[j]]
    for i in range(len(poly) - 1, d - 1, -1):
        c = poly[i]
        if c:
            poly[i] = 0
            for j, pj in nz:
                poly[i - d + j] -= c * pj
    out = poly[:d]
    out += [0] * (d - len(out))
    return out


def _poly_xgcd_mod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Return (g, s) with s*a = g modulo b and g = gcd(a, b) (b = Phi_m is squarefree)."""
    r0, r1 = _poly_trim(list(b)), _poly_trim(list(a))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while r1:
        q, r = _poly_divmod_frac(r0, r1)
        s = _poly_sub(s0, _poly_mul_frac(q, s1))
        r0, s0, r1, s1 = r1, s1, r, s
    return r0, s0


def _poly_divmod_frac(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    dd = len(den) - 1
    inv = 1 / den[-1]
    q = [Fraction(0)] * max(len(num) - dd, 1)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] * inv
        if c:
            q[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    return _poly_trim(q), _poly_trim(num)


def _poly_mul_frac(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _poly_trim([x - y for x, y in zip(a, b)])


def cyclotomic_mul(a: CyclotomicNumber, b: CyclotomicNumber) -> CyclotomicNumber:
    """Product in Q(zeta_m); both operands must already have the same order."""
    if a.order != b.order:
        raise ValueError(f"order mismatch: {a.order} vs {b.order}; lift first")
    prod = _poly_mul_frac(list(a.coeffs), list(b.coeffs))
    if not prod:
        return CyclotomicNumber.from_rational(0, a.order)
    return CyclotomicNumber(a.order, _reduce_mod_cyclotomic(prod, a.order))


def cyclotomic_lift(a: CyclotomicNumber, order: int) -> CyclotomicNumber:
    return a.lift(order)


def cyclotomic_norm(a: CyclotomicNumber) -> Fraction:
    return a.norm()


# ---------------------------------------------------------------------------
# arbitrary-precision complex values


class BigComplex:
    """Complex number at a recorded binary precision (>= 53 bits).

    Arithmetic propagates the minimum precision of the operands.
    """

    __slots__ = ("re", "im", "precision")

    def __init__(self, re, im=0, precision: int = 53):
        if precision < 53:
            raise ValueError("precision must be at least 53 bits")
        self.precision = precision
        with mp.workprec(precision):
            if isinstance(re, Fraction):
                re = mpmath.mpf(re.numerator) / re.denominator
            if isinstance(im, Fraction):
                im = mpmath.mpf(im.numerator) / im.denominator
            self.re = mpmath.mpf(re)
            self.im = mpmath.mpf(im)

    @staticmethod
    def from_mpc(z, precision: int) -> "BigComplex":
        return BigComplex(z.real, z.imag, precision)

    def to_mpc(self):
        # assemble from the raw mantissas: no rounding at the ambient precision
        return mp.make_mpc((self.re._mpf_, self.im._mpf_))

    def _pair(self, other):
        if isinstance(other, BigComplex):
            return other, min(self.precision, other.precision)
        return BigComplex(other, 0, self.precision), self.precision

    def __add__(self, other):
        o, prec = self._pair(other)
        with mp.workprec(prec):
            return BigComplex(self.re + o.re, self.im + o.im, prec)

    __radd__ = __add__

    def __neg__(self):
        return BigComplex(-self.re, -self.im, self.precision)

    def __sub__(self, other):
        o, prec = self._pair(other)
        with mp.workprec(prec):
            return BigComplex(self.re - o.re, self.im - o.im, prec)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o, prec = self._pair(other)
        with mp.workprec(prec):
            return BigComplex(
                self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re, prec
            )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o, prec = self._pair(other)
        with mp.workprec(prec):
            z = self.to_mpc() / o.to_mpc()
        return BigComplex.from_mpc(z, prec)

    def __rtruediv__(self, other):
        o, prec = self._pair(other)
        with mp.workprec(prec):
            z = o.to_mpc() / self.to_mpc()
        return BigComplex.from_mpc(z, prec)

    def conjugate(self) -> "BigComplex":
        return BigComplex(self.re, -self.im, self.precision)

    def abs(self):
        with mp.workprec(self.precision):
            return mpmath.hypot(self.re, self.im)

    def __abs__(self):
        return self.abs()

    def __repr__(self):
        return f"BigComplex({self.re}, {self.im}, prec={self.precision})"


def embed_complex(a: CyclotomicNumber, prec: int = 53) -> BigComplex:
    """Evaluate the coefficient polynomial at exp(2*pi*i/m) (the fixed embedding)."""
    if prec < 53:
        raise ValueError("prec must be at least 53 bits")
    with mp.workprec(prec + 16):
        zeta = mpmath.expjpi(mpmath.mpf(2) / a.order)
        acc = mpmath.mpc(0)
        for c in reversed(a.coeffs):
            acc = acc * zeta + mpmath.mpf(c.numerator) / c.denominator
    return BigComplex.from_mpc(acc, prec)


# ---------------------------------------------------------------------------
# Bessel moment identity checker


@dataclass(frozen=True)
class BesselMomentReport:
    lhs: BigComplex
    rhs: BigComplex
    rel_err: float
    agree: bool


def bessel_k_moment_check(nu: int, mu: Fraction | int, a: Fraction | int) -> BesselMomentReport:
    """Check int_0^infty K_nu(a t) t^(mu-1) dt = 2^(mu-2) a^(-mu) Gamma((mu+nu)/2) Gamma((mu-nu)/2).

    Left side by adaptive quadrature, right side by the Gamma closed form;
    agreement at relative error < 1e-6.  This is a verification aid run at
    modest fixed precision.
    """
    mu = Fraction(mu)
    a = Fraction(a)
    if a <= 0:
        raise ValueError("a must be positive")
    if mu <= abs(nu):
        raise ValueError("need mu > |nu| for convergence")
    with mp.workprec(80):
        af = mpmath.mpf(a.numerator) / a.denominator
        muf = mpmath.mpf(mu.numerator) / mu.denominator
        integrand = lambda t: mpmath.besselk(nu, af * t) * t ** (muf - 1)
        lhs = mpmath.quad(integrand, [0, 1 / af, 10 / af, mpmath.inf])
        rhs = (
            mpmath.mpf(2) ** (muf - 2)
            * af ** (-muf)
            * mpmath.gamma((muf + nu) / 2)
            * mpmath.gamma((muf - nu) / 2)
        )
        rel = abs(lhs - rhs) / abs(rhs)
    return BesselMomentReport(
        lhs=BigComplex(mpmath.mpf(lhs.real) if isinstance(lhs, mpmath.mpc) else lhs, 0, 80),
        rhs=BigComplex(rhs, 0, 80),
        rel_err=float(rel),
        agree=bool(rel < 1e-6),
    )
