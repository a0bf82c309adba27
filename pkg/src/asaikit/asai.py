"""Imaginary quadratic field data, mock eigenforms, Asai Dirichlet
coefficients, local Euler factors, and the ordinary-at-p polynomial data.

Eigenforms here are synthetic: weight, level, and a table of Hecke
eigenvalues per prime ideal, plus Satake parameters at the fixed split
prime p.  Every identity exercised downstream is formal in these values,
so exact rational test data is enough.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .arith import ArithTables, Rational, kronecker_symbol, vp

__all__ = [
    "QuadFieldData",
    "MockEigenform",
    "FormalDirichletSeries",
    "OrdinaryData",
    "hecke_power",
    "coeff_principal",
    "asai_coeff",
    "local_asai_factor",
    "euler_vs_coefficients",
    "EulerComparisonReport",
    "ordinary_data",
    "random_mock_eigenform",
    "load_eigenform",
    "dump_eigenform",
]

SPLIT, INERT, RAMIFIED = "split", "inert", "ramified"

# fields with -D a fundamental discriminant
FUNDAMENTAL_D = (3, 4, 7, 8, 11, 15, 19, 20, 23, 24)


@dataclass(frozen=True)
class QuadFieldData:
    """Splitting data for Q(sqrt(-D)), -D the field discriminant."""

    D: int

    def __post_init__(self):
        D = self.D
        ok = (-D) % 4 == 1 and _squarefree(D) or (
            D % 4 == 0 and _squarefree(D // 4) and (-(D // 4)) % 4 in (2, 3)
        )
        if not ok:
            raise ValueError(f"-{D} is not a fundamental discriminant")

    def splitting(self, l: int) -> str:
        if self.D % l == 0:
            return RAMIFIED
        ks = kronecker_symbol(-self.D, l)
        return SPLIT if ks == 1 else INERT

    def ideal_norm(self, l: int) -> int:
        """Norm of a prime ideal above l."""
        return l * l if self.splitting(l) == INERT else l

    def is_integral(self, x: Fraction, y: Fraction) -> bool:
        """Whether x + y sqrt(-D) lies in the ring of integers."""
        if self.D % 4 == 0:
            # O = Z[sqrt(-D/4)] = Z + Z * (sqrt(-D)/2)
            return x.denominator == 1 and (2 * y).denominator == 1
        # -D = 1 mod 4: O = Z[(1 + sqrt(-D))/2]
        tx, ty = 2 * x, 2 * y
        return tx.denominator == 1 and ty.denominator == 1 and (tx - ty) % 2 == 0


def _squarefree(n: int) -> bool:
    if n <= 0:
        return False
    for q in range(2, isqrt(n) + 1):
        if n % (q * q) == 0:
            return False
    return True


class MockEigenform:
    """Weight-k eigenform surrogate: per-ideal eigenvalues plus Satake data at p.

    ``eigen`` maps a rational prime l to its c-values: a pair (c(L), c(Lbar))
    when l splits, a single value otherwise.  Primes dividing N default to
    eigenvalue 0 unless supplied.  All coefficient lookups are memoized into
    tables before the form is shared across threads.
    """

    def __init__(
        self,
        k: int,
        N: int,
        field: QuadFieldData,
        eigen: dict[int, tuple[Rational, ...]],
        p: int,
        p_satake: tuple[Rational, Rational, Rational, Rational],
    ):
        if k < 2:
            raise ValueError("weight must be >= 2")
        if p % 2 == 0 or p < 3:
            raise ValueError("p must be an odd prime")
        if N % p == 0 or field.D % p == 0:
            raise ValueError("p must not divide N D")
        if field.splitting(p) != SPLIT:
            raise ValueError(f"p = {p} does not split in Q(sqrt(-{field.D}))")
        a1, a2, b1, b2 = (Fraction(x) for x in p_satake)
        if a1 * a2 != Fraction(p) ** (k - 1) or b1 * b2 != Fraction(p) ** (k - 1):
            raise ValueError("Satake products must equal Nm(p)^(k-1) = p^(k-1)")
        self.k = k
        self.N = N
        self.field = field
        self.p = p
        self.p_satake = (a1, a2, b1, b2)
        self.eigen = {l: tuple(Fraction(c) for c in cs) for l, cs in eigen.items()}
        self._cpp: dict[tuple[int, int, int], Fraction] = {}
        self._c: dict[int, Fraction] = {1: Fraction(1)}
        self._d: dict[int, Fraction] = {1: Fraction(1)}

    # -- eigenvalue access ---------------------------------------------------

    def c_at_ideal(self, l: int, which: int = 0) -> Fraction:
        """Eigenvalue c at the prime ideal tagged ``which`` above l."""
        if l == self.p:
            a1, a2, b1, b2 = self.p_satake
            return a1 + a2 if which == 0 else b1 + b2
        if l in self.eigen:
            cs = self.eigen[l]
            return cs[which] if which < len(cs) else cs[0]
        if self.N % l == 0:
            return Fraction(0)
        raise KeyError(f"no eigen-data at prime {l}")

    def _c_prime_power(self, l: int, which: int, e: int) -> Fraction:
        key = (l, which, e)
        if key not in self._cpp:
            norm = self.field.ideal_norm(l)
            cl = self.c_at_ideal(l, which)
            self._cpp[key] = hecke_power(cl, Fraction(norm) ** (self.k - 1), e)
        return self._cpp[key]

    def coeff(self, r: int) -> Fraction:
        return coeff_principal(self, r)

    def asai(self, r: int) -> Fraction:
        return asai_coeff(self, r)

    def tabulate(self, bound: int, tables: ArithTables | None = None) -> None:
        """Precompute c(r) and d(r) for r <= bound (build once, then read-only)."""
        t = tables if tables is not None and tables.bound >= bound else ArithTables(bound)
        for r in range(2, bound + 1):
            if r not in self._c:
                self._c[r] = self._coeff_from_factorization(t.factor(r))
        # d(r) = sum over r = m^2 t, gcd(m, N) = 1, of m^(2k-2) c(t)
        d = [Fraction(0)] * (bound + 1)
        m = 1
        while m * m <= bound:
            if gcd(m, self.N) == 1:
                w = Fraction(m) ** (2 * self.k - 2)
                mm = m * m
                for tval in range(1, bound // mm + 1):
                    d[mm * tval] += w * self._c[tval]
            m += 1
        for r in range(1, bound + 1):
            self._d[r] = d[r]
        self._tables = t

    def _coeff_from_factorization(self, fac: list[tuple[int, int]]) -> Fraction:
        out = Fraction(1)
        for l, e in fac:
            s = self.field.splitting(l)
            if s == SPLIT:
                out *= self._c_prime_power(l, 0, e) * self._c_prime_power(l, 1, e)
            elif s == INERT:
                out *= self._c_prime_power(l, 0, e)
            else:
                out *= self._c_prime_power(l, 0, 2 * e)
        return out

    def _asai_from_c(self, r: int) -> Fraction:
        out = Fraction(0)
        m = 1
        while m * m <= r:
            if r % (m * m) == 0 and gcd(m, self.N) == 1:
                out += Fraction(m) ** (2 * self.k - 2) * self._c[r // (m * m)]
            m += 1
        return out


def hecke_power(c_l: Rational, norm_pow: Rational, e: int) -> Fraction:
    """c(L^e) from c(L^(e+1)) = c(L) c(L^e) - Nm(L)^(k-1) c(L^(e-1)), c(L^0) = 1."""
    if e < 0:
        raise ValueError("e must be >= 0")
    c_l = Fraction(c_l)
    norm_pow = Fraction(norm_pow)
    prev, cur = Fraction(1), c_l
    if e == 0:
        return prev
    for _ in range(e - 1):
        prev, cur = cur, c_l * cur - norm_pow * prev
    return cur


def coeff_principal(f: MockEigenform, r: int) -> Fraction:
    """c((r)) by multiplicativity over the ideal factorization of (r)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if r in f._c:
        return f._c[r]
    out = f._coeff_from_factorization(_factor_small(r))
    f._c[r] = out
    return out


def asai_coeff(f: MockEigenform, r: int) -> Fraction:
    """d(r) = sum over m^2 t = r, gcd(m, N) = 1, of m^(2k-2) c((t))."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if r in f._d:
        return f._d[r]
    out = Fraction(0)
    m = 1
    while m * m <= r:
        if r % (m * m) == 0 and gcd(m, f.N) == 1:
            out += Fraction(m) ** (2 * f.k - 2) * coeff_principal(f, r // (m * m))
        m += 1
    f._d[r] = out
    return out


def _factor_small(n: int) -> list[tuple[int, int]]:
    out = []
    q = 2
    while q * q <= n:
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e:
            out.append((q, e))
        q += 1
    if n > 1:
        out.append((n, 1))
    return out


# ---------------------------------------------------------------------------
# truncated Dirichlet series


class FormalDirichletSeries:
    """Finite array of exact coefficients indexed 1..bound."""

    __slots__ = ("bound", "coeffs")

    def __init__(self, bound: int, coeffs=None):
        self.bound = bound
        if coeffs is None:
            self.coeffs = [Fraction(0)] * (bound + 1)
        else:
            self.coeffs = list(coeffs)
            if len(self.coeffs) != bound + 1:
                raise ValueError("coefficient array must have length bound + 1")

    @staticmethod
    def one(bound: int) -> "FormalDirichletSeries":
        s = FormalDirichletSeries(bound)
        s.coeffs[1] = Fraction(1)
        return s

    @staticmethod
    def from_local_factor(bound: int, l: int, inv_poly: list[Fraction]) -> "FormalDirichletSeries":
        """Series with l-power support whose generating function is 1/inv_poly(l^-s)."""
        e_max = 0
        le = 1
        while le * l <= bound:
            le *= l
            e_max += 1
        inv = _power_series_inverse(inv_poly, e_max)
        s = FormalDirichletSeries(bound)
        le = 1
        for e in range(e_max + 1):
            s.coeffs[le] = inv[e]
            le *= l
        return s

    def __mul__(self, other: "FormalDirichletSeries") -> "FormalDirichletSeries":
        if self.bound != other.bound:
            raise ValueError("bound mismatch")
        out = FormalDirichletSeries(self.bound)
        oc = out.coeffs
        for a in range(1, self.bound + 1):
            ca = self.coeffs[a]
            if ca:
                for b in range(1, self.bound // a + 1):
                    cb = other.coeffs[b]
                    if cb:
                        oc[a * b] += ca * cb
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FormalDirichletSeries)
            and self.bound == other.bound
            and self.coeffs == other.coeffs
        )


def _power_series_inverse(poly: list[Fraction], order: int) -> list[Fraction]:
    """Coefficients of 1/poly(X) up to X^order; poly[0] must be 1."""
    if not poly or poly[0] != 1:
        raise ValueError("local factor must have constant term 1")
    inv = [Fraction(1)] + [Fraction(0)] * order
    for e in range(1, order + 1):
        acc = Fraction(0)
        for i in range(1, min(e, len(poly) - 1) + 1):
            acc += poly[i] * inv[e - i]
        inv[e] = -acc
    return inv


def local_asai_factor(f: MockEigenform, l: int, chi, k: int | None = None) -> list:
    """1/G_l as a polynomial in l^(-s) (coefficient list, constant term 1).

    chi may be a DirichletCharacter or None (untwisted).  Coefficients are
    exact: the split quartic is symmetric in the Satake roots so only
    c(L), c(Lbar) and Nm^(k-1) enter.
    """
    k = f.k if k is None else k
    if f.N % l == 0:
        raise ValueError("local factor only defined away from the level")
    if chi is not None and l % _chi_p(chi) == 0 and chi.modulus > 1:
        raise ValueError("local factor only defined away from p")
    if chi is None:
        x1 = Fraction(1)
        x2 = Fraction(1)
    else:
        v1 = chi.value(l)
        v2 = chi.value(l * l)
        if v1.is_zero():
            return [Fraction(1)]
        x1 = v1.as_rational() if v1.is_rational() else v1
        x2 = v2.as_rational() if v2.is_rational() else v2
    s = f.field.splitting(l)
    if s == SPLIT:
        q = Fraction(l) ** (k - 1)
        a = f.c_at_ideal(l, 0)
        b = f.c_at_ideal(l, 1)
        return [
            Fraction(1),
            -x1 * (a * b),
            x2 * (q * (a * a + b * b) - 2 * q * q),
            -x1 * x2 * (a * b * q * q),
            x2 * x2 * (q**4),
        ]
    if s == INERT:
        q2 = Fraction(l) ** (2 * k - 2)
        c = f.c_at_ideal(l, 0)
        # (1 - chi c X + chi^2 q2 X^2)(1 - chi^2 q2 X^2)
        p1 = [Fraction(1), -x1 * c, x2 * q2]
        p2 = [Fraction(1), Fraction(0), -x2 * q2]
        return _poly_mul(p1, p2)
    # ramified
    q = Fraction(l) ** (k - 1)
    c = f.c_at_ideal(l, 0)
    p1 = [Fraction(1), -x1 * (c * c - 2 * q), x2 * q * q]
    p2 = [Fraction(1), -x1 * q]
    return _poly_mul(p1, p2)


def _chi_p(chi) -> int:
    from .arith import factorize

    if chi.modulus == 1:
        return 1
    return factorize(chi.modulus)[0][0]


def _poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


@dataclass(frozen=True)
class EulerComparisonReport:
    ok: bool
    first_mismatch: int | None
    expected: Fraction | None
    got: Fraction | None


def euler_vs_coefficients(f: MockEigenform, R: int) -> EulerComparisonReport:
    """Expand prod_{l <= R, l not dividing N} G_l(s, f) and compare with d(r).

    Comparison runs over r <= R coprime to N (factors at l | N are excluded
    from both sides).
    """
    tables = ArithTables(R) if R >= 2 else None
    series = FormalDirichletSeries.one(R)
    if tables:
        for l in tables.primes:
            if f.N % l == 0:
                continue
            series = series * FormalDirichletSeries.from_local_factor(
                R, l, local_asai_factor(f, l, None)
            )
    for r in range(1, R + 1):
        if gcd(r, f.N) != 1:
            continue
        expected = asai_coeff(f, r)
        got = series.coeffs[r]
        if expected != got:
            return EulerComparisonReport(False, r, expected, got)
    return EulerComparisonReport(True, None, None, None)


# ---------------------------------------------------------------------------
# ordinary data at p


@dataclass(frozen=True)
class OrdinaryData:
    """F(X) = (1 - kappa X) H(X) with kappa a p-adic unit; B_i = coefficients of H."""

    F_poly: tuple[Fraction, ...]
    H_poly: tuple[Fraction, ...]
    B: tuple[Fraction, Fraction, Fraction, Fraction]
    kappa: Fraction

    def d_p(self, e: int) -> Fraction:
        """Coefficient of X^e in 1/F(X)."""
        if e < 0:
            return Fraction(0)
        inv = _power_series_inverse(list(self.F_poly), e)
        return inv[e]


def ordinary_data(f: MockEigenform, p: int | None = None) -> OrdinaryData:
    """Factor the degree-4 local polynomial at p as (1 - kappa X) H(X).

    kappa is alpha_1(P) alpha_1(Pbar) after relabeling the Satake parameters
    so that this product is a p-adic unit; raises if no labeling works.
    """
    p = f.p if p is None else p
    if p != f.p:
        raise ValueError("ordinary data is available at the fixed prime of the form")
    a = list(f.p_satake[:2])
    b = list(f.p_satake[2:])
    for i in range(2):
        for j in range(2):
            if vp(a[i] * b[j], p) == 0:
                a1, a2 = a[i], a[1 - i]
                b1, b2 = b[j], b[1 - j]
                kappa = a1 * b1
                roots = [a1 * b2, a2 * b1, a2 * b2]
                H = [Fraction(1)]
                for r in roots:
                    H = _poly_mul(H, [Fraction(1), -r])
                F = _poly_mul(H, [Fraction(1), -kappa])
                return OrdinaryData(tuple(F), tuple(H), (H[0], H[1], H[2], H[3]), kappa)
    raise ValueError("form is not ordinary at p: no Satake labeling gives a unit product")


# ---------------------------------------------------------------------------
# synthetic eigenforms and the data-file format


def default_field_for(p: int) -> QuadFieldData:
    """Smallest fundamental -D with p split and p not dividing 2D."""
    for D in FUNDAMENTAL_D:
        if D % p:
            fld = QuadFieldData(D)
            if fld.splitting(p) == SPLIT:
                return fld
    raise ValueError(f"no small fundamental discriminant splits at {p}")


def random_mock_eigenform(
    rng: random.Random,
    k: int = 2,
    N: int = 1,
    D: int | None = None,
    p: int = 5,
    prime_bound: int = 200,
    support_bound: int | None = None,
    support_min: int = 2,
    c_num_bound: int = 6,
    satake_units: tuple[int, ...] = (1, -1, 2, -2, 3),
) -> MockEigenform:
    """Random rational eigen-data at all primes <= prime_bound.

    Primes outside [support_min, support_bound] get eigenvalue 0, which keeps
    the tails of every attached Dirichlet series negligible at desk scale;
    ``c_num_bound`` caps eigenvalue numerators.
    """
    field = QuadFieldData(D) if D is not None else default_field_for(p)
    eigen: dict[int, tuple[Fraction, ...]] = {}
    support = prime_bound if support_bound is None else support_bound
    tables = ArithTables(max(prime_bound, 2))
    for l in tables.primes:
        if l == p:
            continue
        if l > support or l < support_min:
            if field.splitting(l) == SPLIT:
                eigen[l] = (Fraction(0), Fraction(0))
            else:
                eigen[l] = (Fraction(0),)
            continue

        def rnd():
            return Fraction(rng.randint(-c_num_bound, c_num_bound), rng.choice((1, 1, 2, 3)))

        if field.splitting(l) == SPLIT:
            eigen[l] = (rnd(), rnd())
        else:
            eigen[l] = (rnd(),)
    q = Fraction(p) ** (k - 1)
    unit_pool = [u for u in satake_units if u % p]
    if not unit_pool:
        raise ValueError("no p-unit Satake choices available")
    u1 = Fraction(rng.choice(unit_pool))
    u2 = Fraction(rng.choice(unit_pool))
    satake = (u1, q / u1, u2, q / u2)
    return MockEigenform(k, N, field, eigen, p, satake)


def dump_eigenform(f: MockEigenform) -> str:
    """Text record: header lines then one line per prime ideal."""
    lines = [
        f"k {f.k}",
        f"N {f.N}",
        f"D {f.field.D}",
        f"p {f.p}",
        "satake " + " ".join(_frac_str(x) for x in f.p_satake),
    ]
    for l in sorted(f.eigen):
        tag = f.field.splitting(l)
        for c in f.eigen[l]:
            lines.append(f"l {l} {tag} {_frac_str(c)}")
    return "\n".join(lines) + "\n"


def load_eigenform(text: str) -> MockEigenform:
    header: dict[str, str] = {}
    raw: dict[int, list[Fraction]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "l":
            l = int(parts[1])
            raw.setdefault(l, []).append(Fraction(parts[3]))
        elif parts[0] == "satake":
            header["satake"] = " ".join(parts[1:])
        else:
            header[parts[0]] = parts[1]
    for key in ("k", "N", "D", "p", "satake"):
        if key not in header:
            raise ValueError(f"eigenform file is missing the {key} header")
    satake = tuple(Fraction(x) for x in header["satake"].split())
    if len(satake) != 4:
        raise ValueError("satake header must carry four values")
    field = QuadFieldData(int(header["D"]))
    eigen = {l: tuple(cs) for l, cs in raw.items()}
    for l, cs in eigen.items():
        want = 2 if field.splitting(l) == SPLIT else 1
        if len(cs) != want:
            raise ValueError(f"prime {l} needs {want} eigenvalue record(s), found {len(cs)}")
    return MockEigenform(
        int(header["k"]), int(header["N"]), field, eigen, int(header["p"]), satake
    )


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
