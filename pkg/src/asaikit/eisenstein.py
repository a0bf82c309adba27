"""Exact q-expansions of the translated Eisenstein series at level N p^(2j).

The congruence group is { [[a,b],[c,d]] in SL2(Z) : a = d mod p^j,
c = 0 mod N p^(2j) }; its Eisenstein series at the infinity cusp has an
exact cyclotomic q-expansion.  The constant term is computed by expanding
both zeta-type factors into character L-combinations and cancelling them
against each other (orthogonality does all the work, verified exactly);
higher coefficients convert the L-inverses via the Bernoulli special-value
formula, with the Euler factors at primes dividing the level restored for
imprimitive characters.

A fully independent numeric route evaluates the same coefficients from
truncated Moebius series, and the j = 0 case has a classical divisor-sum
closed form; agreement of the three is the module's main test surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import mpmath
from mpmath import mp

from .arith import (
    ArithTables,
    BigComplex,
    CyclotomicNumber,
    bernoulli_number,
    euler_phi,
    factorize,
    vp,
)
from .asai import FUNDAMENTAL_D, QuadFieldData
from .characters import (
    DirichletCharacter,
    enumerate_characters,
    gauss_sum,
    generalized_bernoulli,
)
from .cohomology import QuadCoeff

__all__ = [
    "LevelParams",
    "IntMatrix2",
    "QExpansion",
    "gamma0_beta_contains",
    "membership_two_ways",
    "enumerate_lambda",
    "sigma_twisted",
    "constant_term",
    "higher_coeff_exact",
    "higher_coeff_analytic",
    "classical_reduction",
    "qexpansion",
    "dump_qexpansion",
]


@dataclass(frozen=True)
class LevelParams:
    """Level data: modulus M = N p^(2j), weight k = 2n - 2m + 2 (even, >= 4)."""

    N: int
    p: int
    j: int
    k: int

    def __post_init__(self):
        if self.N < 1 or self.j < 0:
            raise ValueError("need N >= 1 and j >= 0")
        if self.p < 3 or factorize(self.p) != [(self.p, 1)]:
            raise ValueError("p must be an odd prime")
        if self.N % self.p == 0:
            raise ValueError("p must not divide N")
        if self.k < 4 or self.k % 2:
            raise ValueError("weight must be even and >= 4")

    @property
    def modulus(self) -> int:
        return self.N * self.p ** (2 * self.j)


@dataclass(frozen=True)
class IntMatrix2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("matrix must have determinant 1")


def _default_D(p: int) -> int:
    for D in FUNDAMENTAL_D:
        if D % p:
            return D
    raise ValueError("no valid discriminant")


def membership_two_ways(
    params: LevelParams, gamma: IntMatrix2, D: int | None = None, a_rep: int | None = None
) -> tuple[bool, bool]:
    """(congruence criterion, exact conjugation over Q(sqrt(-D))) for the group test.

    The conjugation path moves gamma back to level N by the translation by
    beta = a sqrt(-D) / (2 p^j) and checks integrality plus the level
    condition; the two answers must agree for every determinant-1 matrix.
    """
    p, j, N = params.p, params.j, params.N
    q = p**j
    by_congruence = (gamma.a - gamma.d) % q == 0 and gamma.c % (N * q * q) == 0
    D = _default_D(p) if D is None else D
    field = QuadFieldData(D)
    if a_rep is None:
        a_rep = 2 if j >= 1 else 0
    if j >= 1 and (a_rep % 2 or gcd(a_rep, p) != 1):
        raise ValueError("translation numerator must be an even unit mod p")
    beta = QuadCoeff(0, Fraction(a_rep, 2 * q), D)
    a, b, c, d = (QuadCoeff(x, 0, D) for x in (gamma.a, gamma.b, gamma.c, gamma.d))
    # gamma_beta gamma gamma_beta^(-1)
    e11 = a + c * beta
    e12 = b + d * beta - e11 * beta
    e21 = c
    e22 = d - c * beta
    by_conjugation = (
        all(field.is_integral(e.x, e.y) for e in (e11, e12, e21, e22))
        and gamma.c % N == 0
    )
    return by_congruence, by_conjugation


def gamma0_beta_contains(
    params: LevelParams, gamma: IntMatrix2, D: int | None = None, a_rep: int | None = None
) -> bool:
    formula, conj = membership_two_ways(params, gamma, D, a_rep)
    if formula != conj:
        raise AssertionError(
            f"membership paths disagree on {gamma}: criterion={formula}, conjugation={conj}"
        )
    return formula


def enumerate_lambda(params: LevelParams, height: int) -> list[tuple[int, int]]:
    """Coprime pairs (c, d), |c|,|d| <= height, c = 0 mod M, d = +-1 mod p^j, one per +-pair."""
    if height < 1:
        raise ValueError("height must be >= 1")
    M = params.modulus
    q = params.p**params.j
    out = []
    for c in range(-height, height + 1):
        if c % M:
            continue
        for d in range(-height, height + 1):
            if (c, d) == (0, 0) or gcd(c, d) != 1:
                continue
            if (d - 1) % q and (d + 1) % q:
                continue
            if c > 0 or (c == 0 and d > 0):
                out.append((c, d))
    return sorted(out)


def sigma_twisted(params: LevelParams, v_prime: int, l: int, k: int | None = None) -> CyclotomicNumber:
    """Signed divisor sum over l' | l with l/l' = 0 mod M: sgn(l') l'^(k-1) e(v' l' / M).

    Vanishes unless M | l; negative divisors contribute the (-1)^k-conjugate
    terms.
    """
    k = params.k if k is None else k
    M = params.modulus
    if l <= 0:
        raise ValueError("l must be positive")
    if l % M:
        return CyclotomicNumber.from_rational(0, 1)
    lpp = l // M
    weights: dict[int, Fraction] = {}
    sign = Fraction((-1) ** k)
    for d in range(1, lpp + 1):
        if lpp % d == 0:
            w = Fraction(d) ** (k - 1)
            e = v_prime * d % M
            weights[e] = weights.get(e, Fraction(0)) + w
            weights[(-e) % M] = weights.get((-e) % M, Fraction(0)) + sign * w
    return CyclotomicNumber.from_exponents(M, weights)


# ---------------------------------------------------------------------------
# constant term: the full L-cancellation chain


def _v_range(params: LevelParams, plus_minus: bool) -> list[int]:
    """Units mod M congruent to 1 (or +-1) mod p^j."""
    M = params.modulus
    q = params.p**params.j
    if M == 1:
        return [0]
    out = []
    for v in range(1, M):
        if gcd(v, M) != 1:
            continue
        if (v - 1) % q == 0 or (plus_minus and (v + 1) % q == 0):
            out.append(v)
    return out


def constant_term(params: LevelParams) -> CyclotomicNumber:
    """Constant coefficient via the character-sum cancellation (must equal 1).

    Both zeta-type factors are expanded into L-combinations over all
    characters mod M; the coefficient attached to a cross pair (psi, psi1)
    carries the full unit sum of psi^(-1) psi1, which is verified to vanish
    exactly unless psi = psi1.  The surviving diagonal drops every L-value
    and leaves a pure character sum.
    """
    M = params.modulus
    k = params.k
    chars = enumerate_characters(M)
    phi = len(chars)
    units = [0] if M == 1 else [a for a in range(1, M) if gcd(a, M) == 1]
    # full unit sums of each character: phi at the trivial one, 0 elsewhere
    for ch in chars:
        total = CyclotomicNumber.from_exponents(ch.value_order, _exponent_histogram(ch, units))
        if ch.is_trivial:
            if total != phi:
                raise AssertionError("orthogonality failed at the trivial character")
        elif not total.is_zero():
            raise AssertionError(f"orthogonality failed at {ch}")
    vs = _v_range(params, plus_minus=True)
    acc = CyclotomicNumber.from_rational(0)
    for psi1 in chars:
        parity = 1 + (-1) ** k * (1 if psi1.is_even else -1)
        if not parity:
            continue
        t_sum = CyclotomicNumber.from_exponents(
            psi1.value_order, _exponent_histogram(psi1.inverse(), vs)
        )
        acc = acc + t_sum * Fraction(parity)
    acc = acc * Fraction(phi, 2 * phi * phi)
    return CyclotomicNumber.from_rational(acc.as_rational()) if acc.is_rational() else acc


def _exponent_histogram(ch: DirichletCharacter, values) -> dict[int, int]:
    out: dict[int, int] = {}
    for a in values:
        t = ch.exponent_of(a)
        if t is not None:
            out[t] = out.get(t, 0) + 1
    return out


# ---------------------------------------------------------------------------
# higher coefficients, exact route


def _component_characters(chi: DirichletCharacter) -> list[tuple[int, int, DirichletCharacter]]:
    """Restrictions of chi to the prime-power factors q = p^e of its modulus.

    Returns (q, crt_unit, chi_q) per factor, where crt_unit is the inverse of
    M/q modulo q (the frequency multiplier under the CRT splitting).
    """
    from .characters import _UnitGroup, _unit_group

    M = chi.modulus
    out = []
    for p0, e0 in factorize(M):
        q = p0**e0
        cof = M // q
        u = pow(cof, -1, q) if cof > 1 else 1
        grp_q = _unit_group(q)
        exps = []
        for g, o in zip(grp_q.gens, grp_q.orders):
            a = _UnitGroup._crt(g, q, cof)
            t = chi.exponent_of(a)
            num = t * o
            exps.append(num // chi.value_order % o)
        out.append((q, u, DirichletCharacter(q, tuple(exps))))
    return out


def _signed_twisted_unit_sum_core(
    chi: DirichletCharacter, b: int
) -> tuple[Fraction, CyclotomicNumber] | None:
    """g_M(chi, b) stripped of its primitive Gauss-sum factors.

    Writes sum_w chi(w) e(w b / M) = rat * rou * prod_i G(chi0_i) over the
    prime-power components; returns (rat, rou) or None when the sum is 0.
    """
    M = chi.modulus
    if M == 1:
        return Fraction(1), CyclotomicNumber.from_rational(1)
    rat = Fraction(1)
    rou = CyclotomicNumber.from_rational(1)
    for q, u, chi_q in _component_characters(chi):
        p0 = factorize(q)[0][0]
        e0 = factorize(q)[0][1]
        bq = b * u % q
        C = chi_q.conductor()
        if C == 1:
            v = e0 if bq == 0 else min(e0, int(vp(bq, p0)))
            if v >= e0:
                rat *= euler_phi(q)
            elif v == e0 - 1:
                rat *= -(p0 ** (e0 - 1))
            else:
                return None
        else:
            c0 = factorize(C)[0][1]
            pe = p0 ** (e0 - c0)
            if bq % pe:
                return None
            chi0 = chi_q.primitive()
            t = chi0.inverse().exponent_of(bq // pe)
            if t is None:
                return None
            rat *= pe
            rou = rou * CyclotomicNumber.zeta(chi0.value_order, t)
    return rat, rou


def higher_coeff_exact(params: LevelParams, lpp: int) -> CyclotomicNumber:
    """Exact coefficient of q^lpp via the Bernoulli special-value route.

    -2k/phi(M) sum over even psi mod M of (C/M)^k T(psi) W(psi) /
    (G(psi0) B_{k,psibar0} E(psi)), with W(psi) the character-weighted signed
    divisor sum, E(psi) the Euler factors of the mod-M L-series at primes
    dividing M away from the conductor, and all primitive Gauss-sum factors
    cancelled against 1/G(psi0) = psi0(-1) G(psibar0)/C in closed form.
    The j = 0 case carries an extra 1/2 (the +-1 classes coincide there).
    """
    if lpp < 1:
        raise ValueError("the constant term is handled separately")
    M = params.modulus
    k = params.k
    phi = euler_phi(M)
    divisors = [d for d in range(1, lpp + 1) if lpp % d == 0]
    vs = _v_range(params, plus_minus=False) if params.j >= 1 else _v_range(params, True)
    acc = CyclotomicNumber.from_rational(0)
    for psi in enumerate_characters(M):
        if not psi.is_even:
            continue
        psi0 = psi.primitive()
        C = psi0.modulus
        # W(psi): signed divisor sum against the stripped unit sums
        w_acc = CyclotomicNumber.from_rational(0, psi.value_order or 1)
        nonzero = False
        for d in divisors:
            wk = Fraction(d) ** (k - 1)
            for sgn_b, sgn_w in ((d, Fraction(1)), (-d, Fraction((-1) ** k))):
                core = _signed_twisted_unit_sum_core(psi, sgn_b)
                if core is None:
                    continue
                rat, rou = core
                w_acc = w_acc + rou * (wk * sgn_w * rat)
                nonzero = True
        if not nonzero or w_acc.is_zero():
            continue
        # T(psi) = sum over the v-range of psi^(-1)(v)
        t_sum = CyclotomicNumber.from_exponents(
            psi.value_order, _exponent_histogram(psi.inverse(), vs)
        )
        if t_sum.is_zero():
            continue
        # Gauss-sum collapse: W carries prod_i G(psi0_i); dividing by G(psi0)
        # leaves the CRT twist prod_i psi0_i(C / C_i) in the value field.
        twist = CyclotomicNumber.from_rational(1)
        comps = _component_characters(psi0) if C > 1 else []
        for q, _, chi_q in comps:
            t = chi_q.primitive().inverse().exponent_of(C // q)
            if t is None:
                raise AssertionError("complementary conductor not a unit")
            twist = twist * CyclotomicNumber.zeta(chi_q.primitive().value_order, t)
        # Bernoulli and Euler-factor denominators, inverted in the value field
        bern = generalized_bernoulli(k, psi0.inverse())
        euler = CyclotomicNumber.from_rational(1)
        for q0, _ in factorize(M):
            if C % q0:
                t = psi0.exponent_of(q0 % C) if C > 1 else 0
                factor = 1 - (
                    CyclotomicNumber.zeta(psi0.value_order, t) * Fraction(1, q0**k)
                    if t is not None
                    else CyclotomicNumber.from_rational(0)
                )
                euler = euler * factor
        denom = (bern * euler).inverse()
        term = w_acc * t_sum * twist * denom * (Fraction(C, M) ** k)
        acc = acc + term
    scale = Fraction(-2 * k, phi)
    if params.j == 0:
        scale /= 2
    return acc * scale


# ---------------------------------------------------------------------------
# higher coefficients, analytic route (independent of all special-value formulas)


@lru_cache(maxsize=8)
def _mobius_table(bound: int) -> ArithTables:
    return ArithTables(bound)


def higher_coeffs_analytic(
    params: LevelParams, lpps: tuple[int, ...], prec: int = 128, terms: int | None = None
) -> list[BigComplex]:
    """Coefficients of q^lpp from truncated Moebius series, one pass for all lpps.

    (1/2) sum over units v = +-1 mod p^j, units n, of zeta_plus^n(k)
    (-2 pi i)^k / ((k-1)! M^k) sigma_(k-1)^((0, n^(-1) v))(M lpp), with
    zeta_plus^n(k) = sum_(m = n mod M) mu(m) m^(-k) summed to ``terms``.
    """
    M = params.modulus
    k = params.k
    if terms is None:
        # each bucket tail is below terms^(1-k)/(k-1); enough for ~1e-12 absolute
        terms = 20000 if k <= 4 else 4000
    vs = _v_range(params, plus_minus=True)
    units = [a for a in range(1, M) if gcd(a, M) == 1] or [0]
    tables = _mobius_table(terms)
    with mp.workprec(prec + 16):
        zeta_plus = [mpmath.mpf(0)] * max(M, 1)
        for mval in range(1, terms + 1):
            mu = tables.mobius(mval)
            if mu and (M == 1 or gcd(mval, M) == 1):
                zeta_plus[mval % M] += mpmath.mpf(mu) / mpmath.mpf(mval) ** k
        roots = [mpmath.expjpi(mpmath.mpf(2 * t) / M) for t in range(M)] if M > 1 else [mpmath.mpf(1)]
        # zeta_plus mass seen from each unit w: sum over the v-range of zp[v w^-1]
        zmass = {}
        for w in units:
            if M == 1:
                zmass[w] = zeta_plus[0] * len(vs)
            else:
                w_inv = pow(w, -1, M)
                zmass[w] = sum((zeta_plus[v * w_inv % M] for v in vs), mpmath.mpf(0))
        kappa = (-2j * mpmath.pi) ** k / (mpmath.factorial(k - 1) * mpmath.mpf(M) ** k)
        out = []
        for lpp in lpps:
            divisors = [d for d in range(1, lpp + 1) if lpp % d == 0]
            total = mpmath.mpc(0)
            for w in units:
                sig = mpmath.mpc(0)
                for d in divisors:
                    sig += mpmath.mpf(d) ** (k - 1) * (
                        roots[w * d % M] + (-1) ** k * roots[(-w * d) % M]
                    )
                total += zmass[w] * sig
            out.append(BigComplex.from_mpc(total * kappa / 2, prec))
    return out


def higher_coeff_analytic(
    params: LevelParams, lpp: int, prec: int = 128, terms: int | None = None
) -> BigComplex:
    """Single-coefficient form of the Moebius-series evaluation."""
    return higher_coeffs_analytic(params, (lpp,), prec, terms)[0]


# ---------------------------------------------------------------------------
# classical reduction at j = 0 and assembled expansions


def classical_reduction(params: LevelParams, T: int) -> "QExpansion":
    """j = 0 expansion by the divisor-sum closed form (no character machinery).

    a_n = -(2k/B_k) prod_(q|N) (1 - q^(-k))^(-1)
          sum_(g|N) mu(g) g^(-k) sigma_(k-1)^((N/g))(n),
    where sigma^((A))(n) sums m^(k-1) over m | n with A | n/m; a_0 = 1.
    """
    if params.j != 0:
        raise ValueError("classical reduction applies at j = 0 only")
    N, k = params.N, params.k
    coeffs = [CyclotomicNumber.from_rational(1)]
    bk = bernoulli_number(k)
    scale = Fraction(-2 * k) / bk
    for q, _ in factorize(N):
        scale /= 1 - Fraction(1, q**k)
    mob = ArithTables(max(N, 1))
    for n in range(1, T + 1):
        acc = Fraction(0)
        for g in range(1, N + 1):
            if N % g:
                continue
            mu = mob.mobius(g)
            if not mu:
                continue
            A = N // g
            s = Fraction(0)
            for mdiv in range(1, n + 1):
                if n % mdiv == 0 and (n // mdiv) % A == 0:
                    s += Fraction(mdiv) ** (k - 1)
            acc += Fraction(mu, g**k) * s
        coeffs.append(CyclotomicNumber.from_rational(scale * acc))
    return QExpansion(params, coeffs, _p_denominator_exponent(coeffs, params.p))


@dataclass(frozen=True)
class QExpansion:
    params: LevelParams
    coeffs: list[CyclotomicNumber]
    c_j: int

    @property
    def length(self) -> int:
        return len(self.coeffs) - 1


def _p_denominator_exponent(coeffs, p: int) -> int:
    worst = 0
    for c in coeffs:
        for q in c.coeffs:
            v = vp(q, p)
            if v < 0:
                worst = max(worst, -int(v))
    return worst


def qexpansion(params: LevelParams, T: int) -> QExpansion:
    """Full expansion to T terms: constant term plus exact higher coefficients.

    Reports the worst p-power denominator exponent across the coefficient
    vectors (an empirical measurement; no formula is claimed for it).
    """
    if params.j == 0:
        exp = classical_reduction(params, T)
        a0 = constant_term(params)
        if a0 != exp.coeffs[0]:
            raise AssertionError("constant-term routes disagree at j = 0")
        return exp
    coeffs = [constant_term(params)]
    for lpp in range(1, T + 1):
        coeffs.append(higher_coeff_exact(params, lpp))
    return QExpansion(params, coeffs, _p_denominator_exponent(coeffs, params.p))


def dump_qexpansion(exp: QExpansion) -> str:
    """Export record: header, then one line per coefficient vector."""
    p = exp.params
    lines = [f"N {p.N}", f"p {p.p}", f"j {p.j}", f"k {p.k}", f"c_j {exp.c_j}"]
    for n, c in enumerate(exp.coeffs):
        vec = " ".join(
            str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
            for x in c.coeffs
        )
        lines.append(f"a {n} {c.order} {vec}")
    return "\n".join(lines) + "\n"
