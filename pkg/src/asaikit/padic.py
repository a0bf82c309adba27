"""Exact p-adic valuations on cyclotomic values and the finite-level
congruence checkers: the specialized Kummer test, the abstract-congruence
sampler, the measure-gluing families, and the Mellin table.

Valuations are computed exactly: in a p-power cyclotomic field via the norm
(resultant) and total ramification, and in mixed fields whose prime-to-p
root orders satisfy p = 1 mod m' via a certified Teichmueller embedding
(Hensel-lifted roots of unity in Z_p, uniformizer division counting).  The
residue-degree > 1 case is out of scope and rejected.

All checkers only ever certify finite-level evidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, inf

from .arith import CyclotomicNumber, euler_phi, factorize, vp
from .characters import DirichletCharacter, enumerate_characters

__all__ = [
    "PadicCycValue",
    "padic_valuation",
    "KummerReport",
    "kummer_check",
    "AkcReport",
    "akc_check",
    "MeasureTable",
    "GlueReport",
    "glue_check",
    "single_m_weights",
    "dirac_measure_table",
    "integrality_bound_check",
    "mellin_table",
]


# ---------------------------------------------------------------------------
# valuations


def _split_order(m: int, p: int) -> tuple[int, int]:
    """m = p^a * m' with m' prime to p."""
    a = 0
    while m % p == 0:
        m //= p
        a += 1
    return a, m


def padic_valuation(x: CyclotomicNumber, p: int) -> Fraction | float:
    """Valuation normalized with v(p) = 1; +inf at zero.

    Pure p-power orders (times 2) go through the norm; mixed orders are
    handled when every prime-to-p root of unity already lives in Z_p
    (p = 1 mod m'), via Teichmueller lifts.
    """
    if x.is_zero():
        return inf
    if x.is_rational():
        return vp(x.as_rational(), p)
    a, m_prime = _split_order(x.order, p)
    if m_prime <= 2:
        n = x.norm()
        return Fraction(vp(n, p), euler_phi(x.order))
    if (p - 1) % m_prime:
        raise ValueError(
            f"mixed root order {x.order}: prime-to-p part {m_prime} does not embed in Z_{p}"
        )
    return _valuation_teichmueller(x, p, a, m_prime)


def _teichmueller_root(p: int, m_prime: int, T: int) -> int:
    """Canonical primitive m'-th root of unity in Z/p^T (Hensel lift).

    The lift starts from the smallest residue of multiplicative order m'
    modulo p, so the choice of embedding is deterministic.
    """
    base = None
    for r in range(2, p):
        if pow(r, m_prime, p) == 1 and all(pow(r, d, p) != 1 for d in range(1, m_prime) if m_prime % d == 0):
            base = r
            break
    if base is None:
        raise ArithmeticError("no root of the required order modulo p")
    # Hensel: w <- w - (w^m' - 1)/(m' w^(m'-1)) mod p^T via doubling precision
    mod = p
    w = base
    while mod < p**T:
        mod = min(mod * mod, p**T)
        f = (pow(w, m_prime, mod) - 1) % mod
        df = (m_prime * pow(w, m_prime - 1, mod)) % mod
        w = (w - f * pow(df, -1, mod)) % mod
    return w


def _valuation_teichmueller(
    x: CyclotomicNumber, p: int, a: int, m_prime: int
) -> Fraction | float:
    """Valuation in Q(zeta_(p^a m')) with p = 1 mod m'.

    The relative norm down to Q(zeta_m') (an exact product of the phi(p^a)
    ramified-part conjugates) reduces the question to the unramified field,
    where the canonical Teichmueller embedding turns the element into a
    single p-adic scalar whose valuation is read off directly.
    """
    q = p**a
    if a:
        prod = None
        for u in range(1, q):
            if gcd(u, p) != 1:
                continue
            # t = 1 mod m', t = u mod q
            t = (1 + m_prime * ((u - 1) * pow(m_prime, -1, q) % q)) % (q * m_prime)
            y = x.galois(t % x.order)
            prod = y if prod is None else prod * y
    else:
        prod = x
    vec = _unramified_component(prod, p, a, m_prime)
    den = 1
    for c in vec:
        den = den * c.denominator // gcd(den, c.denominator)
    shift = -vp(Fraction(den), p)
    ints = [int(c * den) for c in vec]
    if all(c == 0 for c in ints):
        raise ArithmeticError("relative norm vanished for a nonzero element")
    prev = None
    for T in (24, 48, 96, 192):
        modulus = p**T
        w = _teichmueller_root(p, m_prime, T)
        val = sum(c * pow(w, i, modulus) for i, c in enumerate(ints)) % modulus
        if val == 0:
            prev = None
            continue
        v = 0
        while val % p == 0:
            val //= p
            v += 1
        if v > T - 8:
            prev = None
            continue
        if prev == v:
            return Fraction(v, euler_phi(q) if a else 1) + shift
        prev = v
    raise ArithmeticError("valuation did not stabilize; raise the precision schedule")


def _unramified_component(x: CyclotomicNumber, p: int, a: int, m_prime: int) -> list[Fraction]:
    """Coordinates of an element of Q(zeta_m') inside Q(zeta_(p^a m')).

    Re-expresses the coefficient vector in the tensor basis
    zeta_q^j zeta_m'^i and checks that every j >= 1 component vanishes.
    """
    from .arith import _reduce_mod_cyclotomic

    q = p**a if a else 1
    m = q * m_prime
    if x.order != m:
        x = x.lift(m)
    dq, dm = euler_phi(q), euler_phi(m_prime)
    u1 = pow(m_prime, -1, q) if a else 0
    u2 = pow(q, -1, m_prime) if m_prime > 1 else 0
    # grid[j][i]: coefficient of zeta_q^j zeta_m'^i before reduction
    grid = [[Fraction(0)] * m_prime for _ in range(q)]
    for e, c in enumerate(x.coeffs):
        if c:
            grid[e * u1 % q][e * u2 % m_prime] += c
    # reduce the m'-axis, then the q-axis
    rows = [_reduce_mod_cyclotomic(list(row), m_prime) for row in grid]
    cols = []
    for i in range(dm):
        col = [rows[j][i] for j in range(q)]
        cols.append(_reduce_mod_cyclotomic(col, q))
    for i in range(dm):
        for j in range(1, dq):
            if cols[i][j]:
                raise ArithmeticError("element does not lie in the unramified part")
    return [cols[i][0] for i in range(dm)]


@dataclass(frozen=True)
class PadicCycValue:
    """Cyclotomic value with its p-adic valuation computed on demand."""

    element: CyclotomicNumber
    p: int

    def valuation(self) -> Fraction | float:
        return padic_valuation(self.element, self.p)


# ---------------------------------------------------------------------------
# Kummer congruences at one level


@dataclass(frozen=True)
class KummerReport:
    a: int
    j: int
    valuation: Fraction | float
    required: Fraction
    passed: bool


def kummer_check(
    table: dict[DirichletCharacter, CyclotomicNumber], a: int, j: int, p: int
) -> KummerReport:
    """sum over all chi mod p^j of chi^(-1)(a) value_chi, tested against p^(j-1).

    The table must cover every character mod p^j; the congruence target is
    valuation >= j - 1 (the exact margin of the Dirac control, since
    v(phi(p^j)) = j - 1).
    """
    chars = enumerate_characters(p**j)
    missing = [ch for ch in chars if ch not in table]
    if missing:
        raise ValueError(f"table is missing {len(missing)} characters mod {p}^{j}")
    if gcd(a, p) != 1:
        raise ValueError("a must be a unit")
    acc = CyclotomicNumber.from_rational(0)
    for ch in chars:
        w = ch.inverse().value(a)
        acc = acc + w * table[ch]
    v = padic_valuation(acc, p)
    req = Fraction(j - 1)
    return KummerReport(a % p**j, j, v, req, v >= req)


# ---------------------------------------------------------------------------
# abstract congruences on sampled functions


@dataclass(frozen=True)
class AkcReport:
    hypothesis_holds: bool
    counterexample_y: int | None
    conclusion_valuation: Fraction | float | None
    required: Fraction
    passed: bool | None


def akc_check(
    functions: list[tuple[CyclotomicNumber, dict[int, CyclotomicNumber]]],
    targets: list[CyclotomicNumber],
    n: int,
    p: int,
) -> AkcReport:
    """Finite-level surrogate of the abstract congruence criterion.

    ``functions`` pairs each weight b_i with the sampled values {y -> f_i(y)};
    if sum_i b_i f_i(y) has valuation >= n at every sampled y, the combination
    of targets must too.  Results are evidence at the sampled level, never a
    proof.
    """
    ys = sorted({y for _, vals in functions for y in vals})
    req = Fraction(n)
    for y in ys:
        acc = CyclotomicNumber.from_rational(0)
        for b, vals in functions:
            if y in vals:
                acc = acc + b * vals[y]
        if padic_valuation(acc, p) < req:
            return AkcReport(False, y, None, req, None)
    acc = CyclotomicNumber.from_rational(0)
    for (b, _), t in zip(functions, targets):
        acc = acc + b * t
    v = padic_valuation(acc, p)
    return AkcReport(True, None, v, req, v >= req)


# ---------------------------------------------------------------------------
# measure tables and gluing


@dataclass
class MeasureTable:
    """Finite family (m even, chi of p-power conductor) -> interpolated value."""

    p: int
    n: int
    kappa: Fraction
    entries: dict[tuple[int, DirichletCharacter], CyclotomicNumber] = field(default_factory=dict)

    def value(self, m: int, chi: DirichletCharacter) -> CyclotomicNumber:
        return self.entries[(m, chi)]

    def characters(self) -> list[DirichletCharacter]:
        return sorted({ch for (_, ch) in self.entries}, key=lambda c: (c.modulus, c.exps))

    def ms(self) -> list[int]:
        return sorted({m for (m, _) in self.entries})

    def dumps(self) -> str:
        lines = [f"p {self.p}", f"n {self.n}", f"kappa {_frac_str(self.kappa)}"]
        for (m, ch), val in sorted(
            self.entries.items(), key=lambda kv: (kv[0][0], kv[0][1].modulus, kv[0][1].exps)
        ):
            idx = enumerate_characters(ch.modulus).index(ch)
            vec = " ".join(_frac_str(c) for c in val.coeffs)
            lines.append(f"entry {m} {ch.modulus} {idx} {val.order} {vec}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def loads(text: str) -> "MeasureTable":
        header: dict[str, str] = {}
        entries = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "entry":
                m, cond, idx, order = (int(x) for x in parts[1:5])
                coeffs = [Fraction(x) for x in parts[5:]]
                ch = enumerate_characters(cond)[idx]
                entries[(m, ch)] = CyclotomicNumber(order, coeffs)
            else:
                header[parts[0]] = parts[1]
        for key in ("p", "n", "kappa"):
            if key not in header:
                raise ValueError(f"measure table missing header {key}")
        return MeasureTable(
            int(header["p"]), int(header["n"]), Fraction(header["kappa"]), entries
        )


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dirac_measure_table(p: int, n: int, u: int, j_max: int) -> MeasureTable:
    """Table of a point-mass measure at the unit u: entry(m, chi) = u^(-m) chi(u).

    Keys are primitive characters of conductor p^j' for j' <= j_max (one key
    per distinct character of the unit group).  Such a table satisfies every
    finite-level congruence family by construction, since the combined sums
    are literal evaluations at y = u.
    """
    if gcd(u, p) != 1:
        raise ValueError("u must be a unit")
    t = MeasureTable(p, n, Fraction(1))
    for j in range(0, j_max + 1):
        for ch in enumerate_characters(p**j if j else 1):
            if not ch.is_primitive:
                continue
            for m in range(0, n + 1, 2):
                t.entries[(m, ch)] = ch.value(u) * Fraction(1, u**m)
    return t


def level_view(
    table: MeasureTable, m: int, j: int
) -> dict[DirichletCharacter, CyclotomicNumber]:
    """The m-slice of a table as a full character table mod p^j (primitive keys)."""
    out = {}
    for ch in enumerate_characters(table.p**j):
        out[ch] = table.entries[(m, ch.primitive())]
    return out


def single_m_weights(
    table: MeasureTable, m: int, a: int, j: int
) -> dict[tuple[int, DirichletCharacter], CyclotomicNumber]:
    """The weight family b_(m', chi) = chi^(-1)(a) [m' = m] reducing gluing to one level."""
    chars = enumerate_characters(table.p**j)
    return {(m, ch.primitive()): ch.inverse().value(a) for ch in chars}


@dataclass(frozen=True)
class GlueReport:
    families: int
    hypothesis_failures: int
    passed: bool
    worst_valuation: Fraction | float
    required: Fraction


def glue_check(
    table: MeasureTable,
    weight_families: list[dict[tuple[int, DirichletCharacter], CyclotomicNumber]],
    j: int,
    depth: int = 2,
) -> GlueReport:
    """Mixed-family congruences: weights against x_p^(-m) chi over sampled units.

    For each family, the hypothesis sum_(m,chi) b (chi(y) / y^m) is checked
    exactly on all units y mod p^(j+depth); when it lies in p^(j-1) O for all
    sampled y, the target combination of table entries must as well.
    """
    p = table.p
    req = Fraction(j - 1)
    sample_mod = p ** (j + depth)
    worst: Fraction | float = inf
    failures = 0
    ok = True
    for fam in weight_families:
        hyp_ok = True
        for y in range(1, sample_mod):
            if gcd(y, p) != 1:
                continue
            acc = CyclotomicNumber.from_rational(0)
            for (m, ch), b in fam.items():
                val = ch.value(y)
                if not val.is_zero():
                    acc = acc + b * val * Fraction(1, y**m)
            if padic_valuation(acc, p) < req:
                hyp_ok = False
                break
        if not hyp_ok:
            failures += 1
            continue
        acc = CyclotomicNumber.from_rational(0)
        for (m, ch), b in fam.items():
            acc = acc + b * table.entries[(m, ch)]
        v = padic_valuation(acc, p)
        worst = min(worst, v)
        if v < req:
            ok = False
    return GlueReport(len(weight_families), failures, ok, worst, req)


def integrality_bound_check(
    value: CyclotomicNumber, n: int, m: int, j_chi: int, c_j: int, p: int
) -> bool:
    """v(value) >= -(j_chi (4n - 3m + 3) + c_j)."""
    bound = Fraction(-(j_chi * (4 * n - 3 * m + 3) + c_j))
    return padic_valuation(value, p) >= bound


def mellin_table(table: MeasureTable) -> dict[DirichletCharacter, CyclotomicNumber]:
    """chi -> entry(0, chi): the transform of the glued measure along characters."""
    return {ch: val for (m, ch), val in table.entries.items() if m == 0}
