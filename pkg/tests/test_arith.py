import random
from fractions import Fraction as F

import mpmath
import pytest

from asaikit.arith import (
    ArithTables,
    BigComplex,
    CyclotomicNumber,
    bernoulli_number,
    bernoulli_polynomial,
    bessel_k_moment_check,
    cyclotomic_lift,
    cyclotomic_mul,
    cyclotomic_norm,
    cyclotomic_polynomial,
    embed_complex,
    euler_phi,
    kronecker_symbol,
    vp,
    _binomial,
)


def bernoulli_oracle(upto):
    """Independent recurrence: sum_{i<k} C(k,i) B_i = 0 for k >= 2, seeded at B_0 = 1."""
    B = [F(1)]
    for k in range(2, upto + 2):
        s = sum(_binomial(k, i) * B[i] for i in range(k - 1))
        B.append(-s / _binomial(k, k - 1))
    return B


class TestBernoulli:
    def test_base_cases(self):
        assert bernoulli_number(0) == 1
        assert bernoulli_number(1) == F(-1, 2)

    def test_against_recurrence_oracle(self):
        oracle = bernoulli_oracle(30)
        for k in range(31):
            assert bernoulli_number(k) == oracle[k]
        assert bernoulli_number(12) == F(-691, 2730)

    def test_recurrence_invariant(self):
        for k in range(2, 31):
            assert sum(_binomial(k, i) * bernoulli_number(i) for i in range(k)) == 0

    def test_von_staudt_clausen(self):
        for k in range(2, 31, 2):
            prod = 1
            for p in ArithTables(k + 2).primes:
                if k % (p - 1) == 0:
                    prod *= p
            assert bernoulli_number(k).denominator == prod

    def test_polynomial(self):
        assert bernoulli_polynomial(2, 0) == F(1, 6)
        assert bernoulli_polynomial(1, F(1, 2)) == 0
        assert bernoulli_polynomial(2, 1) == F(1, 6)
        # B_k(1) = B_k(0) for k != 1
        for k in (0, 2, 3, 4, 7, 12):
            assert bernoulli_polynomial(k, 1) == bernoulli_polynomial(k, 0)


class TestCyclotomic:
    def test_i_squared(self):
        i = CyclotomicNumber.zeta(4)
        assert cyclotomic_mul(i, i) == -1

    def test_eisenstein_product(self):
        z = CyclotomicNumber.zeta(3)
        assert (1 - z) * (1 - z**2) == 3

    def test_identity(self):
        z = CyclotomicNumber.zeta(8)
        a = 2 + 3 * z
        assert a * CyclotomicNumber.from_rational(1, 8) == a

    def test_order_mismatch_rejected(self):
        with pytest.raises(ValueError):
            cyclotomic_mul(CyclotomicNumber.zeta(3), CyclotomicNumber.zeta(4))

    def test_lift_and_mixed_arithmetic(self):
        z3 = CyclotomicNumber.zeta(3)
        z12 = CyclotomicNumber.zeta(12)
        assert cyclotomic_lift(z3, 12) == z12**4
        assert (z3 + z12).order == 12

    def test_ring_axioms_random(self):
        rng = random.Random(0)
        for m in (3, 4, 5, 8, 9, 12):
            deg = euler_phi(m)
            for _ in range(5):
                a, b, c = (
                    CyclotomicNumber(m, [F(rng.randint(-5, 5)) for _ in range(deg)])
                    for _ in range(3)
                )
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c
                assert a * b == b * a

    def test_norm_examples(self):
        # oracle: norm(1 - zeta_m) = Phi_m(1)
        for m in (5, 9, 7, 8):
            phi_at_1 = sum(cyclotomic_polynomial(m))
            assert cyclotomic_norm(1 - CyclotomicNumber.zeta(m)) == phi_at_1
        assert cyclotomic_norm(1 - CyclotomicNumber.zeta(5)) == 5
        assert cyclotomic_norm(1 - CyclotomicNumber.zeta(9)) == 3

    def test_norm_of_rational(self):
        c = CyclotomicNumber.from_rational(F(3, 2), 12)
        assert cyclotomic_norm(c) == F(3, 2) ** euler_phi(12)

    def test_norm_multiplicative(self):
        rng = random.Random(1)
        for m in (5, 8, 12):
            deg = euler_phi(m)
            for _ in range(5):
                a = CyclotomicNumber(m, [F(rng.randint(-4, 4)) for _ in range(deg)])
                b = CyclotomicNumber(m, [F(rng.randint(-4, 4)) for _ in range(deg)])
                assert cyclotomic_norm(a * b) == cyclotomic_norm(a) * cyclotomic_norm(b)

    def test_inverse(self):
        rng = random.Random(2)
        for m in (5, 9, 12):
            deg = euler_phi(m)
            a = CyclotomicNumber(m, [F(rng.randint(1, 5)) for _ in range(deg)])
            assert a * a.inverse() == 1

    def test_galois_conjugate(self):
        z = CyclotomicNumber.zeta(5)
        g = z + z**4
        assert g.conjugate() == g


class TestEmbedding:
    def test_zeta4_is_i(self):
        v = embed_complex(CyclotomicNumber.zeta(4), 64)
        assert abs(v.to_mpc() - mpmath.mpc(0, 1)) < 2.0**-60

    def test_vanishing_sum(self):
        z = CyclotomicNumber.zeta(3)
        s = 1 + z + z**2
        assert abs(embed_complex(s, 64).to_mpc()) < 2.0**-60

    def test_ring_homomorphism(self):
        rng = random.Random(3)
        prec = 128
        for m in (5, 8):
            deg = euler_phi(m)
            a = CyclotomicNumber(m, [F(rng.randint(-5, 5)) for _ in range(deg)])
            b = CyclotomicNumber(m, [F(rng.randint(-5, 5)) for _ in range(deg)])
            lhs = embed_complex(a * b, prec)
            rhs = embed_complex(a, prec) * embed_complex(b, prec)
            assert float((lhs - rhs).abs()) < 2.0 ** (-prec + 8)


class TestBigComplex:
    def test_min_precision_propagation(self):
        a = BigComplex(1, 2, 128)
        b = BigComplex(3, 4, 64)
        assert (a * b).precision == 64
        assert (a + b).precision == 64

    def test_minimum_precision_enforced(self):
        with pytest.raises(ValueError):
            BigComplex(1, 0, 40)

    def test_division(self):
        a = BigComplex(1, 1, 80)
        q = a / a
        assert abs(q.to_mpc() - 1) < 2.0**-70


class TestArithTables:
    def test_sieve_vs_trial_division(self):
        t = ArithTables(10**4)
        rng = random.Random(4)
        for n in [rng.randint(2, 10**4) for _ in range(200)]:
            fac = t.factor(n)
            prod = 1
            for q, e in fac:
                prod *= q**e
            assert prod == n
            # phi by the product formula
            phi = n
            for q, _ in fac:
                phi = phi // q * (q - 1)
            assert t.phi(n) == phi
            # mobius by squarefreeness
            sqfree = all(e == 1 for _, e in fac)
            assert t.mobius(n) == ((-1) ** len(fac) if sqfree else 0)

    def test_mobius_square_vanishing(self):
        t = ArithTables(1000)
        for p in (2, 3, 5, 7):
            for m in range(1, 1000 // (p * p)):
                assert t.mobius(p * p * m) == 0


class TestKronecker:
    def test_odd_primes_vs_quadratic_residues(self):
        for l in (3, 5, 7, 11, 13, 17):
            for a in range(-30, 31):
                if a % l == 0:
                    assert kronecker_symbol(a, l) == 0
                else:
                    qr = any((x * x - a) % l == 0 for x in range(l))
                    assert kronecker_symbol(a, l) == (1 if qr else -1)


class TestBessel:
    def test_moment_identity(self):
        r = bessel_k_moment_check(0, 2, 1)
        assert r.agree
        r = bessel_k_moment_check(1, 3, 2)
        assert r.agree

    def test_scaling_in_a(self):
        r1 = bessel_k_moment_check(0, 2, 1)
        r2 = bessel_k_moment_check(0, 2, 2)
        ratio = float(r2.lhs.to_mpc().real / r1.lhs.to_mpc().real)
        assert abs(ratio - 2.0**-2) < 1e-6

    def test_divergent_parameters_rejected(self):
        with pytest.raises(ValueError):
            bessel_k_moment_check(2, 2, 1)


def test_vp():
    assert vp(F(9, 5), 3) == 2
    assert vp(F(5, 27), 3) == -3
    assert vp(F(0), 3) == float("inf")
