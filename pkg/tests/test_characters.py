from fractions import Fraction as F
from math import gcd

import mpmath
import pytest

from asaikit.arith import CyclotomicNumber
from asaikit.characters import (
    L_special_exact,
    L_truncated,
    enumerate_characters,
    gauss_sum,
    generalized_bernoulli,
    generalized_gauss_sum,
    normalized_L,
    unit_sum_twisted,
    unit_sum_twisted_direct,
)


def quadratic_mod5():
    return [c for c in enumerate_characters(5) if not c.is_trivial and (c * c).is_trivial][0]


class TestEnumeration:
    def test_mod_1(self):
        cs = enumerate_characters(1)
        assert len(cs) == 1 and cs[0].is_trivial
        assert cs[0].value(7) == 1 and cs[0].value(0) == 1

    def test_mod_5(self):
        cs = enumerate_characters(5)
        assert len(cs) == 4
        assert sum(1 for c in cs if c.is_even) == 2
        assert cs[0].is_trivial

    def test_mod_8(self):
        assert len(enumerate_characters(8)) == 4

    def test_multiplicative_and_vanishing(self):
        for M in (5, 8, 9, 12):
            for ch in enumerate_characters(M):
                assert ch.value(1) == 1
                for a in range(M):
                    if gcd(a, M) > 1:
                        assert ch.value(a).is_zero()
                for a in range(1, M):
                    for b in range(1, M):
                        if gcd(a * b, M) == 1:
                            assert ch.value(a * b) == ch.value(a) * ch.value(b)

    def test_values_are_roots_of_unity(self):
        for ch in enumerate_characters(9):
            for a in range(1, 9):
                if gcd(a, 9) == 1:
                    assert ch.value(a) ** ch.value_order == 1


class TestOrthogonality:
    def test_character_sum_relations(self):
        for M in range(2, 51):
            chars = enumerate_characters(M)
            units = [a for a in range(1, M) if gcd(a, M) == 1]
            a, b = units[0], units[-1]
            s_eq = CyclotomicNumber.from_rational(0)
            s_ne = CyclotomicNumber.from_rational(0)
            for ch in chars:
                s_eq = s_eq + ch.value(a) * ch.value(a).conjugate()
                s_ne = s_ne + ch.value(a) * ch.value(b).conjugate()
            assert s_eq == len(chars)
            if a != b:
                assert s_ne.is_zero()

    def test_dirac_identity(self):
        # sum over chi mod p^j of chi^(-1)(a) chi(y) = phi(p^j) [y = a]
        for p in (3, 5):
            for j in (1, 2):
                q = p**j
                chars = enumerate_characters(q)
                for a in (1, q - 1):
                    for y in range(1, q):
                        if gcd(y, p) != 1:
                            continue
                        s = CyclotomicNumber.from_rational(0)
                        for ch in chars:
                            s = s + ch.inverse().value(a) * ch.value(y)
                        assert s == (len(chars) if (y - a) % q == 0 else 0)


class TestConductor:
    def test_trivial_mod_9(self):
        assert enumerate_characters(9)[0].conductor() == 1

    def test_primitive_quadratic_mod_5(self):
        assert quadratic_mod5().conductor() == 5

    def test_induced_from_3(self):
        induced = [c for c in enumerate_characters(9) if c.conductor() == 3]
        assert len(induced) == 1
        prim = induced[0].primitive()
        assert prim.modulus == 3 and not prim.is_trivial


class TestGaussSums:
    def test_trivial(self):
        assert gauss_sum(enumerate_characters(1)[0]).value == 1

    def test_quadratic_mod5_squares_to_5(self):
        g = gauss_sum(quadratic_mod5())
        assert g.value * g.value == 5
        assert g.conductor == 5
        with mpmath.workprec(100):
            assert abs(g.value.embed(80).to_mpc() - mpmath.sqrt(5)) < 1e-18

    def test_conjugation_identity(self):
        # G(chi) G(chibar) = chi(-1) p for primitive chi mod p
        for p in (5, 7, 13):
            for ch in enumerate_characters(p):
                if ch.is_trivial:
                    continue
                assert gauss_sum(ch).value * gauss_sum(ch.inverse()).value == ch.value(-1) * p

    def test_absolute_value_squared(self):
        for M in (5, 8, 9, 16):
            for ch in enumerate_characters(M):
                if not ch.is_primitive:
                    continue
                g = gauss_sum(ch).value
                assert g * g.conjugate() == M


class TestGeneralizedGaussSums:
    def test_exhaustive_closed_form_small(self):
        for p, jmax in ((3, 3), (5, 2)):
            for j in range(1, jmax + 1):
                q = p**j
                for ch in enumerate_characters(q):
                    for M in range(0, q + 1):
                        r = generalized_gauss_sum(ch, M, j)
                        assert r.agrees, (p, j, ch.exps, M)

    def test_trivial_character_values(self):
        t3 = enumerate_characters(3)[0]
        assert generalized_gauss_sum(t3, 0, 1).value == 2  # phi(3)
        t9 = enumerate_characters(9)[0]
        assert generalized_gauss_sum(t9, 9, 2).value == 6  # phi(9), p^j | M
        assert generalized_gauss_sum(t9, 3, 2).value == -3  # v_p(M) = j-1
        assert generalized_gauss_sum(t9, 1, 2).value == 0

    def test_primitive_vanishing_at_p(self):
        prim9 = [c for c in enumerate_characters(9) if c.is_primitive][0]
        r = generalized_gauss_sum(prim9, 3, 2)
        assert r.value.is_zero() and r.agrees

    def test_lifted_character(self):
        # chi primitive mod 3 seen at level 9: M = 3 gives 3 G(chi)
        lifted = [c for c in enumerate_characters(9) if c.conductor() == 3][0]
        r = generalized_gauss_sum(lifted, 3, 2)
        g = gauss_sum(lifted).value
        assert r.value == g * 3

    def test_level_below_conductor_rejected(self):
        prim9 = [c for c in enumerate_characters(9) if c.is_primitive][0]
        with pytest.raises(ValueError):
            generalized_gauss_sum(prim9, 1, 1)


class TestTwistedUnitSums:
    def test_crt_closed_form_vs_direct(self):
        for M in (1, 2, 4, 6, 9, 12, 15, 20, 36, 45):
            for ch in enumerate_characters(M):
                for b in range(min(M, 10) + 1):
                    assert unit_sum_twisted(ch, b) == unit_sum_twisted_direct(ch, b)


class TestGeneralizedBernoulli:
    def test_trivial_reduces_to_bernoulli(self):
        assert generalized_bernoulli(2, enumerate_characters(1)[0]) == F(1, 6)

    def test_quadratic_mod4(self):
        quad4 = [c for c in enumerate_characters(4) if not c.is_trivial][0]
        assert generalized_bernoulli(1, quad4) == F(-1, 2)

    def test_odd_psi_even_k_vanishes(self):
        quad4 = [c for c in enumerate_characters(4) if not c.is_trivial][0]
        assert generalized_bernoulli(2, quad4).is_zero()
        for ch in enumerate_characters(5):
            if ch.is_odd:
                assert generalized_bernoulli(4, ch).is_zero()

    def test_denominator_bound(self):
        # v_p(B_{k,psibar}) >= -j for conductor-p^j characters
        from asaikit.padic import padic_valuation

        for p, j in ((3, 1), (3, 2), (5, 1), (5, 2)):
            for ch in enumerate_characters(p**j):
                if not ch.is_primitive or ch.modulus == 1:
                    continue
                for k in (2, 4):
                    b = generalized_bernoulli(k, ch.inverse())
                    if not b.is_zero():
                        assert padic_valuation(b, p) >= -j


class TestLValues:
    def test_zeta_2_and_4(self):
        t1 = enumerate_characters(1)[0]
        v2 = L_special_exact(2, t1)
        assert v2.algebraic == F(-1, 24) and v2.two_pi_i_power == 2
        with mpmath.workprec(100):
            assert abs(v2.numeric(80).to_mpc() - mpmath.pi**2 / 6) < 1e-20
            v4 = L_special_exact(4, t1)
            assert abs(v4.numeric(80).to_mpc() - mpmath.pi**4 / 90) < 1e-18

    def test_quadratic_mod5_vs_series(self):
        chi = quadratic_mod5()
        exact = L_special_exact(2, chi).numeric(128).to_mpc()
        approx = L_truncated(2, chi, 30000, 128)
        assert abs(exact - approx.value.to_mpc()) < approx.tail_bound * 1.05

    def test_truncated_zeta(self):
        t1 = enumerate_characters(1)[0]
        v = L_truncated(2, t1, 10000, 64)
        assert abs(v.value.to_mpc() - mpmath.pi**2 / 6) < v.tail_bound * 1.05

    def test_truncated_first_term(self):
        for ch in enumerate_characters(7):
            assert abs(L_truncated(3, ch, 1, 64).value.to_mpc() - 1) == 0

    def test_euler_factor_removal(self):
        t6 = enumerate_characters(6)[0]
        v = L_truncated(2, t6, 20000, 64)
        want = mpmath.pi**2 / 6 * (1 - F(1, 4)) * (1 - F(1, 9))
        assert abs(v.value.to_mpc() - want) < 3 * v.tail_bound

    def test_domain_rejected(self):
        t1 = enumerate_characters(1)[0]
        with pytest.raises(ValueError):
            L_truncated(1, t1, 100, 64)
        with pytest.raises(ValueError):
            L_special_exact(3, t1)


class TestNormalizedL:
    def test_trivial_values(self):
        t1 = enumerate_characters(1)[0]
        assert normalized_L(t1, 2).value == F(1, 24)
        assert normalized_L(t1, 4).value == F(1, 1440)

    def test_order4_mod5(self):
        quad = quadratic_mod5()
        chi = [c for c in enumerate_characters(5) if c * c == quad][0]
        nl = normalized_L(chi, 2)
        assert nl.value == F(1, 125)
        assert nl.bound_ok

    def test_cross_check_against_series(self):
        quad = quadratic_mod5()
        chi = [c for c in enumerate_characters(5) if c * c == quad][0]
        nl = normalized_L(chi, 2)
        psi = (chi.inverse() ** 2).primitive()
        g = gauss_sum(psi).value.embed(128).to_mpc()
        recon = nl.value.embed(128).to_mpc() * g * (2 * mpmath.pi) ** 2
        series = L_truncated(2, psi, 30000, 128)
        assert abs(recon - series.value.to_mpc()) < series.tail_bound * 1.05

    def test_imprimitive_square_rejected(self):
        with pytest.raises(ValueError):
            normalized_L(quadratic_mod5(), 2)
